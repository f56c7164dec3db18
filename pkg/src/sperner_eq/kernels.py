"""Hot-loop kernels: the compiled ``_core`` extension when built, else ``_fallback``.

Set ``SPERNER_EQ_PURE=1`` to force the pure-Python path.
"""

from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"

if os.environ.get("SPERNER_EQ_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _core as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _fallback
else:
    _impl = _fallback

cd_label_vertex = _impl.cd_label_vertex
cd_path_follow = _impl.cd_path_follow
cd_near_equilibria = _impl.cd_near_equilibria

__all__ = ["BACKEND", "cd_label_vertex", "cd_path_follow", "cd_near_equilibria"]
