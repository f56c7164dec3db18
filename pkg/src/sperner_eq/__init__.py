"""Sperner labelings on a triangulated simplex and equilibria of exchange economies."""

from .economy import (
    EconomySpec,
    adjust,
    cobb_douglas,
    equilibrium_residual,
    evaluate,
    load_economy,
    loads_economy,
    normalize_prices,
    price_map,
    table_economy,
    walras_residual,
)
from .equivalence import (
    Certificate,
    LabelInducedMap,
    build_map,
    certify,
    choose_tau,
    induced_excess_demand,
    sperner_via_equilibrium,
)
from .errors import SpernerEqError
from .kernels import BACKEND
from .labeling import (
    Labeling,
    induce_labeling,
    is_fully_labeled,
    random_proper_labeling,
    validate_proper,
)
from .search import SearchResult, enumerate_fully_labeled, path_follow
from .simplex import (
    BarycentricPoint,
    GridCell,
    Subdivision,
    barycenter,
    cell_vertices,
    locate_cell,
    make_point,
    mesh_diameter,
    neighbor,
    subdivide,
)
from .solver import EquilibriumReport, SLNCReport, SolverConfig, slnc_diagnostic, solve

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BarycentricPoint",
    "Certificate",
    "EconomySpec",
    "EquilibriumReport",
    "GridCell",
    "LabelInducedMap",
    "Labeling",
    "SLNCReport",
    "SearchResult",
    "SolverConfig",
    "SpernerEqError",
    "Subdivision",
    "adjust",
    "barycenter",
    "build_map",
    "cell_vertices",
    "certify",
    "choose_tau",
    "cobb_douglas",
    "enumerate_fully_labeled",
    "equilibrium_residual",
    "evaluate",
    "induce_labeling",
    "induced_excess_demand",
    "is_fully_labeled",
    "load_economy",
    "loads_economy",
    "locate_cell",
    "make_point",
    "mesh_diameter",
    "neighbor",
    "normalize_prices",
    "path_follow",
    "price_map",
    "random_proper_labeling",
    "slnc_diagnostic",
    "solve",
    "sperner_via_equilibrium",
    "subdivide",
    "table_economy",
    "validate_proper",
    "walras_residual",
]
