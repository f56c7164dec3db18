# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for float-mode Cobb-Douglas economies.

Mirrors ``_fallback.py``: the same labels, the same walk, the same visit
count.  Floating-point operations are issued in the same order as the Python
code so both produce identical doubles.
"""

from libc.stdlib cimport malloc, free


cdef struct CD:
    int goods
    int consumers
    double* alpha      # consumers x goods, row-major
    double* omega      # consumers x goods, row-major
    double* supply     # goods
    double* q          # scratch
    double* f
    double* v
    double* wealth


cdef void cd_excess(CD* e) noexcept nogil:
    cdef int i, k
    cdef double w, d
    for k in range(e.consumers):
        w = 0.0
        for i in range(e.goods):
            w += e.q[i] * e.omega[k * e.goods + i]
        e.wealth[k] = w
    for i in range(e.goods):
        d = 0.0
        for k in range(e.consumers):
            d += e.alpha[k * e.goods + i] * e.wealth[k]
        e.f[i] = d / e.q[i] - e.supply[i]


cdef void adjust(CD* e) noexcept nogil:
    cdef int i
    cdef double total = 0.0
    for i in range(e.goods):
        e.v[i] = e.q[i] + (e.f[i] if e.f[i] > 0 else 0.0)
    for i in range(e.goods):
        total += e.v[i]
    for i in range(e.goods):
        e.v[i] = e.v[i] / total


cdef int cd_label(CD* e, const long* k, long m) noexcept nogil:
    cdef int i, z = 0, best = -1
    cdef double fm = <double>m
    # shift denominator; matches economy.shifted_point
    cdef double fd = <double>(m if m >= e.goods - 1 else e.goods - 1)
    cdef double scale, gap = 0.0, g
    for i in range(e.goods):
        if k[i] == 0:
            z += 1
    scale = 1.0 - (0.5 * z) / fd
    for i in range(e.goods):
        if k[i] == 0:
            e.q[i] = 0.5 / fd
        else:
            e.q[i] = (<double>k[i] / fm) * scale
    cd_excess(e)
    adjust(e)
    for i in range(e.goods):
        if k[i] > 0 and e.v[i] <= e.q[i]:
            return i
    for i in range(e.goods):
        if k[i] > 0:
            g = e.v[i] - e.q[i]
            if best < 0 or g < gap:
                best = i
                gap = g
    return best


cdef inline void do_step(long* v, int s) noexcept nogil:
    v[s - 1] += 1
    v[s] -= 1


cdef inline void do_unstep(long* v, int s) noexcept nogil:
    v[s - 1] -= 1
    v[s] += 1


cdef bint valid_in_face(const long* base, const int* perm, int d, long m, int* pos) noexcept nogil:
    cdef int j
    for j in range(d + 1):
        if base[j] < 0:
            return False
    if base[d] < 1:
        return False
    for j in range(d):
        pos[perm[j]] = j
    for j in range(1, d):
        if base[j] == 0 and pos[j + 1] > pos[j]:
            return False
    return True


cdef void init_cd(CD* e, list alpha, list omega, list supply) except *:
    cdef int k, i
    e.consumers = len(alpha)
    e.goods = len(supply)
    e.alpha = <double*> malloc(e.consumers * e.goods * sizeof(double))
    e.omega = <double*> malloc(e.consumers * e.goods * sizeof(double))
    e.supply = <double*> malloc(e.goods * sizeof(double))
    e.q = <double*> malloc(e.goods * sizeof(double))
    e.f = <double*> malloc(e.goods * sizeof(double))
    e.v = <double*> malloc(e.goods * sizeof(double))
    e.wealth = <double*> malloc(e.consumers * sizeof(double))
    if (e.alpha == NULL or e.omega == NULL or e.supply == NULL or e.q == NULL
            or e.f == NULL or e.v == NULL or e.wealth == NULL):
        free_cd(e)
        raise MemoryError()
    for k in range(e.consumers):
        for i in range(e.goods):
            e.alpha[k * e.goods + i] = alpha[k][i]
            e.omega[k * e.goods + i] = omega[k][i]
    for i in range(e.goods):
        e.supply[i] = supply[i]


cdef void free_cd(CD* e) noexcept:
    free(e.alpha); free(e.omega); free(e.supply)
    free(e.q); free(e.f); free(e.v); free(e.wealth)


def cd_label_vertex(vertex, long m, list alpha, list omega, list supply):
    """Label of one grid vertex (exposed for cross-checking)."""
    cdef CD e
    cdef int i, n1 = len(vertex)
    cdef long* k = <long*> malloc(n1 * sizeof(long))
    init_cd(&e, alpha, omega, supply)
    try:
        for i in range(n1):
            k[i] = vertex[i]
        return cd_label(&e, k, m)
    finally:
        free(k)
        free_cd(&e)


def cd_path_follow(int n, long m, list alpha, list omega, list supply):
    """Door-to-door walk on resolution ``m`` with Cobb-Douglas induced labels.

    Returns ``(base, perm, visited)``.
    """
    cdef CD e
    cdef int n1 = n + 1
    cdef long* base = <long*> malloc(n1 * sizeof(long))
    cdef long* nb = <long*> malloc(n1 * sizeof(long))
    cdef long* verts = <long*> malloc(n1 * n1 * sizeof(long))
    cdef long* tmpv = <long*> malloc(n1 * sizeof(long))
    cdef int* perm = <int*> malloc(n1 * sizeof(int))
    cdef int* nperm = <int*> malloc(n1 * sizeof(int))
    cdef int* pos = <int*> malloc((n1 + 1) * sizeof(int))
    cdef int* labs = <int*> malloc(n1 * sizeof(int))
    cdef int d, j, i, t, entry, new_label, first, s
    cdef long visited
    cdef long limit = 16
    cdef long mk = 1
    cdef bint ok = True
    if (base == NULL or nb == NULL or verts == NULL or tmpv == NULL or perm == NULL
            or nperm == NULL or pos == NULL or labs == NULL):
        raise MemoryError()
    for t in range(1, n + 1):
        mk *= m
        limit += 4 * mk
    init_cd(&e, alpha, omega, supply)
    try:
        with nogil:
            # start: the 1-cell of F_1 with e_0 as its second vertex
            for i in range(n1):
                base[i] = 0
            base[0] = m
            for i in range(n1):
                verts[n1 + i] = base[i]
            do_unstep(base, 1)
            for i in range(n1):
                verts[i] = base[i]
            perm[0] = 1
            labs[0] = cd_label(&e, &verts[0], m)
            labs[1] = cd_label(&e, &verts[n1], m)
            d = 1
            entry = 0
            visited = 1
            while True:
                if visited > limit:
                    ok = False
                    break
                new_label = labs[entry]
                if new_label == d:
                    if d == n:
                        break
                    d += 1
                    do_unstep(base, d)
                    # shift vertices and labels up by one slot
                    for t in range(d, 0, -1):
                        for i in range(n1):
                            verts[t * n1 + i] = verts[(t - 1) * n1 + i]
                        labs[t] = labs[t - 1]
                    for t in range(d - 1, 0, -1):
                        perm[t] = perm[t - 1]
                    perm[0] = d
                    for i in range(n1):
                        verts[i] = base[i]
                    labs[0] = cd_label(&e, &verts[0], m)
                    entry = 0
                    visited += 1
                    continue
                j = 0
                while j == entry or labs[j] != new_label:
                    j += 1
                while True:
                    for i in range(n1):
                        nb[i] = base[i]
                    for t in range(d):
                        nperm[t] = perm[t]
                    if j == 0:
                        do_step(nb, perm[0])
                        first = nperm[0]
                        for t in range(d - 1):
                            nperm[t] = nperm[t + 1]
                        nperm[d - 1] = first
                    elif j == d:
                        do_unstep(nb, perm[d - 1])
                        first = nperm[d - 1]
                        for t in range(d - 1, 0, -1):
                            nperm[t] = nperm[t - 1]
                        nperm[0] = first
                    else:
                        s = nperm[j - 1]
                        nperm[j - 1] = nperm[j]
                        nperm[j] = s
                    if valid_in_face(nb, nperm, d, m, pos):
                        if j == 0:
                            for i in range(n1):
                                tmpv[i] = verts[d * n1 + i]
                            do_step(tmpv, perm[0])
                            for t in range(d):
                                for i in range(n1):
                                    verts[t * n1 + i] = verts[(t + 1) * n1 + i]
                                labs[t] = labs[t + 1]
                            for i in range(n1):
                                verts[d * n1 + i] = tmpv[i]
                            labs[d] = cd_label(&e, &verts[d * n1], m)
                            entry = d
                        elif j == d:
                            for t in range(d, 0, -1):
                                for i in range(n1):
                                    verts[t * n1 + i] = verts[(t - 1) * n1 + i]
                                labs[t] = labs[t - 1]
                            for i in range(n1):
                                verts[i] = nb[i]
                            labs[0] = cd_label(&e, &verts[0], m)
                            entry = 0
                        else:
                            for i in range(n1):
                                verts[j * n1 + i] = verts[(j - 1) * n1 + i]
                            do_step(&verts[j * n1], nperm[j - 1])
                            labs[j] = cd_label(&e, &verts[j * n1], m)
                            entry = j
                        for i in range(n1):
                            base[i] = nb[i]
                        for t in range(d):
                            perm[t] = nperm[t]
                        visited += 1
                        break
                    # boundary door: descend into F_{d-1}
                    if j != 0 or perm[0] != d or base[d] != 1:
                        ok = False
                        break
                    for t in range(d):
                        for i in range(n1):
                            verts[t * n1 + i] = verts[(t + 1) * n1 + i]
                        labs[t] = labs[t + 1]
                    for i in range(n1):
                        base[i] = verts[i]
                    for t in range(d - 1):
                        perm[t] = perm[t + 1]
                    d -= 1
                    visited += 1
                    if d == 0:
                        ok = False
                        break
                    j = 0
                    while labs[j] != d:
                        j += 1
                if not ok:
                    break
        if not ok:
            raise RuntimeError("door walk failed; induced labeling is not proper")
        return (tuple(base[i] for i in range(n1)), tuple(perm[t] for t in range(n)), visited)
    finally:
        free_cd(&e)
        free(base); free(nb); free(verts); free(tmpv)
        free(perm); free(nperm); free(pos); free(labs)


def cd_near_equilibria(int n, long m, list alpha, list omega, list supply, double eta):
    """Interior grid vertices whose equilibrium residual is below ``eta``.

    Returns a list of ``(vertex, residual)`` in lexicographic vertex order.
    """
    cdef CD e
    cdef int n1 = n + 1
    cdef long* k = <long*> malloc(n1 * sizeof(long))
    cdef int i, c
    cdef long rest
    cdef double fm = <double>m, r
    out = []
    if k == NULL:
        raise MemoryError()
    init_cd(&e, alpha, omega, supply)
    try:
        if m < n1:
            return out
        # lexicographic odometer over compositions with every part >= 1
        for i in range(n):
            k[i] = 1
        k[n] = m - n
        while True:
            for i in range(n1):
                e.q[i] = <double>k[i] / fm
            cd_excess(&e)
            r = 0.0
            for i in range(n1):
                if e.f[i] > r:
                    r = e.f[i]
            if r < eta:
                out.append((tuple(k[i] for i in range(n1)), r))
            # next composition in lexicographic order (every part >= 1)
            c = n - 1
            rest = 0
            while c >= 0:
                rest += k[c + 1] - 1
                if rest > 0:
                    break
                c -= 1
            if c < 0:
                break
            k[c] += 1
            for i in range(c + 1, n):
                k[i] = 1
            k[n] = rest
        return out
    finally:
        free(k)
        free_cd(&e)
