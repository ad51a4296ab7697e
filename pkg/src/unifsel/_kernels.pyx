# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels for plug-in entropy and conditional MI.

Mirrors ``_kernels_py`` exactly in signature and semantics.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport log

cnp.import_array()

ctypedef cnp.int64_t i64


def encode_configs(columns, cards):
    """Dense first-appearance codes for the joint configuration of ``columns``.

    Returns ``(codes, n_levels)`` with codes in ``[0, n_levels)``; only observed
    configurations receive a level.
    """
    cdef Py_ssize_t k = len(columns)
    cdef Py_ssize_t m, i, j
    cdef i64 levels, r, key, nxt
    cdef cnp.ndarray[i64, ndim=1] acc
    cdef cnp.ndarray[i64, ndim=1] table
    cdef cnp.ndarray[i64, ndim=1] col
    if k == 0:
        raise ValueError("encode_configs needs at least one column")
    m = len(columns[0])
    acc = np.zeros(m, dtype=np.int64)
    levels = 1
    for j in range(k):
        col = np.ascontiguousarray(columns[j], dtype=np.int64)
        r = max(int(cards[j]), 1)
        table = np.full(levels * r, -1, dtype=np.int64)
        nxt = 0
        for i in range(m):
            key = acc[i] * r + col[i]
            if table[key] < 0:
                table[key] = nxt
                nxt += 1
            acc[i] = table[key]
        levels = nxt if nxt > 0 else 1
    return acc, int(levels)


def entropy_from_codes(codes, Py_ssize_t n_levels):
    """Plug-in entropy (nats) of a coded column."""
    cdef cnp.ndarray[i64, ndim=1] c = np.ascontiguousarray(codes, dtype=np.int64)
    cdef Py_ssize_t m = c.shape[0]
    cdef Py_ssize_t i
    cdef cnp.ndarray[i64, ndim=1] counts = np.zeros(max(n_levels, 1), dtype=np.int64)
    cdef double s = 0.0
    cdef double n
    if m == 0:
        return 0.0
    for i in range(m):
        counts[c[i]] += 1
    for i in range(counts.shape[0]):
        if counts[i] > 0:
            n = <double>counts[i]
            s += n * log(n / m)
    return -s / m


def cmi_from_codes(x, y, z, Py_ssize_t rx, Py_ssize_t ry, Py_ssize_t nz):
    """Sum over cells of n_xyz * ln(n_xyz n_z / (n_xz n_yz)), i.e. m * I(X;Y|Z).

    ``z`` may be None for the unconditional case.
    """
    cdef cnp.ndarray[i64, ndim=1] xa = np.ascontiguousarray(x, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] ya = np.ascontiguousarray(y, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] za
    cdef Py_ssize_t m = xa.shape[0]
    cdef Py_ssize_t i, a, b, c, base
    if z is None:
        za = np.zeros(m, dtype=np.int64)
        nz = 1
    else:
        za = np.ascontiguousarray(z, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nxyz = np.zeros(nz * ry * rx, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nxz = np.zeros(nz * rx, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nyz = np.zeros(nz * ry, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nzz = np.zeros(nz, dtype=np.int64)
    for i in range(m):
        nxyz[(za[i] * ry + ya[i]) * rx + xa[i]] += 1
        nxz[za[i] * rx + xa[i]] += 1
        nyz[za[i] * ry + ya[i]] += 1
        nzz[za[i]] += 1
    cdef double s = 0.0
    cdef double n, num, den
    for c in range(nz):
        if nzz[c] == 0:
            continue
        for b in range(ry):
            if nyz[c * ry + b] == 0:
                continue
            base = (c * ry + b) * rx
            for a in range(rx):
                if nxyz[base + a] == 0:
                    continue
                n = <double>nxyz[base + a]
                num = n * <double>nzz[c]
                den = <double>nxz[c * rx + a] * <double>nyz[c * ry + b]
                s += n * log(num / den)
    return s


def cmi_dof_from_codes(x, y, z, Py_ssize_t rx, Py_ssize_t ry, Py_ssize_t nz):
    """As ``cmi_from_codes`` plus the stratum-adjusted degrees of freedom.

    Within each observed stratum of Z, only X values and Y values that occur
    count: dof = Σ_z (rows_z − 1)(cols_z − 1).
    """
    cdef cnp.ndarray[i64, ndim=1] xa = np.ascontiguousarray(x, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] ya = np.ascontiguousarray(y, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] za
    cdef Py_ssize_t m = xa.shape[0]
    cdef Py_ssize_t i, a, b, c, base, rows, cols
    cdef i64 dof = 0
    if z is None:
        za = np.zeros(m, dtype=np.int64)
        nz = 1
    else:
        za = np.ascontiguousarray(z, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nxyz = np.zeros(nz * ry * rx, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nxz = np.zeros(nz * rx, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nyz = np.zeros(nz * ry, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nzz = np.zeros(nz, dtype=np.int64)
    for i in range(m):
        nxyz[(za[i] * ry + ya[i]) * rx + xa[i]] += 1
        nxz[za[i] * rx + xa[i]] += 1
        nyz[za[i] * ry + ya[i]] += 1
        nzz[za[i]] += 1
    cdef double s = 0.0
    cdef double n, num, den
    for c in range(nz):
        if nzz[c] == 0:
            continue
        rows = 0
        cols = 0
        for a in range(rx):
            if nxz[c * rx + a] > 0:
                rows += 1
        for b in range(ry):
            if nyz[c * ry + b] > 0:
                cols += 1
        dof += (rows - 1) * (cols - 1)
        for b in range(ry):
            if nyz[c * ry + b] == 0:
                continue
            base = (c * ry + b) * rx
            for a in range(rx):
                if nxyz[base + a] == 0:
                    continue
                n = <double>nxyz[base + a]
                num = n * <double>nzz[c]
                den = <double>nxz[c * rx + a] * <double>nyz[c * ry + b]
                s += n * log(num / den)
    return s, int(dof)
