"""Pure numpy counting kernels, used when the compiled extension is unavailable."""
import numpy as np


def encode_configs(columns, cards):
    """Dense first-appearance codes for the joint configuration of ``columns``.

    Returns ``(codes, n_levels)`` with codes in ``[0, n_levels)``; only observed
    configurations receive a level.
    """
    if len(columns) == 0:
        raise ValueError("encode_configs needs at least one column")
    m = len(columns[0])
    acc = np.zeros(m, dtype=np.int64)
    levels = 1
    for col, r in zip(columns, cards):
        r = max(int(r), 1)
        acc = acc * r + np.asarray(col, dtype=np.int64)
        if m == 0:
            levels = 1
            continue
        _, first, inverse = np.unique(acc, return_index=True, return_inverse=True)
        # relabel unique keys in order of first appearance
        order = np.argsort(first, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(order.size)
        acc = rank[inverse.ravel()].astype(np.int64)
        levels = int(order.size)
    return acc, levels


def entropy_from_codes(codes, n_levels):
    """Plug-in entropy (nats) of a coded column."""
    codes = np.asarray(codes, dtype=np.int64)
    m = codes.size
    if m == 0:
        return 0.0
    counts = np.bincount(codes, minlength=max(n_levels, 1))
    n = counts[counts > 0].astype(np.float64)
    return float(-np.sum(n * np.log(n / m)) / m)


def cmi_from_codes(x, y, z, rx, ry, nz):
    """Sum over cells of n_xyz * ln(n_xyz n_z / (n_xz n_yz)), i.e. m * I(X;Y|Z).

    ``z`` may be None for the unconditional case.
    """
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if z is None:
        z = np.zeros(x.size, dtype=np.int64)
        nz = 1
    else:
        z = np.asarray(z, dtype=np.int64)
    idx = (z * ry + y) * rx + x
    counts = np.bincount(idx, minlength=nz * ry * rx).reshape(nz, ry, rx)
    n_z = counts.sum(axis=(1, 2))
    n_yz = counts.sum(axis=2)
    n_xz = counts.sum(axis=1)
    mask = counts > 0
    n = counts[mask].astype(np.float64)
    zi, yi, xi = np.nonzero(mask)
    num = n * n_z[zi].astype(np.float64)
    den = n_xz[zi, xi].astype(np.float64) * n_yz[zi, yi].astype(np.float64)
    return float(np.sum(n * np.log(num / den)))


def cmi_dof_from_codes(x, y, z, rx, ry, nz):
    """As ``cmi_from_codes`` plus the stratum-adjusted degrees of freedom.

    Within each observed stratum of Z, only X values and Y values that occur
    count: dof = Σ_z (rows_z − 1)(cols_z − 1).
    """
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if z is None:
        z = np.zeros(x.size, dtype=np.int64)
        nz = 1
    else:
        z = np.asarray(z, dtype=np.int64)
    counts = np.bincount((z * ry + y) * rx + x, minlength=nz * ry * rx).reshape(nz, ry, rx)
    n_z = counts.sum(axis=(1, 2))
    n_yz = counts.sum(axis=2)
    n_xz = counts.sum(axis=1)
    mask = counts > 0
    n = counts[mask].astype(np.float64)
    zi, yi, xi = np.nonzero(mask)
    num = n * n_z[zi].astype(np.float64)
    den = n_xz[zi, xi].astype(np.float64) * n_yz[zi, yi].astype(np.float64)
    rows = (n_xz > 0).sum(axis=1)
    cols = (n_yz > 0).sum(axis=1)
    dof = int(np.sum(np.maximum(rows - 1, 0) * np.maximum(cols - 1, 0)))
    return float(np.sum(n * np.log(num / den))), dof
