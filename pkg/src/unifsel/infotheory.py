"""Plug-in information measures (nats) and the G² conditional-independence test.

All estimators share one counting path: the conditioning set is collapsed to a
dense code over its observed configurations, and the per-cell sum
``n_xyz ln(n_xyz n_z / (n_xz n_yz))`` is accumulated by the kernel backend.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.special import gammaincc

from .dataset import DiscreteDataset
from .kernels import cmi_dof_from_codes, cmi_from_codes, encode_configs, entropy_from_codes

DEFAULT_XI = 5.0


@dataclass(frozen=True)
class IndependenceResult:
    """Outcome of one G² test of X ⫫ Y | S."""

    g2: float
    dof: int
    p_value: float
    mi_nats: float
    reliable: bool
    n_effective: int

    def to_dict(self) -> dict:
        return {"g2": self.g2, "dof": self.dof, "p_value": self.p_value,
                "mi_nats": self.mi_nats, "reliable": self.reliable,
                "n_effective": self.n_effective}


def joint_codes(data: DiscreteDataset, vars: Iterable[int]):
    """Dense code of the joint configuration of ``vars`` (None when empty)."""
    vars = list(vars)
    if not vars:
        return None, 1
    if len(vars) == 1:
        j = vars[0]
        return data.columns[j], data.cardinalities[j]
    return encode_configs([data.columns[j] for j in vars],
                          [data.cardinalities[j] for j in vars])


def entropy(data: DiscreteDataset, vars) -> float:
    """Plug-in joint entropy H(vars) in nats."""
    vars = sorted(set(_as_list(vars)))
    if not vars:
        raise ValueError("entropy needs a nonempty variable set")
    codes, levels = joint_codes(data, vars)
    return float(entropy_from_codes(codes, levels))


def conditional_entropy(data: DiscreteDataset, target, given) -> float:
    """H(target | given) = H(target, given) − H(given)."""
    t = _as_list(target)
    g = [v for v in _as_list(given) if v not in t]
    if not g:
        return entropy(data, t)
    return max(entropy(data, t + g) - entropy(data, g), 0.0)


def _cmi_sum(data: DiscreteDataset, x: int, y: int, s) -> float:
    """m · I(X;Y|S) accumulated in one pass."""
    s = list(s)
    z, nz = joint_codes(data, s) if s else (None, 1)
    return cmi_from_codes(data.columns[x], data.columns[y], z,
                          data.cardinalities[x], data.cardinalities[y], nz)


def mutual_information(data: DiscreteDataset, x: int, y: int) -> float:
    """Plug-in I(X;Y) in nats."""
    return conditional_mutual_information(data, x, y, ())


def conditional_mutual_information(data: DiscreteDataset, x: int, y: int, s=()) -> float:
    """Plug-in I(X;Y|S) in nats; S = ∅ gives the unconditional MI."""
    s = _check_xys(x, y, s)
    if data.m == 0:
        return 0.0
    return max(_cmi_sum(data, x, y, s) / data.m, 0.0)


def set_mutual_information(data: DiscreteDataset, target: int, features) -> float:
    """I(target; F) for a feature set F treated as one joint variable."""
    feats = [f for f in _as_list(features) if f != target]
    if not feats or data.m == 0:
        return 0.0
    codes, levels = joint_codes(data, feats)
    total = cmi_from_codes(data.columns[target], codes, None,
                           data.cardinalities[target], levels, 1)
    return max(total / data.m, 0.0)


def kl_divergence(p, q) -> float:
    """Kullback–Leibler divergence D(p‖q) in nats."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("p and q must have the same length")
    for name, v in (("p", p), ("q", q)):
        if np.any(v < 0) or abs(v.sum() - 1.0) > 1e-9:
            raise ValueError(f"{name} is not a probability vector")
    support = p > 0
    if np.any(q[support] == 0):
        raise ValueError("support violation: q is zero where p is positive")
    return float(max(np.sum(p[support] * np.log(p[support] / q[support])), 0.0))


def chi2_sf(g2: float, dof: int) -> float:
    """Upper tail of the chi-square distribution via the regularized gamma Q."""
    if dof <= 0 or g2 <= 0:
        return 1.0
    return float(gammaincc(dof / 2.0, g2 / 2.0))


def g2_dof(cards_x: int, cards_y: int, cards_s: Iterable[int]) -> int:
    return (cards_x - 1) * (cards_y - 1) * math.prod(cards_s)


def min_rows(cards_x: int, cards_y: int, cards_s: Iterable[int], xi: float = DEFAULT_XI) -> float:
    """Sample-sufficiency threshold ξ·r_X·r_Y·Π r_S."""
    return xi * cards_x * cards_y * math.prod(cards_s)


def g2_from_sum(cell_sum: float, m: int, rx: int, ry: int, rs, xi: float = DEFAULT_XI,
                dof: int | None = None) -> IndependenceResult:
    """Build the test result from m·I(X;Y|S) and the declared cardinalities.

    ``dof`` overrides the declared (r_X−1)(r_Y−1)Πr_S, e.g. with the
    stratum-adjusted count; the reliability rule always uses declared sizes.
    """
    rs = list(rs)
    mi = max(cell_sum / m, 0.0) if m > 0 else 0.0
    g2 = 2.0 * m * mi
    declared = g2_dof(rx, ry, rs)
    if declared == 0:
        # some variable has a single value: nothing to test
        return IndependenceResult(g2, 0, 1.0, mi, True, m)
    if dof is None:
        dof = declared
    reliable = m >= min_rows(rx, ry, rs, xi)
    return IndependenceResult(g2, dof, chi2_sf(g2, dof), mi, bool(reliable), m)


def g2_test(data: DiscreteDataset, x: int, y: int, s=(), xi: float = DEFAULT_XI,
            dof: str = "declared") -> IndependenceResult:
    """G² likelihood-ratio test of X ⫫ Y | S with the sample-sufficiency flag.

    ``dof="declared"`` uses (r_X−1)(r_Y−1)Πr_S from the declared
    cardinalities; ``dof="adjusted"`` counts, per observed S-stratum, only the
    X and Y values that occur there.
    """
    s = _check_xys(x, y, s)
    rx, ry = data.cardinalities[x], data.cardinalities[y]
    rs = [data.cardinalities[j] for j in s]
    if dof == "declared":
        cell_sum = _cmi_sum(data, x, y, s) if data.m else 0.0
        return g2_from_sum(cell_sum, data.m, rx, ry, rs, xi)
    if dof != "adjusted":
        raise ValueError("dof must be 'declared' or 'adjusted'")
    if data.m == 0:
        return g2_from_sum(0.0, 0, rx, ry, rs, xi, dof=0)
    z, nz = joint_codes(data, s) if s else (None, 1)
    cell_sum, adj = cmi_dof_from_codes(data.columns[x], data.columns[y], z, rx, ry, nz)
    return g2_from_sum(cell_sum, data.m, rx, ry, rs, xi, dof=adj)


def _as_list(v) -> list[int]:
    if isinstance(v, (int, np.integer)):
        return [int(v)]
    return [int(u) for u in v]


def _check_xys(x, y, s) -> list[int]:
    s = sorted(set(_as_list(s)))
    if x == y:
        raise ValueError("x and y must differ")
    if x in s or y in s:
        raise ValueError("x and y must not appear in the conditioning set")
    return s
