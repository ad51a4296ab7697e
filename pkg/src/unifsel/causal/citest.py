"""Cached G² conditional-independence tester shared by all causal routines."""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional

from ..dataset import DiscreteDataset
from ..infotheory import DEFAULT_XI, g2_from_sum
from ..kernels import cmi_dof_from_codes, cmi_from_codes, encode_configs

DEPENDENT = "dependent"
INDEPENDENT = "independent"
UNRELIABLE = "unreliable"
POLICIES = ("skip-as-dependent", "skip-as-independent")


@dataclass(frozen=True)
class CausalConfig:
    """Test settings shared by every MB/PC routine.

    ``gamma_cap`` bounds conditioning-set size in subset searches (None means
    unlimited). ``unreliable_policy`` decides how a test failing the
    sample-sufficiency rule is read: under ``skip-as-dependent`` it never
    declares independence (and never admits a feature either). ``dof`` picks
    stratum-adjusted (default) or declared degrees of freedom for the G²
    p-value; reliability always uses the declared cardinalities.
    """

    alpha: float = 0.05
    gamma_cap: Optional[int] = 3
    xi: float = DEFAULT_XI
    unreliable_policy: str = "skip-as-dependent"
    dof: str = "adjusted"

    def __post_init__(self):
        if self.dof not in ("declared", "adjusted"):
            raise ValueError("dof must be 'declared' or 'adjusted'")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.gamma_cap is not None and self.gamma_cap < 0:
            raise ValueError("gamma_cap must be nonnegative or None")
        if self.unreliable_policy not in POLICIES:
            raise ValueError(f"unreliable_policy must be one of {POLICIES}")

    def cap(self, size: int) -> int:
        """Largest conditioning-set size to try when ``size`` variables are available."""
        return size if self.gamma_cap is None else min(self.gamma_cap, size)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "gamma_cap": self.gamma_cap, "xi": self.xi,
                "unreliable_policy": self.unreliable_policy, "dof": self.dof}


@dataclass(frozen=True)
class LedgerEntry:
    x: int
    y: int
    s: tuple
    p_value: float
    reliable: bool
    verdict: str
    g2: float
    mi_nats: float

    def to_dict(self, names=None) -> dict:
        d = {"x": self.x, "y": self.y, "s": list(self.s), "p_value": self.p_value,
             "reliable": self.reliable, "verdict": self.verdict, "g2": self.g2,
             "mi_nats": self.mi_nats}
        if names is not None:
            d.update(x_name=names[self.x], y_name=names[self.y], s_names=[names[v] for v in self.s])
        return d


@dataclass
class CITester:
    """G² tests on one dataset, memoized by the unordered pair and the sorted set.

    Each distinct test is computed once and appended to ``ledger``; cached
    repeats are not re-recorded, so ``len(ledger)`` counts tests performed.
    """

    data: DiscreteDataset
    config: CausalConfig = field(default_factory=CausalConfig)
    s_cache_size: int = 256

    def __post_init__(self):
        self.ledger: list[LedgerEntry] = []
        self._cache: dict = {}
        self._codes: OrderedDict = OrderedDict()

    @property
    def tests_run(self) -> int:
        return len(self.ledger)

    def _s_codes(self, s: tuple):
        hit = self._codes.get(s)
        if hit is not None:
            self._codes.move_to_end(s)
            return hit
        d = self.data
        hit = encode_configs([d.columns[j] for j in s], [d.cardinalities[j] for j in s])
        self._codes[s] = hit
        if len(self._codes) > self.s_cache_size:
            self._codes.popitem(last=False)
        return hit

    def test(self, x: int, y: int, s=()) -> LedgerEntry:
        s = tuple(sorted(set(s)))
        a, b = (x, y) if x < y else (y, x)
        key = (a, b, s)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if x == y or x in s or y in s:
            raise ValueError(f"invalid test ({x}, {y} | {s})")
        d = self.data
        ra, rb = d.cardinalities[a], d.cardinalities[b]
        z, nz = self._s_codes(s) if s else (None, 1)
        dof = None
        if d.m == 0:
            cell_sum = 0.0
            dof = None if self.config.dof == "declared" else 0
        elif self.config.dof == "declared":
            cell_sum = cmi_from_codes(d.columns[a], d.columns[b], z, ra, rb, nz)
        else:
            cell_sum, dof = cmi_dof_from_codes(d.columns[a], d.columns[b], z, ra, rb, nz)
        r = g2_from_sum(cell_sum, d.m, ra, rb, [d.cardinalities[j] for j in s],
                        self.config.xi, dof=dof)
        if not r.reliable:
            verdict = UNRELIABLE
        elif r.p_value < self.config.alpha:
            verdict = DEPENDENT
        else:
            verdict = INDEPENDENT
        entry = LedgerEntry(a, b, s, r.p_value, r.reliable, verdict, r.g2, r.mi_nats)
        self._cache[key] = entry
        self.ledger.append(entry)
        return entry

    def dependent(self, x: int, y: int, s=()) -> bool:
        """Reliable test rejecting independence at alpha."""
        return self.test(x, y, s).verdict == DEPENDENT

    def independent(self, x: int, y: int, s=()) -> bool:
        """Reliable test failing to reject, or an unreliable one under skip-as-independent."""
        v = self.test(x, y, s).verdict
        if v == UNRELIABLE:
            return self.config.unreliable_policy == "skip-as-independent"
        return v == INDEPENDENT

    def assoc(self, x: int, y: int, s=()) -> float:
        return self.test(x, y, s).mi_nats
