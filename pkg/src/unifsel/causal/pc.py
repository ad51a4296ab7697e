"""Parents-and-children discovery: MMPC, HITON-PC, the backward (IPC-MB style)
sweep, and symmetry correction.

Every routine treats all columns other than the target as candidates, so the
same code runs for the class attribute and for symmetry/spouse sub-runs on
features. Conditioning subsets are enumerated by size, then lexicographically,
up to ``gamma_cap``; the first separating subset is kept as the witness.
"""
from __future__ import annotations

from itertools import combinations

from ..dataset import DiscreteDataset
from .citest import DEPENDENT, CausalConfig, CITester
from .result import PCOutcome, key


def subsets(pool, max_size: int):
    """Subsets of ``pool`` of size 0..max_size, by size then lexicographically."""
    pool = sorted(pool)
    for k in range(min(max_size, len(pool)) + 1):
        yield from combinations(pool, k)


def find_separator(tester: CITester, x: int, t: int, pool, max_size: int | None = None):
    """First S' ⊆ pool (|S'| ≤ cap) with independent(x, t | S'), or None."""
    cfg = tester.config
    cap = cfg.cap(len(pool)) if max_size is None else max_size
    for sub in subsets(pool, cap):
        if tester.independent(x, t, sub):
            return sub
    return None


def _candidates(tester: CITester, t: int) -> list[int]:
    return [v for v in range(tester.data.n_columns) if v != t]


def mmpc_outcome(tester: CITester, t: int) -> PCOutcome:
    """Max-min forward selection followed by subset-based backward removal."""
    cfg = tester.config
    out = PCOutcome(t, [])
    cpc: list[int] = []
    rejected: set[int] = set()
    # running minimum association per candidate: (mi, test key)
    min_assoc: dict[int, tuple] = {}
    pending = {x: [()] for x in _candidates(tester, t)}
    while True:
        for x, subs in pending.items():
            if x in rejected or x in cpc:
                continue
            for sub in subs:
                e = tester.test(x, t, sub)
                if tester.independent(x, t, sub):
                    rejected.add(x)
                    out.witnesses[x] = sub
                    out.decisions.append(("reject", x, key(x, t, sub)))
                    break
                if e.verdict == DEPENDENT:
                    cur = min_assoc.get(x)
                    if cur is None or e.mi_nats < cur[0]:
                        min_assoc[x] = (e.mi_nats, key(x, t, sub))
            pending[x] = []
        best = None
        for x in sorted(min_assoc):
            if x in rejected or x in cpc:
                continue
            if best is None or min_assoc[x][0] > min_assoc[best][0]:
                best = x
        if best is None:
            break
        out.decisions.append(("add", best, min_assoc[best][1]))
        new = best
        others = sorted(cpc)
        cpc.append(new)
        # subsets of the new CPC that contain the newcomer, by size then lexicographically
        fresh = []
        for k in range(1, cfg.cap(len(cpc)) + 1):
            for c in combinations(others, k - 1):
                fresh.append(tuple(sorted(c + (new,))))
        for x in pending:
            if x not in rejected and x not in cpc:
                pending[x] = fresh
    for y in sorted(cpc):
        rest = [v for v in cpc if v != y]
        sep = find_separator(tester, y, t, rest)
        if sep is not None:
            cpc.remove(y)
            out.witnesses[y] = sep
            out.decisions.append(("remove", y, key(y, t, sep)))
    out.pc = sorted(cpc)
    return out


def hiton_pc_outcome(tester: CITester, t: int) -> PCOutcome:
    """Rank by marginal association, admit one at a time, prune after each admission."""
    out = PCOutcome(t, [])
    queue = []
    for x in _candidates(tester, t):
        e = tester.test(x, t, ())
        if tester.independent(x, t, ()):
            out.witnesses[x] = ()
            out.decisions.append(("reject", x, key(x, t, ())))
        elif e.verdict == DEPENDENT:
            queue.append((-e.mi_nats, x))
    queue.sort()
    cpc: list[int] = []
    for _, x in queue:
        cpc.append(x)
        out.decisions.append(("add", x, key(x, t, ())))
        # the newcomer first, then earlier members (only subsets with the newcomer are new)
        for y in [x] + sorted(v for v in cpc if v != x):
            if y not in cpc:
                continue
            rest = [v for v in cpc if v != y]
            sep = find_separator(tester, y, t, rest)
            if sep is not None:
                cpc.remove(y)
                out.witnesses[y] = sep
                out.decisions.append(("remove", y, key(y, t, sep)))
    out.pc = sorted(cpc)
    return out


def backward_pc_outcome(tester: CITester, t: int) -> PCOutcome:
    """Start from every variable and remove by conditioning level 0, 1, 2, ...

    A level-ℓ sweep tests each remaining Y against every ℓ-subset of the
    other remaining variables; sweeping stops once ℓ reaches |S| or exceeds
    ``gamma_cap``.
    """
    cfg = tester.config
    out = PCOutcome(t, [])
    s = _candidates(tester, t)
    level = 0
    while level < len(s) and (cfg.gamma_cap is None or level <= cfg.gamma_cap):
        for y in list(s):
            if y not in s:
                continue
            rest = [v for v in s if v != y]
            for sub in combinations(rest, level):
                if tester.independent(y, t, sub):
                    s.remove(y)
                    out.witnesses[y] = sub
                    out.decisions.append(("remove", y, key(y, t, sub)))
                    break
        level += 1
    out.pc = sorted(s)
    return out


ROUTINES = {"mmpc": mmpc_outcome, "hiton": hiton_pc_outcome, "backward": backward_pc_outcome}


class PCEngine:
    """Memoized PC routine over one tester, shared by the target run and all sub-runs."""

    def __init__(self, tester: CITester, routine: str):
        self.tester = tester
        self.routine = ROUTINES[routine]
        self.name = routine
        self._memo: dict[int, PCOutcome] = {}

    def run(self, t: int) -> PCOutcome:
        hit = self._memo.get(t)
        if hit is None:
            hit = self._memo[t] = self.routine(self.tester, t)
        return hit

    def corrected(self, t: int, decisions: list | None = None) -> list[int]:
        """Symmetry correction: keep X ∈ PC(t) iff t ∈ PC(X)."""
        keep = []
        for x in self.run(t).pc:
            sub = self.run(x)
            if t in sub.pc:
                keep.append(x)
            elif decisions is not None:
                cite = sub.witnesses.get(t, ())
                decisions.append(("symmetry-drop", x, key(x, t, cite)))
        return keep


def _setup(data: DiscreteDataset, target, config, tester):
    config = config or CausalConfig()
    tester = tester or CITester(data, config)
    t = data.class_index if target is None else data.index_of(target)
    return t, tester


def mmpc(data: DiscreteDataset, target=None, config: CausalConfig | None = None,
         tester: CITester | None = None, correct: bool = False) -> set:
    """MMPC output for ``target`` (default: the class column); optionally symmetry-corrected."""
    t, tester = _setup(data, target, config, tester)
    eng = PCEngine(tester, "mmpc")
    return set(eng.corrected(t) if correct else eng.run(t).pc)


def hiton_pc(data: DiscreteDataset, target=None, config: CausalConfig | None = None,
             tester: CITester | None = None, correct: bool = False) -> set:
    t, tester = _setup(data, target, config, tester)
    eng = PCEngine(tester, "hiton")
    return set(eng.corrected(t) if correct else eng.run(t).pc)


def backward_pc(data: DiscreteDataset, target=None, config: CausalConfig | None = None,
                tester: CITester | None = None, correct: bool = False) -> set:
    t, tester = _setup(data, target, config, tester)
    eng = PCEngine(tester, "backward")
    return set(eng.corrected(t) if correct else eng.run(t).pc)


def symmetry_correction(data: DiscreteDataset, target, pc_candidates, config: CausalConfig | None = None,
                        routine: str = "mmpc", tester: CITester | None = None) -> set:
    """Keep X ∈ pc_candidates iff ``target`` appears in routine(X)."""
    t, tester = _setup(data, target, config, tester)
    eng = PCEngine(tester, routine)
    return {x for x in pc_candidates if t in eng.run(x).pc}
