"""Markov blanket discovery built on the PC routines: MMMB, HITON-MB, IPC-MB, STMB."""
from __future__ import annotations

from ..dataset import DiscreteDataset
from .citest import CausalConfig, CITester
from .pc import PCEngine, find_separator, subsets
from .result import MBResult, key


def spouse_phase(eng: PCEngine, t: int, pc: list[int], decisions: list) -> set:
    """Spouses via colliders: Y ⫫ T | S' but Y and T dependent given S' ∪ {X}.

    X ranges over the corrected PC of the target and Y over the uncorrected
    PC of X. S' is the witness recorded when Y was separated from the target;
    without one, the γ-capped search runs over (PC(T) ∪ PC(X)) ∖ {X, Y}.
    """
    tester = eng.tester
    own = eng.run(t)
    pcset = set(pc)
    spouses: set[int] = set()
    for x in sorted(pc):
        for y in eng.run(x).pc:
            if y == t or y in pcset or y in spouses:
                continue
            sep = own.witnesses.get(y)
            if sep is None:
                pool = (set(own.pc) | set(eng.run(x).pc)) - {x, y, t}
                sep = find_separator(tester, y, t, pool)
            if sep is None or x in sep:
                continue
            cond = tuple(sorted(sep + (x,)))
            if tester.dependent(y, t, cond):
                spouses.add(y)
                decisions.append(("spouse", y, key(y, t, cond)))
    return spouses


def _pc_then_spouses(data, target, config, tester, routine: str, name: str) -> MBResult:
    config = config or CausalConfig()
    tester = tester or CITester(data, config)
    t = data.class_index if target is None else data.index_of(target)
    eng = PCEngine(tester, routine)
    decisions = list(eng.run(t).decisions)
    pc = eng.corrected(t, decisions)
    spouses = spouse_phase(eng, t, pc, decisions)
    return MBResult(t, name, set(pc), spouses, tester.tests_run, tester.ledger, decisions,
                    config.to_dict())


def mmmb(data: DiscreteDataset, target=None, config: CausalConfig | None = None,
         tester: CITester | None = None) -> MBResult:
    return _pc_then_spouses(data, target, config, tester, "mmpc", "mmmb")


def hiton_mb(data: DiscreteDataset, target=None, config: CausalConfig | None = None,
             tester: CITester | None = None) -> MBResult:
    return _pc_then_spouses(data, target, config, tester, "hiton", "hiton_mb")


def ipc_mb(data: DiscreteDataset, target=None, config: CausalConfig | None = None,
           tester: CITester | None = None) -> MBResult:
    return _pc_then_spouses(data, target, config, tester, "backward", "ipc_mb")


def stmb(data: DiscreteDataset, target=None, config: CausalConfig | None = None,
         tester: CITester | None = None) -> MBResult:
    """Backward PC without symmetry correction, spouse search outside it, then pruning.

    A spouse X is admitted through some Y ∈ S when X ⫫ T | S' and X and T
    are dependent given S' ∪ {Y}. After each admission every Y ∈ S is re-tested
    against subsets of (S ∪ {X}) ∖ Y; a Y that becomes independent leaves S,
    and X leaves the spouse set too when X was admitted through that Y.
    Before the final full-set pruning, each candidate admitted through Y is
    dropped if some Y ∪ S'' separates it from T, S'' a γ-capped subset of the
    other candidates admitted through Y.
    """
    config = config or CausalConfig()
    tester = tester or CITester(data, config)
    t = data.class_index if target is None else data.index_of(target)
    eng = PCEngine(tester, "backward")
    own = eng.run(t)
    decisions = list(own.decisions)
    s = list(own.pc)
    spouses: list[int] = []
    via: dict[int, int] = {}
    for x in range(data.n_columns):
        if x == t or x in own.pc:
            continue
        for y in sorted(s):
            if y not in s:
                continue
            sep = own.witnesses.get(x)
            if sep is None or y in sep:
                sep = find_separator(tester, x, t, [v for v in s if v != y])
            if sep is None or y in sep:
                continue
            cond = tuple(sorted(sep + (y,)))
            if not tester.dependent(x, t, cond):
                continue
            spouses.append(x)
            via[x] = y
            decisions.append(("spouse", x, key(x, t, cond)))
            for z in sorted(s):
                pool = [v for v in s if v != z] + [x]
                for sub in subsets(pool, config.cap(len(pool))):
                    if x not in sub:
                        continue
                    if tester.independent(z, t, sub):
                        s.remove(z)
                        decisions.append(("remove", z, key(z, t, sub)))
                        if via.get(x) == z and x in spouses:
                            spouses.remove(x)
                            decisions.append(("spouse-drop", x, key(z, t, sub)))
                        break
            break
    # per-child prune: a candidate reached through Y must stay dependent given
    # Y plus any γ-capped subset of the other candidates reached through Y
    for y in sorted(set(via.values())):
        if y not in s:
            continue
        group = sorted(x for x in spouses if via[x] == y)
        for x in group:
            pool = [v for v in group if v != x and v in spouses]
            for sub in subsets(pool, config.cap(len(pool))):
                cond = tuple(sorted(sub + (y,)))
                if tester.independent(x, t, cond):
                    spouses.remove(x)
                    decisions.append(("remove", x, key(x, t, cond)))
                    break
    for x in sorted(spouses):
        rest = [v for v in s + spouses if v != x]
        if tester.independent(x, t, rest):
            spouses.remove(x)
            decisions.append(("remove", x, key(x, t, rest)))
    for y in sorted(s):
        rest = [v for v in s + spouses if v != y]
        if tester.independent(y, t, rest):
            s.remove(y)
            decisions.append(("remove", y, key(y, t, rest)))
    return MBResult(t, "stmb", set(s), set(spouses), tester.tests_run, tester.ledger, decisions,
                    config.to_dict())
