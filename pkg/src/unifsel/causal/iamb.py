"""IAMB and Inter-IAMB: grow-shrink Markov blanket search conditioned on the whole set."""
from __future__ import annotations

from ..dataset import DiscreteDataset
from .citest import DEPENDENT, CausalConfig, CITester
from .result import MBResult, key


def _forward_pick(tester: CITester, t: int, mb: list[int]):
    """argmax I(X;T|MB) over candidates whose test is dependent; ties to the lowest index."""
    best, best_mi = None, None
    for x in range(tester.data.n_columns):
        if x == t or x in mb:
            continue
        e = tester.test(x, t, mb)
        if e.verdict == DEPENDENT and (best is None or e.mi_nats > best_mi):
            best, best_mi = x, e.mi_nats
    return best


def _shrink(tester: CITester, t: int, mb: list[int], decisions: list) -> None:
    """Remove the least-associated independent member until none is independent."""
    while True:
        worst, worst_mi = None, None
        for y in sorted(mb):
            rest = [v for v in mb if v != y]
            if tester.independent(y, t, rest):
                mi = tester.assoc(y, t, rest)
                if worst is None or mi < worst_mi:
                    worst, worst_mi = y, mi
        if worst is None:
            return
        rest = [v for v in mb if v != worst]
        mb.remove(worst)
        decisions.append(("remove", worst, key(worst, t, rest)))


def _result(tester, t, name, mb, decisions):
    return MBResult(t, name, set(), set(mb), tester.tests_run, tester.ledger, decisions,
                    tester.config.to_dict())


def iamb(data: DiscreteDataset, target=None, config: CausalConfig | None = None,
         tester: CITester | None = None) -> MBResult:
    """Forward phase to exhaustion, then a backward phase to fixpoint.

    PC and spouses are not distinguished: the blanket is reported in
    ``spouses`` and ``mb`` with ``pc`` left empty.
    """
    config = config or CausalConfig()
    tester = tester or CITester(data, config)
    t = data.class_index if target is None else data.index_of(target)
    mb: list[int] = []
    decisions: list = []
    while True:
        x = _forward_pick(tester, t, mb)
        if x is None:
            break
        decisions.append(("add", x, key(x, t, mb)))
        mb.append(x)
    _shrink(tester, t, mb, decisions)
    return _result(tester, t, "iamb", mb, decisions)


def inter_iamb(data: DiscreteDataset, target=None, config: CausalConfig | None = None,
               tester: CITester | None = None) -> MBResult:
    """IAMB with the backward sweep run right after every forward addition."""
    config = config or CausalConfig()
    tester = tester or CITester(data, config)
    t = data.class_index if target is None else data.index_of(target)
    mb: list[int] = []
    decisions: list = []
    seen = {frozenset()}
    while True:
        x = _forward_pick(tester, t, mb)
        if x is None:
            break
        decisions.append(("add", x, key(x, t, mb)))
        mb.append(x)
        _shrink(tester, t, mb, decisions)
        state = frozenset(mb)
        if state in seen:
            # an add/remove cycle; the set would repeat forever
            decisions.append(("cycle-stop", -1, None))
            break
        seen.add(state)
    return _result(tester, t, "inter_iamb", mb, decisions)
