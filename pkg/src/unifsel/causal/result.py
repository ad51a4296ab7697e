"""Result containers for parents-children and Markov-blanket discovery."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class PCOutcome:
    """Output of one PC routine run for one target.

    ``witnesses`` maps each variable separated from the target to the first
    separating set found; ``decisions`` lists (action, variable, test key)
    triples, the key being (x, y, s) as stored in the tester ledger.
    """

    target: int
    pc: list
    witnesses: dict = field(default_factory=dict)
    decisions: list = field(default_factory=list)


@dataclass
class MBResult:
    target: int
    algorithm: str
    pc: set
    spouses: set
    tests_run: int
    ledger: list
    decisions: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pc = set(self.pc)
        self.spouses = set(self.spouses) - self.pc
        self.pc.discard(self.target)
        self.spouses.discard(self.target)

    @property
    def mb(self) -> set:
        return self.pc | self.spouses

    def to_dict(self, names=None, with_ledger: bool = False) -> dict:
        def lab(vs):
            vs = sorted(vs)
            return [names[v] for v in vs] if names is not None else vs

        d = {"algorithm": self.algorithm,
             "target": names[self.target] if names is not None else self.target,
             "pc": lab(self.pc), "spouses": lab(self.spouses), "mb": lab(self.mb),
             "tests_run": self.tests_run, "config": self.config}
        if with_ledger:
            d["ledger"] = [e.to_dict(names) for e in self.ledger]
        return d


def key(x: int, y: int, s) -> tuple:
    """Ledger key of a test, matching the tester's normalization."""
    return (min(x, y), max(x, y), tuple(sorted(s)))
