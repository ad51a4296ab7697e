"""Markov blanket and parents-children discovery with G² tests."""
from .citest import DEPENDENT, INDEPENDENT, UNRELIABLE, CausalConfig, CITester, LedgerEntry
from .iamb import iamb, inter_iamb
from .mb import hiton_mb, ipc_mb, mmmb, spouse_phase, stmb
from .pc import PCEngine, backward_pc, hiton_pc, mmpc, symmetry_correction
from .result import MBResult, PCOutcome

MB_ALGORITHMS = {
    "iamb": iamb, "interiamb": inter_iamb, "mmmb": mmmb, "hitonmb": hiton_mb,
    "ipcmb": ipc_mb, "stmb": stmb,
}
PC_ALGORITHMS = {"mmpc": mmpc, "hitonpc": hiton_pc}

__all__ = [
    "CITester", "CausalConfig", "DEPENDENT", "INDEPENDENT", "LedgerEntry", "MBResult",
    "MB_ALGORITHMS", "PCEngine", "PCOutcome", "PC_ALGORITHMS", "UNRELIABLE", "backward_pc",
    "hiton_mb", "hiton_pc", "iamb", "inter_iamb", "ipc_mb", "mmmb", "mmpc", "spouse_phase",
    "stmb", "symmetry_correction",
]
