"""unifsel: causal and non-causal feature selection over discrete data.

Mutual-information criteria (MIM, MIFS, mRMR, JMI, CIFE, CMIM, RelaxMRMR,
FCBF) and Markov-blanket discovery (IAMB, Inter-IAMB, MMPC/MMMB,
HITON-PC/MB, IPC-MB, STMB) share one estimator layer. A Bayesian-network
simulator with exact-joint oracles provides ground truth.
"""
__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402

__all__ = ["__version__", "BACKEND"]
