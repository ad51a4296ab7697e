"""Backend selection for the counting kernels.

The compiled extension ``unifsel._kernels`` is used when it imports; otherwise
(or when ``UNIFSEL_PURE_PYTHON=1``) the numpy implementation is used.
"""
import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("UNIFSEL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

encode_configs = _impl.encode_configs
entropy_from_codes = _impl.entropy_from_codes
cmi_from_codes = _impl.cmi_from_codes
cmi_dof_from_codes = _impl.cmi_dof_from_codes

__all__ = ["BACKEND", "encode_configs", "entropy_from_codes", "cmi_from_codes", "cmi_dof_from_codes"]
