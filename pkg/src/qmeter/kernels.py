"""Backend selection for the sampling kernels.

The compiled extension is used when it imports; otherwise, or when
``QMETER_PURE_PYTHON=1`` is set, the numpy fallback is used.  Both produce
identical draws.
"""
import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if os.environ.get("QMETER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

stream_key = _impl.stream_key
uniforms = _impl.uniforms
sample_indices = _impl.sample_indices
sample_counts = _impl.sample_counts


def backends():
    """Map of every importable backend name to its module."""
    out = {"python": _fallback}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out
