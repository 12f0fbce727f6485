"""Kernel selection: compiled Cython extension if available, numpy fallback otherwise."""

try:
    from ._kernels import direct_gbar_sums  # noqa: F401

    HAVE_COMPILED = True
except ImportError:  # extension not built
    from ._fallback import direct_gbar_sums  # noqa: F401

    HAVE_COMPILED = False

from . import _fallback

direct_gbar_sums_py = _fallback.direct_gbar_sums
