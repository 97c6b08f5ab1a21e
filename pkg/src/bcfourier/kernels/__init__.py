"""Hot kernels with a compiled core and a numpy fallback.

The compiled extension is used when it imports; set ``BCFOURIER_BACKEND``
to ``python`` to force the fallback or ``compiled`` to fail loudly when the
extension is missing. Both modules stay importable for side-by-side tests
and benchmarks (``fallback`` always, ``compiled`` when built).
"""
import os

from . import _fallback as fallback

try:
    from . import _core as compiled
except ImportError:  # extension not built
    compiled = None

_choice = os.environ.get("BCFOURIER_BACKEND", "auto").lower()
if _choice == "python":
    _impl = fallback
elif _choice == "compiled":
    if compiled is None:
        raise ImportError("BCFOURIER_BACKEND=compiled but bcfourier.kernels._core is not built")
    _impl = compiled
else:
    _impl = compiled if compiled is not None else fallback

BACKEND = "compiled" if _impl is compiled else "python"

dft_axis = _impl.dft_axis
lambda_mul = _impl.lambda_mul
group_convolve = _impl.group_convolve
fold = fallback.fold
wrap = fallback.wrap

__all__ = [
    "BACKEND",
    "compiled",
    "fallback",
    "dft_axis",
    "lambda_mul",
    "group_convolve",
    "fold",
    "wrap",
]
