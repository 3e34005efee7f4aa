"""Hot loops, compiled when available.

At import the Cython extension ``_ckernels`` is preferred; if it was not built
the pure Python twins in ``_pykernels`` are used. ``BACKEND`` names the active
choice and :func:`get_backend` returns either module explicitly, which is how
the tests and the benchmark compare them.
"""
from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_active = _ckernels if _ckernels is not None else _pykernels
BACKEND = "cython" if _ckernels is not None else "python"

beta_cf = _active.beta_cf
mean_max_ratio = _active.mean_max_ratio
argmax_ratio = _active.argmax_ratio
wealth_path = _active.wealth_path


def available_backends():
    return ["python"] + (["cython"] if _ckernels is not None else [])


def get_backend(name):
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


__all__ = [
    "BACKEND",
    "argmax_ratio",
    "available_backends",
    "beta_cf",
    "get_backend",
    "mean_max_ratio",
    "wealth_path",
]
