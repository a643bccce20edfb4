"""Kernel backend selection.

The hot elimination loops exist twice: a compiled Cython extension
(``upblab._kernels._fast``) and a pure-Python reference twin
(``upblab._kernels.reference``).  Both implement the same functions on the
same data layout.  The compiled twin is preferred when importable; set
``UPBLAB_KERNELS=python`` or ``UPBLAB_KERNELS=compiled`` to force a choice.
"""

import os

from . import reference

_requested = os.environ.get("UPBLAB_KERNELS", "").strip().lower()
if _requested not in ("", "python", "compiled"):
    raise ImportError(
        f"UPBLAB_KERNELS must be 'python' or 'compiled', got {_requested!r}"
    )

_impl = None
if _requested != "python":
    try:
        from . import _fast as _impl
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = None
if _impl is None:
    _impl = reference

BACKEND = _impl.BACKEND_NAME
rref = _impl.rref
bareiss_rank = _impl.bareiss_rank
ldl_hermitian = _impl.ldl_hermitian


def available_backends():
    """Names of importable kernel backends."""
    names = ["python"]
    try:
        from . import _fast  # noqa: F401

        names.append("compiled")
    except ImportError:
        pass
    return names
