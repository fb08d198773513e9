"""Hot kernels: compiled extension when available, pure Python otherwise.

Set ``FIBMULT_PURE=1`` to force the Python implementations.
"""
import os

from . import _pykernels as python

BACKEND = "python"
compiled = None
if not os.environ.get("FIBMULT_PURE"):
    try:
        from . import _ckernels as compiled
        BACKEND = "cython"
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else python

associativity_violations = _impl.associativity_violations
horizontal_closure = _impl.horizontal_closure
vertical_closure = _impl.vertical_closure
