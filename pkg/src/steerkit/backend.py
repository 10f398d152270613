"""Kernel backend selection.

The hot fixed-size kernels (2x2/4x4 Hermitian eigensolvers, 3x3 symmetric
eigensolver, 3x3 SVD) exist twice: compiled Cython in ``_fastkern`` and a
pure-Python mirror in ``_purekern``.  The compiled module is preferred when
importable; ``STEERKIT_BACKEND=pure`` (or ``compiled``) forces a choice,
which the benchmark and the backend-parity tests use.
"""

import os

from steerkit import _purekern

_FORCED = os.environ.get("STEERKIT_BACKEND", "").strip().lower()

if _FORCED in ("pure", "python"):
    _impl = _purekern
elif _FORCED in ("", "compiled", "fast"):
    try:
        from steerkit import _fastkern as _impl
    except ImportError:
        if _FORCED:
            raise
        _impl = _purekern
else:
    raise RuntimeError(
        f"STEERKIT_BACKEND={_FORCED!r} not recognised; "
        "use 'compiled' or 'pure'"
    )

BACKEND = _impl.BACKEND_NAME

eigh2 = _impl.eigh2
eigh4 = _impl.eigh4
eigh3s = _impl.eigh3s
svd3 = _impl.svd3


def available_backends():
    """Names of importable kernel backends."""
    names = ["pure"]
    try:
        from steerkit import _fastkern  # noqa: F401

        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


def get_impl(name):
    """Fetch a specific backend module by name ('pure' or 'compiled')."""
    if name == "pure":
        return _purekern
    if name == "compiled":
        from steerkit import _fastkern

        return _fastkern
    raise ValueError(f"unknown backend {name!r}")
