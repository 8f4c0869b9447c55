"""Hot loops: displacement matrices over node sets and weighted operator sums.

The compiled displacement kernel is used when it imports; otherwise, or
when ``INTQUANT_PURE_PYTHON`` is set to a non-empty value, the numpy
implementation is used. ``BACKEND`` names the active one. Contractions go
through BLAS in both cases.
"""
import os

import numpy as np

from . import _pykernels

if os.environ.get("INTQUANT_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "numpy"

CHUNK = 512


def available_backends():
    """Mapping of backend name to displacement-kernel module."""
    out = {"numpy": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out


def displacement_stack(z, dim, backend=None):
    impl = _impl if backend is None else available_backends()[backend]
    return impl.displacement_stack(np.asarray(z, dtype=complex), int(dim))


def displacement_matrix(z, dim, backend=None):
    return displacement_stack(np.array([complex(z)]), dim, backend)[0]


def _chunks(z, c):
    z = np.ascontiguousarray(np.atleast_1d(z), dtype=complex)
    c = np.ascontiguousarray(np.atleast_1d(c), dtype=complex)
    if z.shape != c.shape:
        raise ValueError("node and coefficient arrays differ in shape")
    keep = c != 0
    z, c = z[keep], c[keep]
    for lo in range(0, z.size, CHUNK):
        yield z[lo:lo + CHUNK], c[lo:lo + CHUNK]


def weighted_displacement_sum(z, c, dim, backend=None):
    """``sum_k c_k D(z_k)``."""
    acc = np.zeros((dim, dim), dtype=complex)
    for zc, cc in _chunks(z, c):
        acc += np.tensordot(cc, displacement_stack(zc, dim, backend), axes=1)
    return acc


def weighted_conjugation_sum(z, c, seed, backend=None):
    """``sum_k c_k D(z_k) seed D(z_k)^dag``; diagonal seeds skip one product."""
    seed = np.asarray(seed, dtype=complex)
    dim = seed.shape[0]
    diag = np.allclose(seed, np.diag(np.diag(seed)), rtol=0.0, atol=0.0)
    acc = np.zeros((dim, dim), dtype=complex)
    for zc, cc in _chunks(z, c):
        d = displacement_stack(zc, dim, backend)
        if diag:
            b = d * (cc[:, None, None] * np.diag(seed)[None, None, :])
        else:
            b = np.matmul(d, seed) * cc[:, None, None]
        acc += np.tensordot(b, d.conj(), axes=([0, 2], [0, 2]))
    return acc
