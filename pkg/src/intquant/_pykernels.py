"""Pure-numpy displacement kernel, vectorized over nodes.

Mirrors ``_ckernels.displacement_stack`` and must agree with it to rounding.
"""
import numpy as np


def displacement_stack(z, dim):
    """Matrices ``<e_m|D(z_k)|e_n>`` for every node, shape ``(K, dim, dim)``.

    Along each subdiagonal ``k = m - n`` the normalized Laguerre values
    ``F_n = sqrt(n!/(n+k)!) z^k e^{-|z|^2/2} L_n^{(k)}(|z|^2)`` obey the
    forward three-term recurrence, which is stable; the upper triangle
    follows from ``D_{n,n+k} = (-1)^k conj(D_{n+k,n})``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    K = z.size
    J = (z.real ** 2 + z.imag ** 2)[:, None]
    # coherent-state coefficients seed every subdiagonal: F_0(k) = D_{k,0}
    f0 = np.empty((K, dim), dtype=complex)
    f0[:, 0] = np.exp(-0.5 * J[:, 0])
    for m in range(1, dim):
        f0[:, m] = f0[:, m - 1] * z / np.sqrt(m)
    out = np.zeros((K, dim, dim), dtype=complex)
    k = np.arange(dim, dtype=float)
    sign = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0)
    prev = np.zeros_like(f0)
    cur = f0
    for n in range(dim):
        width = dim - n  # subdiagonals k with n + k < dim
        rows = n + np.arange(width)
        out[:, rows, n] = cur[:, :width]
        out[:, n, rows[1:]] = sign[1:width] * np.conj(cur[:, 1:width])
        if n == dim - 1:
            break
        kk = k[: width - 1]
        nxt = (2 * n + 1 + kk - J) * cur[:, : width - 1]
        if n > 0:
            nxt -= np.sqrt(n * (n + kk)) * prev[:, : width - 1]
        nxt /= np.sqrt((n + 1) * (n + kk + 1))
        prev, cur = cur, nxt
    return out


def displacement_matrix(z, dim):
    return displacement_stack(np.array([z]), dim)[0]
