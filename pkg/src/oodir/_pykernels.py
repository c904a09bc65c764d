"""Pure numpy implementations of the basis-evaluation kernels.

Loops run over degree and order; every step is vectorised over the sample
points. ``_ckernels`` mirrors these functions one to one.
"""

import math

import numpy as np

INV_SQRT_4PI = 1.0 / math.sqrt(4.0 * math.pi)
SQRT2 = math.sqrt(2.0)


def sh_offsets(lmax, mmax):
    """Column offset of the first basis function of each degree."""
    offsets = np.zeros(lmax + 2, dtype=np.intp)
    for l in range(lmax + 1):
        offsets[l + 1] = offsets[l] + 2 * min(l, mmax) + 1
    return offsets


def real_sh_matrix(azimuth, colatitude, lmax, mmax):
    """Orthonormal real spherical harmonics without Condon-Shortley phase.

    Parameters
    ----------
    azimuth, colatitude : (Q,) array_like
        Angles in radians.
    lmax, mmax : int
        Maximum degree and maximum absolute order.

    Returns
    -------
    (Q, n_basis) ndarray
        Columns ordered by degree, then order from ``-min(l, mmax)`` to
        ``+min(l, mmax)``.
    """
    az = np.ascontiguousarray(azimuth, dtype=float).reshape(-1)
    th = np.ascontiguousarray(colatitude, dtype=float).reshape(-1)
    x = np.cos(th)
    s = np.sin(th)
    offsets = sh_offsets(lmax, mmax)
    out = np.empty((az.size, offsets[-1]))

    pmm = np.full(az.size, INV_SQRT_4PI)
    for m in range(min(lmax, mmax) + 1):
        if m > 0:
            pmm = math.sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * pmm
        if m == 0:
            trig_c = trig_s = None
        else:
            trig_c = SQRT2 * np.cos(m * az)
            trig_s = SQRT2 * np.sin(m * az)
        p_prev2 = None
        p_prev = pmm
        for l in range(m, lmax + 1):
            if l == m:
                p = pmm
            elif l == m + 1:
                p = math.sqrt(2.0 * m + 3.0) * x * pmm
            else:
                a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
                b = -math.sqrt(
                    (2.0 * l + 1.0) * ((l - 1.0) ** 2 - m * m)
                    / ((2.0 * l - 3.0) * (l * l - m * m))
                )
                p = a * x * p_prev + b * p_prev2
            if l > m:
                p_prev2, p_prev = p_prev, p
            centre = offsets[l] + min(l, mmax)
            if m == 0:
                out[:, centre] = p
            else:
                out[:, centre + m] = p * trig_c
                out[:, centre - m] = p * trig_s
    return out


def hsh_norm(n, l):
    """Normalisation making N(n,l) sin^l(psi) C_{n-l}^{l+1}(cos psi) unit-norm
    on [0, pi] with weight sin^2(psi)."""
    log_n = 0.5 * (
        (2 * l + 1) * math.log(2.0)
        + math.log(n + 1.0)
        + 2.0 * math.lgamma(l + 1.0)
        + math.lgamma(n - l + 1.0)
        - math.log(math.pi)
        - math.lgamma(n + l + 2.0)
    )
    return math.exp(log_n)


def gegenbauer(nu, alpha, x):
    """C_nu^alpha(x) by the three-term recurrence, vectorised over ``x``."""
    x = np.asarray(x, dtype=float)
    c_prev = np.ones_like(x)
    if nu == 0:
        return c_prev
    c = 2.0 * alpha * x
    for k in range(2, nu + 1):
        c_prev, c = c, (2.0 * x * (k + alpha - 1.0) * c - (k + 2.0 * alpha - 2.0) * c_prev) / k
    return c


def hsh_radial_table(psi, nmax):
    """Normalised radial factors N(n,l) sin^l(psi) C_{n-l}^{l+1}(cos psi).

    Returns a (P, (nmax+1)(nmax+2)/2) array; column ``n(n+1)/2 + l``
    holds the pair ``(n, l)``.
    """
    psi = np.ascontiguousarray(psi, dtype=float).reshape(-1)
    x = np.cos(psi)
    s = np.sin(psi)
    out = np.empty((psi.size, (nmax + 1) * (nmax + 2) // 2))
    s_pow = np.ones_like(psi)
    for l in range(nmax + 1):
        if l > 0:
            s_pow = s_pow * s
        alpha = l + 1.0
        c_prev = None
        c = np.ones_like(psi)
        for nu in range(nmax - l + 1):
            if nu == 1:
                c_prev, c = c, 2.0 * alpha * x
            elif nu > 1:
                c_prev, c = c, (
                    2.0 * x * (nu + alpha - 1.0) * c - (nu + 2.0 * alpha - 2.0) * c_prev
                ) / nu
            n = l + nu
            out[:, n * (n + 1) // 2 + l] = hsh_norm(n, l) * s_pow * c
    return out
