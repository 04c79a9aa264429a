"""
Uniform-grid differentiation and quadrature helpers.

Derivatives use high-order central stencils (Fornberg weights), falling
back to one-sided stencils near an edge. A sample array may start at the
origin of a radial coordinate; passing ``parity`` (+1 even, -1 odd) then
extends it by reflection instead of going one-sided.

Integrals use the trapezoid rule with Euler-Maclaurin end corrections
(h^2, h^4 and h^6 terms) built from the same derivative stencils, which
keeps them accurate to roughly h^8 for smooth data.
"""

import numpy as np

__all__ = ["fornberg", "derivative", "integrate", "tail_integral", "with_origin"]

_EM = ((1, 1.0 / 12.0), (3, -1.0 / 720.0), (5, 1.0 / 30240.0))


def fornberg(z, x, m):
    """Weights c[k, j] for the k-th derivative at z from samples at x (k <= m)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((m + 1, n))
    c1, c4 = 1.0, x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2, c5, c4 = 1.0, c4, x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def derivative(f, h, k=1, order=8, parity=None):
    """k-th derivative of samples f (last axis) on a uniform grid.

    Parameters
    ----------
    parity : {None, 1, -1}
        If given, ``f[..., 0]`` is the value at a symmetry point (the
        origin) and the data are continued as an even (+1) or odd (-1)
        function to the left.
    """
    f = np.asarray(f, dtype=float)
    n = f.shape[-1]
    width = order + k - 1
    if width % 2 == 0:
        width += 1      # central stencils have odd width
    p = width // 2
    if n < width + 1:
        raise ValueError("too few points for the requested stencil")
    if parity is not None:
        ghost = parity * f[..., p:0:-1]
        ext = np.concatenate([ghost, f], axis=-1)
        off = p
    else:
        ext = f
        off = 0
    m = ext.shape[-1]
    out = np.empty(ext.shape)
    c = fornberg(0.0, np.arange(-p, p + 1), k)[k]
    interior = slice(p, m - p)
    acc = np.zeros(ext.shape[:-1] + (m - 2 * p,))
    for j, w in enumerate(c):
        acc += w * ext[..., j:j + m - 2 * p]
    out[..., interior] = acc
    # one-sided stencils at the edges
    nodes = np.arange(width + 1)
    for i in range(p):
        cl = fornberg(float(i), nodes, k)[k]
        out[..., i] = ext[..., : width + 1] @ cl
        cr = fornberg(float(width - i), nodes, k)[k]
        out[..., m - 1 - i] = ext[..., m - width - 1:] @ cr
    return out[..., off:] / h ** k


def with_origin(f, r, even_terms=5):
    """Prepend the r=0 value of an even function sampled at r = h, 2h, ...

    The value comes from interpolating the first samples by a polynomial
    in r^2.
    """
    f = np.asarray(f, dtype=float)
    rr = r[:even_terms] ** 2
    A = np.vander(rr, even_terms, increasing=True)
    coef = np.linalg.solve(A, np.moveaxis(f[..., :even_terms], -1, 0).reshape(even_terms, -1))
    f0 = coef[0].reshape(f.shape[:-1] + (1,))
    return np.concatenate([f0, f], axis=-1)


def _em_correction(g, h, left_parity=None):
    """Euler-Maclaurin terms (to subtract from the trapezoid sum)."""
    corr = 0.0
    for k, b in _EM:
        d = derivative(g, h, k, parity=left_parity)
        corr = corr + b * h ** (k + 1) * (d[..., -1] - d[..., 0])
    return corr


def integrate(g, h, left_parity=None):
    """Integral of samples g (both endpoints included) over the grid span."""
    g = np.asarray(g, dtype=float)
    T = h * (g.sum(axis=-1) - 0.5 * (g[..., 0] + g[..., -1]))
    return T - _em_correction(g, h, left_parity)


def tail_integral(g, h, left_parity=None):
    """I(x_i) = int_{x_i}^{x_end} g dx for every grid point x_i."""
    g = np.asarray(g, dtype=float)
    seg = 0.5 * h * (g[..., 1:] + g[..., :-1])
    T = np.concatenate([np.cumsum(seg[..., ::-1], axis=-1)[..., ::-1],
                        np.zeros(g.shape[:-1] + (1,))], axis=-1)
    for k, b in _EM:
        d = derivative(g, h, k, parity=left_parity)
        T = T - b * h ** (k + 1) * (d[..., -1:] - d)
    return T
