"""
Special-function kernels: Airy Ai/Ai', Bessel J_nu of real order and
harmonic-oscillator eigenfunctions.

All functions accept scalars or numpy arrays and return the same shape.
Nothing here keeps mutable state; the Airy anchor table is built once at
import and never modified.

Airy strategy
-------------
* ``-3.25 <= z < 1.75``: Maclaurin series.
* ``-9.75 <= z < -3.25`` and ``1.75 <= z < 11.75``: Taylor expansion of
  ``y'' = z y`` about anchors spaced 0.5 apart. Away from the origin the
  Maclaurin series cancels badly while the asymptotic series is not yet
  accurate, so the anchors fill the gap. The positive table is seeded from
  the asymptotic form at z = 11.5 and marched toward the origin, the
  negative one from the Maclaurin value at z = -3.5.
* outside: Poincare asymptotic expansions, truncated at the smallest term.
"""

import math

import numpy as np

__all__ = [
    "DomainError",
    "airy_ai",
    "airy_ai_prime",
    "airy",
    "bessel_j",
    "bessel_j_zeros",
    "gamma",
    "ho_eigenfunction",
    "ho_eigenfunctions",
]

AIRY_ZMAX = 1.0e4
_AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
_AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)

_ANCHOR_STEP = 0.5
_MACLAURIN_LO = -3.25
_MACLAURIN_HI = 1.75
_NEG_CENTERS = -3.5 - _ANCHOR_STEP * np.arange(13)     # -3.5 .. -9.5
_POS_CENTERS = 11.5 - _ANCHOR_STEP * np.arange(20)     # 11.5 .. 2.0
_ASYM_NEG = _NEG_CENTERS[-1] - 0.5 * _ANCHOR_STEP
_ASYM_POS = _POS_CENTERS[0] + 0.5 * _ANCHOR_STEP
_TAYLOR_TERMS = 30


class DomainError(ValueError):
    """Argument outside the supported domain of a kernel."""


def gamma(x):
    """Euler Gamma function (thin wrapper so callers need only this module)."""
    return math.gamma(x)


def _as_array(z):
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    return arr


# ---------------------------------------------------------------- Airy

def _airy_maclaurin(z):
    z3 = z ** 3
    f = np.ones_like(z)
    g = z.copy()
    fp = np.zeros_like(z)
    gp = np.ones_like(z)
    t = np.ones_like(z)      # f terms
    u = z.copy()             # g terms
    s = 0.5 * z * z          # f' terms (k >= 1)
    v = np.ones_like(z)      # g' terms
    fp += s
    for k in range(0, 200):
        t = t * z3 / ((3 * k + 2) * (3 * k + 3))
        u = u * z3 / ((3 * k + 3) * (3 * k + 4))
        v = v * z3 / ((3 * k + 1) * (3 * k + 3))
        f += t
        g += u
        gp += v
        if k >= 1:
            s = s * z3 / ((3 * k) * (3 * k + 2))
            fp += s
        if k > 3 and np.all(np.abs(t) + np.abs(u) + np.abs(v) + np.abs(s) < 1e-18):
            break
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * fp + _AIP0 * gp
    return ai, aip


def _taylor_coefficients(z0, y0, yp0, nterms=_TAYLOR_TERMS):
    c = np.zeros(nterms)
    c[0] = y0
    c[1] = yp0
    for k in range(nterms - 2):
        prev = c[k - 1] if k >= 1 else 0.0
        c[k + 2] = (z0 * c[k] + prev) / ((k + 1) * (k + 2))
    return c


def _march(z0, y, yp, z1, nsub=4):
    """Carry (Ai, Ai') from z0 to z1 with a few Taylor steps."""
    h = (z1 - z0) / nsub
    z = z0
    for _ in range(nsub):
        c = _taylor_coefficients(z, y, yp)
        powers = h ** np.arange(len(c))
        y, yp = float(np.dot(c, powers)), float(np.dot(c[1:] * np.arange(1, len(c)), powers[:-1]))
        z += h
    return y, yp


def _build_anchor_table(centers, y, yp):
    # centers run in the direction in which Ai grows, so the march is stable
    table = []
    for i, z0 in enumerate(centers):
        table.append(_taylor_coefficients(z0, y, yp))
        if i + 1 < len(centers):
            y, yp = _march(z0, y, yp, centers[i + 1])
    return np.array(table)


def _anchor_eval(z, centers, coeffs):
    idx = np.rint((centers[0] - z) / (centers[0] - centers[1])).astype(int)
    idx = np.clip(idx, 0, len(centers) - 1)
    h = z - centers[idx]
    c = coeffs[idx]
    ai = np.zeros_like(z)
    aip = np.zeros_like(z)
    for k in range(c.shape[1] - 1, -1, -1):
        ai = ai * h + c[:, k]
        if k >= 1:
            aip = aip * h + k * c[:, k]
    return ai, aip


def _airy_u_coefficients(n):
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k))
    u = np.array(u)
    v = np.array([1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, n)])
    return u, v


_U, _V = _airy_u_coefficients(40)


def _truncated_series(coeffs, x, alternate):
    """Sum sum_k s_k coeffs[k] x**k, stopping at the smallest term per point."""
    total = np.zeros_like(x)
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    xk = np.ones_like(x)
    for k, c in enumerate(coeffs):
        sign = (-1) ** k if alternate else 1.0
        term = sign * c * xk
        mag = np.abs(term)
        active &= mag < prev
        total = np.where(active, total + term, total)
        prev = np.where(active, mag, prev)
        xk = xk * x
        if not active.any():
            break
    return total


def _airy_asymptotic_pos(z):
    zeta = 2.0 / 3.0 * z ** 1.5
    inv = 1.0 / zeta
    su = _truncated_series(_U, inv, alternate=True)
    sv = _truncated_series(_V, inv, alternate=True)
    pref = np.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    ai = pref * su / z ** 0.25
    aip = -pref * sv * z ** 0.25
    return ai, aip


def _airy_asymptotic_neg(z):
    x = -z
    zeta = 2.0 / 3.0 * x ** 1.5
    inv2 = 1.0 / zeta ** 2
    inv = 1.0 / zeta
    ue = _truncated_series(_U[0::2], inv2, alternate=True)
    uo = inv * _truncated_series(_U[1::2], inv2, alternate=True)
    ve = _truncated_series(_V[0::2], inv2, alternate=True)
    vo = inv * _truncated_series(_V[1::2], inv2, alternate=True)
    ph = zeta - math.pi / 4
    c, s = np.cos(ph), np.sin(ph)
    rp = 1.0 / math.sqrt(math.pi)
    ai = rp / x ** 0.25 * (c * ue + s * uo)
    aip = rp * x ** 0.25 * (s * ve - c * vo)
    return ai, aip


def _init_anchor_tables():
    y, yp = _airy_maclaurin(np.array([_NEG_CENTERS[0]]))
    neg = _build_anchor_table(_NEG_CENTERS, float(y[0]), float(yp[0]))
    y, yp = _airy_asymptotic_pos(np.array([_POS_CENTERS[0]]))
    pos = _build_anchor_table(_POS_CENTERS, float(y[0]), float(yp[0]))
    return neg, pos


_NEG_COEFFS, _POS_COEFFS = _init_anchor_tables()


def airy(z):
    """Return ``(Ai(z), Ai'(z))`` for real ``|z| <= 1e4``."""
    arr = _as_array(z)
    if np.any(np.abs(arr) > AIRY_ZMAX):
        raise DomainError(f"Airy argument outside |z| <= {AIRY_ZMAX:g}")
    flat = np.atleast_1d(arr).ravel()
    ai = np.empty_like(flat)
    aip = np.empty_like(flat)
    regions = [
        (flat >= _ASYM_POS, _airy_asymptotic_pos),
        ((flat >= _MACLAURIN_HI) & (flat < _ASYM_POS),
         lambda x: _anchor_eval(x, _POS_CENTERS, _POS_COEFFS)),
        ((flat >= _MACLAURIN_LO) & (flat < _MACLAURIN_HI), _airy_maclaurin),
        ((flat >= _ASYM_NEG) & (flat < _MACLAURIN_LO),
         lambda x: _anchor_eval(x, _NEG_CENTERS, _NEG_COEFFS)),
        (flat < _ASYM_NEG, _airy_asymptotic_neg),
    ]
    for sel, fn in regions:
        if sel.any():
            a, b = fn(flat[sel])
            ai[sel] = a
            aip[sel] = b
    if arr.ndim == 0:
        return float(ai[0]), float(aip[0])
    return ai.reshape(arr.shape), aip.reshape(arr.shape)


def airy_ai(z):
    """Airy function Ai(z)."""
    return airy(z)[0]


def airy_ai_prime(z):
    """Derivative Ai'(z)."""
    return airy(z)[1]


# -------------------------------------------------------------- Bessel

def _is_half_integer(nu):
    return abs(nu - round(nu - 0.5) - 0.5) < 1e-14


def _spherical_jn(l, z):
    """j_l(z) for integer l >= -1 via closed form / recurrence / series."""
    out = np.empty_like(z)
    small = z < max(1.0, float(l))
    if l == -1:
        return np.cos(z) / np.where(z == 0, 1.0, z)
    big = ~small
    if big.any():
        x = z[big]
        j0 = np.sin(x) / x
        if l == 0:
            out[big] = j0
        else:
            j1 = np.sin(x) / x ** 2 - np.cos(x) / x
            jm, jc = j0, j1
            for n in range(1, l):
                jm, jc = jc, (2 * n + 1) / x * jc - jm
            out[big] = jc
    if small.any():
        x = z[small]
        # ascending series: j_l(x) = x^l / (2l+1)!! * sum (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
        dfact = 1.0
        for j in range(1, 2 * l + 2, 2):
            dfact *= j
        term = np.ones_like(x)
        total = np.ones_like(x)
        for k in range(1, 200):
            term = term * (-0.5 * x * x) / (k * (2 * l + 2 * k + 1))
            total += term
            if np.all(np.abs(term) < 1e-17 * np.abs(total) + 1e-300):
                break
        out[small] = x ** l / dfact * total
    return out


def _bessel_series(nu, z):
    half = 0.5 * z
    with np.errstate(divide="ignore"):
        logpref = np.where(z > 0, nu * np.log(np.where(z > 0, half, 1.0)), 0.0) - math.lgamma(nu + 1.0)
    term = np.ones_like(z)
    total = np.ones_like(z)
    q = -half * half
    for k in range(1, 400):
        term = term * q / (k * (nu + k))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total) + 1e-300):
            break
    res = np.exp(logpref) * total
    at_zero = 1.0 if nu == 0 else (0.0 if nu > 0 else np.inf)
    return np.where(z == 0, at_zero, res)


def _bessel_miller(nu, x):
    """J_nu(x) for scalar x > 0 by backward recurrence (Miller's algorithm)."""
    if nu < 0:
        # one downward step from orders nu+1, nu+2
        return 2.0 * (nu + 1) / x * _bessel_miller(nu + 1, x) - _bessel_miller(nu + 2, x)
    n_int = int(math.floor(nu))
    nu0 = nu - n_int
    top = int(max(x, nu) + 40 + 4 * math.sqrt(max(x, nu)))
    top += top % 2
    # unnormalized values for orders nu0 + k, k = 0..top
    vals = np.zeros(top + 2)
    vals[top + 1] = 0.0
    vals[top] = 1e-300
    for k in range(top, 0, -1):
        vals[k - 1] = 2.0 * (nu0 + k) / x * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > 1e250:
            vals[k - 1:] *= 1e-250
    # normalization: (x/2)^nu0 = sum_k (nu0 + 2k) Gamma(nu0 + k) / k! J_{nu0+2k}
    if nu0 == 0.0:
        norm = vals[0] + 2.0 * vals[2::2].sum()
        target = 1.0
    else:
        ks = np.arange(0, top // 2 + 1)
        logc = np.array([math.lgamma(nu0 + k) - math.lgamma(k + 1.0) for k in ks])
        coef = (nu0 + 2 * ks) * np.exp(logc)
        norm = float(np.dot(coef, vals[0:2 * len(ks):2]))
        target = (0.5 * x) ** nu0
    return vals[n_int] * target / norm


def bessel_j(nu, z):
    """Bessel function J_nu(z) for real order ``nu >= -1/2`` and ``z >= 0``.

    Half-integer orders use the closed trigonometric forms of the spherical
    Bessel functions. Otherwise the ascending series is used where it is
    free of cancellation (``z < 10`` or ``z**2 < nu + 1``) and Miller's
    backward recurrence elsewhere.
    """
    if nu < -0.5:
        raise DomainError("order must be >= -1/2")
    arr = _as_array(z)
    if np.any(arr < 0):
        raise DomainError("bessel_j requires z >= 0")
    flat = np.atleast_1d(arr).astype(float).ravel()
    out = np.empty_like(flat)
    if _is_half_integer(nu):
        l = int(round(nu - 0.5))
        pos = flat > 0
        out[~pos] = np.inf if l == -1 else 0.0   # J_{-1/2} diverges at 0
        if pos.any():
            x = flat[pos]
            out[pos] = np.sqrt(2.0 * x / math.pi) * _spherical_jn(l, x)
    else:
        use_series = (flat < 10.0) | (flat * flat < nu + 1.0)
        if use_series.any():
            out[use_series] = _bessel_series(nu, flat[use_series])
        for i in np.flatnonzero(~use_series):
            out[i] = _bessel_miller(nu, float(flat[i]))
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def bessel_j_zeros(m, kmax, step=0.05):
    """Positive zeros of J_m below ``kmax`` (integer or real order m >= 0).

    Sign changes are bracketed on a uniform scan and refined by bisection
    to machine precision.
    """
    if kmax <= 0:
        return np.array([])
    xs = np.arange(step, kmax + step, step)
    vals = bessel_j(m, xs)
    zeros = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        a, b = xs[i], xs[i + 1]
        fa = vals[i]
        for _ in range(80):
            c = 0.5 * (a + b)
            fc = bessel_j(m, c)
            if fc == 0.0 or b - a < 1e-15 * c:
                break
            if np.sign(fc) == np.sign(fa):
                a, fa = c, fc
            else:
                b = c
        root = 0.5 * (a + b)
        if root < kmax:
            zeros.append(root)
    return np.array(zeros)


# ------------------------------------------------ oscillator functions

def ho_eigenfunctions(nmax, x, omega=1.0, mass=1.0, hbar=1.0, derivatives=False):
    """All 1D oscillator eigenfunctions phi_0..phi_nmax at points ``x``.

    Uses the normalized three-term recurrence with running log-scaling, so
    neither the Gaussian factor nor the polynomial part can over- or
    underflow for ``nmax`` up to 1e4.

    Returns
    -------
    phi : ndarray, shape (nmax + 1,) + x.shape
    dphi : ndarray, same shape (only if ``derivatives``)
    """
    if nmax < 0 or nmax > 10_000:
        raise DomainError("0 <= n <= 1e4 required")
    xa = _as_array(x)
    flat = np.atleast_1d(xa).ravel()
    alpha = math.sqrt(mass * omega / hbar)
    xi = alpha * flat
    lognorm = 0.25 * math.log(mass * omega / (math.pi * hbar))
    top = nmax + 1 if derivatives else nmax
    logs = -0.5 * xi * xi + lognorm
    prev = np.zeros_like(xi)
    cur = np.ones_like(xi)
    out = np.empty((top + 1, flat.size))

    def emit(n, val):
        with np.errstate(divide="ignore"):
            mag = np.log(np.abs(val))
        out[n] = np.sign(val) * np.exp(mag + logs)

    emit(0, cur)
    for n in range(top):
        nxt = math.sqrt(2.0 / (n + 1)) * xi * cur - math.sqrt(n / (n + 1.0)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e150
        if big.any():
            scale = np.where(big, 1e-150, 1.0)
            cur = cur * scale
            prev = prev * scale
            logs = logs + np.where(big, 150 * math.log(10.0), 0.0)
        emit(n + 1, cur)
    shape = (nmax + 1,) + xa.shape
    phi = out[: nmax + 1].reshape(shape)
    if not derivatives:
        return phi
    n = np.arange(nmax + 1)[:, None]
    lower = np.vstack([np.zeros((1, flat.size)), out[:nmax]])
    dphi = alpha * (np.sqrt(n / 2.0) * lower - np.sqrt((n + 1) / 2.0) * out[1:nmax + 2])
    return phi, dphi.reshape(shape)


def ho_eigenfunction(n, x, omega=1.0, mass=1.0, hbar=1.0):
    """Normalized 1D oscillator eigenfunction phi_n(x)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    return ho_eigenfunctions(n, x, omega, mass, hbar)[n]
