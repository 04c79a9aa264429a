"""
System description: units, confining potentials, particle filling and
shell bookkeeping.

Potentials are immutable ``PotentialSpec`` values. Spherical ones (IHO,
radial power laws, the 1D quartic seen as a symmetric 1D system) expose
``v_radial``/``dv_radial`` so the radial machinery never has to know the
kind; everything else goes through ``evaluate_potential``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

__all__ = [
    "Units",
    "PotentialSpec",
    "Occupation",
    "FillingError",
    "iho",
    "linear",
    "box",
    "quartic_1d",
    "radial_power",
    "coupled_quartic",
    "disk_billiard",
    "iho_shell_count",
    "lambda_M",
    "fill_levels",
    "evaluate_potential",
    "solid_angle",
]

KINDS = ("iho", "linear", "box", "quartic1d", "radial_power", "coupled_quartic", "disk")


class FillingError(ValueError):
    """Particle number incompatible with a closed-shell filling."""


@dataclass(frozen=True)
class Units:
    """Unit convention: hbar and particle mass."""
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError("hbar and mass must be positive")

    @property
    def hb2m(self):
        """hbar^2 / 2m."""
        return self.hbar ** 2 / (2.0 * self.mass)

    @classmethod
    def billiard(cls):
        """hbar^2/2m = 1 with hbar = 1 (so m = 1/2)."""
        return cls(hbar=1.0, mass=0.5)


@dataclass(frozen=True)
class PotentialSpec:
    """Tagged description of a confining system.

    Parameters
    ----------
    kind : str
        One of ``iho, linear, box, quartic1d, radial_power, coupled_quartic, disk``.
    D : int
        Spatial dimension (1, 2 or 3).
    params : tuple of (name, value)
        Kind-specific parameters, stored as a tuple so the spec is hashable.
    units : Units
    """
    kind: str
    D: int
    params: tuple
    units: Units = field(default_factory=Units)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.D not in (1, 2, 3):
            raise ValueError("D must be 1, 2 or 3")
        p = self.p
        for key in ("omega", "L", "c", "R"):
            if key in p and not p[key] > 0:
                raise ValueError(f"{key} must be positive")
        if self.kind == "linear":
            a = np.atleast_1d(p["a"])
            if len(a) != self.D or np.any(a <= 0):
                raise ValueError("linear slopes must be positive, one per dimension")

    @property
    def p(self):
        return dict(self.params)

    @property
    def hb2m(self):
        return self.units.hb2m

    @property
    def spherical(self):
        return self.kind in ("iho", "radial_power", "quartic1d")

    def v_radial(self, r):
        """V as a function of |r| for spherical kinds."""
        r = np.asarray(r, dtype=float)
        p = self.p
        if self.kind == "iho":
            return 0.5 * self.units.mass * p["omega"] ** 2 * r * r
        if self.kind == "radial_power":
            return p["c"] * np.abs(r) ** p["power"]
        if self.kind == "quartic1d":
            return p["c"] * r ** 4
        raise TypeError(f"{self.kind} potential is not spherical")

    def dv_radial(self, r):
        """dV/dr for spherical kinds."""
        r = np.asarray(r, dtype=float)
        p = self.p
        if self.kind == "iho":
            return self.units.mass * p["omega"] ** 2 * r
        if self.kind == "radial_power":
            k = p["power"]
            return p["c"] * k * np.sign(r) * np.abs(r) ** (k - 1)
        if self.kind == "quartic1d":
            return 4.0 * p["c"] * r ** 3
        raise TypeError(f"{self.kind} potential is not spherical")

    def turning_radius(self, lam):
        """Classical turning radius r_t with V(r_t) = lam (spherical kinds)."""
        p = self.p
        if self.kind == "iho":
            return math.sqrt(2 * lam / self.units.mass) / p["omega"]
        if self.kind == "radial_power":
            return (lam / p["c"]) ** (1.0 / p["power"])
        if self.kind == "quartic1d":
            return (lam / p["c"]) ** 0.25
        if self.kind == "disk":
            return p["R"]
        raise TypeError(f"{self.kind} potential has no single turning radius")

    def describe(self):
        args = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind}(D={self.D}, {args}, hbar={self.units.hbar}, m={self.units.mass})"


# ------------------------------------------------------------ builders

def iho(omega=1.0, D=3, units=None):
    """Isotropic oscillator V = m omega^2 r^2 / 2."""
    return PotentialSpec("iho", D, (("omega", float(omega)),), units or Units())


def linear(a, units=None):
    """Linear potential V = sum_i a_i x_i with positive slopes."""
    a = tuple(float(v) for v in np.atleast_1d(a))
    return PotentialSpec("linear", len(a), (("a", a),), units or Units())


def box(L=1.0, units=None):
    """1D box with ideally reflecting walls at 0 and L."""
    return PotentialSpec("box", 1, (("L", float(L)),), units or Units())


def quartic_1d(c=0.5, units=None):
    """V = c x^4 in one dimension."""
    return PotentialSpec("quartic1d", 1, (("c", float(c)),), units or Units())


def radial_power(c=0.5, power=4.0, D=2, units=None):
    """Spherical power law V = c r^power."""
    return PotentialSpec("radial_power", D, (("c", float(c)), ("power", float(power))),
                         units or Units())


def coupled_quartic(kappa=0.6, units=None):
    """V(x, y) = (x^4 + y^4)/2 - kappa x^2 y^2."""
    if not -1.0 < kappa < 1.0:
        raise ValueError("the coupled quartic is confining only for |kappa| < 1")
    return PotentialSpec("coupled_quartic", 2, (("kappa", float(kappa)),), units or Units())


def disk_billiard(R=1.0, units=None):
    """Circular billiard of radius R; defaults to hbar^2/2m = 1."""
    return PotentialSpec("disk", 2, (("R", float(R)),), units or Units.billiard())


def solid_angle(D):
    """Surface of the unit sphere in D dimensions (1D: the two points +-1)."""
    return 2.0 * math.pi ** (D / 2.0) / math.gamma(D / 2.0)


# ------------------------------------------------------------- shells

def iho_shell_count(M, D):
    """Particle number N = 2 (M+D)! / (D! M!) for M+1 filled IHO shells."""
    if M < 0:
        raise ValueError("M must be >= 0")
    if D not in (1, 2, 3):
        raise ValueError("D must be 1, 2 or 3")
    # exact integer arithmetic; math.comb never overflows
    return 2 * math.comb(M + D, D)


def shell_degeneracy(n, D):
    """Orbital degeneracy C(n+D-1, D-1) of IHO shell n (without spin)."""
    return math.comb(n + D - 1, D - 1)


def iho_shell_from_N(N, D):
    """Inverse of iho_shell_count; raises FillingError for open shells."""
    M = 0
    while iho_shell_count(M, D) < N:
        M += 1
    if iho_shell_count(M, D) != N:
        lo = iho_shell_count(M - 1, D) if M > 0 else 0
        raise FillingError(f"N={N} is not a closed IHO shell in D={D}; "
                           f"nearest closed values {lo} and {iho_shell_count(M, D)}")
    return M


def lambda_M(M, D, omega=1.0, hbar=1.0):
    """Fermi energy hbar omega (M + (D+1)/2), midway between shells M and M+1."""
    return hbar * omega * (M + (D + 1) / 2.0)


@dataclass(frozen=True)
class Occupation:
    """Closed-shell filling of a level sequence.

    ``fillings[i]`` is the number of occupied orbitals of level ``i``
    (its full degeneracy or 0); every orbital carries two spin states.
    """
    N: int
    fillings: np.ndarray
    lambda_qm: float
    e_homo: float
    e_lumo: float
    M: int | None = None

    @property
    def occupied(self):
        return np.flatnonzero(self.fillings)


def fill_levels(energies, degeneracies, N, rel_tol=1e-6, M=None):
    """Fill the lowest levels with N spin-1/2 fermions.

    Levels whose energies agree to ``rel_tol`` (relative to the level
    spacing scale) are treated as one shell; N must exhaust whole shells.

    Parameters
    ----------
    energies : array_like
        Sorted orbital energies.
    degeneracies : array_like of int
        Orbital multiplicity of each level (spin not included).
    N : int
        Even particle number.
    """
    if N <= 0:
        raise FillingError("N must be positive")
    if N % 2:
        raise FillingError(f"N={N} is odd; fermion pairs are required")
    e = np.asarray(energies, dtype=float)
    g = np.asarray(degeneracies, dtype=int)
    # near-degenerate levels may be ordered by quantum numbers within rel_tol
    if np.any(np.diff(e) < -rel_tol * max(1.0, abs(e).max())):
        raise ValueError("energies must be sorted")
    if 2 * g.sum() < N:
        raise FillingError(f"only {2 * g.sum()} states available for N={N}")
    scale = max(abs(e[-1] - e[0]), abs(e[0]), 1e-300)
    # group into shells
    starts = [0]
    for i in range(1, len(e)):
        if e[i] - e[starts[-1]] > rel_tol * scale:
            starts.append(i)
    starts.append(len(e))
    fillings = np.zeros(len(e), dtype=int)
    count = 0
    closed = [0]
    for a, b in zip(starts[:-1], starts[1:]):
        if count == N:
            break
        cap = 2 * g[a:b].sum()
        if count + cap > N:
            raise FillingError(f"N={N} leaves shell at E={e[a]:.10g} open; "
                               f"nearest closed values {closed[-1]} and {count + cap}")
        fillings[a:b] = g[a:b]
        count += cap
        closed.append(count)
        last = b
    if count != N:
        raise FillingError(f"N={N} exceeds the computed levels")
    if last >= len(e):
        raise FillingError("no unoccupied level available to define the Fermi energy")
    e_homo = e[last - 1]
    e_lumo = e[last]
    return Occupation(N=N, fillings=fillings, lambda_qm=0.5 * (e_homo + e_lumo),
                      e_homo=e_homo, e_lumo=e_lumo, M=M)


# ----------------------------------------------------------- potential

def evaluate_potential(spec, point):
    """Potential and gradient at ``point``.

    Returns
    -------
    V : float or ndarray
    grad : ndarray, shape (D,) + point shape
    inside : bool or ndarray
        False where the point lies outside a box/billiard; V and grad are
        NaN there (a wall, not a number).
    """
    x = np.asarray(point, dtype=float)
    if spec.D == 1 and (x.ndim == 0 or x.shape[0] != 1):
        x = x[None, ...]
    if x.shape[0] != spec.D:
        raise ValueError(f"point must have leading dimension {spec.D}")
    p = spec.p
    k = spec.kind
    inside = np.ones(x.shape[1:], dtype=bool)
    if k in ("iho", "radial_power", "quartic1d"):
        r = np.sqrt(np.sum(x * x, axis=0))
        V = spec.v_radial(r)
        dv = spec.dv_radial(r)
        with np.errstate(invalid="ignore", divide="ignore"):
            unit = np.where(r > 0, x / np.where(r > 0, r, 1.0), 0.0)
        grad = dv * unit
    elif k == "linear":
        a = np.asarray(p["a"]).reshape((-1,) + (1,) * (x.ndim - 1))
        V = np.sum(a * x, axis=0)
        grad = np.broadcast_to(a, x.shape).copy()
    elif k == "box":
        V = np.zeros(x.shape[1:])
        grad = np.zeros_like(x)
        inside = (x[0] >= 0) & (x[0] <= p["L"])
    elif k == "coupled_quartic":
        kap = p["kappa"]
        X, Y = x[0], x[1]
        V = 0.5 * (X ** 4 + Y ** 4) - kap * X * X * Y * Y
        grad = np.stack([2 * X ** 3 - 2 * kap * X * Y * Y, 2 * Y ** 3 - 2 * kap * Y * X * X])
    elif k == "disk":
        V = np.zeros(x.shape[1:])
        grad = np.zeros_like(x)
        inside = np.sum(x * x, axis=0) <= p["R"] ** 2
    V = np.where(inside, V, np.nan)
    grad = np.where(inside, grad, np.nan)
    if V.ndim == 0:
        return float(V), grad, bool(inside)
    return V, grad, inside
