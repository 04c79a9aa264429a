"""
Eigensolvers returning ``EigenSolution`` objects.

* ``solve_1d``: symmetric banded finite differences (order 2 uses a
  tridiagonal solve; higher orders use wider central stencils). Walls at
  the ends of the grid are Dirichlet, imposed by odd reflection so the
  wide stencils stay exact for the box.
* ``solve_radial``: Galerkin method on clamped B-splines for the radial
  equation in D dimensions, one angular channel at a time.
* ``solve_disk_billiard``: analytic, from Bessel zeros.
* ``solve_2d_grid``: 5-point Laplacian with sparse shift-invert Lanczos.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math
import os
import warnings

import numpy as np
from scipy import linalg, sparse
from scipy.interpolate import BSpline
from scipy.sparse.linalg import eigsh

from . import model, quad, specfun

__all__ = [
    "Grid",
    "EigenSolution",
    "SolverError",
    "richardson",
    "angular_multiplicity",
    "solve_1d",
    "solve_radial",
    "solve_radial_for_N",
    "solve_disk_billiard",
    "solve_2d_grid",
]


class SolverError(RuntimeError):
    """Eigensolver failed to converge or was given an unusable setup."""


@dataclass(frozen=True)
class Grid:
    """Uniform sampling grid.

    ``line``: interior points of [a, b] with walls at a and b.
    ``radial``: r = h, 2h, ..., rmax (the origin is handled by parity).
    ``plane``: interior points of the square [-X, X]^2, shared for x and y.
    """
    kind: str
    points: np.ndarray
    h: float
    bounds: tuple

    def __post_init__(self):
        if self.kind not in ("line", "radial", "plane"):
            raise ValueError("grid kind must be line, radial or plane")
        if len(self.points) < 64 and self.kind != "plane":
            raise ValueError("grids need at least 64 points")

    @classmethod
    def line(cls, a, b, n=None, h=None):
        if h is not None:
            n = int(round((b - a) / h)) - 1
        step = (b - a) / (n + 1)
        return cls("line", a + step * np.arange(1, n + 1), step, (a, b))

    @classmethod
    def radial(cls, rmax, n=None, h=None):
        if h is not None:
            n = int(round(rmax / h))
        step = rmax / n
        return cls("radial", step * np.arange(1, n + 1), step, (0.0, rmax))

    @classmethod
    def plane(cls, X, n):
        step = 2 * X / (n + 1)
        return cls("plane", -X + step * np.arange(1, n + 1), step, (-X, X))

    @property
    def n(self):
        return len(self.points)

    def mesh(self):
        """(X, Y) arrays for plane grids, indexed [iy, ix]."""
        return np.meshgrid(self.points, self.points, indexing="xy")

    def weights(self, D=1):
        """Quadrature weights including the radial metric r^(D-1) Omega_D."""
        if self.kind == "radial":
            return self.h * self.points ** (D - 1) * model.solid_angle(D)
        if self.kind == "plane":
            return np.full((self.n, self.n), self.h * self.h)
        return np.full(self.n, self.h)


@dataclass
class EigenSolution:
    """Single-particle levels and sampled orbitals.

    ``phi``/``dphi`` hold one row per level. For radial solutions they are
    the radial functions R(r), R'(r) normalized as int R^2 r^(D-1) dr = 1
    and ``quantum[i] = (n_r, l)``. For plane grids ``phi`` has shape
    (levels, n, n) and ``dphi`` shape (levels, 2, n, n).
    """
    spec: model.PotentialSpec
    grid: Grid
    D: int
    energies: np.ndarray
    degeneracy: np.ndarray
    quantum: list
    phi: np.ndarray
    dphi: np.ndarray
    flags: dict = field(default_factory=dict)

    @property
    def metric(self):
        return self.grid.kind

    def gram(self):
        """Overlap matrix of all orbitals under the grid metric."""
        if self.grid.kind == "plane":
            flat = self.phi.reshape(len(self.phi), -1)
            return flat @ flat.T * self.grid.h ** 2
        if self.grid.kind == "radial":
            # channels are orthogonal through their angular parts
            r = self.grid.points
            prod = self.phi[:, None, :] * self.phi[None, :, :]
            g = quad.integrate(quad.with_origin(prod, r) * np.concatenate([[0.0 if self.D > 1 else 1.0],
                               r ** (self.D - 1)]), self.grid.h, left_parity=(-1) ** (self.D - 1))
            ls = np.array([q[1] for q in self.quantum])
            g[ls[:, None] != ls[None, :]] = 0.0
            return g
        return self.phi @ self.phi.T * self.grid.h


def central_weights(order, deriv):
    """Central stencil of the given accuracy order for derivative 1 or 2."""
    p = order // 2
    return quad.fornberg(0.0, np.arange(-p, p + 1), deriv)[deriv]


def richardson(coarse, fine, order=2, ratio=2.0):
    """Richardson extrapolation of a quantity with error O(h^order)."""
    f = ratio ** order
    return (f * np.asarray(fine) - np.asarray(coarse)) / (f - 1.0)


def _odd_reflect_apply(weights, f):
    """Apply a central stencil to rows of f with odd reflection at both walls."""
    p = len(weights) // 2
    n = f.shape[-1]
    # wall node (value 0) sits between the ghost block and the first point
    zero = np.zeros(f.shape[:-1] + (1,))
    pad = np.concatenate([-f[..., p - 2::-1] if p > 1 else np.empty(f.shape[:-1] + (0,)), zero,
                          f, zero,
                          -f[..., :-p:-1] if p > 1 else np.empty(f.shape[:-1] + (0,))], axis=-1)
    out = np.zeros_like(f)
    for k, w in enumerate(weights):
        out += w * pad[..., k:k + n]
    return out


# ------------------------------------------------------------------- 1D

def solve_1d(spec, grid, count, order=8):
    """Lowest ``count`` eigenpairs of -(hbar^2/2m) d^2/dx^2 + V on a line grid.

    Parameters
    ----------
    order : int
        Accuracy order of the central second-derivative stencil (2, 4, 6,
        8...). Order 2 is the plain tridiagonal scheme with O(h^2)
        eigenvalue error. The first derivatives stored in the solution use
        a stencil of the same order.
    """
    if grid.kind != "line":
        raise SolverError("solve_1d needs a line grid")
    if count > grid.n // 4:
        raise SolverError("count must not exceed a quarter of the grid size")
    if order % 2 or order < 2:
        raise ValueError("order must be a positive even integer")
    x = grid.points
    h = grid.h
    if spec.kind == "box":
        L = spec.p["L"]
        if not (abs(grid.bounds[0]) < 1e-12 and abs(grid.bounds[1] - L) < 1e-12 * max(1, L)):
            raise SolverError("box grid must span exactly [0, L]")
        V = np.zeros_like(x)
    else:
        V = _potential_on_line(spec, x)
    c2 = central_weights(order, 2)
    p = order // 2
    n = grid.n
    kin = -spec.hb2m / h ** 2
    # lower banded storage: ab[k, i] = H[i + k, i]
    ab = np.zeros((p + 1, n))
    ab[0] = kin * c2[p] + V
    for k in range(1, p + 1):
        ab[k, : n - k] = kin * c2[p + k]
    # odd-reflection ghosts: row i, column j receive -c_{i+j+2} (0-based,
    # wall node sits at index -1)
    dense_fix = []
    for i in range(p):
        for j in range(p):
            off = i + j + 2
            if off <= p:
                dense_fix.append((i, j, -kin * c2[p + off]))
    for i, j, val in dense_fix:
        if i >= j:
            ab[i - j, j] += val
        # mirrored wall at the right end
        ii, jj = n - 1 - i, n - 1 - j
        if ii >= jj:
            ab[ii - jj, jj] += val
    if order == 2:
        w, v = linalg.eigh_tridiagonal(ab[0], ab[1, :-1], select="i", select_range=(0, count - 1))
    else:
        w, v = linalg.eig_banded(ab, lower=True, select="i", select_range=(0, count - 1))
    phi = v.T / math.sqrt(h)
    # fix sign convention: positive just right of the left wall lobe
    for i in range(count):
        k = np.argmax(np.abs(phi[i]) > 1e-3 * np.abs(phi[i]).max())
        if phi[i, k] < 0:
            phi[i] = -phi[i]
    dphi = _odd_reflect_apply(central_weights(order, 1), phi) / h
    flags = {"order": order}
    edge = np.abs(phi[:, [0, -1]]).max() / np.abs(phi).max()
    if spec.kind != "box" and edge > 1e-8:
        flags["boundary_amplitude"] = float(edge)
        warnings.warn(f"orbital amplitude {edge:.2e} at the grid edge; enlarge the box",
                      RuntimeWarning, stacklevel=2)
    return EigenSolution(spec=spec, grid=grid, D=1, energies=w, degeneracy=np.ones(count, int),
                         quantum=[(i,) for i in range(count)], phi=phi, dphi=dphi, flags=flags)


def _potential_on_line(spec, x):
    if spec.spherical:
        return spec.v_radial(x)
    if spec.kind == "linear":
        return spec.p["a"][0] * x
    raise SolverError(f"{spec.kind} potential is not a 1D grid problem")


# --------------------------------------------------------------- radial

def angular_multiplicity(l, D):
    """Number of angular orbitals in channel l (spin not included).

    In one dimension l = 0, 1 labels even and odd parity.
    """
    if D == 1:
        if l not in (0, 1):
            raise ValueError("D=1 channels are l=0 (even) and l=1 (odd)")
        return 1
    if D == 2:
        return 1 if l == 0 else 2
    return 2 * l + 1


def _radial_basis(rmax, n_intervals, degree):
    inner = np.linspace(0.0, rmax, n_intervals + 1)
    t = np.concatenate([np.zeros(degree), inner, np.full(degree, rmax)])
    nb = len(t) - degree - 1
    return t, nb


def _radial_matrices(spec, D, t, degree, nb, nquad):
    breaks = np.unique(t)
    xg, wg = np.polynomial.legendre.leggauss(nquad)
    a, b = breaks[:-1], breaks[1:]
    r = (0.5 * (b - a)[:, None] * (xg + 1) + a[:, None]).ravel()
    w = (0.5 * (b - a)[:, None] * wg).ravel()
    eye = np.eye(nb)
    B = BSpline(t, eye, degree)(r)
    dB = BSpline(t, eye, degree).derivative()(r)
    wr = w * r ** (D - 1)
    S = (B * wr[:, None]).T @ B
    T = spec.hb2m * (dB * wr[:, None]).T @ dB
    Vm = (B * (wr * spec.v_radial(r))[:, None]).T @ B
    C = spec.hb2m * (B * (w * r ** (D - 3))[:, None]).T @ B if D > 1 else None
    return S, T, Vm, C


def _solve_channel(l, D, S, T, Vm, C, count, t, degree, grid):
    A = T + Vm
    if D > 1 and l > 0:
        A = A + l * (l + D - 2) * C
    keep = np.arange(S.shape[0])
    if (D == 1 and l == 1) or (D > 1 and l > 0):
        keep = keep[1:]          # R(0) = 0
    keep = keep[:-1]             # Dirichlet at rmax
    As = A[np.ix_(keep, keep)]
    Ss = S[np.ix_(keep, keep)]
    count = min(count, len(keep) // 3)
    w, v = linalg.eigh(As, Ss, subset_by_index=(0, count - 1))
    coef = np.zeros((S.shape[0], count))
    coef[keep] = v
    spl = BSpline(t, coef, degree)
    R = spl(grid.points).T
    dR = spl.derivative()(grid.points).T
    for i in range(count):
        # sign: positive slope/value near the origin
        k = np.argmax(np.abs(R[i]) > 1e-6 * np.abs(R[i]).max())
        if R[i, k] < 0:
            R[i], dR[i] = -R[i], -dR[i]
    origin = spl(0.0)
    return w, R, dR, origin


def solve_radial(spec, D, l_max, grid, count_per_l, n_intervals=None, degree=7, workers=None):
    """Radial eigenpairs of a spherical potential for channels l = 0..l_max.

    The radial function R(r) is expanded in clamped B-splines of the given
    degree on uniform knots over [0, rmax]; H and S are assembled with
    Gauss-Legendre quadrature including the metric r^(D-1) and the
    centrifugal term hbar^2/2m l(l+D-2)/r^2. Channels l >= 1 drop the first
    basis function (regularity R(0) = 0), all drop the last (R(rmax) = 0).

    Returns an EigenSolution whose levels are sorted by energy, with
    ``degeneracy`` the angular multiplicity of the channel and
    ``quantum = (n_r, l)``.
    """
    if not spec.spherical:
        raise SolverError("solve_radial needs a spherical potential")
    if grid.kind != "radial":
        raise SolverError("solve_radial needs a radial grid")
    if D == 1:
        l_max = min(l_max, 1)
    rmax = grid.bounds[1]
    if n_intervals is None:
        n_intervals = max(40, int(math.ceil(rmax / (8 * grid.h))))
    t, nb = _radial_basis(rmax, n_intervals, degree)
    S, T, Vm, C = _radial_matrices(spec, D, t, degree, nb, nquad=degree + 6)
    nworkers = workers or int(os.environ.get("LVTLAB_THREADS", "0") or 0) or min(8, os.cpu_count() or 1)
    ls = list(range(l_max + 1))
    with ThreadPoolExecutor(max_workers=nworkers) as ex:
        results = list(ex.map(lambda l: _solve_channel(l, D, S, T, Vm, C, count_per_l, t, degree, grid), ls))
    E, deg, qn, R, dR, orig = [], [], [], [], [], []
    for l, (w, Rl, dRl, o) in zip(ls, results):
        for n_r in range(len(w)):
            E.append(w[n_r])
            deg.append(angular_multiplicity(l, D))
            qn.append((n_r, l))
            R.append(Rl[n_r])
            dR.append(dRl[n_r])
            orig.append(o[n_r])
    E = np.array(E)
    order = np.lexsort((np.array([q[0] for q in qn]), np.array([q[1] for q in qn]), np.round(E, 10)))
    sol = EigenSolution(spec=spec, grid=grid, D=D, energies=E[order], degeneracy=np.array(deg)[order],
                        quantum=[qn[i] for i in order], phi=np.array(R)[order], dphi=np.array(dR)[order],
                        flags={"l_max": l_max, "n_intervals": n_intervals, "degree": degree,
                               "channel_min": {l: float(res[0][0]) for l, res in zip(ls, results)}})
    sol.flags["origin_values"] = np.array(orig)[order]
    return sol


def check_l_max(solution, occ):
    """Raise if the highest channel could still hold occupied levels."""
    D = solution.D
    if D == 1:
        return
    lmax = solution.flags["l_max"]
    if solution.flags["channel_min"][lmax] <= occ.e_homo:
        raise SolverError(f"occupation reaches channel l_max={lmax}; increase l_max")
    counts = {}
    for q in solution.quantum:
        counts[q[1]] = counts.get(q[1], 0) + 1
    for i in occ.occupied:
        l = solution.quantum[i][1]
        if solution.quantum[i][0] == counts[l] - 1:
            raise SolverError(f"all computed levels of channel l={l} are occupied; raise count_per_l")


def solve_radial_for_N(spec, N, grid, rel_tol=1e-6, **kwargs):
    """Radial solve with l_max and per-channel counts grown until N closes.

    Returns (solution, occupation).
    """
    D = spec.D
    M = None
    if spec.kind == "iho":
        M = model.iho_shell_from_N(N, D)
    l_max = 1 if D == 1 else max(2, int(math.sqrt(N)))
    count = max(4, int(N ** (1.0 / max(D, 1))) + 4) if D > 1 else N // 2 + 4
    for _ in range(8):
        sol = solve_radial(spec, D, l_max, grid, count, **kwargs)
        try:
            occ = model.fill_levels(sol.energies, sol.degeneracy, N, rel_tol=rel_tol, M=M)
            check_l_max(sol, occ)
            return sol, occ
        except (SolverError, model.FillingError) as err:
            last = err
            if D > 1:
                l_max += max(2, l_max // 2)
            count += max(2, count // 2)
    raise SolverError(f"could not close N={N}: {last}")


# -------------------------------------------------------------- billiard

def solve_disk_billiard(R=1.0, count=100, units=None, grid=None):
    """Analytic circular-billiard levels E = (hbar^2/2m)(j_mn/R)^2.

    Returns the lowest ``count`` levels (each m > 0 level counts once with
    degeneracy 2). Orbitals are the radial functions J_m(j r/R)/norm with
    int_0^R R^2 r dr = 1.
    """
    if count > 10_000:
        raise SolverError("count must be <= 1e4")
    spec = model.disk_billiard(R, units)
    if grid is None:
        grid = Grid.radial(R, n=2000)
    kmax = (2.4 * math.sqrt(count) + 8.0)
    levels = []
    m = 0
    while True:
        zeros = specfun.bessel_j_zeros(m, kmax)
        if len(zeros) == 0:
            break
        for n, j in enumerate(zeros, start=1):
            levels.append((j, m, n))
        m += 1
    if len(levels) < count:
        raise SolverError("Bessel-zero enumeration failed to bracket enough levels")
    levels.sort()
    levels = levels[:count]
    r = grid.points
    E = np.array([spec.hb2m * (j / R) ** 2 for j, _, _ in levels])
    phi = np.zeros((count, grid.n))
    dphi = np.zeros((count, grid.n))
    for i, (j, m, n) in enumerate(levels):
        norm = R * abs(specfun.bessel_j(m + 1, j)) / math.sqrt(2.0)
        x = j * r / R
        phi[i] = specfun.bessel_j(m, x) / norm
        jm1 = specfun.bessel_j(m - 1, x) if m > 0 else -specfun.bessel_j(1, x)
        dphi[i] = 0.5 * (jm1 - specfun.bessel_j(m + 1, x)) * (j / R) / norm if m > 0 else \
            -specfun.bessel_j(1, x) * (j / R) / norm
    return EigenSolution(spec=spec, grid=grid, D=2, energies=E,
                         degeneracy=np.array([1 if m == 0 else 2 for _, m, _ in levels]),
                         quantum=[(n - 1, m) for _, m, n in levels], phi=phi, dphi=dphi,
                         flags={"zeros": np.array([j for j, _, _ in levels])})


# -------------------------------------------------------------------- 2D

def laplacian_2d(n, h):
    """Sparse 5-point Laplacian with Dirichlet walls on an n x n grid."""
    e = np.ones(n)
    d1 = sparse.diags([e[:-1], -2 * e, e[:-1]], [-1, 0, 1]) / h ** 2
    eye = sparse.identity(n)
    return (sparse.kron(eye, d1) + sparse.kron(d1, eye)).tocsc()


def solve_2d_grid(spec, grid, count, tol=1e-8, maxiter=None):
    """Lowest eigenpairs of the 5-point-Laplacian Hamiltonian on a plane grid.

    Uses shift-invert Lanczos (ARPACK) below the potential minimum and
    checks every residual ||H psi - E psi|| (psi normalized on the grid).
    """
    if grid.kind != "plane":
        raise SolverError("solve_2d_grid needs a plane grid")
    if count > 500:
        raise SolverError("count must be <= 500")
    n, h = grid.n, grid.h
    X, Y = grid.mesh()
    V, _, _ = model.evaluate_potential(spec, np.stack([X, Y]))
    H = (-spec.hb2m * laplacian_2d(n, h) + sparse.diags(V.ravel())).tocsc()
    sigma = float(V.min()) - 1.0
    try:
        w, v = eigsh(H, k=count, sigma=sigma, which="LM", tol=1e-13, maxiter=maxiter)
    except Exception as err:   # ARPACK non-convergence
        raise SolverError(f"Lanczos did not converge: {err}") from err
    order = np.argsort(w)
    w, v = w[order], v[:, order]
    res = np.linalg.norm(H @ v - v * w, axis=0)
    if res.max() > tol * max(1.0, abs(w).max()):
        raise SolverError(f"eigen residual {res.max():.2e} exceeds {tol:g}")
    phi = (v / h).T.reshape(count, n, n)
    for i in range(count):
        k = np.argmax(np.abs(phi[i]).ravel() > 1e-3 * np.abs(phi[i]).max())
        if phi[i].ravel()[k] < 0:
            phi[i] = -phi[i]
    pad = np.pad(phi, ((0, 0), (1, 1), (1, 1)))
    dx = (pad[:, 1:-1, 2:] - pad[:, 1:-1, :-2]) / (2 * h)
    dy = (pad[:, 2:, 1:-1] - pad[:, :-2, 1:-1]) / (2 * h)
    return EigenSolution(spec=spec, grid=grid, D=2, energies=w, degeneracy=np.ones(count, int),
                         quantum=[(i,) for i in range(count)], phi=phi,
                         dphi=np.stack([dx, dy], axis=1), flags={"residual": float(res.max())})
