r"""Self-adjoint 1D eigenvalue kernel.

Discretizes weighted quadratic forms

    u  ->  \int p(t) |u'(t)|^2 + q(t) |u(t)|^2 dt      (+ optional Robin term)

with P1 finite elements on a uniform grid, producing a symmetric tridiagonal
stiffness matrix and a lumped (diagonal) mass matrix.  The generalized pencil
is solved by Sturm-sequence bisection with eigenvectors from shifted inverse
iteration; `converge` wraps grid refinement with Richardson extrapolation and
adaptive enlargement of the truncated domain.

The form is discretized rather than the strong operator, so interface
conditions induced by a kinetic-weight jump at t = 0 are enforced weakly and
need no special stencil.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numba import njit

__all__ = [
    "Grid",
    "WeightedForm",
    "Pencil",
    "EigenPair",
    "GroundState",
    "ConvergenceResult",
    "make_grid",
    "assemble",
    "smallest_eigs",
    "converge",
    "boundary_traces",
]

# Gauss-Legendre nodes/weights on [0, 1]; exact for polynomial degree <= 5,
# which covers q of degree <= 2 against products of two P1 hats.
_GAUSS_X = np.array([0.5 - 0.5 * math.sqrt(3.0 / 5.0), 0.5, 0.5 + 0.5 * math.sqrt(3.0 / 5.0)])
_GAUSS_W = np.array([5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0])

# Simpson rule on [0, 1] (fallback quadrature, exact only to degree 3).
_SIMPSON_X = np.array([0.0, 0.5, 1.0])
_SIMPSON_W = np.array([1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0])


class AssemblyError(ValueError):
    """Raised for invalid coefficient data (non-positive weight, misaligned grid)."""


class ConvergenceError(RuntimeError):
    """Raised when grid/domain refinement fails to reach the requested tolerance."""


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform node set on a truncated interval [t_min, t_max] with n cells."""

    t_min: float
    t_max: float
    n: int
    nodes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.n < 2:
            raise AssemblyError("grid needs at least 2 cells")
        d = np.diff(self.nodes)
        if not np.all(d > 0):
            raise AssemblyError("grid nodes must be strictly increasing")
        h = (self.t_max - self.t_min) / self.n
        if np.max(np.abs(d - h)) > 64.0 * np.finfo(float).eps * max(abs(self.t_min), abs(self.t_max), 1.0):
            raise AssemblyError("grid spacing is not uniform")

    @property
    def h(self) -> float:
        return (self.t_max - self.t_min) / self.n

    @property
    def zero_index(self) -> int | None:
        """Index of the node sitting exactly at t = 0, if the grid straddles 0."""
        if self.t_min < 0.0 < self.t_max:
            k = int(round(-self.t_min / self.h))
            if abs(self.nodes[k]) <= 1e-12 * max(1.0, self.t_max - self.t_min):
                return k
        return None


def make_grid(t_min: float, t_max: float, n: int) -> Grid:
    """Build a uniform grid; intervals straddling 0 get a node snapped onto 0.

    The snap keeps t_max and the spacing, nudging t_min by less than one cell
    so that exactly one node lands on the origin (coefficients of the target
    operators may jump there).
    """
    if not t_min < t_max:
        raise AssemblyError(f"empty interval [{t_min}, {t_max}]")
    if t_min < 0.0 < t_max:
        h = (t_max - t_min) / n
        n_plus = max(1, int(round(t_max / h)))
        n_minus = max(1, n - n_plus)
        h = t_max / n_plus
        t_min = -n_minus * h
        nodes = (np.arange(n_minus + n_plus + 1) - n_minus) * h
        nodes[n_minus] = 0.0  # exact, not just within rounding
        return Grid(t_min, t_max, n_minus + n_plus, nodes)
    nodes = t_min + (t_max - t_min) * np.arange(n + 1) / n
    return Grid(t_min, t_max, n, nodes)


@dataclass(frozen=True)
class WeightedForm:
    """Coefficients of the quadratic form \\int p|u'|^2 + q|u|^2 (mass_weight dt).

    `p` and `q` are vectorized callables of t.  Both may jump at t = 0 (the
    assembly never evaluates them there: all quadrature nodes are element
    interior points for the default Gauss rule, and the grid keeps a node at
    the origin).  `mass_weight` is an optional weight for the underlying
    L^2 norm; None means plain Lebesgue measure.

    Ends are Dirichlet unless a Robin coefficient is given for that side, in
    which case the form gains gamma*|u(end)|^2 and the end node stays a
    degree of freedom (gamma = 0 is the natural/Neumann condition).
    """

    p: Callable[[np.ndarray], np.ndarray]
    q: Callable[[np.ndarray], np.ndarray]
    mass_weight: Callable[[np.ndarray], np.ndarray] | None = None
    robin_left: float | None = None
    robin_right: float | None = None


@dataclass(frozen=True, eq=False)
class Pencil:
    """Assembled symmetric tridiagonal generalized pencil (stiffness, lumped mass).

    Arrays cover the retained degrees of freedom only; `offset` maps entry 0
    back to its node index in the originating grid.
    """

    stiff_diag: np.ndarray
    stiff_off: np.ndarray
    mass_diag: np.ndarray
    offset: int

    @property
    def size(self) -> int:
        return self.stiff_diag.size


@dataclass(frozen=True, eq=False)
class EigenPair:
    """Eigenvalue and mass-normalized eigenvector sampled at all grid nodes."""

    value: float
    vector: np.ndarray
    index: int


@dataclass(frozen=True, eq=False)
class GroundState:
    """Ground eigenpair together with its interface traces at t = 0."""

    energy: float
    grid: Grid
    values: np.ndarray
    f0: float
    fp_plus: float | None
    fp_minus: float | None


def _eval_at(fn: Callable[[np.ndarray], np.ndarray] | None, pts: np.ndarray) -> np.ndarray:
    if fn is None:
        return np.ones_like(pts)
    out = np.asarray(fn(pts), dtype=float)
    if out.shape != pts.shape:
        out = np.broadcast_to(out, pts.shape).copy()
    return out


def assemble(form: WeightedForm, grid: Grid, quadrature: str = "gauss") -> Pencil:
    """Assemble the P1 stiffness (tridiagonal) and lumped mass (diagonal).

    Element integrals use a 3-point Gauss rule, exact whenever the coefficient
    restricted to an element is a polynomial of degree <= 2 against the hat
    products (degree 2), i.e. for every flat-family potential.  `quadrature =
    "simpson"` switches to the Simpson fallback for rough coefficients.

    Dirichlet ends are eliminated; a Robin end keeps its node and adds the
    boundary coefficient to the matching diagonal entry.
    """
    if quadrature == "gauss":
        qx, qw = _GAUSS_X, _GAUSS_W
    elif quadrature == "simpson":
        qx, qw = _SIMPSON_X, _SIMPSON_W
    else:
        raise AssemblyError(f"unknown quadrature rule {quadrature!r}")

    nodes = grid.nodes
    h = grid.h
    left = nodes[:-1]

    # Quadrature points per element, shape (n_elements, n_quad).  Endpoint
    # rules are pulled infinitesimally into the element so side-dependent
    # coefficients resolve jumps at t = 0 consistently.
    s = qx[None, :]
    if quadrature == "simpson":
        s = np.clip(s, 1e-9, 1.0 - 1e-9)
    tq = left[:, None] + h * s

    p_q = _eval_at(form.p, tq)
    if np.any(p_q <= 0.0):
        raise AssemblyError("kinetic weight p must be positive on the interval")
    q_q = _eval_at(form.q, tq)
    w_q = _eval_at(form.mass_weight, tq)
    if np.any(w_q <= 0.0):
        raise AssemblyError("mass weight must be positive on the interval")

    # Hat-function values at the quadrature points.
    phi_l = 1.0 - s
    phi_r = s

    # Element kinetic coefficient: mean of p over the element, over h.
    p_mean = p_q @ qw
    k_elem = p_mean / h

    # Element zero-order blocks (q against hat products).
    q_ll = h * (q_q * phi_l * phi_l) @ qw
    q_lr = h * (q_q * phi_l * phi_r) @ qw
    q_rr = h * (q_q * phi_r * phi_r) @ qw

    # Lumped mass: row sums of the weighted P1 mass matrix.
    m_l = h * (w_q * phi_l) @ qw
    m_r = h * (w_q * phi_r) @ qw

    n_nodes = nodes.size
    diag = np.zeros(n_nodes)
    off = np.zeros(n_nodes - 1)
    mass = np.zeros(n_nodes)

    diag[:-1] += k_elem + q_ll
    diag[1:] += k_elem + q_rr
    off[:] = -k_elem + q_lr
    mass[:-1] += m_l
    mass[1:] += m_r

    i0, i1 = 0, n_nodes
    if form.robin_left is not None:
        diag[0] += form.robin_left
    else:
        i0 = 1
    if form.robin_right is not None:
        diag[-1] += form.robin_right
    else:
        i1 = n_nodes - 1

    if i1 - i0 < 2:
        raise AssemblyError("grid too coarse after boundary elimination")
    return Pencil(diag[i0:i1].copy(), off[i0 : i1 - 1].copy(), mass[i0:i1].copy(), i0)


@njit(cache=True, nogil=True)
def _sturm_count(d, e2, x, pivmin):
    """Number of eigenvalues of the symmetric tridiagonal (d, e) below x."""
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, d.size):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True, nogil=True)
def _bisect_smallest(d, e2, k, tol, pivmin):
    """k algebraically smallest eigenvalues by Sturm-count bisection."""
    n = d.size
    radius = np.zeros(n)
    for i in range(n - 1):
        r = math.sqrt(e2[i])
        radius[i] += r
        radius[i + 1] += r
    glo = d[0] - radius[0]
    ghi = d[0] + radius[0]
    for i in range(1, n):
        glo = min(glo, d[i] - radius[i])
        ghi = max(ghi, d[i] + radius[i])
    span = max(ghi - glo, 1.0)
    glo -= 1e-12 * span
    ghi += 1e-12 * span

    out = np.empty(k)
    for j in range(k):
        a = glo
        b = ghi
        for _ in range(200):
            if b - a <= tol:
                break
            mid = 0.5 * (a + b)
            if _sturm_count(d, e2, mid, pivmin) >= j + 1:
                b = mid
            else:
                a = mid
        out[j] = 0.5 * (a + b)
    return out


@njit(cache=True, nogil=True)
def _inverse_iteration(d, e, lam, pivmin, sweeps):
    """Eigenvector of the tridiagonal (d, e) at the converged eigenvalue lam.

    Shifted LDL^T factorization with pivot clamping; a few solve sweeps from a
    sign-alternating seed are ample once lam is accurate to bisection level.
    """
    n = d.size
    dd = np.empty(n)
    ll = np.empty(n - 1)
    piv = d[0] - lam
    if abs(piv) < pivmin:
        piv = pivmin
    dd[0] = piv
    for i in range(1, n):
        ll[i - 1] = e[i - 1] / dd[i - 1]
        piv = d[i] - lam - ll[i - 1] * e[i - 1]
        if abs(piv) < pivmin:
            piv = pivmin
        dd[i] = piv

    x = np.empty(n)
    for i in range(n):
        x[i] = 1.0 if (i % 2 == 0) else 0.5
    for _ in range(sweeps):
        # forward substitution (L y = x), then D, then L^T.
        for i in range(1, n):
            x[i] -= ll[i - 1] * x[i - 1]
        for i in range(n):
            x[i] /= dd[i]
        for i in range(n - 2, -1, -1):
            x[i] -= ll[i] * x[i + 1]
        nrm = 0.0
        for i in range(n):
            nrm += x[i] * x[i]
        nrm = math.sqrt(nrm)
        for i in range(n):
            x[i] /= nrm
    return x


def smallest_eigs(pencil: Pencil, k: int = 1, tol: float = 1e-10, n_nodes: int | None = None) -> list[EigenPair]:
    """k smallest eigenpairs of the assembled pencil.

    The diagonal-mass pencil (A, M) reduces to a standard symmetric
    tridiagonal problem by the congruence M^{-1/2} A M^{-1/2}; eigenvalues are
    found by Sturm bisection to absolute tolerance `tol` and vectors by
    inverse iteration, mapped back and normalized against the lumped mass
    (trapezoid weights for unweighted forms).  Vectors are returned on the
    full node set, zero at eliminated Dirichlet ends, signed so the largest-
    magnitude entry is positive.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    mass = pencil.mass_diag
    if np.any(mass <= 0.0):
        raise AssemblyError("mass matrix is not positive definite")
    inv_sqrt_m = 1.0 / np.sqrt(mass)
    d = pencil.stiff_diag * inv_sqrt_m * inv_sqrt_m
    e = pencil.stiff_off * inv_sqrt_m[:-1] * inv_sqrt_m[1:]
    e2 = e * e

    scale = float(np.max(np.abs(d)) + np.max(np.abs(e), initial=0.0))
    pivmin = max(1e-290, 1e-14 * max(scale, 1.0))

    values = _bisect_smallest(d, e2, k, tol, pivmin)
    if not np.all(np.diff(values) >= -tol):
        raise RuntimeError("Sturm bisection returned out-of-order eigenvalues")

    if n_nodes is None:
        n_nodes = pencil.size + pencil.offset + 1  # assume one trimmed right node

    pairs = []
    for j, lam in enumerate(values):
        y = _inverse_iteration(d, e, lam, pivmin, 3)
        v = y * inv_sqrt_m
        nrm = math.sqrt(float(np.sum(mass * v * v)))
        v /= nrm
        if v[int(np.argmax(np.abs(v)))] < 0.0:
            v = -v
        full = np.zeros(n_nodes)
        full[pencil.offset : pencil.offset + pencil.size] = v
        pairs.append(EigenPair(float(lam), full, j + 1))
    return pairs


def _solve_value(form: WeightedForm, grid: Grid, index: int, tol: float) -> float:
    pencil = assemble(form, grid)
    d_tol = tol  # absolute; callers budget it against their own thresholds
    mass = pencil.mass_diag
    inv_sqrt_m = 1.0 / np.sqrt(mass)
    d = pencil.stiff_diag * inv_sqrt_m * inv_sqrt_m
    e = pencil.stiff_off * inv_sqrt_m[:-1] * inv_sqrt_m[1:]
    scale = float(np.max(np.abs(d)) + np.max(np.abs(e), initial=0.0))
    pivmin = max(1e-290, 1e-14 * max(scale, 1.0))
    vals = _bisect_smallest(d, e * e, index, d_tol, pivmin)
    return float(vals[index - 1])


@dataclass(frozen=True, eq=False)
class ConvergenceResult:
    """Extrapolated eigenvalue with the grid/history that produced it."""

    pair: EigenPair
    grid: Grid
    history: tuple  # (n, raw_value, extrapolated_value) per refinement level

    @property
    def value(self) -> float:
        return self.pair.value


def converge(
    form: WeightedForm,
    base_grid: Grid,
    tol: float,
    *,
    index: int = 1,
    grow_left: bool = True,
    grow_right: bool = True,
    max_cells: int = 2**20,
) -> ConvergenceResult:
    """Eigenvalue to tolerance `tol` by domain growth plus Richardson in h.

    Dirichlet truncation is an upper bound (min-max), so the eigenvalue
    decreases monotonically as a truncated side grows; each growable side is
    extended at fixed node density until the change drops below tol/10.  The
    settled domain is then refined n -> 2n -> 4n..., and the O(h^2) Richardson
    extrapolant is accepted once two successive extrapolants agree to tol.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    t_min, t_max, n = base_grid.t_min, base_grid.t_max, base_grid.n
    h = base_grid.h

    eig_tol = tol / 100.0
    thresh = tol / 10.0
    span_cap = max(8.0 * (t_max - t_min), 200.0)
    lam = _solve_value(form, make_grid(t_min, t_max, n), index, eig_tol)
    for _ in range(40):
        grown = False
        if grow_left:
            ext = min(max(2.0, 0.25 * (t_max - t_min)), 8.0)
            cells = int(math.ceil(ext / h))
            cand_min = t_min - cells * h
            lam_new = _solve_value(form, make_grid(cand_min, t_max, n + cells), index, eig_tol)
            # Dirichlet truncation only overestimates, so growth must lower
            # the eigenvalue; anything else is quadrature noise -> settled.
            if lam - lam_new >= thresh:
                t_min, n, lam = cand_min, n + cells, lam_new
                grown = True
            else:
                grow_left = False
        if grow_right:
            ext = min(max(2.0, 0.25 * (t_max - t_min)), 8.0)
            cells = int(math.ceil(ext / h))
            cand_max = t_max + cells * h
            lam_new = _solve_value(form, make_grid(t_min, cand_max, n + cells), index, eig_tol)
            if lam - lam_new >= thresh:
                t_max, n, lam = cand_max, n + cells, lam_new
                grown = True
            else:
                grow_right = False
        if not grown:
            break
        if t_max - t_min > span_cap:
            raise ConvergenceError(
                f"domain grew past {span_cap:g} without the eigenvalue settling"
            )
    else:
        raise ConvergenceError("domain enlargement did not settle")

    history = []
    raw_prev = None
    extrap_prev = None
    grid = make_grid(t_min, t_max, n)
    while True:
        raw = _solve_value(form, grid, index, eig_tol)
        if raw_prev is None:
            history.append((grid.n, raw, raw))
        else:
            extrap = (4.0 * raw - raw_prev) / 3.0
            history.append((grid.n, raw, extrap))
            if extrap_prev is not None and abs(extrap - extrap_prev) < tol:
                pencil = assemble(form, grid)
                pairs = smallest_eigs(pencil, k=index, tol=eig_tol, n_nodes=grid.nodes.size)
                pair = EigenPair(float(extrap), pairs[index - 1].vector, index)
                return ConvergenceResult(pair, grid, tuple(history))
            extrap_prev = extrap
        raw_prev = raw
        if 2 * grid.n > max_cells:
            raise ConvergenceError(
                f"no convergence to {tol:g} within {max_cells} cells "
                f"(last change {abs(history[-1][2] - history[-2][2]) if len(history) > 1 else float('nan'):.3e})"
            )
        grid = make_grid(t_min, t_max, 2 * grid.n)


def boundary_traces(pair: EigenPair, grid: Grid) -> tuple[float, float, float]:
    """Value and one-sided slopes of the sampled eigenfunction at t = 0.

    Second-order 3-point one-sided stencils on each side of the interface
    node; needs at least 3 nodes per side.
    """
    k = grid.zero_index
    if k is None:
        raise ValueError("grid has no node at t = 0")
    v = pair.vector
    h = grid.h
    if k < 2 or k > v.size - 3:
        raise ValueError("grid too coarse for one-sided interface stencils")
    f0 = float(v[k])
    fp_plus = float((-3.0 * v[k] + 4.0 * v[k + 1] - v[k + 2]) / (2.0 * h))
    fp_minus = float((3.0 * v[k] - 4.0 * v[k - 1] + v[k - 2]) / (2.0 * h))
    return f0, fp_plus, fp_minus
