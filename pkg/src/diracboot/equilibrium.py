"""Large-N equilibrium measures for difference-kernel ensembles.

The limiting eigenvalue density of the single-matrix ensembles minimizes

    E[rho] = int int K(x, y) rho(x) rho(y) dx dy + int V(x) rho(x) dx

over probability densities, with the pairwise kernel

    K(x, y) = 2 g4 (x-y)^4 + 2 g2 (x-y)^2 - (1/2) log(m^2 + (x-y)^2)
              + (a/2) x y - log|x - y|.

The problem is discretized on a uniform cell grid and solved as a
projected-gradient minimization over the probability simplex; stationarity of
the continuum functional is the principal-value saddle equation, and
``residual_pv`` measures how well the discrete minimizer satisfies it.  The
diagonal of the log kernel is replaced by its exact cell average, which is
what a piecewise-constant density actually contributes there.

Spectral observables (heat-kernel trace, spectral dimension and variance) are
computed from the difference distribution of the density.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np


class EquilibriumError(RuntimeError):
    """Solver failed to reach the projected-gradient tolerance."""


@dataclass(frozen=True)
class EnergySpec:
    """Kernel parameters, optional one-body potential and grid geometry.

    ``include_fermion`` switches the -(1/2) log(m^2 + (x-y)^2) pair term;
    the pure-Vandermonde validation kernel turns it off and supplies the
    one-matrix potential V instead.  ``half_width`` is the initial L; the
    solver re-solves on a wider grid whenever the density touches the
    boundary.
    """

    g2: float = 0.0
    g4: float = 0.0
    mass: float = 0.0
    a: float = 1.0
    include_vandermonde: bool = True
    include_fermion: bool = True
    potential: Callable[[np.ndarray], np.ndarray] | None = None
    potential_prime: Callable[[np.ndarray], np.ndarray] | None = None
    half_width: float = 4.0
    n: int = 256

    def __post_init__(self):
        if self.n < 64:
            raise ValueError("grid size n must be at least 64")
        if not (self.half_width > 0):
            raise ValueError("domain half-width must be positive")
        if self.mass < 0:
            raise ValueError("mass must be non-negative")
        if self.potential is not None and self.potential_prime is None:
            raise ValueError("a one-body potential needs its derivative too")


def validation_spec(half_width: float = 2.5, n: int = 512) -> EnergySpec:
    """Pure one-matrix Gaussian kernel: Vandermonde plus V(x) = x^2 / 2.

    Its minimizer is the radius-2 semicircle with second moment 1.
    """
    return EnergySpec(
        g2=0.0,
        g4=0.0,
        mass=0.0,
        a=0.0,
        include_vandermonde=True,
        include_fermion=False,
        potential=lambda x: 0.5 * x * x,
        potential_prime=lambda x: np.asarray(x, dtype=float),
        half_width=half_width,
        n=n,
    )


def fermionic_spec(
    g2: float,
    g4: float,
    mass: float,
    a: float = 1.0,
    half_width: float = 4.0,
    n: int = 256,
) -> EnergySpec:
    return EnergySpec(
        g2=g2, g4=g4, mass=mass, a=a, half_width=half_width, n=n
    )


@dataclass(frozen=True)
class GridDensity:
    """Nonnegative density on uniform cells, normalized to unit mass."""

    nodes: np.ndarray
    weights: np.ndarray
    cell: float

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape:
            raise ValueError("nodes and weights must have matching shapes")
        if self.weights.min() < 0:
            raise ValueError("density weights must be non-negative")
        mass = float(self.weights.sum() * self.cell)
        if abs(mass - 1.0) > 1e-12:
            raise ValueError(f"density mass {mass!r} is not 1 within 1e-12")

    @staticmethod
    def uniform(half_width: float, n: int) -> "GridDensity":
        nodes, cell = _grid(half_width, n)
        w = np.full(n, 1.0 / (n * cell))
        w[-1] += (1.0 - w.sum() * cell) / cell
        return GridDensity(nodes, w, cell)


def _grid(half_width: float, n: int) -> tuple[np.ndarray, float]:
    cell = 2.0 * half_width / n
    nodes = -half_width + (np.arange(n) + 0.5) * cell
    return nodes, cell


def _log_cell_average(cell: float, k: np.ndarray) -> np.ndarray:
    """Average of log|x - y| over a pair of cells with center distance k*cell.

    Closed form: log(cell) + c(k) with c(0) = -3/2 and, for k >= 1,
    c(k) = ((k+1)^2 log(k+1) + (k-1)^2 log(k-1) - 2 k^2 log k) / 2 - 3/2.
    """
    k = np.asarray(k, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        kp, km = k + 1.0, k - 1.0
        c = 0.5 * (
            kp * kp * np.log(kp)
            + np.where(km > 0, km * km * np.log(np.where(km > 0, km, 1.0)), 0.0)
            - 2.0 * k * k * np.where(k > 0, np.log(np.where(k > 0, k, 1.0)), 0.0)
        ) - 1.5
    return math.log(cell) + c


def kernel_matrix(spec: EnergySpec, nodes: np.ndarray, cell: float) -> np.ndarray:
    """Pairwise kernel on the grid, log singularities cell-averaged."""
    d = nodes[:, None] - nodes[None, :]
    w = 2.0 * spec.g4 * d**4 + 2.0 * spec.g2 * d * d
    if spec.a:
        w += 0.5 * spec.a * nodes[:, None] * nodes[None, :]
    n = len(nodes)
    if spec.include_vandermonde:
        off = np.abs(d) + np.eye(n)
        w -= np.log(off)
        w[np.diag_indices(n)] -= _log_cell_average(cell, np.zeros(1))[0]
    if spec.include_fermion:
        if spec.mass > 0:
            w -= 0.5 * np.log(spec.mass**2 + d * d)
        else:
            off = np.abs(d) + np.eye(n)
            w -= np.log(off)
            w[np.diag_indices(n)] -= _log_cell_average(cell, np.zeros(1))[0]
    return 0.5 * (w + w.T)


def _project_simplex(y: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {y >= 0, sum y = 1}."""
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(y) + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    theta = css[rho - 1] / rho
    return np.maximum(y - theta, 0.0)


def _pgd(w, v, y0, tol, max_iter):
    """Monotone projected gradient with Barzilai-Borwein steps."""
    y = _project_simplex(np.asarray(y0, dtype=float))

    def energy(z):
        return float(z @ (w @ z) + v @ z)

    g = 2.0 * (w @ y) + v
    e = energy(y)
    step = 1.0 / max(1.0, float(np.abs(w).max()))
    y_prev = g_prev = None
    pg = math.inf
    for _ in range(max_iter):
        pg_vec = y - _project_simplex(y - g)
        pg = float(np.linalg.norm(pg_vec))
        if pg < tol:
            return y, e, pg, True
        if y_prev is not None:
            dy = y - y_prev
            dg = g - g_prev
            denom = float(dy @ dg)
            if denom > 0:
                step = float(dy @ dy) / denom
            step = min(max(step, 1e-12), 1e12)
        s = step
        improved = False
        for _ in range(40):
            cand = _project_simplex(y - s * g)
            diff = cand - y
            e_cand = energy(cand)
            if e_cand <= e + 1e-4 * float(g @ diff) or e_cand < e - 1e-15 * abs(e):
                improved = True
                break
            s *= 0.5
        if not improved or not np.any(diff):
            break
        y_prev, g_prev = y, g
        y = cand
        e = e_cand
        g = 2.0 * (w @ y) + v
    return y, e, pg, False


def _kkt_face(w, v, sel):
    """Stationary density on a fixed support face of the simplex."""
    k = sel.size
    a = np.zeros((k + 1, k + 1))
    a[:k, :k] = 2.0 * w[np.ix_(sel, sel)]
    a[:k, k] = -1.0
    a[k, :k] = 1.0
    b = np.concatenate([-v[sel], [1.0]])
    try:
        sol = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(a, b, rcond=None)[0]
    return sol[:k], float(sol[k])


def _polish(w, v, y, tol, max_rounds=300):
    """Active-set refinement: exact stationarity on the support face, then
    grow/shrink the support until the simplex KKT conditions hold.

    The gradient scale sets the dual feasibility slack; a candidate face is
    only accepted when its energy does not increase, which protects against
    indefinite kernels throwing the face solve toward a saddle.
    """

    def energy(z):
        return float(z @ (w @ z) + v @ z)

    def pg_norm(z):
        g = 2.0 * (w @ z) + v
        return float(np.linalg.norm(z - _project_simplex(z - g)))

    best_y, best_pg = y, pg_norm(y)
    e = energy(y)
    sel = np.nonzero(y > 0)[0]
    scale = max(1.0, float(np.abs(2.0 * (w @ y) + v).max()))
    for _ in range(max_rounds):
        if sel.size == 0:
            break
        ys, lam = _kkt_face(w, v, sel)
        if ys.min() < -1e-14:
            keep = ys > -1e-14
            if keep.all() or not keep.any():
                break
            sel = sel[keep]
            continue
        cand = np.zeros_like(y)
        cand[sel] = np.maximum(ys, 0.0)
        total = cand.sum()
        if not math.isfinite(total) or total <= 0:
            break
        cand /= total
        e_cand = energy(cand)
        if e_cand > e + 1e-10 * max(1.0, abs(e)):
            break
        g = 2.0 * (w @ cand) + v
        off = np.setdiff1d(np.arange(len(y)), sel, assume_unique=False)
        pg = pg_norm(cand)
        if pg < best_pg:
            best_y, best_pg = cand, pg
        e = min(e, e_cand)
        if off.size:
            slack = g[off] - lam
            worst = int(np.argmin(slack))
            if slack[worst] < -1e-12 * scale:
                sel = np.sort(np.append(sel, off[worst]))
                continue
        if pg < tol:
            return cand, energy(cand), pg, True
        break
    return best_y, energy(best_y), best_pg, best_pg < tol


def _initial_masses(n: int, nodes: np.ndarray, half_width: float) -> list[np.ndarray]:
    unif = np.full(n, 1.0 / n)
    bump = np.exp(-0.5 * (2.0 * nodes / half_width) ** 2)
    split = np.exp(-8.0 * ((nodes - 0.5 * half_width) / half_width) ** 2) + np.exp(
        -8.0 * ((nodes + 0.5 * half_width) / half_width) ** 2
    )
    return [unif, bump / bump.sum(), split / split.sum()]


def minimize_density(
    spec: EnergySpec,
    init: GridDensity | None = None,
    tol: float = 1e-8,
    max_iter: int = 60000,
    max_expansions: int = 8,
) -> GridDensity:
    """Minimize the discretized energy; widen the domain if support hits it.

    Several deterministic starts are run and the lowest energy kept.  Raises
    EquilibriumError with the best projected-gradient norm when no start
    converges.
    """
    half_width = spec.half_width
    warm = None
    if init is not None:
        warm = (init.nodes, init.weights * init.cell)
    for _ in range(max_expansions + 1):
        nodes, cell = _grid(half_width, spec.n)
        w = kernel_matrix(spec, nodes, cell)
        v = (
            np.zeros_like(nodes)
            if spec.potential is None
            else np.asarray(spec.potential(nodes), dtype=float)
        )
        starts = _initial_masses(spec.n, nodes, half_width)
        if warm is not None:
            carried = np.interp(nodes, warm[0], warm[1], left=0.0, right=0.0)
            if carried.sum() > 0:
                starts.insert(0, carried / carried.sum())
        best = None
        best_pg = math.inf
        for y0 in starts:
            y, e, pg, converged = _pgd(w, v, y0, max(tol, 1e-6), max_iter)
            if pg >= tol:
                y, e, pg, converged = _polish(w, v, y, tol)
            best_pg = min(best_pg, pg)
            if converged and (best is None or e < best[1]):
                best = (y, e)
        if best is None:
            raise EquilibriumError(
                f"projected-gradient norm reached only {best_pg:.3e} "
                f"(tolerance {tol:.1e}) after {len(starts)} starts"
            )
        y = best[0]
        peak = y.max()
        if max(y[0], y[-1]) <= 1e-6 * peak:
            total = y.sum()
            return GridDensity(nodes, y / (total * cell), cell)
        warm = (nodes, y)
        half_width *= 1.5
    raise EquilibriumError(
        f"support still touches the boundary at half-width {half_width:.3g}"
    )


def energy_value(spec: EnergySpec, density: GridDensity) -> float:
    w = kernel_matrix(spec, density.nodes, density.cell)
    y = density.weights * density.cell
    e = float(y @ (w @ y))
    if spec.potential is not None:
        e += float(np.asarray(spec.potential(density.nodes)) @ y)
    return e


def residual_profile(spec: EnergySpec, density: GridDensity):
    """Saddle-equation residual on interior support nodes.

    Returns (indices, residuals, pv_scale).  The principal value integrates
    1/(y - x_i) exactly over every off-node cell, which is the exact value of
    the integral for the piecewise-constant density; the self cell vanishes by
    symmetric-pair cancellation.  pv_scale is the largest gross magnitude
    sum_j rho_j cell |avg 1/(y - x_i)| over the reported nodes, the natural
    yardstick for the cancellation error of a principal-value sum.  Nodes
    within three cells of a support edge are excluded when possible: the
    density is not smooth there and the quadrature error is dominated by the
    edge, not by the equation.  If padding empties the interior (delta-like
    densities), the raw support nodes are used instead.
    """
    x = density.nodes
    y = density.weights * density.cell
    cell = density.cell
    n = len(x)
    peak = density.weights.max()
    if peak <= 0:
        raise EquilibriumError("density is identically zero")
    support = density.weights > 1e-4 * peak

    interior = np.zeros(n, dtype=bool)
    pad = 3
    i = 0
    while i < n:
        if not support[i]:
            i += 1
            continue
        j = i
        while j < n and support[j]:
            j += 1
        if j - i > 2 * pad:
            interior[i + pad : j - pad] = True
        i = j
    if not interior.any():
        interior = support

    pv_factor = float(spec.include_vandermonde) + float(
        spec.include_fermion and spec.mass == 0.0
    )
    d = x[:, None] - x[None, :]
    smooth = 8.0 * spec.g4 * d**3 + 4.0 * spec.g2 * d
    if spec.include_fermion and spec.mass > 0:
        smooth -= d / (spec.mass**2 + d * d)
    if spec.a:
        smooth += 0.5 * spec.a * x[None, :]

    vprime = (
        np.zeros(n)
        if spec.potential_prime is None
        else np.asarray(spec.potential_prime(x), dtype=float)
    )
    idx = np.nonzero(interior)[0]
    res = np.empty(len(idx))
    pv_abs = np.empty(len(idx))
    back = x[None, :] - x[:, None]
    with np.errstate(divide="ignore"):
        pv_w = np.log(np.abs(back + cell / 2)) - np.log(np.abs(back - cell / 2))
    np.fill_diagonal(pv_w, 0.0)
    pv_w /= cell
    for out_i, i in enumerate(idx):
        pv = float(pv_w[i] @ y)
        res[out_i] = pv_factor * pv + float(smooth[i] @ y) + 0.5 * vprime[i]
        pv_abs[out_i] = float(np.abs(pv_w[i]) @ y)
    scale = float(pv_abs.max()) if len(idx) else 0.0
    return idx, res, scale


def residual_pv(spec: EnergySpec, density: GridDensity) -> float:
    """Maximum absolute saddle-equation residual over interior support."""
    idx, res, _ = residual_profile(spec, density)
    if len(idx) == 0:
        return math.inf
    return float(np.abs(res).max())


def support_structure(
    density: GridDensity, threshold: float
) -> list[tuple[float, float]]:
    """Disjoint support intervals: runs above threshold * max, single-node
    gaps merged."""
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie strictly between 0 and 1")
    peak = density.weights.max()
    if peak <= 0:
        raise ValueError("density is identically zero")
    mask = density.weights >= threshold * peak
    runs = []
    n = len(mask)
    i = 0
    while i < n:
        if not mask[i]:
            i += 1
            continue
        j = i
        while j < n and mask[j]:
            j += 1
        runs.append([i, j - 1])
        i = j
    merged = [runs[0]]
    for lo, hi in runs[1:]:
        if lo - merged[-1][1] <= 2:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    x = density.nodes
    return [(float(x[lo]), float(x[hi])) for lo, hi in merged]


def moments_from_density(density: GridDensity, k: int) -> float:
    if k < 0:
        raise ValueError("moment order must be non-negative")
    return float(np.sum(density.nodes**k * density.weights) * density.cell)


@dataclass(frozen=True)
class SpectralCurves:
    """Heat-kernel trace and derived spectral estimators on a t grid."""

    t: np.ndarray
    heat: np.ndarray
    ds: np.ndarray
    vs: np.ndarray
    underflow_cutoff: float | None = None


def spectral_estimators(
    density: GridDensity, mass: float, t_grid: np.ndarray
) -> SpectralCurves:
    """Heat-kernel trace over the squared Dirac spectrum (x_i - x_j)^2 + m^2.

    K(t) = sum_ij y_i y_j exp(-t s_ij); the spectral dimension
    d_s = -2 t dlogK/dt and variance v_s = 2 t^2 d^2 logK/dt^2 are evaluated
    as weighted mean and variance of s, which keeps v_s nonnegative exactly
    and survives arbitrarily large t via a max-shift.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if len(t_grid) == 0 or np.any(t_grid <= 0) or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t grid must be positive and strictly increasing")
    y = density.weights * density.cell
    n = len(y)
    corr = np.correlate(y, y, mode="full")[n - 1 :]
    mult = np.full(n, 2.0)
    mult[0] = 1.0
    c = corr * mult
    keep = c > 0
    c = c[keep]
    s = (np.arange(n)[keep] * density.cell) ** 2 + mass * mass

    heat = np.empty_like(t_grid)
    ds = np.empty_like(t_grid)
    vs = np.empty_like(t_grid)
    cutoff = None
    s_min = s.min()
    logc = np.log(c)
    for i, t in enumerate(t_grid):
        logw = logc - t * (s - s_min)
        shift = logw.max()
        wgt = np.exp(logw - shift)
        z = wgt.sum()
        mean_s = float((wgt @ s) / z)
        var_s = float((wgt @ (s - mean_s) ** 2) / z)
        log_k = -t * s_min + shift + math.log(z)
        heat[i] = math.exp(log_k) if log_k > -745.0 else 0.0
        if heat[i] == 0.0 and cutoff is None:
            cutoff = float(t)
        ds[i] = 2.0 * t * mean_s
        vs[i] = 2.0 * t * t * var_s
    return SpectralCurves(t_grid, heat, ds, vs, cutoff)


def phase_sweep(
    specs, threshold: float = 0.01, threads: int = 1, **solver_kwargs
) -> list[tuple[float, float, float, int, float, float]]:
    """Solve each spec and summarize (g2, g4, m, cuts, m2, energy)."""
    specs = list(specs)

    def run(spec: EnergySpec):
        density = minimize_density(spec, **solver_kwargs)
        cuts = len(support_structure(density, threshold))
        m2 = moments_from_density(density, 2)
        return (spec.g2, spec.g4, spec.mass, cuts, m2, energy_value(spec, density))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, specs))
    return [run(s) for s in specs]
