"""Feasibility scans: closure plus positivity over couplings and moments.

A scan fixes coupling values, builds the moment closure to degree 2*lambda,
and asks for which search-variable values the moment matrix can be positive
semidefinite.  Scans over a single variable optimize the remaining free
variables (the bootstrap asks for existence); region scans over a full grid
of variables evaluate each point directly, so nesting in lambda is exact.
"""
from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import optimize

from ._poly import Poly
from .dirac import EnsembleSpec
from .loop_eqs import Closure, build_closure
from .positivity import PsdReport, psd_check, build_moment_matrix, MomentMatrix
from .words import CyclicWord, Word, adjoint, enumerate_words, moment_key


@dataclass(frozen=True)
class ScanGrid:
    """Inclusive uniform grid for one coupling or search variable."""

    name: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"grid {self.name}: need lo < hi")
        if self.steps < 1:
            raise ValueError(f"grid {self.name}: steps must be >= 1")

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class ScanConfig:
    lam: int
    coupling_grids: tuple[ScanGrid, ...] = ()
    variable_grids: tuple[ScanGrid, ...] = ()
    impose_symmetry: bool = False
    tol: float = 1e-10
    depth: int = 20
    defaults: dict[str, float] = field(default_factory=dict)
    threads: int = 1

    def __post_init__(self):
        if self.lam < 1:
            raise ValueError("lambda must be >= 1")
        if self.depth < 1:
            raise ValueError("bisection depth must be >= 1")


@dataclass(frozen=True)
class FeasibleInterval:
    variable: str
    coupling: float
    lo: float
    hi: float
    lam: int
    empty: bool

    @property
    def width(self) -> float:
        return 0.0 if self.empty else self.hi - self.lo


@dataclass(frozen=True)
class RegionMask:
    axis_names: tuple[str, str]
    axis_values: tuple[np.ndarray, np.ndarray]
    coupling_names: tuple[str, ...]
    coupling_values: tuple[float, ...]
    feasible: np.ndarray
    min_eig: np.ndarray
    closure_ok: np.ndarray
    lam: int


def with_couplings(spec: EnsembleSpec, couplings: dict[str, float]) -> EnsembleSpec:
    """Copy of the spec with some coupling symbol values replaced."""
    unknown = set(couplings) - set(spec.symbol_values)
    if unknown:
        raise KeyError(f"spec has no coupling symbols {sorted(unknown)}")
    merged = dict(spec.symbol_values)
    for k, v in couplings.items():
        merged[k] = Fraction(v)
    return dataclasses.replace(spec, symbol_values=merged)


_closure_cache: dict[tuple, Closure] = {}


def closure_for(spec: EnsembleSpec, lam: int, impose_symmetry: bool) -> Closure:
    key = (
        spec.name,
        tuple(sorted(spec.symbol_values.items())),
        2 * lam,
        impose_symmetry,
    )
    if key not in _closure_cache:
        if len(_closure_cache) > 256:
            _closure_cache.clear()
        _closure_cache[key] = build_closure(spec, 2 * lam, impose_symmetry)
    return _closure_cache[key]


class FeasibilityProblem:
    """Moment matrix as symbolic polynomials in the closure's search variables.

    Building the entry polynomials once makes grid scans cheap: each point is
    a polynomial evaluation plus a symmetric eigensolve.
    """

    def __init__(
        self,
        spec: EnsembleSpec,
        lam: int,
        impose_symmetry: bool = False,
        tol: float = 1e-10,
    ):
        self.spec = spec
        self.lam = lam
        self.tol = tol
        self.closure = closure_for(spec, lam, impose_symmetry)
        self.basis = tuple(enumerate_words(spec.alphabet, lam))
        size = len(self.basis)
        class_index: dict[CyclicWord, int] = {}
        polys: list[Poly] = []
        index = np.empty((size, size), dtype=int)
        empty_key = moment_key(Word())
        for i, u in enumerate(self.basis):
            ustar = adjoint(u)
            for j, v in enumerate(self.basis):
                key = moment_key(ustar * v)
                if key not in class_index:
                    class_index[key] = len(polys)
                    polys.append(self._class_poly(key, empty_key))
                index[i, j] = class_index[key]
        self._polys = polys
        self._index = index
        self._affine_cache: dict[frozenset[int], bool] = {}

    def _class_poly(self, key: CyclicWord, empty_key: CyclicWord) -> Poly:
        if key == empty_key:
            return Poly.constant(1)
        rep, sign = self.closure.canon_map[key]
        if rep is None:
            return Poly()
        var_ids = {w: i for i, w in enumerate(self.closure.search_variables)}
        if rep in var_ids:
            base = Poly.variable(var_ids[rep])
        else:
            base = self.closure.solved[rep]
        return base.scale(sign)

    # -- evaluation --------------------------------------------------------

    def variable_names(self) -> list[str]:
        return self.closure.variable_names()

    def matrix_at(self, by_id: dict[int, float]) -> MomentMatrix:
        values = [p.evaluate(by_id) for p in self._polys]
        entries = np.array(values)[self._index]
        return MomentMatrix(basis=self.basis, entries=entries)

    def _split_assignment(
        self, assignment: dict[str, float]
    ) -> tuple[dict[int, float], dict[str, float]]:
        by_id: dict[int, float] = {}
        extra: dict[str, float] = {}
        for name, value in assignment.items():
            try:
                by_id[self.closure.variable_index(name)] = float(value)
            except KeyError:
                extra[name] = float(value)
        return by_id, extra

    def labeled_moments(self, assignment: dict[str, float]) -> dict[str, float]:
        """Every moment class up to 2*lam, keyed by underscore-free name."""
        table = self.closure.evaluate(assignment)
        labels: dict[str, float] = {}
        for key, value in table.items():
            label = (
                "m_" + key.rep.to_str(self.spec.letter_names)
                if self.spec.alphabet > 1
                else f"m_{len(key)}"
            )
            labels[label.replace("_", "")] = float(value)
        return labels

    def _check_extras(self, by_id: dict[int, float], extra: dict[str, float]) -> None:
        """Extra assignment entries must agree with closure-determined values."""
        if not extra:
            return
        full = {n: by_id[i] for i, n in enumerate(self.closure.variable_names())}
        labels = self.labeled_moments(full)
        for name, value in extra.items():
            wanted = name.replace("_", "")
            if wanted not in labels:
                raise KeyError(f"unknown moment {name!r} in assignment")
            target = labels[wanted]
            if abs(target - value) > 1e-8 * max(1.0, abs(target)):
                raise ValueError(
                    f"{name} is determined by the closure as {target}, "
                    f"assignment gives {value}"
                )

    def report(self, assignment: dict[str, float]) -> PsdReport:
        """PSD report at a full search-variable assignment.

        Assignments may also name closure-determined moments; those are
        checked for consistency rather than used.
        """
        by_id, extra = self._split_assignment(assignment)
        missing = set(range(len(self.closure.search_variables))) - set(by_id)
        if missing:
            names = [self.closure.variable_names()[i] for i in sorted(missing)]
            raise KeyError(f"assignment missing search variables {names}")
        self._check_extras(by_id, extra)
        return self._report_by_id(by_id)

    def _report_by_id(self, by_id: dict[int, float]) -> PsdReport:
        violation = 0.0
        for c in self.closure.constraints:
            violation = max(violation, abs(c.evaluate(by_id)))
        closure_ok = violation <= max(self.tol, 1e-12)
        base = psd_check(self.matrix_at(by_id), self.tol)
        feasible = base.feasible and closure_ok
        return dataclasses.replace(base, feasible=feasible, closure_ok=closure_ok)

    # -- existential feasibility over free variables ------------------------

    def _affine_in(self, free_ids: frozenset[int]) -> bool:
        """True when every matrix entry is affine in the given variables."""
        cached = self._affine_cache.get(free_ids)
        if cached is not None:
            return cached
        affine = True
        for poly in self._polys:
            for mono in poly.terms:
                if sum(e for v, e in mono if v in free_ids) > 1:
                    affine = False
                    break
            if not affine:
                break
        self._affine_cache[free_ids] = affine
        return affine

    def _maximize_affine(self, lift, k: int, box: float = 50.0):
        """Maximize the smallest eigenvalue of an affine matrix pencil.

        The map u -> M(lift(u)) is affine, so the smallest eigenvalue is
        concave in u and outer linearization converges to the global
        optimum: each eigenvector v contributes the valid linear cut
        t <= v' M(u) v, and the LP over accumulated cuts gives an upper
        bound that meets the incumbent.
        """

        def sym_at(u: np.ndarray) -> np.ndarray:
            m = self.matrix_at(lift(u)).entries
            return 0.5 * (m + m.T)

        m0 = sym_at(np.zeros(k))
        pencil = []
        for j in range(k):
            e = np.zeros(k)
            e[j] = 1.0
            pencil.append(sym_at(e) - m0)
        u = np.zeros(k)
        best_u, best_val = u.copy(), -np.inf
        consts: list[float] = []
        rows: list[np.ndarray] = []
        cost = np.zeros(k + 1)
        cost[-1] = -1.0
        bounds = [(-box, box)] * k + [(None, None)]
        for _ in range(150):
            vals, vecs = np.linalg.eigh(
                m0 + sum(float(ui) * mj for ui, mj in zip(u, pencil))
            )
            if vals[0] > best_val:
                best_val, best_u = float(vals[0]), u.copy()
            if best_val > 10 * self.tol:
                break
            for j in range(min(3, len(vals))):
                v = vecs[:, j]
                consts.append(float(v @ m0 @ v))
                rows.append(np.array([float(v @ mj @ v) for mj in pencil]))
            lp = optimize.linprog(
                cost,
                A_ub=np.array([np.concatenate([-row, [1.0]]) for row in rows]),
                b_ub=np.array(consts),
                bounds=bounds,
                method="highs",
            )
            if not lp.success:
                break
            u = lp.x[:k]
            if lp.x[-1] - best_val <= 1e-12 + 1e-9 * max(1.0, abs(best_val)):
                break
        return best_u

    def best_report(
        self,
        fixed: dict[str, float],
        warm: np.ndarray | None = None,
    ) -> tuple[PsdReport, np.ndarray | None]:
        """Maximize the smallest eigenvalue over unfixed search variables.

        Affine closure constraints involving only free variables are solved
        exactly and the optimization runs in the residual affine subspace.
        When the matrix entries are themselves affine in the free variables
        the smallest eigenvalue is concave and a cutting-plane search finds
        the certified global optimum; otherwise derivative-free search is
        used, with non-affine constraints enforced by a quadratic penalty
        and reported via closure_ok.
        """
        fixed_by_id, extra = self._split_assignment(fixed)
        if extra:
            raise KeyError(f"unknown search variables {sorted(extra)}")
        free = [
            i
            for i in range(len(self.closure.search_variables))
            if i not in fixed_by_id
        ]
        if not free:
            return self._report_by_id(fixed_by_id), None

        frac_fixed = {i: Fraction(v) for i, v in fixed_by_id.items()}
        affine: list[Poly] = []
        hard: list[Poly] = []
        for c in self.closure.constraints:
            r = c.partial(frac_fixed)
            if r.is_zero():
                continue
            if r.is_constant():
                if abs(float(r.constant_value())) > max(self.tol, 1e-12):
                    by_id = dict(fixed_by_id)
                    for i in free:
                        by_id[i] = 0.0
                    rep = self._report_by_id(by_id)
                    return dataclasses.replace(
                        rep, feasible=False, closure_ok=False
                    ), None
                continue
            (affine if r.degree() <= 1 else hard).append(r)

        # Solve affine constraints: A z = b over the free variables.
        pos = {v: k for k, v in enumerate(free)}
        d = len(free)
        if affine:
            A = np.zeros((len(affine), d))
            b = np.zeros(len(affine))
            for r_i, poly in enumerate(affine):
                for mono, coeff in poly.terms.items():
                    if not mono:
                        b[r_i] -= float(coeff)
                    else:
                        (var, exp), = mono
                        A[r_i, pos[var]] += float(coeff)
            sol, residual, rank, _ = np.linalg.lstsq(A, b, rcond=None)
            if not np.allclose(A @ sol, b, atol=1e-9):
                by_id = dict(fixed_by_id)
                for i in free:
                    by_id[i] = float(sol[pos[i]])
                rep = self._report_by_id(by_id)
                return dataclasses.replace(rep, feasible=False, closure_ok=False), None
            _, s, vt = np.linalg.svd(A)
            null = vt[rank:].T
        else:
            sol = np.zeros(d)
            null = np.eye(d)

        def lift(u: np.ndarray) -> dict[int, float]:
            z = sol + null @ u if null.size else sol
            by_id = dict(fixed_by_id)
            for i in free:
                by_id[i] = float(z[pos[i]])
            return by_id

        def objective(u: np.ndarray) -> float:
            by_id = lift(u)
            m = self.matrix_at(by_id)
            val = float(np.linalg.eigvalsh(0.5 * (m.entries + m.entries.T))[0])
            for c in hard:
                val -= 1e6 * float(c.evaluate(by_id)) ** 2
            return -val

        k = null.shape[1] if null.size else 0
        if k == 0:
            return self._report_by_id(lift(np.zeros(0))), None

        if not hard and self._affine_in(frozenset(free)):
            best_u = self._maximize_affine(lift, k)
            return self._report_by_id(lift(best_u)), best_u

        starts = [np.zeros(k)]
        if warm is not None and warm.shape == (k,):
            starts.insert(0, warm)
        rng = np.random.default_rng(0)
        starts += [rng.normal(scale=0.05, size=k) for _ in range(2)]

        best_u = None
        best_val = np.inf
        for s0 in starts:
            res = optimize.minimize(
                objective,
                s0,
                method="Nelder-Mead",
                options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000},
            )
            res = optimize.minimize(
                objective,
                res.x,
                method="Powell",
                options={"xtol": 1e-10, "ftol": 1e-12, "maxiter": 4000},
            )
            if res.fun < best_val:
                best_val = res.fun
                best_u = res.x
            if -best_val > 10 * self.tol:
                break
        report = self._report_by_id(lift(best_u))
        return report, best_u


def feasible_point(
    spec: EnsembleSpec,
    couplings: dict[str, float],
    assignment: dict[str, float],
    lam: int,
    tol: float = 1e-10,
    impose_symmetry: bool = False,
) -> PsdReport:
    """Closure + moment matrix + PSD test at one fully specified point."""
    problem = FeasibilityProblem(
        with_couplings(spec, couplings), lam, impose_symmetry, tol
    )
    return problem.report(assignment)


def feasible_interval(
    spec: EnsembleSpec,
    couplings: dict[str, float],
    variable: str,
    bracket: tuple[float, float],
    lam: int,
    depth: int = 20,
    steps: int = 65,
    tol: float = 1e-10,
    impose_symmetry: bool = False,
    defaults: dict[str, float] | None = None,
    optimize_free: bool = True,
) -> FeasibleInterval:
    """Two-sided bound on one search variable at fixed couplings.

    Coarse grid first, then bisection on each boundary; the returned endpoints
    are the outer (infeasible) ends of the final brackets, so the interval
    contains every feasible point encountered.
    """
    problem = FeasibilityProblem(
        with_couplings(spec, couplings), lam, impose_symmetry, tol
    )
    names = problem.variable_names()
    coupling_value = float(next(iter(couplings.values()))) if couplings else 0.0
    try:
        target = names[problem.closure.variable_index(variable)]
    except KeyError:
        # Degenerate couplings can eliminate a usually-free moment; the bound
        # then collapses to its solved value at the default assignment.
        assignment = {n: (defaults or {}).get(n, 0.0) for n in names}
        labels = problem.labeled_moments(assignment)
        wanted = variable.replace("_", "")
        if wanted not in labels:
            raise KeyError(
                f"unknown moment {variable!r}; search variables: {names}"
            ) from None
        if problem.report(assignment).feasible:
            value = labels[wanted]
            return FeasibleInterval(
                variable=variable, coupling=coupling_value,
                lo=value, hi=value, lam=lam, empty=False,
            )
        return FeasibleInterval(
            variable=variable, coupling=coupling_value,
            lo=float("nan"), hi=float("nan"), lam=lam, empty=True,
        )
    others = {n: (defaults or {}).get(n, 0.0) for n in names if n != target}
    warm: np.ndarray | None = None

    def report_at(x: float) -> PsdReport:
        nonlocal warm
        if optimize_free and others:
            rep, warm = problem.best_report({target: x}, warm)
            return rep
        return problem.report({target: x, **others})

    def is_feasible(x: float) -> bool:
        return report_at(x).feasible

    lo_b, hi_b = bracket
    grid = np.linspace(lo_b, hi_b, steps)
    reports = [report_at(float(x)) for x in grid]
    hits = [i for i, r in enumerate(reports) if r.feasible]
    seed = None
    if not hits:
        # A band much narrower than the grid spacing leaves every sample
        # infeasible; climb the smallest-eigenvalue profile from the least
        # infeasible sample before concluding the band is empty.
        peak = max(
            (i for i, r in enumerate(reports) if r.closure_ok),
            key=lambda i: reports[i].min_eigenvalue,
            default=None,
        )
        if peak is not None:
            a = float(grid[max(peak - 1, 0)])
            b = float(grid[min(peak + 1, len(grid) - 1)])
            res = optimize.minimize_scalar(
                lambda x: -report_at(float(x)).min_eigenvalue,
                bounds=(a, b),
                method="bounded",
                options={"xatol": 1e-14},
            )
            if res.success and is_feasible(float(res.x)):
                seed = float(res.x)
    if not hits and seed is None:
        return FeasibleInterval(
            variable=target, coupling=coupling_value,
            lo=float("nan"), hi=float("nan"), lam=lam, empty=True,
        )

    def refine(outer: float, inner: float) -> float:
        a, b = outer, inner
        for _ in range(depth):
            mid = 0.5 * (a + b)
            if is_feasible(mid):
                b = mid
            else:
                a = mid
        return a

    if hits:
        i0, i1 = hits[0], hits[-1]
        lo_in, hi_in = float(grid[i0]), float(grid[i1])
        lo_out = None if i0 == 0 else float(grid[i0 - 1])
        hi_out = None if i1 == len(grid) - 1 else float(grid[i1 + 1])
    else:
        lo_in = hi_in = seed
        idx = int(np.searchsorted(grid, seed))
        lo_out = float(grid[max(idx - 1, 0)])
        hi_out = float(grid[min(idx, len(grid) - 1)])
    lo = lo_in if lo_out is None else refine(lo_out, lo_in)
    hi = hi_in if hi_out is None else refine(hi_out, hi_in)
    return FeasibleInterval(
        variable=target, coupling=coupling_value, lo=lo, hi=hi, lam=lam, empty=False,
    )


def region_scan(spec: EnsembleSpec, config: ScanConfig) -> RegionMask:
    """Pointwise feasibility mask over a 2-D grid.

    The grid is either one coupling axis by one variable axis, or two
    variable axes at fixed couplings.  Unscanned search variables take values
    from config.defaults (0 when absent); closure constraint violations mark
    the point infeasible and clear the closure_ok flag.
    """
    grids = tuple(config.coupling_grids) + tuple(config.variable_grids)
    if len(grids) != 2 or len(config.variable_grids) < 1:
        raise ValueError(
            "region scan needs exactly two grid axes with at least one variable"
        )
    ax0, ax1 = grids
    vals0, vals1 = ax0.values(), ax1.values()
    shape = (len(vals0), len(vals1))
    feas = np.zeros(shape, dtype=bool)
    closure_ok = np.zeros(shape, dtype=bool)
    min_eig = np.full(shape, np.nan)
    n_coupling = len(config.coupling_grids)

    fixed_couplings = {
        k: float(v) for k, v in spec.symbol_values.items()
    }

    def problem_for(coupling_value: float | None) -> FeasibilityProblem:
        if coupling_value is None:
            return FeasibilityProblem(spec, config.lam, config.impose_symmetry, config.tol)
        return FeasibilityProblem(
            with_couplings(spec, {ax0.name: coupling_value}),
            config.lam,
            config.impose_symmetry,
            config.tol,
        )

    def run_row(i: int) -> list[PsdReport]:
        prob = problem_for(float(vals0[i]) if n_coupling == 1 else None)
        names = prob.variable_names()
        out = []
        for j in range(len(vals1)):
            assignment = {n: config.defaults.get(n, 0.0) for n in names}
            if n_coupling == 1:
                assignment[ax1.name] = float(vals1[j])
            else:
                assignment[ax0.name] = float(vals0[i])
                assignment[ax1.name] = float(vals1[j])
            try:
                out.append(prob.report(assignment))
            except ValueError:
                # Scanned value contradicts a closure-determined moment
                # (degenerate couplings can solve a usually-free variable).
                out.append(
                    PsdReport(
                        feasible=False,
                        min_eigenvalue=float("nan"),
                        tolerance=config.tol,
                        spectral_norm=float("nan"),
                        closure_ok=False,
                    )
                )
        return out

    rows = range(len(vals0))
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(run_row, rows))
    else:
        results = [run_row(i) for i in rows]
    for i, row in enumerate(results):
        for j, rep in enumerate(row):
            feas[i, j] = rep.feasible
            closure_ok[i, j] = rep.closure_ok
            min_eig[i, j] = rep.min_eigenvalue

    coupling_names = tuple(sorted(fixed_couplings)) if n_coupling == 0 else ()
    coupling_values = (
        tuple(fixed_couplings[k] for k in coupling_names) if n_coupling == 0 else ()
    )
    return RegionMask(
        axis_names=(ax0.name, ax1.name),
        axis_values=(vals0, vals1),
        coupling_names=coupling_names,
        coupling_values=coupling_values,
        feasible=feas,
        min_eig=min_eig,
        closure_ok=closure_ok,
        lam=config.lam,
    )


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def interval_rows(intervals: list[FeasibleInterval]) -> list[str]:
    """CSV rows `coupling,lo,hi,lambda,empty`, deterministic order."""
    lines = ["coupling,lo,hi,lambda,empty"]
    for iv in intervals:
        lines.append(
            f"{_fmt(iv.coupling)},{_fmt(iv.lo)},{_fmt(iv.hi)},{iv.lam},{int(iv.empty)}"
        )
    return lines


def export_intervals(intervals: list[FeasibleInterval], path: str) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(interval_rows(intervals)) + "\n")


def region_rows(mask: RegionMask) -> list[str]:
    """CSV rows `c1,c2,v1[,v2],feasible,min_eig,closure_ok`."""
    two_vars = len(mask.coupling_names) > 0
    header = "c1,c2,v1,v2,feasible,min_eig,closure_ok" if two_vars else (
        "c1,c2,v1,feasible,min_eig,closure_ok"
    )
    lines = [header]
    vals0, vals1 = mask.axis_values
    for i in range(len(vals0)):
        for j in range(len(vals1)):
            cells = []
            if two_vars:
                c1 = mask.coupling_values[0] if len(mask.coupling_values) > 0 else 0.0
                c2 = mask.coupling_values[1] if len(mask.coupling_values) > 1 else 0.0
                cells += [_fmt(c1), _fmt(c2), _fmt(vals0[i]), _fmt(vals1[j])]
            else:
                cells += [_fmt(vals0[i]), _fmt(0.0), _fmt(vals1[j])]
            cells += [
                str(int(mask.feasible[i, j])),
                _fmt(mask.min_eig[i, j]),
                str(int(mask.closure_ok[i, j])),
            ]
            lines.append(",".join(cells))
    return lines


def export_region(mask: RegionMask, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(region_rows(mask)) + "\n")
