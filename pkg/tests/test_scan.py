"""Feasibility scans: moment bounds and region masks."""

import math
import warnings

import numpy as np
import pytest

from diracboot.dirac import (
    cubic_ensemble,
    quartic_ensemble,
    two_matrix_quartic_ensemble,
)
from diracboot.scan import (
    FeasibilityProblem,
    FeasibleInterval,
    ScanConfig,
    ScanGrid,
    feasible_interval,
    feasible_point,
    interval_rows,
    region_rows,
    region_scan,
    with_couplings,
)


class TestGrids:
    def test_values_cover_endpoints(self):
        grid = ScanGrid("g", 0.0, 1.0, 5)
        assert grid.values().tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_single_step_takes_lower_end(self):
        assert ScanGrid("g", 0.3, 0.4, 1).values().tolist() == [0.3]

    def test_rejects_bad_bounds(self):
        with pytest.raises(ValueError):
            ScanGrid("g", 1.0, 0.0, 5)

    def test_rejects_bad_steps(self):
        with pytest.raises(ValueError):
            ScanGrid("g", 0.0, 1.0, 0)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ScanConfig(lam=0)
        with pytest.raises(ValueError):
            ScanConfig(lam=2, depth=0)

    def test_with_couplings_rejects_unknown_symbol(self):
        with pytest.raises(KeyError):
            with_couplings(quartic_ensemble(1), {"t9": 1.0})


class TestFeasiblePoint:
    def test_quartic_inside(self):
        report = feasible_point(
            quartic_ensemble(1), {"g": 1.0}, {"m_2": 0.1}, 2, impose_symmetry=True
        )
        assert report.feasible
        assert report.closure_ok

    def test_quartic_outside(self):
        report = feasible_point(
            quartic_ensemble(1), {"g": 1.0}, {"m_2": 0.2}, 2, impose_symmetry=True
        )
        assert not report.feasible
        assert report.min_eigenvalue < 0

    def test_cubic_catalan_point(self):
        report = feasible_point(cubic_ensemble(0), {"g": 0.0}, {"m_1": 0.0}, 3)
        assert report.feasible

    def test_solved_moment_consistency_check(self):
        with pytest.raises(ValueError, match="determined by the closure"):
            feasible_point(
                quartic_ensemble(1),
                {"g": 1.0},
                {"m_2": 0.1, "m_4": 0.3},
                2,
                impose_symmetry=True,
            )

    def test_missing_variable_is_reported(self):
        with pytest.raises(KeyError, match="missing search variables"):
            feasible_point(quartic_ensemble(1), {"g": 1.0}, {}, 2, impose_symmetry=True)


class TestFeasibleInterval:
    def test_quartic_symmetric_endpoints(self):
        interval = feasible_interval(
            quartic_ensemble(1), {"g": 1.0}, "m_2", (0.0, 1.0), 2,
            impose_symmetry=True,
        )
        assert not interval.empty
        assert interval.lo == 0.0
        root = (math.sqrt(7) - 1) / 12
        assert interval.hi == pytest.approx(root, abs=2e-6)
        assert interval.hi >= root
        assert interval.width == pytest.approx(interval.hi - interval.lo)

    def test_nesting_tightens_with_lambda(self):
        kwargs = dict(impose_symmetry=True)
        narrow = feasible_interval(
            quartic_ensemble(1), {"g": 1.0}, "m_2", (0.0, 1.0), 3, **kwargs
        )
        wide = feasible_interval(
            quartic_ensemble(1), {"g": 1.0}, "m_2", (0.0, 1.0), 2, **kwargs
        )
        assert narrow.width <= wide.width
        solution = 0.126092508978
        for interval in (narrow, wide):
            assert interval.lo <= solution <= interval.hi

    def test_empty_bracket(self):
        interval = feasible_interval(
            quartic_ensemble(1), {"g": 1.0}, "m_2", (0.3, 0.5), 2,
            impose_symmetry=True,
        )
        assert interval.empty
        assert math.isnan(interval.lo)
        assert interval.width == 0.0

    def test_degenerate_coupling_collapses_to_solved_value(self):
        interval = feasible_interval(cubic_ensemble(0), {}, "m_1", (-1.0, 1.0), 3)
        assert not interval.empty
        assert interval.lo == interval.hi == 0.0

    def test_unknown_variable(self):
        with pytest.raises(KeyError, match="unknown moment"):
            feasible_interval(cubic_ensemble(0), {}, "m_9", (-1.0, 1.0), 3)


@pytest.fixture(scope="module")
def problem():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return FeasibilityProblem(
            two_matrix_quartic_ensemble(1, 1), 2, impose_symmetry=True, tol=1e-7
        )


class TestFreeVariableOptimization:
    def test_entries_affine_in_free_variables(self, problem):
        names = problem.variable_names()
        assert names == ["m_AA", "m_AAAA", "m_AABB"]
        assert problem._affine_in(frozenset(range(1, len(names))))

    def test_optimizer_finds_free_solution(self, problem):
        m2 = 1 / 16
        report, best = problem.best_report({"m_AA": m2}, None)
        assert report.feasible
        assert best == pytest.approx([2 * m2**2, m2**2], abs=1e-3)

    def test_certified_infeasible_despite_free_variables(self, problem):
        report, _ = problem.best_report({"m_AA": -0.1}, None)
        assert not report.feasible
        assert report.min_eigenvalue == pytest.approx(-0.1, abs=1e-9)

    def test_optimum_matches_direct_report(self, problem):
        report, best = problem.best_report({"m_AA": 1 / 16}, None)
        names = problem.variable_names()
        assignment = {"m_AA": 1 / 16}
        assignment.update(zip(names[1:], best))
        direct = problem.report(assignment)
        assert direct.min_eigenvalue == pytest.approx(
            report.min_eigenvalue, abs=1e-9
        )


class TestRegionScan:
    def test_fork_mask_is_reflection_symmetric(self):
        config = ScanConfig(
            lam=2,
            variable_grids=(
                ScanGrid("m_1", -0.4, 0.4, 9),
                ScanGrid("m_2", 0.02, 0.26, 7),
            ),
            defaults={"m_3": 0.0},
        )
        mask = region_scan(quartic_ensemble(1), config)
        assert mask.feasible.shape == (9, 7)
        assert mask.feasible.any()
        assert (mask.feasible == mask.feasible[::-1, :]).all()

    @pytest.mark.parametrize("lam, count", [(2, 8), (3, 5)])
    def test_cubic_counts(self, lam, count):
        config = ScanConfig(
            lam=lam,
            coupling_grids=(ScanGrid("g", 0.1, 1.0, 7),),
            variable_grids=(ScanGrid("m_1", -1.2, 0.3, 11),),
        )
        mask = region_scan(cubic_ensemble(1), config)
        assert int(mask.feasible.sum()) == count

    def test_nesting_on_shared_grid(self):
        masks = {}
        for lam in (2, 3):
            config = ScanConfig(
                lam=lam,
                coupling_grids=(ScanGrid("g", 0.1, 1.0, 7),),
                variable_grids=(ScanGrid("m_1", -1.2, 0.3, 11),),
            )
            masks[lam] = region_scan(cubic_ensemble(1), config).feasible
        assert (~masks[3] | masks[2]).all()

    def test_single_infeasible_point(self):
        config = ScanConfig(
            lam=2,
            variable_grids=(
                ScanGrid("m_1", 2.0, 2.1, 1),
                ScanGrid("m_2", 5.0, 5.1, 1),
            ),
            defaults={"m_3": 0.0},
        )
        mask = region_scan(quartic_ensemble(1), config)
        assert mask.feasible.tolist() == [[False]]

    def test_needs_exactly_two_axes(self):
        with pytest.raises(ValueError):
            region_scan(
                cubic_ensemble(1),
                ScanConfig(lam=2, coupling_grids=(ScanGrid("g", 0, 1, 3),)),
            )

    def test_threads_do_not_change_results(self):
        config = ScanConfig(
            lam=2,
            coupling_grids=(ScanGrid("g", 0.1, 1.0, 5),),
            variable_grids=(ScanGrid("m_1", -1.0, 0.3, 7),),
        )
        serial = region_scan(cubic_ensemble(1), config)
        import dataclasses

        parallel = region_scan(
            cubic_ensemble(1), dataclasses.replace(config, threads=4)
        )
        assert np.array_equal(serial.feasible, parallel.feasible)
        assert np.array_equal(serial.min_eig, parallel.min_eig)


class TestCsvRows:
    def test_interval_row_format(self):
        interval = feasible_interval(
            quartic_ensemble(1), {"g": 1.0}, "m_2", (0.0, 1.0), 2,
            impose_symmetry=True,
        )
        rows = interval_rows([interval])
        assert rows[0] == "coupling,lo,hi,lambda,empty"
        assert rows[1] == "1,0,0.137145951,2,0"

    def test_empty_interval_row(self):
        interval = FeasibleInterval(
            variable="m_2", coupling=1.0, lo=float("nan"), hi=float("nan"),
            lam=2, empty=True,
        )
        assert interval_rows([interval])[1] == "1,nan,nan,2,1"

    def test_region_rows_deterministic(self):
        config = ScanConfig(
            lam=2,
            coupling_grids=(ScanGrid("g", 0.1, 1.0, 3),),
            variable_grids=(ScanGrid("m_1", -1.0, 0.3, 3),),
        )
        mask_a = region_scan(cubic_ensemble(1), config)
        mask_b = region_scan(cubic_ensemble(1), config)
        assert region_rows(mask_a) == region_rows(mask_b)
        assert region_rows(mask_a)[0] == "c1,c2,v1,feasible,min_eig,closure_ok"

    def test_region_rows_two_variable_header(self):
        config = ScanConfig(
            lam=2,
            variable_grids=(
                ScanGrid("m_1", -0.1, 0.1, 2),
                ScanGrid("m_2", 0.05, 0.15, 2),
            ),
            defaults={"m_3": 0.0},
        )
        mask = region_scan(quartic_ensemble(1), config)
        rows = region_rows(mask)
        assert rows[0] == "c1,c2,v1,v2,feasible,min_eig,closure_ok"
        assert len(rows) == 5
