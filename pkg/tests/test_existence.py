import numpy as np
import pytest

from itm.core import GammaSample, RootCriteria, SampleStatus, bisection_solve
from itm.core import evaluate_gamma
from itm.errors import SensitivityUndefined
from itm.existence import (ScanReport, Verdict, _find_brackets, classify,
                           scan_gamma, sensitivity_at)
from itm.integrator import Tolerances
from itm.problems import falkner_skan, sakiadis

TOL = Tolerances()


def _ok(h, gamma):
    return GammaSample(h, gamma, 1.0, 0.0, SampleStatus.OK, 0)


def _sentinel(h):
    return GammaSample(h, -1.0, None, 0.0, SampleStatus.BLOWUP_SENTINEL, 0)


class TestScan:
    def test_sakiadis_negative_branch_unique(self):
        report = scan_gamma(sakiadis(-1), [2.0, 2.5, 3.0, 3.5, 4.0], TOL)
        assert len(report.brackets) == 1
        lo, hi = report.brackets[0]
        assert lo < 2.954391 < hi
        assert report.verdict is Verdict.UNIQUE_SOLUTION_INDICATED

    def test_sakiadis_positive_branch_no_solution(self):
        report = scan_gamma(sakiadis(1), np.linspace(0.5, 10.0, 10), TOL)
        assert report.brackets == []
        assert report.verdict is Verdict.NO_SOLUTION_DETECTED

    def test_falkner_skan_normal_bracket(self):
        grid = [1.0, 2.278111, 2.845355 * 1.2, 5.0, 10.0]
        report = scan_gamma(falkner_skan(-0.01, 1), grid, TOL)
        assert len(report.brackets) == 1
        lo, hi = report.brackets[0]
        assert lo < 2.845355 < hi

    def test_wide_grid_uniqueness_per_branch(self):
        r = scan_gamma(sakiadis(-1), np.linspace(1.0, 10.0, 50), TOL)
        assert len(r.brackets) == 1
        r = scan_gamma(falkner_skan(-0.01, 1), np.linspace(1.0, 10.0, 20), TOL)
        assert len(r.brackets) == 1
        r = scan_gamma(falkner_skan(-0.01, -1), np.linspace(50.0, 150.0, 20),
                       TOL)
        assert len(r.brackets) == 1

    def test_bracket_soundness(self):
        report = scan_gamma(sakiadis(-1), np.linspace(1.0, 10.0, 50), TOL)
        for bracket in report.brackets:
            root, _, converged = bisection_solve(
                lambda h: evaluate_gamma(sakiadis(-1), h, TOL), bracket,
                RootCriteria(tol_gamma=1e-7, tol_rel=1e-9, tol_abs=1e-12,
                             max_iters=100))
            assert converged
            assert abs(root.gamma) <= 1e-6

    def test_sentinel_breaks_bracketing(self):
        samples = [_ok(1.0, 0.5), _sentinel(2.0), _ok(3.0, -0.5)]
        assert _find_brackets(samples) == []

    def test_refinement_never_loses_brackets(self):
        coarse = scan_gamma(sakiadis(-1), np.linspace(1.0, 10.0, 10), TOL)
        grid = sorted(set(np.linspace(1.0, 10.0, 10))
                      | set(np.linspace(1.0, 10.0, 28)))
        fine = scan_gamma(sakiadis(-1), grid, TOL)
        assert fine.zero_count_lower_bound >= coarse.zero_count_lower_bound

    def test_determinism(self):
        a = scan_gamma(sakiadis(-1), [2.0, 3.0, 4.0], TOL)
        b = scan_gamma(sakiadis(-1), [2.0, 3.0, 4.0], TOL)
        assert [(s.h_star, s.gamma) for s in a.samples] == \
               [(s.h_star, s.gamma) for s in b.samples]
        assert a.brackets == b.brackets

    def test_concurrent_evaluation_matches_serial(self):
        grid = np.linspace(2.0, 4.0, 9)
        serial = scan_gamma(sakiadis(-1), grid, TOL)
        threaded = scan_gamma(sakiadis(-1), grid, TOL, workers=4)
        assert [s.gamma for s in serial.samples] == \
               [s.gamma for s in threaded.samples]

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            scan_gamma(sakiadis(-1), [2.0], TOL)
        with pytest.raises(ValueError):
            scan_gamma(sakiadis(-1), [3.0, 2.0], TOL)
        with pytest.raises(ValueError):
            scan_gamma(sakiadis(-1), [-1.0, 2.0], TOL)


class TestClassify:
    def _report(self, samples, brackets):
        return ScanReport(samples=samples, brackets=brackets,
                          zero_count_lower_bound=len(brackets),
                          verdict=Verdict.INCONCLUSIVE, sensitivity=[])

    def test_one_bracket_is_unique(self):
        r = self._report([_ok(1.0, 1.0), _ok(2.0, -1.0)], [(1.0, 2.0)])
        assert classify(r) is Verdict.UNIQUE_SOLUTION_INDICATED

    def test_two_brackets_are_multiple(self):
        r = self._report([], [(1.0, 2.0), (3.0, 4.0)])
        assert classify(r) is Verdict.MULTIPLE_SOLUTIONS_INDICATED

    def test_sparse_scan_is_inconclusive(self):
        r = self._report([_ok(2.0, 0.5), _ok(3.0, 0.4), _ok(4.0, 0.3)], [])
        assert classify(r) is Verdict.INCONCLUSIVE

    def test_wide_dense_scan_detects_nonexistence(self):
        samples = [_ok(h, 0.5) for h in np.geomspace(0.5, 10.0, 12)]
        assert classify(self._report(samples, [])) is \
            Verdict.NO_SOLUTION_DETECTED


class TestSensitivity:
    def test_affine_slope(self):
        slope, ok = sensitivity_at(lambda h: _ok(h, h - 1.0), 1.0, 1e-3)
        assert abs(slope - 1.0) < 1e-9
        assert ok

    def test_sakiadis_slope_at_root(self):
        slope, ok = sensitivity_at(
            lambda h: evaluate_gamma(sakiadis(-1), h, TOL), 2.954391, 1e-3)
        assert ok
        # central differences at rel_step 1e-3/1e-4/1e-5 all agree on -0.7763
        assert abs(slope - (-0.7763)) < 1e-3

    def test_reverse_flow_slope_small_but_conditioned(self):
        slope, ok = sensitivity_at(
            lambda h: evaluate_gamma(falkner_skan(-0.01, -1), h, TOL),
            67.804746, 1e-3)
        assert ok
        assert abs(abs(slope) - 0.096) < 0.5 * 0.096

    def test_sentinel_probe_raises(self):
        with pytest.raises(SensitivityUndefined):
            sensitivity_at(lambda h: _sentinel(h), 1.0, 1e-3)

    def test_rel_step_domain(self):
        with pytest.raises(ValueError):
            sensitivity_at(lambda h: _ok(h, h - 1.0), 1.0, 0.5)
