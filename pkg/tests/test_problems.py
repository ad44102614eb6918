import numpy as np
import pytest

from itm.core import SampleStatus, evaluate_gamma
from itm.groups import BoundaryData, GroupSpec
from itm.integrator import Tolerances
from itm.problems import falkner_skan, generic_third_order, sakiadis

TOL = Tolerances()


class TestSakiadis:
    def test_preset_fields(self):
        p = sakiadis(-1)
        assert p.group == GroupSpec(-1.0, 4.0)
        assert p.boundary == BoundaryData(0.0, 1.0, 0.0)
        assert p.truncated_boundary == 10.0
        assert p.missing_ic_sign == -1

    def test_gamma_samples_match_reference(self):
        p = sakiadis(-1)
        assert abs(evaluate_gamma(p, 2.5, TOL).gamma - 0.967343) < 2e-3
        assert abs(evaluate_gamma(p, 3.5, TOL).gamma - (-0.261541)) < 2e-3

    def test_positive_branch_has_no_sign_change(self):
        p = sakiadis(1)
        gammas = [evaluate_gamma(p, h, TOL).gamma
                  for h in np.linspace(0.5, 10.0, 10)]
        assert all(g < 0 for g in gammas) or all(g > 0 for g in gammas)

    def test_rhs_invariant_under_stretching_group(self):
        # state (u, du, d2u) scales as (lam, lam**2, lam**3); the third
        # derivative, hence the rhs, must scale as lam**4
        p = sakiadis(-1)
        system = p.starred_rhs(1.0)
        rng = np.random.default_rng(5)
        for _ in range(50):
            y = rng.normal(size=3)
            lam = float(rng.uniform(0.2, 5.0))
            scaled = np.array([lam * y[0], lam ** 2 * y[1], lam ** 3 * y[2]])
            lhs = system.rhs(0.0, scaled, system.params)[2]
            rhs = lam ** 4 * system.rhs(0.0, y, system.params)[2]
            assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))


class TestFalknerSkan:
    def test_preset_fields(self):
        p = falkner_skan(-0.01, 1)
        assert p.group == GroupSpec(-1.0, 4.0)
        assert p.boundary == BoundaryData(0.0, 0.0, 1.0)
        assert p.truncated_boundary == 20.0
        assert p.params["beta"] == -0.01

    def test_normal_branch_gamma_samples(self):
        p = falkner_skan(-0.01, 1)
        assert abs(evaluate_gamma(p, 5.0, TOL).gamma - 0.631459) < 2e-3
        assert abs(evaluate_gamma(p, 10.0, TOL).gamma - 1.791425) < 2e-3

    def test_reverse_branch_gamma_sample(self):
        p = falkner_skan(-0.01, -1)
        assert abs(evaluate_gamma(p, 75.0, TOL).gamma - 0.731890) < 2e-3

    def test_rhs_vanishes_at_asymptotic_state(self):
        # with h*=1, du=1 and d2u=0 the bracket beta[1 - du**2] vanishes
        for beta in (-0.5, -0.01, 0.0, 0.3, 1.0):
            system = falkner_skan(beta, 1).starred_rhs(1.0)
            out = system.rhs(0.0, np.array([2.3, 1.0, 0.0]), system.params)
            assert out[2] == 0.0

    def test_rhs_depends_on_h_star(self):
        p = falkner_skan(-0.1, 1)
        y = np.array([0.5, 0.2, 0.1])
        a = p.starred_rhs(1.0)
        b = p.starred_rhs(4.0)
        assert a.rhs(0.0, y, a.params)[2] != b.rhs(0.0, y, b.params)[2]


class TestGenericThirdOrder:
    def test_reproduces_sakiadis_gamma(self):
        g = generic_third_order(
            lambda x, u, du, d2u: -0.5 * u * d2u,
            BoundaryData(0.0, 1.0, 0.0), GroupSpec(-1.0, 4.0), 10.0, -1,
        )
        hand = sakiadis(-1)
        for h in (2.5, 3.5):
            d = abs(evaluate_gamma(g, h, TOL).gamma
                    - evaluate_gamma(hand, h, TOL).gamma)
            assert d < 1e-9

    def test_embedding_collapses_at_h_one(self):
        def f(x, u, du, d2u):
            return np.sin(x) + u * d2u - 0.3 * du ** 2

        g = generic_third_order(f, BoundaryData(0.0, 1.0, 0.0),
                                GroupSpec(-1.0, 4.0), 10.0, 1)
        system = g.starred_rhs(1.0)
        rng = np.random.default_rng(9)
        for _ in range(50):
            x = float(rng.uniform(0, 10))
            y = rng.normal(size=3)
            assert system.rhs(x, y, system.params)[2] == pytest.approx(
                f(x, y[0], y[1], y[2]), rel=1e-14, abs=1e-14)

    def test_degenerate_zero_rhs(self):
        g = generic_third_order(lambda x, u, du, d2u: 0.0,
                                BoundaryData(0.0, 1.0, 1.0),
                                GroupSpec(-1.0, 4.0), 10.0, 1)
        sample = evaluate_gamma(g, 4.0, TOL)
        assert sample.status is SampleStatus.OK
        # d2u stays at +1, so du grows linearly from h***(1/2)
        assert sample.v_star_inf == pytest.approx(4.0 ** 0.5 + 10.0, rel=1e-6)

    def test_delta_one_rejected(self):
        with pytest.raises(ValueError):
            generic_third_order(lambda x, u, du, d2u: 0.0,
                                BoundaryData(0, 0, 1),
                                GroupSpec(1.0, 4.0), 10.0, 1)
