import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mrlab.calculus import DiagonalOperator, HeatModel
from mrlab.interpnorms import power_L
from mrlab.mrtest import (
    TimeNorm,
    TimeSampledPath,
    certificate,
    certificate_family,
    divergence_fit,
    gamma_l1_test,
    homogeneous_mre,
    kp_l1_test,
    linf_test,
    mre_ratio,
    remark_example_integrals,
    residual_check,
    resolvent_l1_test,
    solution_operator,
    weighted_l1_test,
)
from mrlab.quadrature import QuadratureSpec
from mrlab.weightlab import DomainError, FunctionOnHalfLine

FOUR_OVER_ROOT_E = 4 * math.exp(-0.5)
T = np.logspace(-2, 6, 400)


class TestDivergenceFit:
    def test_log(self):
        g = divergence_fit(T, 2.4261 * np.log1p(T))
        assert g.tag == "log"
        assert g.slope == pytest.approx(2.4261, rel=2e-2)

    def test_bounded(self):
        g = divergence_fit(T, 5 - 3 / T)
        assert g.tag == "bounded"
        assert g.limit == pytest.approx(5.0, rel=1e-3)

    def test_power(self):
        g = divergence_fit(T, T ** 0.5)
        assert g.tag == "power"
        assert g.alpha == pytest.approx(0.5, abs=1e-2)

    def test_too_few_samples(self):
        assert divergence_fit(T[:5], T[:5]).tag == "inconclusive"

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.1, 10.0), st.floats(-5.0, 5.0))
    def test_log_slopes(self, b, a):
        g = divergence_fit(T, a + b * np.log(T))
        assert g.tag == "log"
        assert g.slope == pytest.approx(b, rel=1e-6)


class TestSolutionOperator:
    def test_constant_forcing(self):
        model = DiagonalOperator([1.0])
        nodes = np.linspace(0, 2, 201)
        f = TimeSampledPath.from_function(lambda t: np.array([1.0]), nodes)
        u = solution_operator(model, f)
        assert u.values[100, 0] == pytest.approx(1 - math.exp(-1), rel=1e-12)

    def test_zero_forcing(self):
        model = DiagonalOperator([1.0, 3.0])
        f = TimeSampledPath.from_function(lambda t: np.zeros(2), np.linspace(0, 1, 11))
        assert np.all(solution_operator(model, f).values == 0)

    def test_initial_value(self):
        model = DiagonalOperator([2.0])
        f = TimeSampledPath.from_function(lambda t: np.zeros(1), np.linspace(0, 1, 11))
        u = solution_operator(model, f, x0=np.array([1.0]))
        assert u.values[5, 0] == pytest.approx(math.exp(-1), rel=1e-12)

    def test_residual_small(self):
        model = DiagonalOperator([1.0])
        nodes = np.linspace(0, 2, 2001)
        f = TimeSampledPath.from_function(lambda t: np.array([1.0]), nodes)
        assert residual_check(model, solution_operator(model, f), f) < 1e-6

    def test_residual_semigroup_orbit(self):
        # central differences leave dt^2 a^3 / 6, so keep a <= 1 at dt = 1e-3
        model = DiagonalOperator([0.5, 1.0])
        nodes = np.linspace(0, 2, 2001)
        f = TimeSampledPath.from_function(lambda t: np.zeros(2), nodes)
        u = solution_operator(model, f, x0=np.array([1.0, -1.0]))
        assert residual_check(model, u, f) < 1e-6

    def test_residual_detects_corruption(self):
        model = DiagonalOperator([1.0])
        nodes = np.linspace(0, 2, 2001)
        f = TimeSampledPath.from_function(lambda t: np.array([1.0]), nodes)
        u = solution_operator(model, f)
        bad = u.with_values(u.values * 1.2)
        assert residual_check(model, bad, f) > 1e-2

    def test_heat_residual(self):
        model = HeatModel(1, N=1024)
        x = model.gaussian()
        nodes = np.linspace(0, 1, 401)
        f = TimeSampledPath.from_function(lambda t: x.values * math.cos(t), nodes, like=x)
        u = solution_operator(model, f)
        assert residual_check(model, u, f) < 1e-3 * np.abs(x.values).max()

    def test_path_validation(self):
        with pytest.raises(ValueError):
            TimeSampledPath(np.array([0.5, 1.0]), np.zeros((2, 1)))


class TestIntegralTests:
    def test_kp_diag(self):
        rep = kp_l1_test(DiagonalOperator([1.0, 2.0, 4.0]), np.ones(3))
        assert rep.verdict == "finite"
        assert rep.constant == pytest.approx(1.0, abs=1e-6)

    def test_kp_zero_certificate(self):
        with pytest.raises(DomainError):
            kp_l1_test(DiagonalOperator([1.0]), np.zeros(1))

    def test_kp_heat_gaussian_log(self):
        model = HeatModel(1)
        rep = kp_l1_test(model, model.gaussian())
        assert rep.growth.tag == "log"
        assert rep.growth.slope == pytest.approx(FOUR_OVER_ROOT_E, rel=2e-2)
        assert rep.verdict == "diverging"

    @pytest.mark.parametrize("name", ["meanzero", "packet"])
    def test_kp_heat_band_limited_finite(self, name):
        model = HeatModel(1)
        rep = kp_l1_test(model, certificate(model, name))
        assert rep.verdict == "finite"
        assert math.isfinite(rep.constant)

    @pytest.mark.parametrize("a", [1.0, 2.0, 10.0])
    def test_resolvent_slope_is_one(self, a):
        rep = resolvent_l1_test(DiagonalOperator([a]), np.ones(1))
        assert rep.growth.tag == "log"
        assert rep.growth.slope == pytest.approx(1.0, rel=2e-2)

    def test_resolvent_heat(self):
        model = HeatModel(1)
        rep = resolvent_l1_test(model, model.gaussian())
        assert rep.verdict == "diverging"

    def test_gamma_diag(self):
        rep = gamma_l1_test(DiagonalOperator([1.0]), np.ones(1), eps=1.0)
        assert rep.constant == pytest.approx(1.0, abs=1e-6)

    def test_gamma_zero(self):
        assert gamma_l1_test(DiagonalOperator([1.0]), np.zeros(1)).constant == 0.0

    def test_gamma_agrees_with_kp_on_heat(self):
        model = HeatModel(1)
        x = model.gaussian()
        g = gamma_l1_test(model, x, eps=1.0)
        assert g.growth.tag == "log"
        assert (g.verdict == "finite") == (kp_l1_test(model, x).verdict == "finite")


class TestWeighted:
    @pytest.mark.parametrize("a", [0.5, 1.0, 4.0])
    def test_exponential_weight(self, a):
        rep = weighted_l1_test(DiagonalOperator([a]), np.ones(1), FunctionOnHalfLine.exponential())
        assert rep.constant == pytest.approx(a / (a + 1), abs=1e-4)
        assert rep.verdict == "finite"

    def test_increasing_weight_fails(self):
        rep = weighted_l1_test(DiagonalOperator([1.0]), np.ones(1), FunctionOnHalfLine.power(1.0))
        assert rep.verdict == "diverging"
        assert "growth as s -> 0" in rep.notes

    @pytest.mark.parametrize("v", [FunctionOnHalfLine.power(-0.5), FunctionOnHalfLine.exponential(0.3)])
    def test_nonincreasing_weight_finite(self, v):
        rep = weighted_l1_test(DiagonalOperator([1.0, 3.0]), np.ones(2), v)
        assert rep.verdict == "finite"
        assert rep.constant <= 1.0 + 1e-6


class TestLinf:
    def test_basis_vector(self):
        rep = linf_test(DiagonalOperator([1.0, 5.0], "linf"), np.array([0.0, 1.0]))
        assert rep.constant == pytest.approx(math.e, rel=1e-4)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(0.1, 10.0), min_size=2, max_size=5),
           st.lists(st.floats(-1.0, 1.0), min_size=5, max_size=5))
    def test_bounded_by_e(self, a, x):
        x = np.array(x[:len(a)])
        if np.abs(x).max() < 1e-3:
            x[0] = 1.0
        rep = linf_test(DiagonalOperator(a, "linf"), x, QuadratureSpec(1e-4, 1e4, 1024))
        assert rep.constant <= math.e * (1 + 1e-4)

    def test_zero(self):
        rep = linf_test(DiagonalOperator([1.0]), np.zeros(1))
        assert rep.constant == 0.0
        assert rep.notes


class TestEstimates:
    def test_scalar_ratio(self):
        model = DiagonalOperator([1.0])
        nodes = np.linspace(0, 40, 40001)
        f = TimeSampledPath.from_function(lambda t: np.array([math.exp(-t)]), nodes)
        rep = mre_ratio(model, f)
        # u = t e^-t: ||Au|| = 1, ||u'|| = 2/e, ||f|| = 1
        assert rep.components["Au_norm"] == pytest.approx(1.0, rel=1e-6)
        assert rep.constant == pytest.approx(1 + 2 / math.e, rel=1e-6)
        assert rep.constant <= 3

    def test_vacuous(self):
        f = TimeSampledPath.from_function(lambda t: np.zeros(1), np.linspace(0, 1, 11))
        assert mre_ratio(DiagonalOperator([1.0]), f).verdict == "vacuous"

    def test_heat_ratio_stable(self):
        model = HeatModel(1, N=1024)
        x = model.gaussian()
        vals = []
        for n in (101, 201):
            f = TimeSampledPath.from_function(lambda t: x.values, np.linspace(0, 1, n), like=x)
            vals.append(mre_ratio(model, f, TimeNorm(1.0)).constant)
        assert np.isfinite(vals[0])
        assert vals[1] == pytest.approx(vals[0], rel=1e-2)

    def test_homogeneous_diag(self):
        model = DiagonalOperator([1.0])
        f = TimeSampledPath.from_function(lambda t: np.array([math.exp(-t)]), np.linspace(0, 30, 3001))
        rep = homogeneous_mre(model, f, power_L(0.5), "L1")
        assert rep.verdict == "finite"
        assert 0 < rep.constant < 3

    def test_homogeneous_bad_norm(self):
        f = TimeSampledPath.from_function(lambda t: np.ones(1), np.linspace(0, 1, 3))
        with pytest.raises(ValueError):
            homogeneous_mre(DiagonalOperator([1.0]), f, power_L(0.5), "L2")

    def test_remark_example_half(self):
        out = remark_example_integrals(0.5)
        expected = FOUR_OVER_ROOT_E * math.pi / (math.sin(math.pi / 2) * 1.0)
        assert out["double"] == pytest.approx(expected, rel=2e-2)
        assert out["single_growth"].tag == "log"
        assert out["single_growth"].slope == pytest.approx(math.sqrt(2 * math.pi), rel=2e-2)


class TestCertificates:
    def test_diag_family(self):
        names = [n for n, _ in certificate_family(DiagonalOperator([1.0, 2.0]))]
        assert names == ["basis:0", "basis:1", "ones", "random"]

    def test_heat_family_deterministic(self):
        model = HeatModel(1, N=512)
        a = certificate_family(model)
        b = certificate_family(model)
        assert [n for n, _ in a] == [n for n, _ in b]
        for (_, x), (_, y) in zip(a, b):
            assert np.array_equal(x.values, y.values)

    def test_packet_spectrum_avoids_zero(self):
        model = HeatModel(1)
        x = certificate(model, "packet")
        F = np.abs(x.fft)
        xi = np.sqrt(x.xi2())
        assert F[xi < 0.99].max() < 1e-12 * F.max()

    @pytest.mark.parametrize("spec", ["basis:7", "nonsense"])
    def test_bad_specs(self, spec):
        with pytest.raises(ValueError):
            certificate(DiagonalOperator([1.0]), spec)

    def test_file_certificate(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("1,2,3\n")
        x = certificate(DiagonalOperator([1.0, 2.0, 3.0]), f"file:{p}")
        assert np.array_equal(x, [1.0, 2.0, 3.0])
