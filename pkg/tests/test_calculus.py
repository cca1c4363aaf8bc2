import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mrlab.calculus import (
    ETA,
    PSI1,
    PSI2,
    PSI3,
    DiagonalOperator,
    GridField,
    HeatModel,
    NumericError,
    PsiSymbol,
    RadialHeatModel,
    RadialProfile,
    diag_AT,
    diag_semigroup,
    frac_eps,
    generator_kernel,
    heat_multiplier_apply,
    psi_calculus,
    psi_kernel,
    radial_lp_norm,
    semigroup_kernel,
    sphere_area,
)
from mrlab.quadrature import QuadratureSpec, integrate_callable
from mrlab.weightlab import DomainError

FOUR_OVER_ROOT_E = 4 * math.exp(-0.5)


def band_limited_field(rng, n=1, L=40.0, N=None, cutoff=4.0):
    N = N or (4096 if n == 1 else 128)
    probe = GridField(n, L, N, np.zeros((N,) * n))
    xi = np.sqrt(probe.xi2())
    coef = rng.normal(size=xi.shape) + 1j * rng.normal(size=xi.shape)
    coef[xi > cutoff] = 0.0
    return probe.with_values(np.fft.ifftn(coef))


class TestDiagonal:
    def test_identity_at_zero(self):
        A = DiagonalOperator([1.0, 2.0, 4.0])
        assert np.array_equal(diag_semigroup(A, 0.0, [1, 1, 1]), [1.0, 1.0, 1.0])

    def test_generator_orbit(self):
        A = DiagonalOperator([3.0])
        assert diag_AT(A, 1.0, [2.0])[0] == pytest.approx(6 * math.exp(-3))

    def test_orbit_integral(self):
        A = DiagonalOperator([1.0])
        val = integrate_callable(lambda t: A.kernel_norms([1.0], generator_kernel(), t), QuadratureSpec())
        assert val == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("spectrum", [[0.0], [-1.0, 2.0], [], [np.inf]])
    def test_bad_spectrum(self, spectrum):
        with pytest.raises(ValueError):
            DiagonalOperator(spectrum)

    def test_negative_time(self):
        with pytest.raises(DomainError):
            diag_semigroup(DiagonalOperator([1.0]), -0.1, [1.0])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(0.01, 100.0), min_size=1, max_size=6),
           st.sampled_from([0.1, 1.0, 10.0]), st.sampled_from([0.1, 1.0, 10.0]))
    def test_semigroup_law(self, a, t, s):
        A = DiagonalOperator(a)
        x = np.linspace(1.0, 2.0, len(a))
        lhs = A.semigroup(t, A.semigroup(s, x))
        assert np.allclose(lhs, A.semigroup(t + s, x), rtol=1e-10, atol=0)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(0.01, 100.0), min_size=1, max_size=6))
    def test_analytic_bound(self, a):
        A = DiagonalOperator(a)
        x = np.ones(len(a))
        t = np.logspace(-4, 4, 801)
        tat = t * A.kernel_norms(x, generator_kernel(), t)
        assert tat.max() <= A.analytic_bound * A.norm(x) * (1 + 1e-12)


class TestPsi:
    def test_psi2_scalar(self):
        out = psi_calculus(DiagonalOperator([1.0]), PSI2, 1.0, [1.0])
        assert out[0] == pytest.approx(0.5)

    def test_psi1_vanishes_at_zero(self):
        z = np.array([0.0, 1e-12, 1e-8])
        assert np.all(np.abs(PSI1(z)) <= 1.0001 * z)

    @pytest.mark.parametrize("tag", ["psi1", "psi2", "psi3", "eta"])
    def test_finite_on_half_line(self, tag):
        z = np.concatenate([[0.0], np.logspace(-12, 300, 50)])
        with np.errstate(over="ignore"):
            assert np.all(np.isfinite(PsiSymbol(tag)(z)))

    def test_bad_tags(self):
        with pytest.raises(ValueError):
            PsiSymbol("psi9")
        with pytest.raises(ValueError):
            frac_eps(0.0)

    def test_eta_matches_generator_orbit_diag(self):
        A = DiagonalOperator([0.5, 2.0, 7.0])
        x = np.array([1.0, -2.0, 3.0])
        for t in (0.1, 1.0, 5.0):
            assert np.allclose(psi_calculus(A, ETA, t, x) / t, A.AT(t, x), rtol=1e-12)

    def test_eta_matches_generator_orbit_grid(self):
        model = HeatModel(1, N=1024)
        x = model.gaussian()
        for t in (0.1, 1.0, 5.0):
            lhs = psi_calculus(model, ETA, t, x).values / t
            rhs = model.AT(t, x).values
            assert np.abs(lhs - rhs).max() <= 1e-12 * np.abs(rhs).max()

    def test_psi_kernel_of_eta_equals_generator_kernel(self):
        t = np.logspace(-3, 3, 7)[:, None]
        lam = np.logspace(-2, 2, 5)[None, :]
        assert np.allclose(psi_kernel(ETA).symbol(t, lam), generator_kernel().symbol(t, lam))


class TestGridField:
    @pytest.mark.parametrize("N", [16, 100])
    def test_bad_sizes(self, N):
        with pytest.raises(ValueError):
            GridField(1, 40.0, N, np.zeros(N))

    def test_roundtrip(self):
        f = GridField.gaussian(1, N=1024)
        assert f.roundtrip_error() < 1e-12

    def test_identity_multiplier(self):
        f = GridField.gaussian(2, N=64)
        g = heat_multiplier_apply(f, lambda xi2, t: np.ones_like(xi2))
        assert np.abs(g.values - f.values).max() < 1e-14

    def test_nonfinite_symbol(self):
        f = GridField.gaussian(1, N=64)
        with np.errstate(divide="ignore"):
            with pytest.raises(NumericError):
                heat_multiplier_apply(f, lambda xi2, t: 1.0 / xi2)

    def test_csv_roundtrip(self, tmp_path, rng):
        f = band_limited_field(rng, 1, N=64)
        f.to_csv(tmp_path / "f.csv")
        g = GridField.from_csv(tmp_path / "f.csv")
        assert (g.n, g.L, g.N) == (f.n, f.L, f.N)
        assert np.array_equal(g.values, f.values)


class TestHeat:
    @pytest.mark.parametrize("t", [0.0, 1.0])
    def test_gaussian_matches_closed_form(self, t):
        model = HeatModel(1)
        x = model.gaussian()
        y = x.coords()[0]
        prof = RadialProfile.gaussian_heat(1, t)
        assert np.abs(model.semigroup(t, x).values - prof.value(np.abs(y))).max() < 1e-8

    def test_gaussian_matches_closed_form_2d(self):
        model = HeatModel(2, N=256)
        x = model.gaussian()
        r = np.sqrt(sum(c ** 2 for c in x.coords()))
        prof = RadialProfile.gaussian_heat(2, 1.0)
        assert np.abs(model.semigroup(1.0, x).values - prof.value(r)).max() < 1e-8

    @pytest.mark.parametrize("t", [0.0, 1.0, 10.0])
    def test_grid_l1_matches_radial(self, t):
        model = HeatModel(1, L=40.0, N=4096, domain="torus")
        x = model.gaussian()
        grid = model.semigroup(t, x).lp_norm(1)
        assert grid == pytest.approx(radial_lp_norm(1, RadialProfile.gaussian_heat(1, t)), rel=1e-6)

    def test_semigroup_law(self, rng):
        model = HeatModel(1, N=1024)
        x = band_limited_field(rng, 1, N=1024)
        for t, s in [(0.1, 1.0), (1.0, 10.0), (10.0, 0.1)]:
            lhs = model.semigroup(t, model.semigroup(s, x)).values
            rhs = model.semigroup(t + s, x).values
            assert np.abs(lhs - rhs).max() <= 1e-10 * np.abs(x.values).max()

    @pytest.mark.parametrize("n,N", [(1, 1024), (2, 128)])
    def test_density_identity(self, rng, n, N):
        # A * int_0^t T(s) x ds = x - T(t) x, the time integral by Gauss-Legendre
        model = HeatModel(n, N=N)
        x = band_limited_field(rng, n, N=N)
        t = 1.5
        nodes, weights = np.polynomial.legendre.leggauss(40)
        s = 0.5 * t * (nodes + 1)
        acc = sum(0.5 * t * w * model.semigroup(si, x).values for si, w in zip(s, weights))
        lhs = model.apply_generator(x.with_values(acc)).values
        rhs = x.values - model.semigroup(t, x).values
        assert np.abs(lhs - rhs).max() < 1e-8

    def test_negative_time(self):
        model = HeatModel(1, N=64)
        with pytest.raises(DomainError):
            model.semigroup(-1.0, model.gaussian())

    def test_analytic_bound_grid(self):
        model = HeatModel(1)
        x = model.gaussian()
        t = np.logspace(-3, 3, 61)
        tat = t * model.kernel_norms(x, generator_kernel(), t)
        assert np.nanmax(tat) <= model.analytic_bound * x.lp_norm(1) * (1 + 1e-3)

    def test_whole_space_tracks_radial_oracle(self):
        t = np.logspace(-3, 4, 36)
        grid = HeatModel(1).kernel_norms(HeatModel(1).gaussian(), generator_kernel(), t, scale=2.0)
        exact = RadialHeatModel(1).kernel_norms(RadialProfile.gaussian_heat(1, 0.0), generator_kernel(),
                                                t, scale=2.0)
        assert np.allclose(grid, exact, rtol=2e-3)

    def test_torus_wraps_at_large_times(self):
        # the periodic box holds the total mass, whole-space keeps decaying
        model = HeatModel(1, domain="torus")
        x = model.gaussian()
        late = model.kernel_norms(x, semigroup_kernel(), [1e5])[0]
        assert late == pytest.approx(x.lp_norm(1), rel=1e-6)


class TestRadial:
    @pytest.mark.parametrize("profile,expected", [
        (RadialProfile.gaussian_heat(1, 0.0), FOUR_OVER_ROOT_E),
        (RadialProfile.gaussian_heat(1, 1.0), FOUR_OVER_ROOT_E / 2),
        (RadialProfile.remark_example(2.0, 0.0), FOUR_OVER_ROOT_E / 8),
    ])
    def test_laplacian_norms(self, profile, expected):
        assert radial_lp_norm(1, profile, "laplacian") == pytest.approx(expected, rel=1e-10)

    def test_two_dimensional_laplacian(self):
        # |(r^2 - 2)| e^{-r^2/2} over R^2 is 8 pi / e
        val = radial_lp_norm(1, RadialProfile.gaussian_heat(2, 0.0), "laplacian")
        assert val == pytest.approx(8 * math.pi / math.e, rel=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.0, 100.0), st.sampled_from([1, 2, 3]))
    def test_heat_preserves_mass(self, t, n):
        val = radial_lp_norm(1, RadialProfile.gaussian_heat(n, t))
        assert val == pytest.approx((2 * math.pi) ** (n / 2), rel=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(1.001, 50.0), st.floats(0.0, 50.0))
    def test_remark_scaling(self, t, s):
        # (1/t) (s + t^2)^-1 * 4 e^{-1/2}
        val = radial_lp_norm(1, RadialProfile.remark_example(t, s), "laplacian")
        assert val == pytest.approx(FOUR_OVER_ROOT_E / (t * (s + t * t)), rel=1e-9)

    def test_evolve_matches_family(self):
        a = RadialProfile.gaussian_heat(2, 0.0).evolve(3.0)
        b = RadialProfile.gaussian_heat(2, 3.0)
        assert (a.amplitude, a.variance) == pytest.approx((b.amplitude, b.variance))

    def test_domain(self):
        with pytest.raises(DomainError):
            RadialProfile.remark_example(1.0)
        with pytest.raises(DomainError):
            RadialProfile.gaussian_heat(1, -1.0)
        with pytest.raises(ValueError):
            radial_lp_norm(2, RadialProfile.gaussian_heat(1, 0.0))

    def test_sphere_area(self):
        assert [sphere_area(n) for n in (1, 2, 3)] == pytest.approx([2, 2 * math.pi, 4 * math.pi])
