import math

import numpy as np
import pytest

from dickelab import (
    DickeParams,
    FockBasisSpec,
    LocalGenerator,
    cfi_asymptotic,
    cfi_closed_form_sqrt2,
    cfi_large_time,
    cfi_quadrature,
    delta_epsilon,
    fock,
    local_generator,
    optimal_angle,
    qfi_eigenstate,
    qfi_from_generator,
    qfi_heuristic_superradiant,
    qfi_quench,
    scan_optimal_angle,
)
from dickelab.fisher import _commutator, _drive_coeffs, _hamiltonian_coeffs
from dickelab.fock import quadrature_op, vacuum_spin_down

from conftest import (
    forced_series,
    param_value,
    quench_family,
    replace_param,
    unitary_derivative_generator,
)


def params(r, omega=1.0, Omega=1.0):
    return DickeParams(omega=omega, Omega=Omega, g=math.sqrt(r * omega * Omega))


class TestGap:
    def test_bare_oscillator(self):
        gap = delta_epsilon(params(0.0))
        assert gap.delta_eps == pytest.approx(4.0)
        assert gap.delta == pytest.approx(4.0)

    def test_closes_at_critical_coupling(self):
        assert delta_epsilon(params(1.0)).delta_eps == pytest.approx(0.0, abs=1e-14)

    def test_negative_beyond(self):
        assert delta_epsilon(params(4.0)).delta_eps == pytest.approx(-12.0)


class TestLocalGenerator:
    def test_decoupled_limit(self):
        gen = local_generator(params(0.0), "omega", 2.3)
        assert gen.a_xx == pytest.approx(1.15)
        assert gen.a_pp == pytest.approx(1.15)
        assert gen.a_xp == pytest.approx(0.0, abs=1e-15)

    def test_no_evolution_no_imprint(self):
        gen = local_generator(params(2.0), "g", 0.0)
        assert (gen.a_xx, gen.a_pp, gen.a_xp, gen.a_0) == (0.0, 0.0, 0.0, 0.0)

    def test_commutator_closure(self):
        # -i[H, D] must reproduce -delta_eps * C for every parameter choice
        rng = np.random.default_rng(3)
        for _ in range(20):
            p = DickeParams(omega=rng.uniform(0.5, 2.0), Omega=rng.uniform(0.5, 2.0),
                            g=rng.uniform(0.0, 2.5))
            d_eps = delta_epsilon(p).delta_eps
            h = _hamiltonian_coeffs(p)
            for lam in ("omega", "Omega", "g"):
                c_op = _commutator(h, _drive_coeffs(p, lam))
                d_op = _commutator(h, c_op)
                closure = _commutator(h, d_op)
                expected = tuple(-d_eps * c for c in c_op)
                assert closure == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_critical_point_free_particle_form(self):
        # at g = g_c the generator reduces to the free-particle integral
        t = 1.7
        gen = local_generator(params(1.0), "omega", t)
        assert gen.a_xx == pytest.approx(t / 2.0, rel=1e-12)
        assert gen.a_xp == pytest.approx(t * t / 4.0, rel=1e-12)
        assert gen.a_pp == pytest.approx(t / 2.0 + t**3 / 6.0, rel=1e-12)

    @pytest.mark.parametrize("r,lam,t", [
        (4.0, "omega", 1.0),
        (0.5, "Omega", 2.0),
        (2.0, "g", 1.0),
        (1.0, "omega", 1.5),
    ])
    def test_coefficients_match_unitary_derivative_oracle(self, r, lam, t):
        gen = local_generator(params(r), lam, t)
        oracle = unitary_derivative_generator(params(r), lam, t)
        mine = np.array([gen.a_xx, gen.a_pp, gen.a_xp])
        assert np.max(np.abs(mine - oracle[:3])) < 1e-6

    def test_continuous_across_critical_coupling(self):
        for r in (1.0 - 1e-5, 1.0 + 1e-5):
            branch = local_generator(params(r), "omega", 1.0)
            with forced_series():
                series = local_generator(params(r), "omega", 1.0)
            for field in ("a_xx", "a_pp", "a_xp"):
                assert abs(getattr(branch, field) - getattr(series, field)) < 1e-9


class TestQfiFromGenerator:
    def test_vacuum_number_eigenstate(self):
        gen = local_generator(params(0.0), "omega", 3.0)
        assert qfi_from_generator(gen) == pytest.approx(0.0, abs=1e-24)

    def test_vacuum_fourth_moments_against_fock(self):
        # the Wick factorization behind the closed form, checked operator by
        # operator on the truncated basis
        cutoff = 12
        x_op = quadrature_op(0.0, cutoff).toarray()
        p_op = quadrature_op(-math.pi / 2, cutoff).toarray()
        w_op = x_op @ p_op + p_op @ x_op
        vac = vacuum_spin_down(FockBasisSpec(cutoff=cutoff))

        def var(mat):
            mean = np.vdot(vac, mat @ vac)
            return float(np.real(np.vdot(vac, mat @ (mat @ vac)) - mean**2))

        assert var(x_op @ x_op) == pytest.approx(0.5, abs=1e-12)
        assert var(p_op @ p_op) == pytest.approx(0.5, abs=1e-12)
        assert var(w_op) == pytest.approx(2.0, abs=1e-12)
        cross = np.vdot(vac, (x_op @ x_op) @ (p_op @ p_op) @ vac)
        assert np.real(cross) == pytest.approx(-0.25, abs=1e-12)

    def test_matches_fock_variance_for_random_generators(self):
        cutoff = 12
        x_op = quadrature_op(0.0, cutoff).toarray()
        p_op = quadrature_op(-math.pi / 2, cutoff).toarray()
        w_op = x_op @ p_op + p_op @ x_op
        vac = vacuum_spin_down(FockBasisSpec(cutoff=cutoff))
        rng = np.random.default_rng(17)
        for _ in range(25):
            a_xx, a_pp, a_xp = rng.uniform(-2.0, 2.0, size=3)
            mat = a_xx * x_op @ x_op + a_pp * p_op @ p_op + a_xp * w_op
            mean = np.vdot(vac, mat @ vac)
            var = float(np.real(np.vdot(vac, mat @ (mat @ vac)) - mean**2))
            gen = LocalGenerator(a_xx=a_xx, a_pp=a_pp, a_xp=a_xp)
            assert qfi_from_generator(gen) == pytest.approx(4.0 * var, abs=1e-10)

    def test_pure_rotation_generator(self):
        # c * (XP + PX)/2 has vacuum variance c^2/2, hence QFI 2 c^2;
        # pinned by the Fock variance oracle above
        for c in (0.5, 1.0, 2.0):
            gen = LocalGenerator(a_xx=0.0, a_pp=0.0, a_xp=0.5 * c)
            assert qfi_from_generator(gen) == pytest.approx(2.0 * c * c, rel=1e-12)

    @pytest.mark.parametrize("r,t,lam", [
        (0.25, 1.0, "omega"),
        (1.0, 1.0, "omega"),
        (2.0, 1.0, "omega"),
        (2.0, 3.0, "omega"),
        (4.0, 0.5, "omega"),
        (2.0, 1.0, "Omega"),
        (2.0, 1.0, "g"),
    ])
    def test_matches_fidelity_oracle(self, r, t, lam):
        from dickelab import bogoliubov_coeffs

        p = params(r)
        expected_photons = abs(bogoliubov_coeffs(p, t).v) ** 2
        cutoff = 400 if expected_photons < 6 else 6400
        family = quench_family(p, lam, t, cutoff)
        lam0 = param_value(p, lam)
        oracle, _ = fock.qfi_fidelity(family, lam0, 1e-5 * lam0)
        assert qfi_quench(p, lam, t) == pytest.approx(oracle, rel=1e-4)


class TestHeuristic:
    def test_requires_superradiant_coupling(self):
        for r in (0.5, 1.0):
            with pytest.raises(ValueError):
                qfi_heuristic_superradiant(params(r), "omega", 1.0)

    def test_converges_to_exact(self):
        p = params(4.0)
        s = math.sqrt(-delta_epsilon(p).delta_eps)
        for target, tol in ((12.0, 0.01), (20.0, 1e-6)):
            t = target / s
            ratio = qfi_heuristic_superradiant(p, "omega", t) / qfi_quench(p, "omega", t)
            assert abs(ratio - 1.0) < tol

    def test_exponential_slope(self):
        # ln QFI grows with slope 2 sqrt(|delta_eps|) = 4 sqrt(3) at r = 4
        p = params(4.0)
        ts = np.linspace(4.0, 8.0, 17)
        lnq = [math.log(qfi_quench(p, "omega", t)) for t in ts]
        from dickelab.numerics import linear_fit

        slope, _, _ = linear_fit(list(ts), lnq)
        assert abs(slope / (4.0 * math.sqrt(3.0)) - 1.0) < 0.05


class TestEigenstateQfi:
    def test_zero_without_coupling(self):
        assert qfi_eigenstate(params(0.0), 0, "omega") == 0.0

    def test_reference_value(self):
        assert qfi_eigenstate(params(0.5), 0, "omega") == pytest.approx(0.125, rel=1e-12)

    def test_excited_state_ratio(self):
        for r in (0.2, 0.5, 0.9):
            p = params(r, omega=0.7, Omega=2.0)
            ratio = qfi_eigenstate(p, 1, "omega") / qfi_eigenstate(p, 0, "omega")
            assert ratio == pytest.approx(3.0, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            qfi_eigenstate(params(1.0), 0, "omega")
        with pytest.raises(ValueError):
            qfi_eigenstate(params(1.5), 0, "Omega")
        with pytest.raises(ValueError):
            qfi_eigenstate(params(0.5), 0, "g")
        with pytest.raises(ValueError):
            qfi_eigenstate(params(0.5), -1, "omega")

    @pytest.mark.parametrize("lam", ["omega", "Omega"])
    @pytest.mark.parametrize("n", [0, 1])
    def test_matches_overlap_derivative_oracle(self, lam, n):
        # squeezed eigenstate family differentiated numerically in Fock space
        p = params(0.5)

        def family(lam_value):
            q = replace_param(p, lam, lam_value)
            xi = -0.25 * math.log(1.0 - q.coupling_ratio)
            return fock.squeezed_fock_state(xi, n, cutoff=160)

        lam0 = param_value(p, lam)
        oracle, _ = fock.qfi_fidelity(family, lam0, 1e-5 * lam0)
        assert qfi_eigenstate(p, n, lam) == pytest.approx(oracle, rel=1e-6)


class TestCfiQuadrature:
    def test_zero_at_t0(self):
        for phi in (0.0, 0.4, 1.2):
            assert cfi_quadrature(params(2.0), "omega", 0.0, phi) == 0.0

    def test_reference_value(self):
        val = cfi_quadrature(params(2.0), "omega", 1.0, 0.0)
        expected = 2.0 * math.sinh(1.0) ** 4 / math.cosh(2.0) ** 2
        assert val == pytest.approx(expected, rel=1e-12)
        assert val == pytest.approx(0.26952, abs=1e-5)

    def test_equals_closed_form_at_sqrt2(self):
        p = params(2.0, omega=1.3, Omega=0.7)
        for t in (0.3, 1.0, 2.5, 6.0):
            for phi in (0.0, 0.5, 1.1, 2.0):
                assert cfi_quadrature(p, "omega", t, phi) == pytest.approx(
                    cfi_closed_form_sqrt2(p.omega, t, phi), rel=1e-10
                )

    @pytest.mark.parametrize("lam", ["omega", "Omega", "g"])
    def test_derivative_matches_finite_differences(self, lam):
        from dickelab.gaussian import quadrature_variance

        for r in (0.5, 1.0, 2.0, 3.0):
            p = params(r)
            lam0 = param_value(p, lam)
            step = 1e-6 * lam0
            for t in (0.8, 2.0):
                for phi in (0.3, 1.0, 2.4):
                    v = quadrature_variance(p, t, phi)
                    v_plus = quadrature_variance(replace_param(p, lam, lam0 + step), t, phi)
                    v_minus = quadrature_variance(replace_param(p, lam, lam0 - step), t, phi)
                    fd = (v_plus - v_minus) / (2.0 * step)
                    fd_cfi = fd * fd / (2.0 * v * v)
                    cfi = cfi_quadrature(p, lam, t, phi)
                    assert cfi == pytest.approx(fd_cfi, rel=1e-6, abs=1e-12)

    @pytest.mark.parametrize("lam", ["omega", "Omega", "g"])
    def test_bounded_by_qfi(self, lam):
        for r in (0.5, 1.0, 2.0, 4.0):
            p = params(r)
            for t in (0.5, 1.5, 3.0):
                qfi = qfi_quench(p, lam, t)
                for phi in np.linspace(0.0, math.pi, 37):
                    assert cfi_quadrature(p, lam, t, phi) <= qfi * (1.0 + 1e-9)


class TestClosedFormAndAsymptote:
    def test_vanishes_at_quarter_pi(self):
        # the cos^2(2 phi) numerator zeroes the value; at the representable
        # pi/4 only the ~1e-17 rounding of cos survives, squared away far
        # below the peak scale 2 sinh^4(wt)
        for t in (0.5, 2.0, 7.0):
            peak = 1.0 + 2.0 * math.sinh(t) ** 4
            assert cfi_closed_form_sqrt2(1.0, t, math.pi / 4) < 1e-20 * peak

    def test_zero_at_t0(self):
        assert cfi_closed_form_sqrt2(1.0, 0.0, 0.3) == 0.0

    def test_large_time_form_continuity(self):
        # exponential-scaled branch agrees with the direct one at the seam
        for phi in (0.1, 0.6, 1.2):
            assert cfi_closed_form_sqrt2(1.0, 19.9, phi) == pytest.approx(
                cfi_closed_form_sqrt2(1.0, 20.1, phi), rel=1e-4
            )

    def test_asymptote_reference_value(self):
        assert cfi_asymptotic(1.0, math.pi / 4 + 0.1) == pytest.approx(50.0, rel=1e-12)

    def test_asymptote_even_in_offset(self):
        for d in (0.01, 0.05, 0.2):
            assert cfi_asymptotic(1.3, math.pi / 4 + d) == pytest.approx(
                cfi_asymptotic(1.3, math.pi / 4 - d), rel=1e-12
            )

    def test_asymptote_pole(self):
        with pytest.raises(ValueError):
            cfi_asymptotic(1.0, math.pi / 4)
        with pytest.raises(ValueError):
            cfi_large_time(1.0, math.pi / 4)

    def test_agreement_with_exact_far_in_time(self):
        for wt in (6.0, 8.0):
            for d in (0.01, 0.03, 0.1):
                exact = cfi_closed_form_sqrt2(1.0, wt, math.pi / 4 + d)
                assert abs(cfi_asymptotic(1.0, math.pi / 4 + d) / exact - 1.0) < 0.01

    def test_large_time_plateau_matches_exact(self):
        # the wt >> 1 form holds across the whole angle range, not just
        # near pi/4
        for phi in (0.1, 0.6, 1.3, 2.0, 2.9):
            exact = cfi_closed_form_sqrt2(1.0, 9.0, phi)
            assert cfi_large_time(1.0, phi) == pytest.approx(exact, rel=2e-6)


class TestOptimalAngle:
    def test_pure_squeezing_direction(self):
        for wt in (0.5, 1.0, 5.0, 40.0):
            assert optimal_angle(2.0, wt) == pytest.approx(math.pi / 4, rel=1e-12)

    def test_infinite_time_limits(self):
        assert optimal_angle(2.0, math.inf) == pytest.approx(math.pi / 4, rel=1e-12)
        assert optimal_angle(4.0, math.inf) == pytest.approx(
            math.acos(math.sqrt(0.75)), rel=1e-12
        )
        assert optimal_angle(1e12, math.inf) == pytest.approx(0.0, abs=1e-5)

    def test_short_time_starts_at_quarter_pi(self):
        assert optimal_angle(3.0, 1e-9) == pytest.approx(math.pi / 4, abs=1e-8)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            optimal_angle(1.0, 1.0)
        with pytest.raises(ValueError):
            optimal_angle(2.0, 0.0)


class TestScanOptimalAngle:
    def test_stays_in_principal_interval(self):
        phi, _ = scan_optimal_angle(params(2.0), "omega", 1.5)
        assert 0.0 <= phi < math.pi

    def test_max_bounded_by_qfi(self):
        for r, t in ((2.0, 1.0), (3.0, 2.0)):
            p = params(r)
            _, best = scan_optimal_angle(p, "omega", t)
            assert best <= qfi_quench(p, "omega", t) * (1.0 + 1e-9)

    def test_saturates_cramer_rao(self):
        # the optimal quadrature saturates the bound at finite time
        for r, t in ((1.5, 1.0), (2.0, 2.0), (5.0, 1.0)):
            p = params(r)
            _, best = scan_optimal_angle(p, "omega", t)
            assert best / qfi_quench(p, "omega", t) > 0.999

    def test_argmax_approaches_quarter_pi(self):
        p = params(2.0)
        distances = []
        for t in (1.0, 2.0, 4.0):
            phi, _ = scan_optimal_angle(p, "omega", t, grid=1e-7)
            d = abs(phi - math.pi / 4)
            distances.append(min(d, math.pi - d))
        assert distances[0] > distances[1] > distances[2]
        assert distances[2] < 1e-3

    def test_dense_grid_agreement(self):
        p = params(3.0)
        t = 2.0
        phi, best = scan_optimal_angle(p, "omega", t, grid=1e-7)
        grid = np.linspace(0.0, math.pi, 20001)
        vals = [cfi_quadrature(p, "omega", t, x) for x in grid]
        assert best >= max(vals) * (1.0 - 1e-9)

    def test_rejects_bad_tolerance(self):
        with pytest.raises(ValueError):
            scan_optimal_angle(params(2.0), "omega", 1.0, grid=0.0)
