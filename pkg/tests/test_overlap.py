"""Aggregate overlap parameters and the two overlap-integral routes."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from spdc import (
    BeamTriple,
    GaussianMode,
    MaterialOptics,
    OverlapParams,
    a_plus_b_plus,
    aggregate_focal_parameter,
    normalization_coefficient,
    overlap_direct,
    overlap_params,
    overlap_simplified,
    phase_mismatch_phi,
    quadratic_coefficient,
)
from spdc.errors import DegenerateConfigurationError, OverlapSingularityError
from spdc.materials import CONSTANTS


def random_inputs(rng):
    k = rng.uniform(3e6, 3e7, 3)
    xi = 10 ** rng.uniform(-2, 1, 3)
    return (k[0], k[1], k[2], xi[0], xi[1], xi[2])


def random_beam_config(rng):
    """Beam triple + material with xi values spanning [0.01, 10]."""
    Lz = 10 ** rng.uniform(-3, -1.5)
    lam1 = rng.uniform(0.8e-6, 1.8e-6)
    lam2 = rng.uniform(0.8e-6, 1.8e-6)
    lamp = 1.0 / (1.0 / lam1 + 1.0 / lam2)
    n_p, n_1, n_2 = rng.uniform(1.5, 2.3, 3)
    xis = 10 ** rng.uniform(math.log10(0.01), 1.0, 3)
    kp = 2 * math.pi * n_p / lamp
    k1 = 2 * math.pi * n_1 / lam1
    k2 = 2 * math.pi * n_2 / lam2
    beams = BeamTriple(
        pump=GaussianMode(lamp, n_p, math.sqrt(Lz / (kp * xis[0]))),
        signal=GaussianMode(lam1, n_1, math.sqrt(Lz / (k1 * xis[1]))),
        idler=GaussianMode(lam2, n_2, math.sqrt(Lz / (k2 * xis[2]))),
        crystal_length=Lz,
    )
    material = MaterialOptics(
        n_p=n_p, n_1=n_1, n_2=n_2,
        ng_p=n_p + 0.05, ng_1=n_1 + 0.04, ng_2=n_2 + 0.06,
        d_eff=2.4e-12, crystal_length=Lz,
    )
    delta_k = rng.uniform(-2.0, 2.0) * 2.0 * math.pi / Lz
    return beams, material, delta_k


class TestAggregateFocalParameter:
    def test_equal_focus_collinear(self):
        k1, k2 = 7.03e6, 7.36e6
        kp = k1 + k2
        xi0 = 0.7
        assert aggregate_focal_parameter(kp, k1, k2, xi0, xi0, xi0) == pytest.approx(
            xi0, rel=1e-14
        )

    def test_plane_wave_pump_limit(self):
        k1, k2, kp = 7.0e6, 7.4e6, 14.4e6
        xi0 = 0.45
        got = aggregate_focal_parameter(kp, k1, k2, 0.0, xi0, xi0)
        assert got == pytest.approx(xi0, rel=1e-14)

    def test_signal_idler_swap_symmetry(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            kp, k1, k2, xp, x1, x2 = random_inputs(rng)
            a = aggregate_focal_parameter(kp, k1, k2, xp, x1, x2)
            b = aggregate_focal_parameter(kp, k2, k1, xp, x2, x1)
            assert a == pytest.approx(b, rel=1e-13)

    def test_zero_denominator(self):
        with pytest.raises(DegenerateConfigurationError):
            aggregate_focal_parameter(1.0, 1.0, 1.0, 0.0, 0.0, 0.0)


class TestQuadraticCoefficient:
    def test_zero_at_wavevector_matching(self):
        k1, k2 = 7.03e6, 7.36e6
        assert quadratic_coefficient(k1 + k2, k1, k2, 0.3, 0.5, 0.7) == 0.0

    def test_sign_follows_mismatch(self):
        rng = np.random.default_rng(32)
        for _ in range(100):
            kp, k1, k2, xp, x1, x2 = random_inputs(rng)
            c = quadratic_coefficient(kp, k1, k2, xp, x1, x2)
            assert math.copysign(1.0, c) == math.copysign(1.0, kp - k1 - k2)

    def test_algebraic_identity(self):
        rng = np.random.default_rng(33)
        for _ in range(200):
            kp, k1, k2, xp, x1, x2 = random_inputs(rng)
            c = quadratic_coefficient(kp, k1, k2, xp, x1, x2)
            num = (
                k1 * x1 * (x2 - xp) + k2 * x2 * (x1 - xp) + kp * xp * (x1 + x2)
            )
            lhs = c * num * num
            rhs = (kp - k1 - k2) * x1 * x2 * xp * (k1 * x1 + k2 * x2 + kp * xp)
            assert lhs == pytest.approx(rhs, rel=1e-12)


class TestNormalizationCoefficient:
    def test_hand_algebra_equal_case(self):
        # k1 k1 (2 k1) xi^3 / (Lz (k1 + k1 + 2 k1) xi) = k1^2 xi^2 / (2 Lz);
        # units 1/m^3 as required
        k1 = 7.0e6
        kp = 2.0 * k1
        xi = 0.37
        Lz = 8e-3
        got = normalization_coefficient(kp, k1, k1, xi, xi, xi, Lz)
        assert got == pytest.approx(k1**2 * xi**2 / (2.0 * Lz), rel=1e-13)

    def test_degree_two_homogeneity_in_xi(self):
        # numerator is cubic and denominator linear in the xi_j, so scaling
        # all of them by s scales D by s^2
        rng = np.random.default_rng(34)
        for _ in range(100):
            kp, k1, k2, xp, x1, x2 = random_inputs(rng)
            base = normalization_coefficient(kp, k1, k2, xp, x1, x2, 5e-3)
            doubled = normalization_coefficient(
                kp, k1, k2, 2 * xp, 2 * x1, 2 * x2, 5e-3
            )
            assert doubled == pytest.approx(4.0 * base, rel=1e-13)


class TestAPlusBPlus:
    def test_equal_focus_collinear_is_four(self):
        k1, k2 = 7.03e6, 7.36e6
        kp = k1 + k2
        xi0 = 1.3
        assert a_plus_b_plus(kp, k1, k2, xi0, xi0, xi0) == pytest.approx(4.0, rel=1e-13)

    def test_defining_relation(self):
        rng = np.random.default_rng(35)
        for _ in range(300):
            kp, k1, k2, xp, x1, x2 = random_inputs(rng)
            xi = aggregate_focal_parameter(kp, k1, k2, xp, x1, x2)
            ab = a_plus_b_plus(kp, k1, k2, xp, x1, x2)
            sigma = k1 * x1 + k2 * x2 + kp * xp
            assert xi / ab == pytest.approx(
                kp * kp * x1 * x2 * xp / (sigma * sigma), rel=1e-12
            )

    def test_scale_invariance_in_xi(self):
        # sigma * numerator is quadratic-plus-linear = cubic total, matching
        # the cubic denominator: A+B+ is unchanged under xi_j -> s xi_j
        rng = np.random.default_rng(36)
        for _ in range(100):
            kp, k1, k2, xp, x1, x2 = random_inputs(rng)
            s = rng.uniform(0.1, 10.0)
            base = a_plus_b_plus(kp, k1, k2, xp, x1, x2)
            scaled = a_plus_b_plus(kp, k1, k2, s * xp, s * x1, s * x2)
            assert scaled == pytest.approx(base, rel=1e-12)

    def test_swap_symmetry(self):
        rng = np.random.default_rng(37)
        for _ in range(100):
            kp, k1, k2, xp, x1, x2 = random_inputs(rng)
            a = a_plus_b_plus(kp, k1, k2, xp, x1, x2)
            b = a_plus_b_plus(kp, k2, k1, xp, x2, x1)
            assert a == pytest.approx(b, rel=1e-13)

    def test_zero_focal_parameter_rejected(self):
        with pytest.raises(DegenerateConfigurationError):
            a_plus_b_plus(1.4e7, 7e6, 7e6, 0.0, 0.5, 0.5)


class TestPhaseMismatch:
    def test_band_center(self):
        assert phase_mismatch_phi(0.0, 0.0, 1.8, 1.76, 1.85, 1e-2, CONSTANTS.c) == 0.0

    def test_narrowband_pump_linear_in_difference(self):
        ng1, ng2, ngp = 1.76, 1.85, 1.80
        Lz, c = 1e-2, CONSTANTS.c
        dwm = 3.7e11
        phi = phase_mismatch_phi(0.0, dwm, ngp, ng1, ng2, Lz, c)
        assert phi == pytest.approx((ng1 - ng2) / (2 * c) * dwm * Lz, rel=1e-14)
        assert phase_mismatch_phi(0.0, 2 * dwm, ngp, ng1, ng2, Lz, c) == pytest.approx(
            2 * phi, rel=1e-14
        )

    def test_degenerate_group_indices_flat(self):
        ng = 1.8
        for dwm in (0.0, 1e11, -3e12):
            assert phase_mismatch_phi(0.0, dwm, 1.9, ng, ng, 1e-2, CONSTANTS.c) == 0.0

    def test_qpm_shift_offset(self):
        phi = phase_mismatch_phi(0.0, 0.0, 1.8, 1.76, 1.85, 1e-2, CONSTANTS.c,
                                 qpm_shift=0.25)
        assert phi == 0.25


class TestOverlapSimplified:
    def test_collimated_unmatched_limit(self):
        # phi = 0, xi -> 0, C = 0: the axial integral tends to 2
        params = OverlapParams(xi_agg=1e-9, C_quad=0.0, D_norm=3.2e11,
                               a_plus_b_plus=4.0, phi=0.0)
        chi, wp, w1, w2, Lz = 4.8e-12, 26e-6, 38e-6, 37e-6, 1e-2
        got = overlap_simplified(params, chi, wp, w1, w2, Lz)
        expected = -1j * chi * math.sqrt(2 / math.pi) * wp * w1 * w2 * params.D_norm * 2.0
        assert got == pytest.approx(expected, rel=1e-9)

    def test_axial_integral_identity(self):
        # numerical check of the arctangent reduction at xi = 1: pi/2
        for xi in (0.1, 1.0, 10.0):
            val, _ = quad(lambda l: 1.0 / (1.0 + l * l * xi * xi), -1.0, 1.0,
                          epsabs=1e-13, epsrel=1e-13)
            assert abs(val - 2.0 * math.atan(xi) / xi) <= 1e-10
        val, _ = quad(lambda l: 1.0 / (1.0 + l * l), -1.0, 1.0,
                      epsabs=1e-13, epsrel=1e-13)
        assert abs(val - math.pi / 2.0) <= 1e-10

    def test_linear_in_chi(self):
        params = OverlapParams(xi_agg=0.8, C_quad=0.002, D_norm=3.2e11,
                               a_plus_b_plus=4.1, phi=1.7)
        base = overlap_simplified(params, 1e-12, 26e-6, 38e-6, 37e-6, 1e-2)
        scaled = overlap_simplified(params, 7e-12, 26e-6, 38e-6, 37e-6, 1e-2)
        assert scaled == pytest.approx(7.0 * base, rel=1e-14)

    def test_near_pole_refused(self):
        # large C with tiny xi parks a denominator root on the interval
        params = OverlapParams(xi_agg=1e-7, C_quad=1e14, D_norm=3.2e11,
                               a_plus_b_plus=4.0, phi=0.0)
        with pytest.raises(OverlapSingularityError):
            overlap_simplified(params, 4.8e-12, 26e-6, 38e-6, 37e-6, 1e-2)

    def test_nonconvergence_carries_estimate(self):
        # a mismatch far beyond what the subdivision budget can resolve
        from spdc.errors import QuadratureError

        params = OverlapParams(xi_agg=0.5, C_quad=0.0, D_norm=3.2e11,
                               a_plus_b_plus=4.0, phi=1e7)
        with pytest.raises(QuadratureError):
            overlap_simplified(params, 4.8e-12, 26e-6, 38e-6, 37e-6, 1e-2,
                               quad_tol=1e-12)


class TestOverlapDirect:
    def test_zero_nonlinearity(self, ppktp_base_beams):
        material = MaterialOptics(
            n_p=ppktp_base_beams.pump.n, n_1=ppktp_base_beams.signal.n,
            n_2=ppktp_base_beams.idler.n,
            ng_p=1.81, ng_1=1.76, ng_2=1.85,
            d_eff=0.0, crystal_length=ppktp_base_beams.crystal_length,
        )
        assert overlap_direct(ppktp_base_beams, material, 0.0) == 0.0

    def test_collimated_sinc_suppression(self):
        # |O(dk)| / |O(0)| tracks |sinc(dk Lz / 2)| for weak focusing
        Lz = 5e-3
        n = 1.8
        lam1 = lam2 = 1.55e-6
        lamp = 0.775e-6
        xi = 0.005
        kp = 2 * math.pi * n / lamp
        k1 = k2 = 2 * math.pi * n / lam1
        beams = BeamTriple(
            GaussianMode(lamp, n, math.sqrt(Lz / (kp * xi))),
            GaussianMode(lam1, n, math.sqrt(Lz / (k1 * xi))),
            GaussianMode(lam2, n, math.sqrt(Lz / (k2 * xi))),
            crystal_length=Lz,
        )
        material = MaterialOptics(n, n, n, 1.85, 1.84, 1.86, 2.4e-12, Lz)
        base = abs(overlap_direct(beams, material, 0.0))
        for m in (0.5, 1.5, 2.5, 4.5, 8.5):
            dk = 2.0 * m * math.pi / Lz
            ratio = abs(overlap_direct(beams, material, dk)) / base
            x = dk * Lz / 2.0
            assert abs(ratio - abs(math.sin(x) / x)) <= 0.02

    def test_matches_simplified_on_random_configs(self):
        rng = np.random.default_rng(40)
        for _ in range(4):
            beams, material, dk = random_beam_config(rng)
            direct = overlap_direct(beams, material, dk, quad_tol=1e-10)
            params = overlap_params(beams, delta_k=dk)
            simplified = overlap_simplified(
                params, material.chi2_eff, *beams.waists(),
                beams.crystal_length, quad_tol=1e-10,
            )
            assert abs(direct - simplified) <= 1e-9 * abs(direct)

    def test_qpm_peak_at_first_order(self):
        Lz, period = 1e-3, 10e-6
        n = 1.8
        lam1 = lam2 = 1.55e-6
        lamp = 0.775e-6
        kp = 2 * math.pi * n / lamp
        k1 = k2 = 2 * math.pi * n / lam1
        xi = 0.05
        beams = BeamTriple(
            GaussianMode(lamp, n, math.sqrt(Lz / (kp * xi))),
            GaussianMode(lam1, n, math.sqrt(Lz / (k1 * xi))),
            GaussianMode(lam2, n, math.sqrt(Lz / (k2 * xi))),
            crystal_length=Lz,
        )
        material = MaterialOptics(n, n, n, 1.85, 1.84, 1.86, 2.4e-12, Lz,
                                  poling_period=period)
        dk0 = 2.0 * math.pi / period
        step = 2.0 * math.pi / Lz
        dks = dk0 + step * np.linspace(-3, 3, 13)
        mags = [abs(overlap_direct(beams, material, dk, 1e-8)) for dk in dks]
        peak = dks[int(np.argmax(mags))]
        assert abs(peak - dk0) <= step


class TestOverlapParamsBundle:
    def test_fields_consistent(self, ppktp_base_beams):
        dk = 123.0
        p = overlap_params(ppktp_base_beams, delta_k=dk)
        k_p, k_1, k_2 = ppktp_base_beams.wavevectors()
        xis = (ppktp_base_beams.xi_p, ppktp_base_beams.xi_1, ppktp_base_beams.xi_2)
        assert p.xi_agg == aggregate_focal_parameter(k_p, k_1, k_2, *xis)
        assert p.phi == dk * ppktp_base_beams.crystal_length
        assert p.D_norm > 0
