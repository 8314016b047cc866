"""Dispersion models, susceptibilities and the poling profile."""

import math

import numpy as np
import pytest

from spdc import (
    CONSTANTS,
    DispersionModel,
    MaterialOptics,
    group_index,
    inverse_chi2,
    load_builtin_material,
    poling_profile,
    refractive_index,
    wavenumber,
)
from spdc.errors import ConfigError, DomainError, WavelengthRangeError
from spdc.materials import builtin_material_names, domain_walls

EPS0 = CONSTANTS.epsilon0

VACUUM = DispersionModel("vacuum", "", "constant", (1.0,), (1e-8, 1e-3))

BUILTINS = ("vacuum", "ktp_y", "ktp_z", "ppln_mgo_e")


def models_under_test():
    return [load_builtin_material(name) for name in BUILTINS]


class TestRefractiveIndex:
    def test_vacuum_identity(self):
        assert refractive_index(VACUUM, 810e-9) == 1.0

    def test_ktp_y_group_index_near_table_value(self):
        # pump-wavelength group index consistent with the published 1.811(2)
        model = load_builtin_material("ktp_y")
        assert abs(group_index(model, 775e-9) - 1.811) <= 0.002

    def test_local_smoothness(self):
        model = load_builtin_material("ktp_z")
        rng = np.random.default_rng(11)
        for lam in rng.uniform(0.6e-6, 3.0e-6, 25):
            delta = lam * 1e-5
            n0 = refractive_index(model, lam)
            n1 = refractive_index(model, lam + delta)
            # local Lipschitz bound from the analytic slope, with headroom
            slope = abs(n0 - group_index(model, lam)) / lam
            assert abs(n1 - n0) <= 2.0 * (slope + 1e-3 / lam * 1e-6) * delta + 1e-12

    def test_out_of_range_names_bound(self):
        model = load_builtin_material("ktp_y")
        with pytest.raises(WavelengthRangeError, match="below lambda_min"):
            refractive_index(model, 100e-9)
        with pytest.raises(WavelengthRangeError, match="above lambda_max"):
            refractive_index(model, 10e-6)

    def test_deterministic(self):
        model = load_builtin_material("ppln_mgo_e")
        a = refractive_index(model, 812.3e-9)
        b = refractive_index(model, 812.3e-9)
        assert a == b  # bit identical


class TestGroupIndex:
    def test_constant_model(self):
        assert group_index(VACUUM, 810e-9) == 1.0

    @pytest.mark.parametrize("name", BUILTINS)
    def test_matches_finite_difference(self, name):
        model = load_builtin_material(name)
        lo, hi = model.valid_range
        rng = np.random.default_rng(hash(name) % 2**32)
        lams = rng.uniform(lo * 1.05, hi * 0.95, 100)
        for lam in lams:
            h = lam * 1e-6
            fd = refractive_index(model, lam) - lam * (
                refractive_index(model, lam + h) - refractive_index(model, lam - h)
            ) / (2.0 * h)
            ng = group_index(model, lam)
            assert abs(ng - fd) <= 1e-8 * abs(ng)

    def test_ppln_table_value(self):
        # shipped PPLN-like model reproduces the published pump group index
        model = load_builtin_material("ppln_mgo_e")
        assert abs(group_index(model, 775e-9) - 2.292) <= 0.001

    def test_boundary_rejected(self):
        model = load_builtin_material("ktp_y")
        lo, hi = model.valid_range
        with pytest.raises(WavelengthRangeError):
            group_index(model, lo)
        with pytest.raises(WavelengthRangeError):
            group_index(model, hi)


class TestWavenumber:
    def test_unit_values(self):
        assert wavenumber(1.0, 2.0 * math.pi) == pytest.approx(1.0, rel=1e-15)
        assert wavenumber(2.0, 1e-6) == pytest.approx(4.0 * math.pi * 1e6, rel=1e-15)

    def test_consistent_with_omega_over_c(self):
        model = load_builtin_material("ktp_y")
        lam = 810e-9
        n = refractive_index(model, lam)
        omega = 2.0 * math.pi * CONSTANTS.c / lam
        assert wavenumber(n, lam) == pytest.approx(omega / CONSTANTS.c * n, rel=1e-12)

    def test_nonpositive_wavelength(self):
        with pytest.raises(DomainError):
            wavenumber(1.5, 0.0)


class TestInverseChi2:
    def test_unit_index_limit(self):
        chi = 3.1e-12
        assert inverse_chi2(chi, 1.0, 1.0, 1.0) == pytest.approx(
            -chi / EPS0**2, rel=1e-15
        )

    def test_index_scaling(self):
        chi = 3.1e-12
        base = inverse_chi2(chi, 1.0, 1.0, 1.0)
        doubled = inverse_chi2(chi, 2.0, 2.0, 2.0)
        assert doubled == pytest.approx(base / 64.0, rel=1e-14)

    def test_direct_substitution(self):
        # chi = 2e-12, all indices 2: zeta = -2e-12 / (64 eps0^2)
        val = inverse_chi2(2e-12, 2.0, 2.0, 2.0)
        assert val == pytest.approx(-2e-12 / (64.0 * EPS0**2), rel=1e-14)

    def test_sign_always_negative(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            chi = rng.uniform(1e-13, 1e-11)
            n = rng.uniform(1.0, 3.0, 3)
            assert inverse_chi2(chi, *n) < 0.0


class TestPolingProfile:
    def test_unpoled_center(self):
        assert poling_profile(0.0, None, 1e-3) == 1.0

    def test_outside_medium(self):
        assert poling_profile(0.6e-3, None, 1e-3) == 0.0
        assert poling_profile(-0.6e-3, 10e-6, 1e-3) == 0.0

    def test_first_domain_positive(self):
        Lz, period = 1e-3, 10e-6
        assert poling_profile(-Lz / 2 + 1e-9, period, Lz) == 1.0

    def test_values_and_domain_count(self):
        Lz, period = 200e-6, 20e-6  # commensurate: 20 half-period domains
        z = np.linspace(-Lz / 2 + 1e-12, Lz / 2 - 1e-12, 40001)
        prof = poling_profile(z, period, Lz)
        assert set(np.unique(prof)) <= {-1.0, 1.0}
        flips = int(np.sum(prof[1:] != prof[:-1]))
        assert flips + 1 == int(round(Lz / (period / 2)))

    def test_nonpositive_period(self):
        with pytest.raises(DomainError):
            poling_profile(0.0, -1e-6, 1e-3)

    def test_qpm_first_order_peak(self):
        # profile integrated against exp(-i dk z) peaks at dk = 2 pi / period
        Lz, period = 2e-3, 10e-6
        z = np.linspace(-Lz / 2, Lz / 2, 400001)
        prof = poling_profile(z, period, Lz)
        dk0 = 2.0 * math.pi / period
        dks = np.linspace(0.2 * dk0, 2.0 * dk0, 181)
        mags = [abs(np.trapezoid(prof * np.exp(-1j * dk * z), z)) for dk in dks]
        peak = dks[int(np.argmax(mags))]
        step = dks[1] - dks[0]
        assert abs(peak - dk0) <= step

    def test_domain_walls_inside(self):
        walls = domain_walls(10e-6, 1e-3)
        assert np.all(np.abs(walls) < 0.5e-3)
        assert np.all(np.diff(walls) > 0)


class TestPhysicalConstants:
    def test_codata_values_frozen(self):
        assert CONSTANTS.c == 299792458.0
        assert CONSTANTS.hbar == pytest.approx(1.054571817e-34, rel=1e-9)
        assert CONSTANTS.epsilon0 == pytest.approx(8.8541878128e-12, rel=1e-10)
        with pytest.raises(Exception):
            CONSTANTS.c = 1.0  # immutable


class TestMaterialOptics:
    def test_chi2_definition(self):
        m = MaterialOptics(1.5, 1.5, 1.5, 1.6, 1.6, 1.7, d_eff=3e-12,
                           crystal_length=1e-3)
        assert m.chi2_eff == 2.0 * m.d_eff

    def test_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            MaterialOptics(0.9, 1.5, 1.5, 1.6, 1.6, 1.7, 3e-12, 1e-3)
        with pytest.raises(DomainError):
            MaterialOptics(1.5, 1.5, 1.5, 1.6, 1.6, 1.7, -3e-12, 1e-3)
        with pytest.raises(DomainError):
            MaterialOptics(1.5, 1.5, 1.5, 1.6, 1.6, 1.7, 3e-12, 0.0)

    def test_zero_d_eff_allowed(self):
        m = MaterialOptics(1.5, 1.5, 1.5, 1.6, 1.6, 1.7, 0.0, 1e-3)
        assert m.chi2_eff == 0.0


class TestLoader:
    def test_unknown_form_rejected(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(
            '{"name": "x", "axis": "", "form": "cauchy", '
            '"coefficients": [1.5], "valid_range_m": [1e-7, 1e-5]}'
        )
        from spdc import load_dispersion_model

        with pytest.raises(ConfigError, match="cauchy"):
            load_dispersion_model(bad)

    def test_unphysical_range_rejected(self, tmp_path):
        # declared range crosses the IR pole where n^2 drops below 1
        import json

        from spdc import load_dispersion_model

        doc = {
            "name": "bad", "axis": "", "form": "pole",
            "coefficients": [4.59423, 0.06206, 0.04763, 110.80672, 86.12171, 0.0],
            "valid_range_m": [4.3e-07, 9.4e-06],
        }
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        with pytest.raises(ConfigError, match="n\\^2"):
            load_dispersion_model(bad)

    def test_builtins_enumerate_and_load(self):
        names = builtin_material_names()
        for name in BUILTINS:
            assert name in names
        for model in models_under_test():
            lo, hi = model.valid_range
            assert refractive_index(model, 0.5 * (lo + hi)) >= 1.0
