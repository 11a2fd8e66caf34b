import cmath
from fractions import Fraction

import numpy as np
import pytest

from clext import (
    ConjugationViolationError,
    LengthMismatchError,
    NonUnitaryError,
    RepKind,
    SumNotZeroError,
    classify,
    energy_level,
    from_alpha,
    from_kappa,
    sample_bfb_alpha,
    structure_function,
)

LAMBDAS = (2, 3, 4, 5, 6)


def dft_alpha(lam, kappa):
    """Independent Fourier-sum oracle for the sector couplings."""
    out = []
    for mu in range(lam):
        total = 0j
        for nu in range(1, lam):
            total += cmath.exp(2j * cmath.pi * mu * nu / lam) * kappa[nu - 1]
        out.append(total)
    return out


def idft_kappa(lam, alpha):
    """Independent inverse-transform oracle."""
    out = []
    for nu in range(1, lam):
        total = 0j
        for mu in range(lam):
            total += cmath.exp(-2j * cmath.pi * mu * nu / lam) * alpha[mu]
        out.append(total / lam)
    return out


def random_constrained_kappa(lam, rng):
    kappa = np.zeros(lam - 1, dtype=complex)
    for mu in range(1, lam):
        partner = lam - mu
        if mu < partner:
            kappa[mu - 1] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            kappa[partner - 1] = kappa[mu - 1].conjugate()
        elif mu == partner:
            kappa[mu - 1] = complex(rng.uniform(-1, 1), 0.0)
    return kappa


class TestFromKappa:
    def test_lam2_real_coupling(self):
        spec = from_kappa(2, [0.5])
        np.testing.assert_allclose(spec.alpha, [0.5, -0.5], atol=1e-15)

    def test_lam3_zero_input(self):
        spec = from_kappa(3, [0.0, 0.0])
        np.testing.assert_array_equal(spec.alpha, [0.0, 0.0, 0.0])

    def test_lam3_complex_pair(self):
        # frozen from the loop oracle above
        spec = from_kappa(3, [0.25 + 0.25j, 0.25 - 0.25j])
        expected = [0.5, -0.6830127018922193, 0.18301270189221946]
        np.testing.assert_allclose(spec.alpha, expected, atol=1e-12)
        assert abs(spec.alpha.sum()) < 1e-12

    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_matches_loop_oracle(self, lam):
        rng = np.random.default_rng(100 + lam)
        for _ in range(10):
            kappa = random_constrained_kappa(lam, rng)
            spec = from_kappa(lam, kappa)
            oracle = dft_alpha(lam, kappa)
            np.testing.assert_allclose(spec.alpha, [v.real for v in oracle], atol=1e-13)

    def test_conjugation_violation(self):
        with pytest.raises(ConjugationViolationError):
            from_kappa(2, [0.3 + 0.1j])
        with pytest.raises(ConjugationViolationError):
            from_kappa(3, [0.25 + 0.25j, 0.25 + 0.25j])

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            from_kappa(3, [0.5])


class TestFromAlpha:
    def test_lam2_inverse(self):
        spec = from_alpha(2, [1.0, -1.0])
        oracle = idft_kappa(2, [1.0, -1.0])
        np.testing.assert_allclose(spec.kappa, oracle, atol=1e-15)
        np.testing.assert_allclose(spec.kappa, [1.0], atol=1e-15)

    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_zero_alpha_gives_zero_kappa(self, lam):
        spec = from_alpha(lam, np.zeros(lam))
        np.testing.assert_allclose(spec.kappa, np.zeros(lam - 1), atol=1e-15)

    def test_sum_not_zero_rejected(self):
        with pytest.raises(SumNotZeroError, match="sum"):
            from_alpha(3, [1.0, -0.5, -0.4])

    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_roundtrip_both_directions(self, lam):
        rng = np.random.default_rng(200 + lam)
        for _ in range(10):
            kappa = random_constrained_kappa(lam, rng)
            back = from_alpha(lam, from_kappa(lam, kappa).alpha).kappa
            np.testing.assert_allclose(back, kappa, atol=1e-13)

            alpha = rng.uniform(-1, 1, lam)
            alpha -= alpha.mean()
            back_alpha = from_kappa(lam, from_alpha(lam, alpha).kappa).alpha
            np.testing.assert_allclose(back_alpha, alpha, atol=1e-13)

    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_derived_vectors(self, lam):
        rng = np.random.default_rng(300 + lam)
        alpha = rng.uniform(-1, 1, lam)
        alpha -= alpha.mean()
        spec = from_alpha(lam, alpha)
        assert spec.beta[0] == 0.0
        np.testing.assert_allclose(spec.beta, np.concatenate([[0], np.cumsum(alpha)[:-1]]))
        # gamma is stored as the exact sum beta + alpha/2; the subtracted
        # form holds to rounding
        np.testing.assert_array_equal(spec.gamma, spec.beta + spec.alpha / 2)
        np.testing.assert_allclose(spec.gamma - spec.beta, spec.alpha / 2, atol=1e-12)

    def test_spec_arrays_are_readonly(self):
        spec = from_alpha(2, [0.5, -0.5])
        with pytest.raises(ValueError):
            spec.alpha[0] = 1.0


class TestStructureFunction:
    def test_vanishes_at_zero(self):
        for lam in LAMBDAS:
            rng = np.random.default_rng(lam)
            spec = from_alpha(lam, sample_bfb_alpha(lam, rng))
            assert structure_function(spec, 0) == 0.0

    def test_worked_values(self):
        spec = from_alpha(3, [1.0, -0.5, -0.5])
        assert structure_function(spec, 1) == 2.0
        assert structure_function(spec, 2) == 2.5
        assert structure_function(spec, 3) == 3.0

    def test_zero_at_one_for_descending_spec(self):
        spec = from_alpha(2, [-1.0, 1.0])
        assert structure_function(spec, 1) == 0.0

    def test_step_equals_one_plus_alpha(self):
        rng = np.random.default_rng(5)
        for lam in LAMBDAS:
            spec = from_alpha(lam, sample_bfb_alpha(lam, rng))
            for n in range(3 * lam):
                step = structure_function(spec, n + 1) - structure_function(spec, n)
                assert abs(step - (1 + spec.alpha[n % lam])) < 1e-12

    def test_rejects_negative_index(self):
        spec = from_alpha(2, [0.0, 0.0])
        with pytest.raises(ValueError):
            structure_function(spec, -1)


class TestClassify:
    def test_bfb_example(self):
        result = classify(from_alpha(3, [1.0, -0.5, -0.5]))
        assert result.kind is RepKind.BOUNDED_FROM_BELOW
        assert result.dim is None
        np.testing.assert_allclose(result.witnesses, [2.0, 2.5])

    def test_finite_dim_example(self):
        result = classify(from_alpha(2, [-1.0, 1.0]))
        assert result.kind is RepKind.FINITE_DIM
        assert result.dim == 1

    def test_undeformed_is_bfb(self):
        assert classify(from_alpha(2, [0.0, 0.0])).is_bounded_from_below

    def test_non_unitary_region(self):
        # F(1) < 0 with no earlier zero: neither representation exists
        with pytest.raises(NonUnitaryError):
            classify(from_alpha(3, [-1.5, 0.5, 1.0]))


class TestEnergyLevel:
    def test_undeformed(self):
        spec = from_alpha(3, [0.0, 0.0, 0.0])
        for n in range(10):
            assert energy_level(spec, n) == n + 0.5

    def test_worked_values(self):
        spec = from_alpha(3, [1.0, -0.5, -0.5])
        assert energy_level(spec, 0) == 1.0
        assert energy_level(spec, 1) == 2.25
        assert energy_level(spec, 2) == 2.75
        assert energy_level(spec, 3) == 4.0

    def test_lam2_constant_shift(self):
        nu = 0.75
        spec = from_alpha(2, [nu, -nu])
        for n in range(8):
            assert abs(energy_level(spec, n) - (n + 0.5 + nu / 2)) < 1e-14

    def test_family_spacing_is_exact(self):
        # evaluated in exact rational arithmetic: the closed form cancels
        # gamma identically, so the spacing is lam with no tolerance at all
        rng = np.random.default_rng(17)
        for lam in LAMBDAS:
            spec = from_alpha(lam, sample_bfb_alpha(lam, rng))
            for n in range(4 * lam):
                gamma = Fraction(spec.gamma[n % lam])
                e_n = Fraction(n) + Fraction(1, 2) + gamma
                e_up = Fraction(n + lam) + Fraction(1, 2) + gamma
                assert e_up - e_n == lam
                # float evaluation agrees with the exact value to an ulp
                assert abs(energy_level(spec, n) - float(e_n)) < 1e-12

    def test_matches_structure_average(self):
        rng = np.random.default_rng(23)
        for lam in LAMBDAS:
            spec = from_alpha(lam, sample_bfb_alpha(lam, rng))
            for n in range(3 * lam):
                average = (structure_function(spec, n) + structure_function(spec, n + 1)) / 2
                assert abs(energy_level(spec, n) - average) < 1e-13


class TestSampler:
    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_samples_are_admissible(self, lam):
        rng = np.random.default_rng(400 + lam)
        for _ in range(20):
            alpha = sample_bfb_alpha(lam, rng)
            assert abs(alpha.sum()) < 1e-12
            assert classify(from_alpha(lam, alpha)).is_bounded_from_below
