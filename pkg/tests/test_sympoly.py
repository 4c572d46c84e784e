import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import separated_dirichlet
from symentropy.errors import DomainViolation
from symentropy.sympoly import (MAX_DIM, as_complex_sympoly, as_prob_vector, as_sympoly, binom,
                                elementary_symmetric, horner, p_coeffs, p_eval, q_coeffs, q_eval,
                                roots_from_symmetric, trailing_zeros)

vectors = st.lists(st.floats(0.0, 10.0, allow_nan=False), min_size=1, max_size=8)


@given(vectors)
def test_elementary_symmetric_matches_subset_sums(x):
    e = elementary_symmetric(x)
    ref = oracles.esym(x)
    for a, b in zip(e, ref):
        assert abs(a - float(b)) <= 1e-13 * max(1.0, abs(float(b)))


def test_elementary_symmetric_small_cases():
    np.testing.assert_allclose(elementary_symmetric([0.6, 0.4]), [1.0, 0.24])
    np.testing.assert_allclose(elementary_symmetric([1, 2, 3]), [6, 11, 6])
    np.testing.assert_allclose(elementary_symmetric([0.5, 0.5]), [1.0, 0.25])


def test_q_and_p_coefficients():
    e = [6.0, 11.0, 6.0]
    np.testing.assert_allclose(q_coeffs(e), [1, 6, 11, 6])
    np.testing.assert_allclose(p_coeffs(e), [1, -6, 11, -6])
    # q(tau) = prod (tau + x_j), p(z) = prod (z - x_j)
    assert q_eval(e, 1.0) == pytest.approx(2 * 3 * 4)
    assert p_eval(e, 2.0) == pytest.approx(0.0, abs=1e-12)
    assert horner([1.0, 2.0, 3.0], 2.0) == pytest.approx(11.0)


def test_trailing_zeros():
    assert trailing_zeros([1.0, 0.25]) == 0
    assert trailing_zeros([1.0, 0.0, 0.0]) == 2
    assert trailing_zeros([1.0, 0.0, 0.1]) == 0


def test_binom():
    assert binom(5, 2) == 10
    assert binom(3, 0) == 1


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_roots_round_trip_for_separated_x(rng, d):
    for _ in range(20):
        x = np.sort(separated_dirichlet(rng, d))
        rs = roots_from_symmetric(elementary_symmetric(x))
        assert rs.classification == "all-real-nonnegative"
        np.testing.assert_allclose(rs.real_roots(), x, atol=1e-10)


def test_repeated_roots_reported_with_multiplicity():
    rs = roots_from_symmetric(elementary_symmetric([0.25, 0.25, 0.5]))
    assert sorted(rs.multiplicities) == [1, 2]
    np.testing.assert_allclose(np.sort(rs.distinct), [0.25, 0.5], atol=1e-7)


def test_zero_roots_are_exact():
    rs = roots_from_symmetric([1.0, 0.0, 0.0])
    np.testing.assert_allclose(np.sort(rs.real_roots()), [0.0, 0.0, 1.0], atol=1e-14)


def test_complex_roots_classified():
    # z^2 - z + 0.3 has discriminant 1 - 1.2 < 0
    rs = roots_from_symmetric([1.0, 0.3])
    assert rs.classification == "conjugate-pairs"
    with pytest.raises(DomainViolation):
        rs.real_roots()


@pytest.mark.parametrize("bad", [[-0.1, 1.1], [np.nan, 1.0], [], [[0.5, 0.5]]])
def test_prob_vector_validation(bad):
    with pytest.raises(DomainViolation):
        as_prob_vector(bad)


def test_dimension_cap():
    with pytest.raises(DomainViolation):
        as_sympoly(np.ones(MAX_DIM + 1))


def test_complex_point_validation():
    e, k = as_complex_sympoly([1.0, 0.2 + 0.1j, 0.01])
    assert k == 2
    with pytest.raises(DomainViolation):
        as_complex_sympoly([1.0, 0.2 - 0.1j])
    with pytest.raises(DomainViolation):
        as_complex_sympoly([1.0, 0.2 + 0.1j, 0.01 + 0.1j])
    with pytest.raises(DomainViolation):
        as_complex_sympoly([2.0, 0.2 + 0.1j])
