import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from symentropy.direct import entropy_direct, subentropy_direct
from symentropy.errors import DivergentIntegral, DomainViolation
from symentropy.halfaxis import (as_multi_index, dH, dQ, derivative_complex, entropy_e,
                                 entropy_e_complex, entropy_e_log_form, halfaxis_results,
                                 subentropy_e, subentropy_e_complex)
from symentropy.sympoly import elementary_symmetric

E0 = [1.0, 0.25]


def test_spot_values():
    assert entropy_e(E0) == pytest.approx(math.log(2), abs=1e-12)
    assert entropy_e_log_form(E0) == pytest.approx(math.log(2), abs=1e-10)
    assert subentropy_e(E0) == pytest.approx(math.log(2) - 0.5, abs=1e-12)
    assert dH(E0, (2,)) == pytest.approx(2.0, abs=1e-10)
    assert dH(E0, (1, 1)) == pytest.approx(-2.0 / 3.0, abs=1e-10)
    assert dQ(E0, (2,)) == pytest.approx(2.0 / 3.0, abs=1e-10)
    # with q = (tau + 1/2)^2 the e1-integrands reduce to powers of tau + 1/2
    assert dH(E0, (1,)) == pytest.approx(math.log(2) - 2.0, abs=1e-10)
    assert dQ(E0, (1,)) == pytest.approx(math.log(2) - 11.0 / 6.0, abs=1e-10)


def test_empty_and_trivial_points():
    assert entropy_e([1.0, 0.0]) == 0.0
    assert subentropy_e([1.0, 0.0, 0.0]) == 0.0
    assert entropy_e([0.0, 0.0]) == 0.0


def test_trailing_zeros_do_not_change_values():
    assert entropy_e([1.0, 0.24, 0.0]) == pytest.approx(entropy_e([1.0, 0.24]), abs=1e-14)
    assert subentropy_e([1.0, 0.24, 0.0, 0.0]) == pytest.approx(subentropy_e([1.0, 0.24]), abs=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_real_points_against_mpmath(rng, d):
    for _ in range(10):
        x = rng.dirichlet(np.ones(d)) * rng.uniform(0.5, 2.0)
        e = elementary_symmetric(x)
        h, q = float(oracles.entropy(x)), float(oracles.subentropy(x))
        assert abs(entropy_e(e) - h) < 1e-11
        assert abs(entropy_e_log_form(e) - h) < 1e-9
        assert abs(subentropy_e(e) - q) < 1e-11


@pytest.mark.parametrize("e", [[1.0, 0.3], [1.0, 0.5, 0.2], [0.8, 0.3, 0.05, 0.01], [2.0, 1.8, 0.7]])
def test_complex_root_points_against_mpmath_quadrature(e):
    # p has complex roots here: no root formula, the tanh-sinh integral is the oracle
    assert abs(entropy_e(e) - float(oracles.halfaxis_H_mp(e))) < 1e-10
    assert abs(entropy_e_log_form(e) - float(oracles.halfaxis_H_mp(e))) < 1e-9
    assert abs(subentropy_e(e) - float(oracles.halfaxis_Q_mp(e))) < 1e-10


@given(st.integers(2, 6), st.integers(0, 10 ** 6))
def test_halfaxis_matches_direct(d, seed):
    x = np.random.default_rng(seed).dirichlet(np.ones(d))
    e = elementary_symmetric(x)
    assert abs(entropy_e(e) - entropy_direct(x)) < 1e-10
    assert abs(subentropy_e(e) - subentropy_direct(x)) < 1e-10


DERIVATIVE_CASES = [
    ([0.6, 0.4], [(1,), (2,), (1, 1), (1, 2), (2, 2), (1, 1, 2)]),
    ([0.5, 0.3, 0.2], [(1,), (2,), (3,), (1, 2), (2, 3), (3, 3), (1, 1, 1)]),
    ([0.4, 0.3, 0.2, 0.1], [(2,), (4,), (2, 2), (1, 3), (4, 4)]),
]


@pytest.mark.parametrize("x,indices", DERIVATIVE_CASES)
def test_derivatives_against_numerical_differentiation(x, indices):
    e = elementary_symmetric(x)
    for idx in indices:
        for func, fn in (("H", dH), ("Q", dQ)):
            ref = float(oracles.derivative_of_e(func, e, idx))
            assert abs(fn(e, idx) - ref) < 1e-9 * max(1.0, abs(ref)), (func, idx)


def test_second_derivatives_depend_on_index_sum_only():
    e = elementary_symmetric([0.4, 0.3, 0.2, 0.1])
    assert dH(e, (1, 3)) == pytest.approx(dH(e, (2, 2)), rel=1e-12)
    assert dQ(e, (1, 4)) == pytest.approx(dQ(e, (2, 3)), rel=1e-12)


def test_index_order_irrelevant():
    e = elementary_symmetric([0.5, 0.3, 0.2])
    assert dH(e, (1, 2, 3)) == dH(e, (3, 2, 1))


def test_divergence_reported_with_sign():
    # d = 2, e2 = 0: dH/de2 = int 1/(tau (tau + 1)) diverges at 0
    with pytest.raises(DivergentIntegral) as info:
        dH([1.0, 0.0], (2,))
    assert info.value.sign == 1
    assert info.value.as_record()["value"] == "+inf"
    with pytest.raises(DivergentIntegral) as info:
        dH([1.0, 0.0], (2, 2))
    assert info.value.sign == -1
    with pytest.raises(DivergentIntegral):
        dQ([1.0, 0.0, 0.0], (3,))


def test_boundary_derivative_that_stays_finite():
    # dQ/de2 at (1, 0) = int 1/(tau + 1)^2 = 1
    assert dQ([1.0, 0.0], (2,)) == pytest.approx(1.0, abs=1e-12)


def test_complex_step_matches_closed_form():
    e = elementary_symmetric([0.5, 0.3, 0.2])
    h = 1e-20
    for k in (1, 2, 3):
        z = e.astype(complex)
        z[k - 1] += 1j * h
        assert derivative_complex(z, "Q", imag_step=h) == pytest.approx(dQ(e, (k,)), rel=1e-10)
        assert derivative_complex(z, "H").imag / h == pytest.approx(dH(e, (k,)), rel=1e-8)
        assert derivative_complex(z, "dH", 2, imag_step=h) == pytest.approx(dH(e, (2, k)), rel=1e-10)
    with pytest.raises(ValueError):
        derivative_complex(e, "R")


def test_complex_continuation():
    assert entropy_e_complex([1.0, 0.25]).real == pytest.approx(math.log(2), abs=1e-10)
    assert subentropy_e_complex([1.0, 0.25]).real == pytest.approx(math.log(2) - 0.5, abs=1e-10)
    v = entropy_e_complex([1.0, 0.1 + 0.2j, 0.02])
    assert v.imag > 0
    with pytest.raises(DomainViolation):
        entropy_e_complex([1.0, 0.1 - 0.2j])


def test_halfaxis_results_diagnostics():
    res = halfaxis_results([1.0, 0.24])
    assert set(res) == {"H", "H_log_form", "Q"}
    assert res["H"].panels >= 8
    assert halfaxis_results([0.0]) == {}


def test_multi_index_validation():
    assert as_multi_index(2, 3) == (2,)
    with pytest.raises(DomainViolation):
        as_multi_index((), 3)
    with pytest.raises(DomainViolation):
        as_multi_index((4,), 3)
