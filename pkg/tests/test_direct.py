import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from symentropy.direct import entropy_direct, entropy_pair, subentropy_direct
from symentropy.errors import DomainViolation


def harmonic_tail(d):
    return sum(1.0 / k for k in range(2, d + 1))


def test_closed_forms():
    assert entropy_direct([0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-15)
    assert subentropy_direct([0.5, 0.5]) == pytest.approx(math.log(2) - 0.5, abs=1e-15)
    assert entropy_direct([1.0, 0.0]) == 0.0
    assert subentropy_direct([1.0, 0.0]) == 0.0


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 10])
def test_uniform_subentropy(d):
    # maximally mixed: Q = ln d - (1/2 + ... + 1/d)
    assert subentropy_direct(np.full(d, 1.0 / d)) == pytest.approx(
        math.log(d) - harmonic_tail(d), abs=1e-13)


def test_zero_entries_do_not_matter():
    assert subentropy_direct([0.6, 0.4, 0.0]) == pytest.approx(subentropy_direct([0.6, 0.4]), abs=1e-15)
    assert entropy_direct([0.6, 0.0, 0.4]) == entropy_direct([0.6, 0.4])


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_against_mpmath_random(rng, d):
    for _ in range(30):
        x = rng.dirichlet(np.ones(d))
        assert abs(entropy_direct(x) - float(oracles.entropy(x))) < 1e-14
        assert abs(subentropy_direct(x) - float(oracles.subentropy(x))) < 1e-12


@pytest.mark.parametrize("x", [
    [0.5, 0.5 - 1e-9, 1e-9],
    [0.3, 0.3 + 1e-7, 0.4 - 1e-7],
    [0.2, 0.2 + 1e-12, 0.2 + 2e-12, 0.4 - 3e-12],
    [0.25 + 1e-4, 0.25, 0.25 - 1e-4, 0.25 + 2e-4],
    [0.5, 0.3, 0.2 - 4.2e-8, 1e-8, 1.2e-8, 2e-8],
    [0.9, 0.1 - 3e-200, 1e-200, 2e-200],
])
def test_near_degenerate_against_mpmath(x):
    # the mpmath divided-difference sum is exact enough at 50 digits for gaps >= 1e-12
    # (relative to the entries), including clusters of tiny entries
    assert abs(subentropy_direct(x) - float(oracles.subentropy(x))) < 1e-11


@given(st.lists(st.floats(1e-6, 1.0), min_size=2, max_size=6))
def test_subentropy_between_zero_and_entropy(v):
    x = np.array(v) / np.sum(v)
    H, Q = entropy_direct(x), subentropy_direct(x)
    assert -1e-12 <= Q <= H + 1e-12


def test_entropy_pair():
    p = entropy_pair([0.6, 0.4])
    assert p.H == pytest.approx(0.6730116670092565, abs=1e-15)
    assert p.Q == pytest.approx(0.18645353727945918, abs=1e-15)


def test_rejects_negative():
    with pytest.raises(DomainViolation):
        entropy_direct([1.2, -0.2])
