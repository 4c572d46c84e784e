import numpy as np
import pytest

from symentropy import suites


@pytest.mark.parametrize("name", list(suites.SUITES))
def test_each_suite_passes_small(name):
    r = suites.run_suite(name, 3, samples=4, seed=1)
    assert r.identity_name == name
    assert r.samples == 4
    assert r.passed, r.worst_witness


def test_thread_count_does_not_change_reports():
    a = suites.run_suite("hq_duality", 4, samples=12, seed=9, threads=1)
    b = suites.run_suite("hq_duality", 4, samples=12, seed=9, threads=3)
    assert a.to_dict() == b.to_dict()


def test_seed_changes_samples():
    a = suites.run_suite("scaling", 3, samples=5, seed=1)
    b = suites.run_suite("scaling", 3, samples=5, seed=2)
    assert a.worst_witness != b.worst_witness


def test_sample_streams_are_independent_of_order():
    x1 = suites.random_x(suites.sample_rng(0, "schur", 3, 7), 3)
    suites.random_x(suites.sample_rng(0, "schur", 3, 6), 3)
    x2 = suites.random_x(suites.sample_rng(0, "schur", 3, 7), 3)
    np.testing.assert_array_equal(x1, x2)


def test_cone_points_include_complex_roots():
    from symentropy.sympoly import roots_from_symmetric
    rng = np.random.default_rng(0)
    kinds = {roots_from_symmetric(suites.random_cone_point(rng, 3)).classification
             for _ in range(40)}
    assert kinds == {"all-real-nonnegative", "conjugate-pairs"}


def test_run_at_point():
    r = suites.run_at_point("sum_identities", [1.0, 0.25])
    assert r.passed and r.max_residual < 1e-9
    with pytest.raises(KeyError):
        suites.run_at_point("pick", [1.0, 0.25])


def test_unknown_suite_and_dimension():
    with pytest.raises(KeyError):
        suites.run_suite("nope", 3)
    with pytest.raises(ValueError):
        suites.run_suite("schur", 1)
