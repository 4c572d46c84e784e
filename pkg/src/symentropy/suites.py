"""Named verification suites over seeded random inputs.

Each suite draws one random input per sample from its own stream
(derived from the seed, the suite name, the dimension and the sample
index) and runs the matching check.  Per-sample reports are merged in
sample order, so the result does not depend on the number of threads.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from math import comb
from zlib import crc32

import numpy as np

from . import bernstein as bp
from . import identities as ids
from .halfaxis import entropy_e, subentropy_e
from .sympoly import elementary_symmetric

THETAS = (1.0, 1.5, 2.0, 5.0)


def random_x(rng, d):
    """Strictly positive probability vector (flat Dirichlet)."""
    return rng.dirichlet(np.ones(d))


def random_e_point(rng, d):
    """e-point from real x (even draws) or from the extended cone (odd draws)."""
    if rng.integers(2) == 0:
        return elementary_symmetric(random_x(rng, d) * rng.uniform(0.5, 2.0))
    return random_cone_point(rng, d)


def random_cone_point(rng, d, e1_range=(0.5, 2.0)):
    """Point of the positive cone; e_k up to twice its value at the uniform x."""
    e1 = rng.uniform(*e1_range)
    ks = np.arange(1, d + 1)
    cap = np.array([comb(d, int(k)) for k in ks]) * (e1 / d) ** ks
    e = rng.uniform(0.05, 2.0, d) * cap
    e[0] = e1
    return e


def _sum_identities(rng, d):
    return ids.check_sum_identities(random_e_point(rng, d))


def _derivative_bounds(rng, d):
    return ids.check_derivative_bounds(elementary_symmetric(random_x(rng, d)), max_m=3)


def _de1_bound(rng, d):
    return ids.check_de1_bound(random_cone_point(rng, d, (1.0, 3.0)))


def _hq_duality(rng, d):
    return ids.check_HQ_duality(random_e_point(rng, d))


def _index_sum(rng, d):
    return ids.check_index_sum(random_e_point(rng, d))


def _reduction(rng, d):
    return ids.check_reduction(random_x(rng, d), int(rng.integers(2, 4)))


def _hq_difference(rng, d):
    return ids.check_hq_difference(elementary_symmetric(random_x(rng, d)))


def _scaling(rng, d):
    i = int(rng.integers(len(THETAS) + 1))
    theta = THETAS[i] if i < len(THETAS) else rng.uniform(1.0, 5.0)
    return ids.check_scaling(random_x(rng, d), theta)


def _schur(rng, d):
    x = random_x(rng, d)
    return ids.check_schur_concavity(x, ids.robin_hood(x, rng, int(rng.integers(1, 6))))


def _bipartite(rng, d):
    cols = int(rng.integers(2, 4))
    if rng.uniform() < 0.2:
        joint = np.outer(random_x(rng, d), random_x(rng, cols))
    else:
        joint = rng.dirichlet(np.ones(d * cols)).reshape(d, cols)
    return ids.check_bipartite(joint)


def _majorant_dominance(rng, d):
    return ids.check_majorant_dominance(random_x(rng, d))


def _bound_attainment(rng, d):
    e1 = rng.uniform(0.5, 2.0)
    e2 = rng.uniform(0.0, (d - 1) * e1 ** 2 / (2 * d))
    return ids.merge_reports([ids.check_bound_attainment(e1, e2, d),
                              ids.check_upper_bounds(random_x(rng, d))])


def _pick(rng, d):
    k = int(rng.integers(2, d + 1))
    return bp.pick_sweep(d, k, bp.pick_grid(1, rng))


def _complete_monotonicity(rng, d):
    e = elementary_symmetric(random_x(rng, d))
    k = int(rng.integers(2, d + 1))
    reps = [bp.check_complete_monotonicity(f, e, k, orders=4, label=name)
            for name, f in bp.cm_evaluators(k).items()]
    return ids.merge_reports(reps)


def _lk_reconstruction(rng, d):
    e = elementary_symmetric(random_x(rng, d))
    e[0] = 1.0
    rh, rq = bp.lk_reconstruct_H(e), bp.lk_reconstruct_Q(e)
    h, q = entropy_e(e), subentropy_e(e)
    return ids.make_report("lk_reconstruction", [max(abs(rh - h), abs(rq - q))],
                           [{"e": [float(v) for v in e], "H": h, "H_rec": rh, "Q": q, "Q_rec": rq}])


SUITES = {
    "sum_identities": _sum_identities,
    "derivative_bounds": _derivative_bounds,
    "de1_bound": _de1_bound,
    "hq_duality": _hq_duality,
    "index_sum": _index_sum,
    "reduction": _reduction,
    "hq_difference": _hq_difference,
    "scaling": _scaling,
    "schur": _schur,
    "bipartite": _bipartite,
    "majorant_dominance": _majorant_dominance,
    "bound_attainment": _bound_attainment,
    "pick": _pick,
    "complete_monotonicity": _complete_monotonicity,
    "lk_reconstruction": _lk_reconstruction,
}


def sample_rng(seed, name, d, i):
    ss = np.random.SeedSequence(seed, spawn_key=(crc32(name.encode()), d, i))
    return np.random.Generator(np.random.PCG64(ss))


def run_suite(name, d, samples=None, seed=0, threads=1):
    """Run one named suite and merge its per-sample reports."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    if d < 2:
        raise ValueError("suites need d >= 2")
    if samples is None:
        samples = ids.TOLERANCES[name][1]
    fn = SUITES[name]

    def one(i):
        return fn(sample_rng(seed, name, d, i), d)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(one, range(samples)))
    else:
        reports = [one(i) for i in range(samples)]
    return replace(ids.merge_reports(reports), samples=samples)


# checks that can also be run at one user-supplied e-point
POINT_CHECKS = {
    "sum_identities": ids.check_sum_identities,
    "derivative_bounds": ids.check_derivative_bounds,
    "de1_bound": ids.check_de1_bound,
    "hq_duality": ids.check_HQ_duality,
    "index_sum": ids.check_index_sum,
    "hq_difference": ids.check_hq_difference,
}


def run_at_point(name, e):
    """Run a point check at a given e-point instead of random samples."""
    if name not in POINT_CHECKS:
        raise KeyError(f"suite {name!r} does not accept a fixed e-point; "
                       f"those that do: {', '.join(POINT_CHECKS)}")
    return POINT_CHECKS[name](e)


def run_all(d, samples=None, seed=0, threads=1, names=None):
    """Every suite (or the listed ones) at dimension ``d``, in registry order."""
    return [run_suite(n, d, samples, seed, threads) for n in (names or SUITES)]
