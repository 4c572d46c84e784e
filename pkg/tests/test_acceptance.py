"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run under pytest (``pytest tests/test_acceptance.py -v``) or directly
(``python tests/test_acceptance.py``) to print the ten lines only.
"""

import itertools
import json
import math
import subprocess
import sys

import numpy as np

from symentropy import bernstein as bp
from symentropy import identities as ids
from symentropy import suites
from symentropy.cli import main
from symentropy.contour import entropy_contour, subentropy_contour
from symentropy.direct import entropy_direct, subentropy_direct
from symentropy.haar import HaarConfig, estimate_Q, harmonic_tail
from symentropy.halfaxis import dH, dQ, entropy_e, entropy_e_log_form, subentropy_e
from symentropy.sympoly import elementary_symmetric

SEED = 42


def criterion_1():
    """Four H evaluators and three Q evaluators agree within 1e-8."""
    worst_h = worst_q = 0.0
    for d in range(2, 7):
        rng = np.random.default_rng([SEED, d])
        n = 0
        while n < 200:
            x = rng.dirichlet(np.ones(d))
            if np.unique(x).size < d:
                continue
            n += 1
            e = elementary_symmetric(x)
            hs = [entropy_direct(x), entropy_e(e), entropy_e_log_form(e), entropy_contour(e)]
            qs = [subentropy_direct(x), subentropy_e(e), subentropy_contour(e)]
            worst_h = max(worst_h, max(abs(a - b) for a, b in itertools.combinations(hs, 2)))
            worst_q = max(worst_q, max(abs(a - b) for a, b in itertools.combinations(qs, 2)))
    ok = worst_h < 1e-8 and worst_q < 1e-8
    return ok, f"1000 vectors, max pairwise |dH| = {worst_h:.2e}, |dQ| = {worst_q:.2e}"


def criterion_2():
    """Closed-form values at e = (1, 1/4) within 1e-9."""
    e = [1.0, 0.25]
    ln2 = math.log(2)
    got = {
        "H": (entropy_e(e), ln2),
        "Q": (subentropy_e(e), ln2 - 0.5),
        "dH/de2": (dH(e, (2,)), 2.0),
        "d2H/de1^2": (dH(e, (1, 1)), -2.0 / 3.0),
        "dQ/de2": (dQ(e, (2,)), 2.0 / 3.0),
    }
    err = max(abs(a - b) for a, b in got.values())
    return err < 1e-9, f"5 values, max error {err:.2e}"


IDENTITY_SUITES = {
    "sum_identities": 100, "hq_duality": 100, "index_sum": 100, "derivative_bounds": 100,
    "de1_bound": 100, "hq_difference": 100, "scaling": 100, "reduction": 100,
    "schur": 50, "bipartite": 50,
}


def criterion_3():
    """Identity suites pass at their registry tolerances for d = 2..6."""
    failed = []
    worst = {}
    for d in range(2, 7):
        for name, n in IDENTITY_SUITES.items():
            r = suites.run_suite(name, d, samples=n, seed=SEED)
            worst[name] = max(worst.get(name, 0.0), r.max_residual)
            if not r.passed:
                failed.append(f"{name}@d={d}")
    detail = f"{len(IDENTITY_SUITES)} suites x 5 dims"
    if failed:
        detail += ", failed: " + ", ".join(failed)
    else:
        detail += f", worst residual {max(worst.values()):.2e}"
    return not failed, detail


def criterion_4():
    """Bounds reproduced at the canonical set; zero slack for d = 2."""
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for d in range(2, 7):
        for _ in range(20):
            e1 = rng.uniform(0.3, 3.0)
            e2 = rng.uniform(0.0, 1.0) * (d - 1) * e1 ** 2 / (2 * d)
            x = ids.canonical_set(e1, e2, d)
            b = ids.hq_upper_bounds(e1, e2, d)
            e = elementary_symmetric(x)
            worst = max(worst, abs(entropy_e(e) - b.H_bound), abs(subentropy_e(e) - b.Q_bound))
    slack = 0.0
    for e1, frac in itertools.product(np.linspace(0.5, 2.0, 5), np.linspace(0.05, 1.0, 10)):
        e2 = frac * e1 ** 2 / 4
        b = ids.hq_upper_bounds(e1, e2, 2)
        slack = max(slack, abs(b.H_bound - entropy_e([e1, e2])), abs(b.Q_bound - subentropy_e([e1, e2])))
    ok = worst < 1e-10 and slack < 1e-10
    return ok, f"canonical-set error {worst:.2e}, d=2 slack over 50 points {slack:.2e}"


def criterion_5():
    """Levy-Khintchine reconstruction within 1e-4; affine constants below 1e-6."""
    worst = 0.0
    for d in (2, 3, 4):
        rng = np.random.default_rng([SEED, d])
        for _ in range(20):
            e = elementary_symmetric(rng.dirichlet(np.ones(d)))
            e[0] = 1.0
            worst = max(worst, abs(bp.lk_reconstruct_H(e) - entropy_e(e)),
                        abs(bp.lk_reconstruct_Q(e) - subentropy_e(e)))
    affine = max(max(abs(v) for v in bp.lk_affine_constants(d, k).values())
                 for d in (2, 3, 4) for k in range(2, d + 1))
    ok = worst < 1e-4 and affine < 1e-6
    return ok, f"60 points, max |delta| {worst:.2e}; max affine constant {affine:.2e}"


def criterion_6():
    """Im H > 0 and Im Q > 0 at 50 upper-half-plane points per (d, k)."""
    rng = np.random.default_rng(SEED)
    smallest = math.inf
    failed = []
    for d in range(2, 6):
        for k in range(2, d + 1):
            r = bp.pick_sweep(d, k, bp.pick_grid(50, rng))
            smallest = min(smallest, -r.max_residual)
            if not r.passed:
                failed.append((d, k))
    return not failed, f"14 (d, k) pairs x 50 points, smallest Im part {smallest:.2e}"


def criterion_7():
    """Finite-difference complete monotonicity up to order 4, no hard failures."""
    rng = np.random.default_rng(SEED)
    hard = inconclusive = checks = 0
    for d in range(2, 6):
        for k in range(2, d + 1):
            for _ in range(2):
                e = elementary_symmetric(rng.dirichlet(np.ones(d)))
                for name, f in bp.cm_evaluators(k).items():
                    r = bp.check_complete_monotonicity(f, e, k, orders=4, label=name)
                    checks += 1
                    inconclusive += r.inconclusive
                    hard += not r.passed
    return hard == 0, f"{checks} sign tests, {hard} hard failures, {inconclusive} inconclusive differences"


def criterion_8():
    """Haar Monte Carlo within 4 standard errors; maximally mixed states exact."""
    zs = []
    for eigs in ((0.6, 0.4), (0.5, 0.3, 0.2)):
        est = estimate_Q(HaarConfig(len(eigs), eigs, 100000, SEED))
        zs.append(est.z_score)
    exact = True
    for d in (2, 3, 4):
        est = estimate_Q(HaarConfig(d, (1.0 / d,) * d, 1000, SEED))
        exact &= est.std_error == 0.0 and abs(est.implied_Q - (math.log(d) - harmonic_tail(d))) < 1e-14
    ok = all(abs(z) < 4 for z in zs) and exact
    return ok, f"z-scores {zs[0]:+.2f}, {zs[1]:+.2f}; maximally mixed exact: {exact}"


def criterion_9():
    """grad --e 1,0 --order 2 reports a structured divergence."""
    import contextlib
    import io
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = main(["grad", "--e", "1,0", "--order", "2"])
    rec = json.loads(buf.getvalue())
    div = rec.get("error", {}).get("divergent", {}).get("H", {})
    ok = code == 5 and div.get("kind") == "divergent_integral" and "dH" not in rec["results"]
    return ok, f"exit {code}, record {div.get('kind')} value {div.get('value')} at tau={div.get('endpoint')}"


def criterion_10():
    """verify --suite all is byte-identical for 1 and 8 threads."""
    outs = []
    for threads in ("1", "8"):
        p = subprocess.run([sys.executable, "-m", "symentropy", "verify", "--suite", "all", "--d", "4",
                            "--samples", "100", "--seed", "42", "--threads", threads],
                           capture_output=True)
        outs.append((p.returncode, p.stdout))
    same = outs[0][1] == outs[1][1]
    return same and outs[0][0] == 0, f"identical: {same}, exit codes {outs[0][0]}, {outs[1][0]}, {len(outs[0][1])} bytes"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def _line(n, ok, detail):
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def _gate(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print("\n" + _line(n, ok, detail))
    assert ok, detail


def test_criterion_01_cross_oracle_equivalence(capsys):
    _gate(1, capsys)


def test_criterion_02_closed_form_spot_values(capsys):
    _gate(2, capsys)


def test_criterion_03_identity_suite(capsys):
    _gate(3, capsys)


def test_criterion_04_bound_attainment(capsys):
    _gate(4, capsys)


def test_criterion_05_levy_khintchine_reconstruction(capsys):
    _gate(5, capsys)


def test_criterion_06_pick_property(capsys):
    _gate(6, capsys)


def test_criterion_07_complete_monotonicity(capsys):
    _gate(7, capsys)


def test_criterion_08_haar_monte_carlo(capsys):
    _gate(8, capsys)


def test_criterion_09_divergence_handling(capsys):
    _gate(9, capsys)


def test_criterion_10_determinism(capsys):
    _gate(10, capsys)


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        results.append(ok)
        print(_line(i, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
