"""Command-line front end.

Every invocation writes one structured record to stdout (JSON by default,
or CSV with ``--format csv``); human-readable messages go to stderr.
Exit codes: 0 success, 2 usage or parse error, 3 domain violation,
4 quadrature or convergence failure, 5 divergent integral, 10+n when n
verification checks fail (``haar`` counts as one check).
"""

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import bernstein as bp
from . import identities as ids
from . import suites
from .contour import entropy_contour_result, subentropy_contour_result
from .direct import entropy_direct, subentropy_direct
from .errors import (ContourViolation, ConvergenceFailure, DivergentIntegral, DomainViolation,
                     NoiseFloorExceeded, NotComparable, QuadratureFailure)
from .haar import HaarConfig, estimate_Q
from .halfaxis import as_multi_index, dH, dQ, entropy_e, halfaxis_results, subentropy_e
from .sympoly import as_prob_vector, as_sympoly, elementary_symmetric, roots_from_symmetric

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_QUADRATURE = 4
EXIT_DIVERGENT = 5
EXIT_CHECKS = 10

FD_REL_STEP = 1e-4


def _floats(text):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _ints(text):
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _tolerance(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError("tolerance must be >= 0")
    return v


# ---------------------------------------------------------------------------
# serialization

def _clean(v):
    """Plain JSON types; non-finite floats become the strings inf, -inf, nan."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_clean(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, complex):
        return [_clean(v.real), _clean(v.imag)]
    return v


def to_json(record):
    # floats use repr, the shortest string that round-trips (at most 17 digits)
    return json.dumps(_clean(record), indent=2, allow_nan=False)


def _flatten(prefix, v, out):
    if isinstance(v, dict):
        for k, x in v.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), x, out)
    elif isinstance(v, list) and v and isinstance(v[0], dict):
        for i, x in enumerate(v):
            _flatten(f"{prefix}[{i}]", x, out)
    else:
        out.append((prefix, json.dumps(v) if isinstance(v, list) else v))


REPORT_COLUMNS = ("identity_name", "samples", "cases", "max_residual", "pass", "tolerance",
                  "inconclusive")


def to_csv(record):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    rec = _clean(record)
    reports = rec.get("results", {}).get("reports")
    if reports is not None:
        w.writerow(REPORT_COLUMNS)
        for r in reports:
            w.writerow([r[c] for c in REPORT_COLUMNS])
    else:
        rows = []
        _flatten("", {"results": rec.get("results", {}), "error": rec.get("error")}, rows)
        w.writerow(("name", "value"))
        w.writerows((k, v) for k, v in rows if k != "error")
    return buf.getvalue()


def write_density_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("r", "t_d", "weight_H", "weight_Q"))
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


# ---------------------------------------------------------------------------
# commands

def _deltas(values):
    names = [k for k, v in values.items() if v is not None]
    return {f"{a}-{b}": abs(values[a] - values[b])
            for i, a in enumerate(names) for b in names[i + 1:]}


def cmd_eval(args, rec, unit):
    if (args.x is None) == (args.e is None):
        raise DomainViolation("give exactly one of --x or --e")
    diag = rec["diagnostics"]
    x = None
    if args.x is not None:
        x = as_prob_vector(args.x)
        e = elementary_symmetric(x)
        rec["inputs"]["x"] = x
    else:
        e = as_sympoly(args.e)
        rec["inputs"]["e"] = e
        try:
            rs = roots_from_symmetric(e)
            if rs.classification == "all-real-nonnegative":
                x = np.sort(rs.real_roots())[::-1]
            else:
                diag["direct"] = "skipped: p has complex roots"
        except (ConvergenceFailure, DomainViolation) as err:
            diag["direct"] = f"skipped: {err}"
    H = {"direct": None, "halfaxis": None, "log_form": None, "contour": None}
    Q = {"direct": None, "halfaxis": None, "contour": None}
    if x is not None:
        H["direct"], Q["direct"] = entropy_direct(x), subentropy_direct(x)
    quad = halfaxis_results(e)
    if quad:
        H["halfaxis"], H["log_form"] = float(quad["H"].value.real), float(quad["H_log_form"].value.real)
        Q["halfaxis"] = float(quad["Q"].value.real)
        diag["quadrature"] = {k: {"panels": r.panels, "error": r.error} for k, r in quad.items()}
    else:
        H["halfaxis"] = H["log_form"] = Q["halfaxis"] = 0.0
    try:
        hc, qc = entropy_contour_result(e), subentropy_contour_result(e)
        H["contour"], Q["contour"] = hc.value, qc.value
        diag["contour"] = {"nodes": max(hc.nodes, qc.nodes),
                           "imag_residual": max(hc.imag_residual, qc.imag_residual)}
    except (ContourViolation, ConvergenceFailure) as err:
        diag["contour"] = f"skipped: {err}"
    H = {k: unit(v) for k, v in H.items() if v is not None}
    Q = {k: unit(v) for k, v in Q.items() if v is not None}
    dh, dq = _deltas(H), _deltas(Q)
    rec["results"] = {
        "e": e,
        "H": H["direct"] if "direct" in H else H["halfaxis"],
        "Q": Q["direct"] if "direct" in Q else Q["halfaxis"],
        "H_evaluators": H,
        "Q_evaluators": Q,
        "deltas": {"H": dh, "Q": dq},
        "max_delta": max(list(dh.values()) + list(dq.values()) + [0.0]),
    }
    return EXIT_OK


def _fd_derivative(func, e, idx):
    """Central (or one-sided near e_l = 0) difference of the next-lower derivative."""
    l = idx[-1]
    if len(idx) == 1:
        base = entropy_e if func == "H" else subentropy_e
    else:
        lower = dH if func == "H" else dQ

        def base(z):
            return lower(z, idx[:-1])
    h = FD_REL_STEP * max(abs(e[l - 1]), 1e-2)

    def at(shift):
        z = e.copy()
        z[l - 1] += shift
        return base(z)
    if e[l - 1] >= h:
        return (at(h) - at(-h)) / (2 * h)
    return (-3 * at(0.0) + 4 * at(h) - at(2 * h)) / (2 * h)


def cmd_grad(args, rec, unit):
    rec["inputs"].update(e=args.e, order=args.order)
    e = as_sympoly(args.e)
    d = e.size
    idx = as_multi_index(args.order, d)
    m, K = len(idx), sum(idx)
    sign = (-1) ** (m - 1)
    res, divergent = {}, {}
    for func, fn in (("H", dH), ("Q", dQ)):
        try:
            val = fn(e, idx)
        except DivergentIntegral as err:
            divergent[func] = err.as_record()
            continue
        entry = {"value": unit(val)}
        try:
            fd = _fd_derivative(func, e, idx)
            entry["finite_difference"] = unit(fd)
            entry["fd_delta"] = unit(abs(fd - val))
        except DivergentIntegral:
            entry["finite_difference"] = None
        if K >= 2 and e[0] > 0 and K <= (m if func == "H" else m + 1) * d:
            bound = ids.derivative_bound(func, d, m, K, e[0])
            entry["bound"] = {"c": unit(bound), "signed_value": unit(sign * val),
                              "slack": unit(sign * val - bound)}
        res[f"d{func}"] = entry
    try:
        real = roots_from_symmetric(e).classification == "all-real-nonnegative"
    except (ConvergenceFailure, DomainViolation):
        real = False
    rec["results"] = res
    rec["diagnostics"]["real_roots"] = real
    if "bound" in res.get("dH", {}) or "bound" in res.get("dQ", {}):
        rec["diagnostics"]["bound_note"] = "the c-bounds hold for e-points of real x (real roots)"
    if divergent:
        rec["error"] = {"kind": "divergent_integral", "divergent": divergent}
        name = ", ".join(f"d{f}" for f in divergent)
        print(f"error: {name}{tuple(idx)} diverges at e={[float(v) for v in e]}", file=sys.stderr)
        return EXIT_DIVERGENT
    return EXIT_OK


def cmd_verify(args, rec, unit):
    names = list(suites.SUITES) if args.suite == "all" else [args.suite]
    rec["inputs"].update(suite=args.suite, d=args.d, samples=args.samples, seed=args.seed,
                         tol=args.tol)
    if args.e is not None:
        if args.suite == "all":
            raise DomainViolation("--e needs a single suite")
        e = as_sympoly(args.e)
        rec["inputs"]["e"] = e
        try:
            reports = [suites.run_at_point(args.suite, e)]
        except KeyError as err:
            raise DomainViolation(err.args[0])
    else:
        if args.d < 2:
            raise DomainViolation("--d must be at least 2")
        reports = [suites.run_suite(n, args.d, args.samples, args.seed, args.threads)
                   for n in names]
    out = []
    for r in reports:
        dct = r.to_dict()
        if args.tol is not None:
            dct["tolerance"] = args.tol
            dct["pass"] = r.max_residual < args.tol
        out.append(dct)
    failed = sum(not r["pass"] for r in out)
    rec["results"] = {"reports": out, "failed": failed, "all_pass": failed == 0}
    for r in out:
        if not r["pass"]:
            print(f"FAIL {r['identity_name']}: max residual {r['max_residual']:.3g} "
                  f"(tolerance {r['tolerance']:g})", file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_CHECKS + failed


def cmd_bounds(args, rec, unit):
    rec["inputs"].update(e1=args.e1, e2=args.e2, d=args.d)
    a, b = ids.canonical_majorant(args.e1, args.e2, args.d)
    ub = ids.hq_upper_bounds(args.e1, args.e2, args.d)
    lower = ids.hq_difference_bound(elementary_symmetric(ids.canonical_set(args.e1, args.e2, args.d)))
    rec["results"] = {
        "a": a,
        "b": b,
        "H_bound": unit(ub.H_bound),
        "Q_bound": unit(ub.Q_bound),
        "HU_bound": unit(ub.HU_bound),
        "HQ_lower_bound": unit(lower.extra["first_term"]),
        "HQ_lower_bound_at_canonical": unit(lower.bound_value),
        "H_minus_Q_at_canonical": unit(lower.actual),
    }
    return EXIT_OK


def cmd_haar(args, rec, unit):
    eigs = args.eigs
    dim = args.dim if args.dim is not None else len(eigs)
    rec["inputs"].update(dim=dim, eigs=eigs, samples=args.samples, seed=args.seed)
    est = estimate_Q(HaarConfig(dim, tuple(eigs), args.samples, args.seed), threads=args.threads)
    ok = abs(est.z_score) < 4
    rec["results"] = {
        "mean_HM": unit(est.mean_HM),
        "std_error": unit(est.std_error),
        "implied_Q": unit(est.implied_Q),
        "reference_Q": unit(est.reference_Q),
        "z_score": est.z_score,
        "samples": est.samples,
        "pass": ok,
    }
    if not ok:
        print(f"FAIL haar: |z| = {abs(est.z_score):.3g} >= 4", file=sys.stderr)
    return EXIT_OK if ok else EXIT_CHECKS + 1


def cmd_lk(args, rec, unit):
    e = as_sympoly(args.e)
    rec["inputs"].update(e=e, grid=args.grid, out=args.out)
    rh, rq = bp.lk_reconstruct_H(e), bp.lk_reconstruct_Q(e)
    h, q = entropy_e(e), subentropy_e(e)
    rec["results"] = {
        "H_rec": unit(rh),
        "Q_rec": unit(rq),
        "H_halfaxis": unit(h),
        "Q_halfaxis": unit(q),
        "delta_H": unit(abs(rh - h)),
        "delta_Q": unit(abs(rq - q)),
    }
    if args.out is not None:
        rows = bp.density_grid(e.size, args.grid)
        write_density_csv(args.out, rows)
        rec["diagnostics"]["density_rows"] = len(rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and entry point

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="output format of the record (default json)")
    common.add_argument("--base", choices=("e", "2"), default="e",
                        help="report entropies in nats (e) or bits (2); display only")
    common.add_argument("--threads", type=int, default=1,
                        help="worker cap for sampling commands; results do not depend on it")
    common.add_argument("--timings", action="store_true",
                        help="add wall-clock runtimes to the diagnostics (makes output run-dependent)")

    p = argparse.ArgumentParser(prog="symentropy",
                                description="Entropy and subentropy in elementary symmetric coordinates.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="H and Q from every applicable evaluator")
    s.add_argument("--x", type=_floats, help="probability vector, e.g. 0.6,0.4")
    s.add_argument("--e", type=_floats, help="elementary symmetric polynomials e1,...,ed")
    s.set_defaults(handler=cmd_eval)

    s = sub.add_parser("grad", parents=[common], help="mixed derivatives of H and Q in e")
    s.add_argument("--e", type=_floats, required=True)
    s.add_argument("--order", type=_ints, required=True, help="multi-index k1,k2,... (1-based)")
    s.set_defaults(handler=cmd_grad)

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("--suite", choices=("all",) + tuple(suites.SUITES), default="all")
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--samples", type=int, default=None, help="samples per suite (default: registry)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=_tolerance, default=None, help="override the registry tolerance")
    s.add_argument("--e", type=_floats, default=None, help="check one e-point instead of sampling")
    s.set_defaults(handler=cmd_verify)

    s = sub.add_parser("bounds", parents=[common], help="upper bounds on H and Q from e1, e2")
    s.add_argument("--e1", type=float, required=True)
    s.add_argument("--e2", type=float, required=True)
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(handler=cmd_bounds)

    s = sub.add_parser("haar", parents=[common], help="Monte Carlo estimate of Q over Haar bases")
    s.add_argument("--dim", type=int, default=None)
    s.add_argument("--eigs", type=_floats, required=True)
    s.add_argument("--samples", type=int, default=100000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(handler=cmd_haar)

    s = sub.add_parser("lk", parents=[common], help="Levy-Khintchine reconstruction (e1 = 1)")
    s.add_argument("--e", type=_floats, required=True)
    s.add_argument("--grid", type=int, default=64, help="density grid size per axis for --out")
    s.add_argument("--out", default=None, help="write the density grid as CSV to this path")
    s.set_defaults(handler=cmd_lk)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    factor = 1.0 / math.log(2) if args.base == "2" else 1.0

    def unit(v):
        return None if v is None else v * factor

    rec = {"command": args.command, "inputs": {"base": args.base}, "results": {}, "diagnostics": {}}
    start = time.perf_counter()
    try:
        code = args.handler(args, rec, unit)
    except DivergentIntegral as err:
        rec["error"] = err.as_record()
        code = EXIT_DIVERGENT
    except (DomainViolation, NotComparable, ContourViolation) as err:
        rec["error"] = {"kind": "domain_violation", "message": str(err)}
        code = EXIT_DOMAIN
    except QuadratureFailure as err:
        rec["error"] = {"kind": "quadrature_failure", "message": str(err), "value": err.value,
                        "error_estimate": err.error, "panels": err.panels}
        code = EXIT_QUADRATURE
    except (ConvergenceFailure, NoiseFloorExceeded) as err:
        rec["error"] = {"kind": "convergence_failure", "message": str(err)}
        code = EXIT_QUADRATURE
    if "error" in rec and "message" in rec["error"]:
        print(f"error: {rec['error']['message']}", file=sys.stderr)
    if args.timings:
        rec["diagnostics"]["runtime_ms"] = 1e3 * (time.perf_counter() - start)
    sys.stdout.write(to_csv(rec) if args.format == "csv" else to_json(rec) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
