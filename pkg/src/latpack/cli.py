"""Command-line surface for the lattice construction toolkit.

Every subcommand prints a JSON report envelope on stdout: the parsed
inputs, the command-specific payload, and a meta block with the tool
version, elapsed milliseconds and the tolerance settings in force.  The
theta table additionally supports CSV output.  Exit codes: 0 success,
1 input error, 2 resource-budget error.
"""

import argparse
import csv
import io
import json
import math
import random
import sys
import time
from dataclasses import asdict

from . import __version__, approx, bounds, constants, lattice, museq, thetaflow
from .errors import InputError, ResourceBudgetError
from .lattice import SVector


def _parse_s(text: str) -> SVector:
    try:
        entries = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise InputError(f"could not parse s from {text!r}: {exc}") from exc
    return SVector(entries)


def _envelope(command, inputs, outputs, started, tolerances=None):
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "meta": {
            "version": __version__,
            "elapsed_ms": round(1000.0 * (time.monotonic() - started), 3),
            "tolerances": tolerances or {},
        },
    }


def _emit(envelope) -> None:
    json.dump(envelope, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


# ---------------------------------------------------------------- museq


def _cmd_museq_greedy(args, started):
    seq = museq.greedy_sequence(args.mu, args.dim)
    return _envelope(
        "museq greedy",
        {"mu": args.mu, "dim": args.dim},
        {"s": list(seq.s.entries), "certified": seq.certified},
        started,
        {"svp": "exact integer arithmetic"},
    )


def _cmd_museq_certify(args, started):
    s = _parse_s(args.s)
    minimum, witness = lattice.shortest_vector(
        lattice.basis_from_s(s), upper=args.mu
    )
    certified = witness is None
    return _envelope(
        "museq certify",
        {"s": list(s.entries), "mu": args.mu},
        {
            "certified": certified,
            "minimum_at_least": args.mu if certified else None,
            "violating_norm": None if certified else minimum,
            "witness": None if certified else list(witness),
        },
        started,
        {"svp": "exact integer arithmetic"},
    )


def _cmd_museq_obstructions(args, started):
    s = _parse_s(args.s)
    interval = museq.IntervalSpec.from_bounds(args.lo, args.hi, args.mu, len(s.entries))
    report = museq.interval_obstructions(s, args.mu, interval)
    extension = museq.extend_in_interval(s, args.mu, interval)
    return _envelope(
        "museq obstructions",
        {"s": list(s.entries), "mu": args.mu, "lo": args.lo, "hi": args.hi},
        {
            "k_max": report.k_max,
            "A": report.A,
            "obstructed": {str(k): v for k, v in report.obstructed.items()},
            "witness_counts": {
                str(k): {"X_k0": v[0], "X_k0_primitive": v[1]}
                for k, v in report.witness_counts.items()
            },
            "residue_counts": {
                str(k): v for k, v in report.residue_counts.items()
            },
            "union": report.union,
            "union_size": report.union_size,
            "sigma": interval.sigma,
            "sigma_tilde": interval.sigma_tilde,
            "epsilon": interval.epsilon,
            "smallest_unobstructed": extension,
        },
        started,
        {"enumeration": "exact"},
    )


# -------------------------------------------------------------- lattice


def _cmd_lattice_report(args, started):
    s = _parse_s(args.s)
    report = lattice.density_report(s)
    payload = asdict(report)
    payload["witness"] = list(report.witness)
    return _envelope(
        "lattice report",
        {"s": list(s.entries)},
        payload,
        started,
        {"minimum": "exact", "determinant": "exact", "densities": "float64"},
    )


# --------------------------------------------------------------- bounds


def _cmd_bounds_f(args, started):
    if args.y is None:
        raise InputError("bounds f requires --y")
    value = bounds.eval_F(args.n, args.x, args.y)
    return _envelope(
        "bounds f",
        {"n": args.n, "x": args.x, "y": args.y},
        {"F": value},
        started,
        {"F": "exact sum below crossover, Euler-Maclaurin above"},
    )


def _cmd_bounds_y(args, started):
    value = bounds.eval_Y(args.n, args.x)
    return _envelope(
        "bounds y",
        {"n": args.n, "x": args.x},
        {"Y": value},
        started,
        {"Y": "bisection to float spacing"},
    )


def _cmd_bounds_cn(args, started):
    value = bounds.eval_C(args.n, args.x)
    delta_bound = math.exp(
        -args.n * math.log(2.0) + (args.n / 2.0) * math.log(value)
    )
    return _envelope(
        "bounds cn",
        {"n": args.n, "x": args.x},
        {"C": value, "center_density_bound": delta_bound},
        started,
        {"C": "256-point geometric grid with golden-section refinement"},
    )


def _cmd_bounds_theorem1(args, started):
    residual = bounds.check_theorem1(
        args.n, args.delta_prev, args.delta, form=args.form
    )
    return _envelope(
        "bounds theorem1",
        {
            "n": args.n,
            "delta_prev": args.delta_prev,
            "delta": args.delta,
            "form": args.form,
        },
        {"residual": residual, "holds": residual >= 0.0},
        started,
        {"residual": "float64 finite sum"},
    )


def _cmd_bounds_mordell(args, started):
    value = bounds.mordell_upper(args.n, args.gamma)
    return _envelope(
        "bounds mordell",
        {"n": args.n, "gamma": args.gamma},
        {"gamma_upper": value},
        started,
    )


# ---------------------------------------------------------------- theta


def _cmd_theta_fixpoint(args, started):
    xi, deriv = thetaflow.fixpoint()
    return _envelope(
        "theta fixpoint",
        {},
        {"xi": xi, "derivative": deriv},
        started,
        {"tau": "truncated at 1e-15 relative"},
    )


def _theta_rows(max_n):
    trace = thetaflow.iterate_d(max_n)
    return trace, [asdict(row) for row in trace.rows]


def _cmd_theta_table(args, started):
    trace, rows = _theta_rows(args.max_n)
    if args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["n", "d", "omega_iterate", "scaled_diff", "A"])
        for row in rows:
            writer.writerow(
                [row["n"], row["d"], row["omega_iterate"], row["scaled_diff"], row["A"]]
            )
        sys.stdout.write(buf.getvalue())
        return None
    return _envelope(
        "theta table",
        {"max_n": args.max_n},
        {"rows": rows, "xi": trace.xi, "xi_derivative": trace.xi_derivative},
        started,
        {"f_step": "bisection, 1e-12 relative"},
    )


def _cmd_theta_fit(args, started):
    ladder = tuple(int(x) for x in args.ladder.split(","))
    trace = thetaflow.iterate_d(max(ladder))
    fit = thetaflow.asymptotic_fit(trace, ladder)
    return _envelope(
        "theta fit",
        {"ladder": list(ladder)},
        {
            "c0": fit.c0,
            "c1": fit.c1,
            "c2": fit.c2,
            "c3": fit.c3,
            "xi": trace.xi,
        },
        started,
        {"fit": "exact 4-point Vandermonde solve"},
    )


# ---------------------------------------------------------------- approx


def _cmd_approx(args, started):
    with open(args.gram, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if "gram" not in data:
        raise InputError("gram file needs a 'gram' field")
    gram = data["gram"]
    if "n" in data and len(gram) != data["n"]:
        raise InputError("gram file 'n' does not match the matrix size")
    target = approx.TargetGram.from_matrix(gram)
    result = approx.approximate(target, args.kappa)
    payload = {
        "kappa": result.kappa,
        "B": [list(row) for row in result.B],
        "v": list(result.v),
        "s": list(result.s),
        "gram_error": result.gram_error,
        "saturation_det": approx.saturation_determinant(result),
    }
    if args.verify:
        report = approx.verify_approximation(target, result)
        payload["verification"] = asdict(report)
    return _envelope(
        "approx",
        {"gram": args.gram, "kappa": args.kappa, "verify": args.verify},
        payload,
        started,
        {"kernel": "exact", "gram_error": "float64 Frobenius"},
    )


# ------------------------------------------------------------ verify paper


def _check(name, value, expected, tol, runtime=None):
    passed = abs(value - expected) <= tol
    entry = {
        "name": name,
        "value": value,
        "expected": expected,
        "tolerance": tol,
        "passed": passed,
    }
    if runtime is not None:
        entry["runtime_s"] = round(runtime, 3)
    return entry


def _flag(name, passed, detail=None):
    entry = {"name": name, "passed": bool(passed)}
    if detail is not None:
        entry["detail"] = detail
    return entry


def acceptance_sweep():
    """Run the full verification sweep; returns a list of check dicts."""
    checks = []

    # 1: tightness at n = 2.
    t0 = time.monotonic()
    c2 = bounds.eval_C(2, 1.0)
    checks.append(
        _check("C_2(1) = 2/sqrt(3)", c2, 2.0 / math.sqrt(3.0), 1e-9,
               time.monotonic() - t0)
    )
    res2 = bounds.check_theorem1(2, 0.5, 1.0 / (2.0 * math.sqrt(3.0)))
    checks.append(_check("lifting residual at n=2", res2, 0.0, 1e-12))

    # 2-4: center-density bounds in dimensions 3, 9, 25.
    delta2 = constants.reference(2).center_density
    gamma2 = bounds.convert("center", "hermite", delta2, 2)
    for n, x, expected, tol, name in (
        (3, gamma2, 0.1695, 5e-4, "delta_3 bound"),
        (9, 2.0, 0.0388, 5e-4, "delta_9 bound"),
        (25, 4.0, 0.657, 5e-3, "delta_25 bound"),
    ):
        t0 = time.monotonic()
        value = math.exp(
            -n * math.log(2.0) + (n / 2.0) * math.log(bounds.eval_C(n, x))
        )
        checks.append(_check(name, value, expected, tol, time.monotonic() - t0))

    # 5: fixed point of the transfer map.
    xi, deriv = thetaflow.fixpoint()
    checks.append(_check("fixed point xi = 1/tau(1)", xi, 23.13882534, 1e-7))
    checks.append(_check("derivative at the fixed point", deriv, 0.9135652, 1e-6))

    # 6: convergence table out to dimension 1024.
    t0 = time.monotonic()
    trace = thetaflow.iterate_d(1024)
    table_ok = True
    reference_rows = {
        1: (2.00000000, 2.00000000, 0.0),
        2: (3.62759873, 3.99997210, -0.7447467),
        4: (8.08369319, 7.92472241, 0.6358831),
        8: (18.71971890, 14.38756801, 34.6572071),
        16: (30.69030131, 20.71395996, 159.6214617),
        32: (29.45114255, 22.98242063, 206.9991014),
        64: (25.53248635, 23.13821340, 153.2334688),
        128: (24.17810739, 23.13882533, 133.0281029),
        256: (23.63011883, 23.13882534, 125.7711333),
        512: (23.37820694, 23.13882534, 122.5633803),
        1024: (23.25703467, 23.13882534, 121.0463495),
    }
    for n, (d_ref, w_ref, sd_ref) in reference_rows.items():
        row = trace.row(n)
        if abs(row.d - d_ref) > 1e-6 or abs(row.omega_iterate - w_ref) > 1e-6:
            table_ok = False
        if abs(row.scaled_diff - sd_ref) > 5e-3:
            table_ok = False
    checks.append(
        _flag("convergence table to n=1024", table_ok,
              f"runtime {time.monotonic() - t0:.2f}s")
    )

    # 7: asymptotic fit on the 128..1024 ladder.
    fit = thetaflow.asymptotic_fit(trace)
    checks.append(_check("fit constant term", fit.c0, xi, 1e-4))
    checks.append(_check("fit 1/n coefficient", fit.c1, 119.58193,
                         0.01 * 119.58193))

    # 8: greedy sequences against their closed forms.
    t0 = time.monotonic()
    greedy_ok = True
    for n in range(1, 11):
        seq = museq.greedy_sequence(2, n)
        if seq.s.entries != (1,) * (n + 1) or not seq.certified:
            greedy_ok = False
    for n in range(1, 7):
        seq = museq.greedy_sequence(3, n)
        if seq.s.entries != tuple(range(1, n + 2)) or not seq.certified:
            greedy_ok = False
    checks.append(
        _flag("greedy closed forms (mu=2, mu=3)", greedy_ok,
              f"runtime {time.monotonic() - t0:.2f}s")
    )

    # 9: greedy entry and density bounds for mu up to 12, n up to 8.
    t0 = time.monotonic()
    bounds_ok = True
    for mu in range(2, 13):
        seq = museq.greedy_sequence(mu, 8)
        for n in range(1, 9):
            first, second = museq.greedy_entry_bounds(mu, n)
            entry = seq.s.entries[n]
            if entry > first + 1e-9 or entry > second + 1e-9:
                bounds_ok = False
        report = lattice.density_report(seq.s)
        if report.center_density < museq.greedy_density_bound(mu, 8) - 1e-15:
            bounds_ok = False
    checks.append(
        _flag("greedy entry and density bounds", bounds_ok,
              f"runtime {time.monotonic() - t0:.2f}s")
    )

    # 10: exact identities on random instances.
    rng = random.Random(12345)
    ident_ok = True
    for _ in range(100):
        n = rng.randint(1, 8)
        s = SVector((1,) + tuple(rng.randint(1, 50) for _ in range(n)))
        rows = lattice.basis_from_s(s)
        if lattice.gram_determinant(lattice.gram(rows)) != lattice.determinant(s):
            ident_ok = False
    svp_ok = True
    for _ in range(50):
        n = rng.randint(1, 4)
        s = SVector((1,) + tuple(rng.randint(1, 12) for _ in range(n)))
        minimum, _ = lattice.shortest_vector(lattice.basis_from_s(s))
        if minimum != _brute_minimum(s):
            svp_ok = False
    checks.append(_flag("determinant identity on 100 random s", ident_ok))
    checks.append(_flag("enumeration equals brute force on 50 instances", svp_ok))

    # 11: finite obstruction invariants on 20 sampled triples.
    t0 = time.monotonic()
    obstr_ok = True
    for mu in range(3, 13):
        for dim in (2, 3):
            seq = museq.greedy_sequence(mu, dim)
            s = seq.s
            nxt = museq.greedy_extend(s, mu)
            interval = museq.IntervalSpec.from_bounds(
                max(1, nxt - 3), nxt + 6, mu, len(s.entries)
            )
            report = museq.interval_obstructions(s, mu, interval)
            primitive_total = sum(v[1] for v in report.witness_counts.values())
            for k, ik in report.obstructed.items():
                if len(ik) > report.witness_counts[k][0]:
                    obstr_ok = False
            if report.union_size > primitive_total:
                obstr_ok = False
            blocked = set(report.union)
            for t in interval.integers():
                if museq.certify(s.extended(t), mu) != (t not in blocked):
                    obstr_ok = False
    checks.append(
        _flag("obstruction-set invariants on 20 triples", obstr_ok,
              f"runtime {time.monotonic() - t0:.2f}s")
    )

    # 12: lifting inequality instances and agreement of the three forms.
    inst_ok = True
    forms_ok = True
    delta3 = constants.reference(3).center_density
    delta8 = constants.reference(8).center_density
    delta24 = constants.reference(24).center_density
    for n, prev, cur in (
        (3, delta2, delta3),
        (9, delta8, 0.0442),
        (25, delta24, 0.707),
    ):
        values = [
            bounds.check_theorem1(n, prev, cur, form=form)
            for form in ("center", "density", "hermite")
        ]
        if values[0] < 0.0:
            inst_ok = False
        if max(values) - min(values) > 1e-10 * max(1.0, abs(values[0])):
            forms_ok = False
    checks.append(_flag("lifting inequality instances", inst_ok))
    checks.append(_flag("three equivalent forms agree", forms_ok))

    # 13: constructive approximation properties.
    approx_ok = True
    rng = random.Random(777)
    targets = [
        [[1.0, 0.0], [0.0, 1.0]],
        [[2.0, 1.0], [1.0, 2.0]],
    ]
    for n in (3, 4, 5):
        a = [[rng.gauss(0.0, 1.0) for _ in range(n)] for _ in range(n)]
        g = [
            [sum(a[i][k] * a[j][k] for k in range(n)) + (4.0 if i == j else 0.0)
             for j in range(n)]
            for i in range(n)
        ]
        targets.append(g)
    for g in targets:
        target = approx.TargetGram.from_matrix(g)
        r500 = approx.approximate(target, 500.0)
        r1000 = approx.approximate(target, 1000.0)
        for result in (r500, r1000):
            if any(
                sum(b * v for b, v in zip(row, result.v)) != 0
                for row in result.B
            ):
                approx_ok = False
            if abs(approx.saturation_determinant(result)) != 1:
                approx_ok = False
        if r1000.gram_error > 0.75 * r500.gram_error:
            approx_ok = False
    checks.append(_flag("approximation exactness and convergence", approx_ok))

    # 14: theta bracket and inversion on a 50-point log grid.
    theta_ok = True
    for i in range(50):
        x = math.exp(math.log(0.5) + i * (math.log(50.0) - math.log(0.5)) / 49.0)
        t = thetaflow.tau(x)
        if not (x / 2.0 - 1.0 < t < x / 2.0):
            theta_ok = False
        if t > 1e-12 and abs(thetaflow.psi(t) - x) > 1e-10 * max(1.0, x):
            theta_ok = False
    checks.append(_flag("theta bracket and inversion", theta_ok))

    return checks


def _brute_minimum(s: SVector) -> int:
    """Exhaustive lattice minimum: z_0 is forced by orthogonality, and the
    free coordinates of a shortest vector are bounded by the square root
    of the smallest basis-vector norm."""
    import itertools

    tail = s.entries[1:]
    bound = math.isqrt(min(e * e + 1 for e in tail)) + 1
    best = None
    for z in itertools.product(range(-bound, bound + 1), repeat=len(tail)):
        if not any(z):
            continue
        z0 = -sum(a * b for a, b in zip(z, tail))
        norm = z0 * z0 + sum(x * x for x in z)
        if best is None or norm < best:
            best = norm
    return best


def _cmd_verify_paper(args, started):
    checks = acceptance_sweep()
    return _envelope(
        "verify paper",
        {},
        {
            "checks": checks,
            "passed": sum(1 for c in checks if c["passed"]),
            "failed": sum(1 for c in checks if not c["passed"]),
        },
        started,
        {"sweep": "tolerances recorded per check"},
    )


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latpack",
        description="dense lattices from orthogonal complements, with "
        "exact certification and density-bound verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_museq = sub.add_parser("museq", help="mu-sequence construction")
    museq_sub = p_museq.add_subparsers(dest="subcommand", required=True)

    p = museq_sub.add_parser("greedy", help="greedy mu-sequence")
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=_cmd_museq_greedy)

    p = museq_sub.add_parser("certify", help="certify minimum >= mu")
    p.add_argument("--s", required=True, help="comma-separated entries, s_0 = 1")
    p.add_argument("--mu", type=int, required=True)
    p.set_defaults(func=_cmd_museq_certify)

    p = museq_sub.add_parser("obstructions", help="interval obstruction sets")
    p.add_argument("--s", required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.set_defaults(func=_cmd_museq_obstructions)

    p_lat = sub.add_parser("lattice", help="orthogonal-complement lattices")
    lat_sub = p_lat.add_subparsers(dest="subcommand", required=True)
    p = lat_sub.add_parser("report", help="exact minimum, determinant, densities")
    p.add_argument("--s", required=True)
    p.set_defaults(func=_cmd_lattice_report)

    p_bounds = sub.add_parser("bounds", help="density inequality machinery")
    bounds_sub = p_bounds.add_subparsers(dest="subcommand", required=True)

    p = bounds_sub.add_parser("f", help="evaluate F_n(x, y)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float)
    p.set_defaults(func=_cmd_bounds_f)

    p = bounds_sub.add_parser("y", help="implicit inverse Y_n(x)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=_cmd_bounds_y)

    p = bounds_sub.add_parser("cn", help="envelope C_n(x) and the density bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=_cmd_bounds_cn)

    p = bounds_sub.add_parser("theorem1", help="lifting inequality residual")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta-prev", type=float, required=True, dest="delta_prev")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--form", choices=("density", "center", "hermite"),
                   default="center")
    p.set_defaults(func=_cmd_bounds_theorem1)

    p = bounds_sub.add_parser("mordell", help="Mordell upper bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.set_defaults(func=_cmd_bounds_mordell)

    p_theta = sub.add_parser("theta", help="theta-tail fixed-point flow")
    theta_sub = p_theta.add_subparsers(dest="subcommand", required=True)

    p = theta_sub.add_parser("fixpoint", help="xi = 1/tau(1) and the derivative")
    p.set_defaults(func=_cmd_theta_fixpoint)

    p = theta_sub.add_parser("table", help="d_n recursion convergence table")
    p.add_argument("--max-n", type=int, required=True, dest="max_n")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=_cmd_theta_table)

    p = theta_sub.add_parser("fit", help="asymptotic 1/n expansion fit")
    p.add_argument("--ladder", default="128,256,512,1024")
    p.set_defaults(func=_cmd_theta_fit)

    p = sub.add_parser("approx", help="integer approximation of a Gram target")
    p.add_argument("--gram", required=True, help="JSON file {n, gram}")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=_cmd_approx)

    p_verify = sub.add_parser("verify", help="verification sweeps")
    verify_sub = p_verify.add_subparsers(dest="subcommand", required=True)
    p = verify_sub.add_parser("paper", help="run the full acceptance sweep")
    p.set_defaults(func=_cmd_verify_paper)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        envelope = args.func(args, started)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResourceBudgetError as exc:
        print(
            f"resource budget exceeded: {exc} "
            f"(estimate {exc.estimate}, budget {exc.budget})",
            file=sys.stderr,
        )
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if envelope is not None:
        _emit(envelope)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
