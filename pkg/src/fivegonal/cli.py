"""Command line front end.

Exit codes: 0 pass, 1 usage, 2 degenerate instance, 3 applicability
violation, 4 internal check failure (including exhausted memory budgets).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from importlib import resources

from . import __version__
from . import comparison as cmp
from . import koszul
from .gonal5 import (DegenerateInstance, bundle_from_json, bundle_to_json, config_for_genus,
                     make_bundle, random_psi, window_violation)
from .linalg import DEFAULT_PRIME, BudgetExceeded, PrimeField

log = logging.getLogger("fivegonal")

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_WINDOW, EXIT_CHECK = 0, 1, 2, 3, 4
PRIME_ENV = "FIVEGONAL_PRIME"
FAST_ORACLE_P = (1, 2)


class UsageError(Exception):
    pass


def default_prime() -> int:
    raw = os.environ.get(PRIME_ENV)
    return int(raw) if raw else DEFAULT_PRIME


def report_schema() -> dict:
    return json.loads(resources.files("fivegonal").joinpath("report.schema.json").read_text())


def _report(command: str, inputs: dict, outputs: dict, timings: dict, status: str, code: int) -> dict:
    blob = json.dumps({"command": command, "inputs": inputs}, sort_keys=True).encode()
    return {
        "schema": "fivegonal-report/1",
        "command": command,
        "version": __version__,
        "config_hash": hashlib.sha256(blob).hexdigest()[:16],
        "inputs": inputs,
        "outputs": outputs,
        "timings": timings,
        "status": status,
        "exit_code": code,
    }


def _emit(args, rep: dict, text: str) -> int:
    if getattr(args, "json", False):
        print(json.dumps(rep, indent=1, sort_keys=True))
    else:
        print(text)
    return rep["exit_code"]


def _parse_int_list(raw: str) -> list[int]:
    """'13,15,17' or '21-41:2' (inclusive range with step)."""
    out = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            rng, _, step = part.partition(":")
            lo, hi = (int(x) for x in rng.split("-"))
            out.extend(range(lo, hi + 1, int(step) if step else 1))
        else:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty list {raw!r}")
    return out


def _check_prime(p: int):
    try:
        PrimeField(p)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _check_genus(g: int):
    if g < 9:
        raise UsageError(f"genus must be at least 9, got {g}")


# ---------------------------------------------------------------------------
# commands


def cmd_gen_curve(args) -> int:
    _check_genus(args.genus)
    _check_prime(args.prime)
    t = time.perf_counter()
    bd = make_bundle(args.genus, args.prime, args.seed)
    text = bundle_to_json(bd)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
        log.info("wrote %s (%d quadrics) in %.2fs", args.out, len(bd.quadrics), time.perf_counter() - t)
    return EXIT_OK


def _load_psi(args):
    if args.infile:
        with open(args.infile) as fh:
            bd = bundle_from_json(fh.read())
        return bd.psi, {"in": args.infile}
    if args.genus is None:
        raise UsageError("give --in FILE or --genus G")
    _check_genus(args.genus)
    _check_prime(args.prime)
    return random_psi(config_for_genus(args.genus), args.prime, args.seed), {}


def cmd_betti_delta(args) -> int:
    psi, extra = _load_psi(args)
    cfg = psi.config
    inputs = {"genus": cfg.g, "prime": psi.p, "seed": psi.seed, **extra}
    why = window_violation(cfg, cfg.j)
    if why:
        rep = _report("betti-delta", inputs, {"violation": why}, {}, "not-applicable", EXIT_WINDOW)
        return _emit(args, rep, f"genus {cfg.g}: psi_{cfg.j} is not scalar ({why})")
    t = time.perf_counter()
    second = None if args.no_second_prime else args.second_prime
    res = cmp.betti_delta(psi, second)
    timings = {"betti_delta": round(time.perf_counter() - t, 3)}
    out = res.as_dict()
    out["certificates"] = [certificate(psi, 0, apply=True)]
    text = [f"genus {cfg.g} (type {cfg.type_tag}): dim ker psi_{cfg.j} = {res.dim_ker}, "
            f"beta_{{{cfg.n},{cfg.n + 1}}}(C) = {res.betti_C}, beta(X) = {res.betti_X}"]
    if res.second:
        text.append(f"  prime {res.second['prime']}: dim ker = {res.second['dim_ker']}"
                    f" ({'agree' if res.second['agree'] else 'DISAGREE'})")
    if args.table:
        t = time.perf_counter()
        table = cmp.mapping_cone_betti(psi)
        timings["table"] = round(time.perf_counter() - t, 3)
        out["betti_table"] = table.rows()
        out["table_dual"] = table.dual()
        text.append(table.render())
    code = EXIT_OK
    if res.second and not res.second["agree"]:
        code = EXIT_CHECK
    rep = _report("betti-delta", inputs, out, timings, "pass" if code == 0 else "fail", code)
    return _emit(args, rep, "\n".join(text))


def certificate(psi, shift: int, apply: bool) -> dict:
    """Kernel-element certificate for one Psi; ``apply`` also multiplies by psi_j."""
    cfg = psi.config
    thr = cmp.construction_threshold(cfg, shift)
    row = {"genus": cfg.g, "shift": shift, "type": cfg.type_tag, "j": cfg.n - 2 + shift}
    if thr is None:
        row.update(status="not-applicable", verified=False,
                   reason=window_violation(cfg, cfg.n - 2 + shift))
        return row
    forced, slots = thr
    row.update(forced=forced, slots=slots)
    if forced > slots:
        row.update(status="below-threshold", verified=False,
                   reason=f"{forced} forced factors > j = {slots}")
        return row
    ke = cmp.kernel_element(psi, shift, seed=psi.seed or 0)
    row.update(column=ke.column, verified=ke.verified, status="verified" if ke.verified else "failed")
    if apply:
        row["applied"] = not cmp.apply_psi(psi, ke.vector(cfg), ke.j).any()
        if not row["applied"]:
            row["status"] = "failed"
    return row


def certificate_row(g: int, shift: int, p: int, seed: int, apply: bool) -> dict:
    return certificate(random_psi(config_for_genus(g), p, seed), shift, apply)


def cmd_sweep(args) -> int:
    _check_prime(args.prime)
    genera = _parse_int_list(args.genus_list)
    for g in genera:
        _check_genus(g)
    rows, timings, failed = [], {}, False
    for g in genera:
        t = time.perf_counter()
        try:
            row = certificate_row(g, args.shift, args.prime, args.seed,
                                  apply=args.mode == "full" and g <= cmp.MAX_FULL_GENUS)
        except DegenerateInstance as e:
            row = {"genus": g, "shift": args.shift, "status": "degenerate", "verified": False,
                   "reason": str(e)}
        if args.mode == "full" and g <= cmp.MAX_FULL_GENUS and args.shift == 0:
            cfg = config_for_genus(g)
            if window_violation(cfg, cfg.j) is None:
                try:
                    row["dim_ker"] = cmp.psi_nullity(random_psi(cfg, args.prime, args.seed))
                except BudgetExceeded as e:
                    row["dim_ker"] = None
                    row["error"] = f"budget exceeded: {e}"
        ok = row["status"] in ("verified", "below-threshold", "not-applicable")
        if row.get("error") or (row.get("dim_ker") == 0 and row["status"] == "verified"):
            ok = False
        row["ok"] = ok
        failed |= not ok
        timings[str(g)] = round(time.perf_counter() - t, 3)
        rows.append(row)
        log.info("genus %d: %s", g, row["status"])
    lines = [f"{'g':>4} {'type':>5} {'j':>3} {'forced/slots':>12} {'certificate':>16} {'dim_ker':>8}"]
    for r in rows:
        fs = f"{r.get('forced', '-')}/{r.get('slots', '-')}"
        dk = r.get("dim_ker", "-")
        dk = "BUDGET" if r.get("error") else dk
        lines.append(f"{r['genus']:>4} {r.get('type', '-'):>5} {r.get('j', '-'):>3} {fs:>12} "
                     f"{r['status']:>16} {str(dk):>8}")
    code = EXIT_CHECK if failed else EXIT_OK
    inputs = {"genus_list": genera, "shift": args.shift, "mode": args.mode, "prime": args.prime,
              "seed": args.seed}
    rep = _report("sweep", inputs, {"rows": rows}, timings, "fail" if failed else "pass", code)
    return _emit(args, rep, "\n".join(lines))


def cmd_oracle(args) -> int:
    with open(args.infile) as fh:
        bd = bundle_from_json(fh.read())
    ps = _parse_int_list(args.p)
    slow = [p for p in ps if p not in FAST_ORACLE_P]
    if slow and not args.slow and not args.artinian:
        raise UsageError(f"p = {slow} is expensive; pass --slow (or --artinian)")
    g = bd.genus
    inputs = {"in": args.infile, "p": ps, "artinian": args.artinian, "genus": g, "prime": bd.p,
              "seed": bd.seed}
    timings = {}
    t = time.perf_counter()
    table = cmp.mapping_cone_betti(bd.psi)
    timings["mapping_cone"] = round(time.perf_counter() - t, 3)
    if args.artinian:
        q = koszul.artinian_quotient(bd.quadrics, g, bd.p, args.seed)
    else:
        q = koszul.curve_quotient(bd.quadrics, g, bd.p)
    results, code = [], EXIT_OK
    for p in ps:
        t = time.perf_counter()
        expect = table.linear[p]
        try:
            got = koszul.koszul_betti(q, p, args.memory_budget)
        except BudgetExceeded as e:
            results.append({"p": p, "koszul": None, "mapping_cone": expect, "agree": False,
                            "error": f"budget exceeded: {e}"})
            code = EXIT_CHECK
            continue
        finally:
            timings[f"p{p}"] = round(time.perf_counter() - t, 3)
        results.append({"p": p, "koszul": got, "mapping_cone": expect, "agree": got == expect})
        if got != expect:
            code = EXIT_CHECK
    lines = [f"genus {g}, prime {bd.p}, seed {bd.seed}" + (" (artinian reduction)" if args.artinian else "")]
    for r in results:
        if r.get("error"):
            lines.append(f"  p={r['p']}: {r['error']}")
        else:
            lines.append(f"  p={r['p']}: koszul {r['koszul']}, mapping cone {r['mapping_cone']}: "
                         f"{'agree' if r['agree'] else 'DISAGREE'}")
    rep = _report("oracle", inputs, {"results": results}, timings,
                  "pass" if code == 0 else "fail", code)
    return _emit(args, rep, "\n".join(lines))


def cmd_verify(args) -> int:
    g = args.genus
    _check_genus(g)
    _check_prime(args.prime)
    cfg = config_for_genus(g)
    checks, timings = [], {}
    repro = f"fivegonal verify --genus {g} --prime {args.prime} --seed {args.seed}"

    def record(name, ok, detail, expected_failure=False):
        checks.append({"check": name, "ok": bool(ok), "detail": detail,
                       "expected_failure": expected_failure})

    why = window_violation(cfg, cfg.j)
    if why:
        rep = _report("verify", {"genus": g}, {"violation": why}, {}, "not-applicable", EXIT_WINDOW)
        return _emit(args, rep, f"genus {g}: not applicable ({why})")
    t = time.perf_counter()
    bd = make_bundle(g, args.prime, args.seed)
    record("hilbert", True, "(S_C)_2, (S_C)_3 as expected; quadrics independent")
    timings["gen"] = round(time.perf_counter() - t, 3)

    dim_ker = None
    if g <= 17 or (g <= cmp.MAX_FULL_GENUS and args.slow):
        t = time.perf_counter()
        try:
            res = cmp.betti_delta(bd.psi, None if args.no_second_prime else args.second_prime)
            dim_ker = res.dim_ker
            agree = res.second.get("agree", True)
            record("betti_delta", agree, res.as_dict())
        except BudgetExceeded as e:
            record("betti_delta", False, f"budget exceeded: {e}")
        timings["betti_delta"] = round(time.perf_counter() - t, 3)

    t = time.perf_counter()
    row = certificate_row(g, 0, args.prime, args.seed, apply=g <= 17)
    timings["certificate"] = round(time.perf_counter() - t, 3)
    if row["status"] == "below-threshold":
        record("certificate", True, row, expected_failure=True)
    else:
        record("certificate", row["status"] == "verified", row)
        if dim_ker is not None and row["status"] == "verified":
            record("extra_syzygies", dim_ker >= 1, {"dim_ker": dim_ker})
        elif row["status"] == "verified":
            record("extra_syzygies", True, {"dim_ker": ">= 1", "via": "certificate"})

    if g == 13:
        t = time.perf_counter()
        table = cmp.mapping_cone_betti(bd.psi)
        q = koszul.curve_quotient(bd.quadrics, g, bd.p)
        for p in FAST_ORACLE_P:
            got = koszul.koszul_betti(q, p)
            record(f"oracle_p{p}", got == table.linear[p], {"koszul": got, "mapping_cone": table.linear[p]})
        record("duality", table.dual(), {"row": table.linear})
        timings["oracle"] = round(time.perf_counter() - t, 3)

    failed = [c for c in checks if not c["ok"]]
    code = EXIT_CHECK if failed else EXIT_OK
    lines = [f"genus {g} (type {cfg.type_tag}, scroll {cfg.scroll.e}, a={cfg.a}, b={cfg.b})"]
    for c in checks:
        mark = "EXPECTED" if c["expected_failure"] else ("ok" if c["ok"] else "FAIL")
        detail = c["detail"]
        if isinstance(detail, dict):
            detail = ", ".join(f"{k}={v}" for k, v in detail.items() if k not in ("certificates",))
        lines.append(f"  [{mark}] {c['check']}: {detail}")
    if failed:
        lines.append(f"first failure: {failed[0]['check']}; reproduce with: {repro}")
    rep = _report("verify", {"genus": g, "prime": args.prime, "seed": args.seed},
                  {"checks": checks}, timings, "fail" if failed else "pass", code)
    return _emit(args, rep, "\n".join(lines))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fivegonal", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, default=default_prime(),
                        help=f"field characteristic (default {DEFAULT_PRIME}, env {PRIME_ENV})")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-curve", parents=[common], help="write a CurveBundle JSON file")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--out", required=True, help="output file, or - for stdout")
    p.set_defaults(func=cmd_gen_curve)

    p = sub.add_parser("betti-delta", parents=[common], help="extra syzygies via dim ker psi")
    p.add_argument("--in", dest="infile")
    p.add_argument("--genus", type=int)
    p.add_argument("--second-prime", type=int, default=cmp.SECOND_PRIME)
    p.add_argument("--no-second-prime", action="store_true")
    p.add_argument("--table", action="store_true", help="also print the mapping cone Betti table")
    p.set_defaults(func=cmd_betti_delta)

    p = sub.add_parser("sweep", parents=[common], help="theorem sweep over several genera")
    p.add_argument("--genus-list", required=True, help="e.g. 13,15,17 or 21-41:2")
    p.add_argument("--shift", type=int, default=0)
    p.add_argument("--mode", choices=("full", "certificate"), default="certificate")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", parents=[common], help="Koszul cohomology cross-check")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--p", default="1,2", help="positions, e.g. 1,2 or 6")
    p.add_argument("--slow", action="store_true", help="allow positions beyond 1,2")
    p.add_argument("--artinian", action="store_true",
                   help="work modulo two random linear forms (fast, assumes the curve is ACM)")
    p.add_argument("--memory-budget", type=int, default=None, help="bytes for the streaming rank")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", parents=[common], help="run every check for one genus")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--slow", action="store_true", help="attempt the dense kernel up to genus 19")
    p.add_argument("--second-prime", type=int, default=cmp.SECOND_PRIME)
    p.add_argument("--no-second-prime", action="store_true")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"fivegonal: error: {e}", file=sys.stderr)
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    except DegenerateInstance as e:
        print(f"fivegonal: degenerate instance: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except cmp.WindowError as e:
        print(f"fivegonal: not applicable: {e}", file=sys.stderr)
        return EXIT_WINDOW
    except BudgetExceeded as e:
        print(f"fivegonal: memory budget exceeded: {e}", file=sys.stderr)
        return EXIT_CHECK
    except (OSError, ValueError) as e:
        print(f"fivegonal: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
