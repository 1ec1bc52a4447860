"""Command-line front end.

Exit status: 0 when every check passes, 1 when a property fails, 2 on
malformed input.
"""

import argparse
import json
import logging
import random
import sys
import time

from .errors import NotCompatible, NotDivisible, PreconditionFailed
from .fixtures import b2_seed, b2_sequence
from .io import (
    InputError,
    dumps,
    load_rank_two,
    load_seed_data,
    parse_qlaurent,
    read_json,
    seed_to_json,
)
from .qcoeff import QLaurent
from .qseed import check_compatible, mutate_Lambda, mutate_seed, verify_seed
from .ranktwo import (
    ClusterSequence,
    check_bar_invariance,
    cluster_var,
    eval_exchange,
    hatted,
    standard_basis_check,
)
from .qtorus import right_divide_exact
from .report import Report
from .sampling import random_rank_two, random_seed

log = logging.getLogger("qcluster")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
CHECKS = ("all", "laurent", "bar", "basis", "involution")


class UsageError(Exception):
    pass


def _int_list(text, name, length=None):
    text = (text or "").strip()
    if not text:
        items = []
    else:
        try:
            items = [int(x) for x in text.split(",")]
        except ValueError:
            raise UsageError(f"{name}: expected comma-separated integers, got {text!r}") from None
    if length is not None and len(items) != length:
        raise UsageError(f"{name}: expected {length} integers")
    return items


def _emit(out, fmt, payload, text_lines):
    if fmt == "json":
        out.write(dumps(payload))
    else:
        for line in text_lines:
            out.write(line + "\n")


def _fail(err, msg):
    err.write(f"error: {msg}\n")


# --- seed commands ----------------------------------------------------------


def _load_seed(cfg):
    if not cfg.input:
        raise UsageError("--input is required")
    return load_seed_data(cfg.input)


def _diag(D):
    return "D = diag(" + ", ".join(str(x) for x in D) + ")"


def _involution_report(S, report=None):
    """``mu_k mu_k = id`` and eps-independence in every direction."""
    report = report or Report()
    for k in range(1, S.bmat.n + 1):
        try:
            S1 = mutate_seed(S, k)
            report.record("involution", mutate_seed(S1, k) == S, f"mu_{k} mu_{k} differs from the identity")
            D1 = check_compatible(S1.lam, S1.bmat)
            report.record("mutated-compatible", D1 == S.pair.D, f"mu_{k} changes D to {D1}")
        except NotDivisible as exc:
            report.record("involution", False, f"mu_{k}: {exc}")
        except NotCompatible as exc:
            report.record("mutated-compatible", False, f"mu_{k}: {exc}")
        same = mutate_Lambda(S.pair, k, 1) == mutate_Lambda(S.pair, k, -1)
        report.record("eps-independence", same, f"Lambda' depends on eps in direction {k}")
    return report


def run_check(cfg, out, err):
    data = _load_seed(cfg)
    try:
        D = check_compatible(data.lam, data.bmat)
    except NotCompatible as exc:
        payload = {"checks": {"compatible": False}, "block": exc.block, "entry": list(exc.entry), "details": [str(exc)]}
        _emit(out, cfg.format, payload, ["compatible: FAIL", f"{exc.block} block: {exc}"])
        return EXIT_FAIL
    report = verify_seed(data.seed())
    payload = {"D": list(D), "checks": report.checks, "details": report.details}
    _emit(out, cfg.format, payload, [_diag(D)] + report.lines())
    return EXIT_OK if report.ok else EXIT_FAIL


def _seed_text(S):
    lines = [
        f"lambda = {S.lam.tolist()}",
        f"btilde = {S.bmat.tolist()}",
        f"d = {list(S.bmat.d)}",
    ]
    for k, s in enumerate(S.h):
        lines.append(f"h_{k + 1} = ({', '.join(str(x) for x in s)})")
    for i, x in enumerate(S.frame):
        lines.append(f"X'(e_{i + 1}) = {x}")
    return lines


def run_mutate(cfg, out, err):
    data = _load_seed(cfg)
    try:
        S = data.seed()
    except NotCompatible as exc:
        _fail(err, f"incompatible pair: {exc}")
        return EXIT_FAIL
    seq = _int_list(cfg.seq, "--seq")
    for k in seq:
        if not 1 <= k <= S.bmat.n:
            raise UsageError(f"--seq: direction {k} outside 1..{S.bmat.n}")
    for step, k in enumerate(seq, 1):
        try:
            S = mutate_seed(S, k)
        except NotDivisible as exc:
            _fail(err, f"step {step} (direction {k}) is not divisible: {exc}")
            return EXIT_FAIL
    if cfg.format == "text":
        _emit(out, "text", None, _seed_text(S))
    else:
        out.write(dumps(seed_to_json(S)))
    return EXIT_OK


# --- rank-two commands ------------------------------------------------------


def _wanted(cfg, name):
    return cfg.check in ("all", name)


def rank_two_report(S, krange, cfg, report=None):
    """Compute ``X_k`` over ``krange`` and run the requested checks."""
    report = report or Report()
    kmin, kmax = krange
    X = {}
    # compute from the initial cluster outward so a failure names its index
    order = sorted(range(kmin, kmax + 1), key=lambda k: (abs(k - 1.5), k))
    for k in order:
        try:
            t0 = time.perf_counter()
            X[k] = cluster_var(S, k)
            log.debug("X_%d: %d terms in %.3fs", k, len(X[k]), time.perf_counter() - t0)
        except NotDivisible as exc:
            report.record("laurent", False, f"X_{k} is not a Laurent polynomial: {exc}")
            return report, X
    report.record("laurent", True)
    q = QLaurent.monomial(2)

    if _wanted(cfg, "laurent"):
        for k in range(kmin, kmax):
            ok = X[k] * X[k + 1] == (X[k + 1] * X[k]).scale(q)
            report.record("quasi-commutation", ok, f"X_{k} X_{k + 1} != q X_{k + 1} X_{k}")
        for k in range(kmin + 1, kmax):
            ok = X[k + 1] * X[k - 1] == eval_exchange(hatted(S.poly(k)), X[k])
            report.record("hatted-relation", ok, f"X_{k + 1} X_{k - 1} != Phat(X_{k})")

    if _wanted(cfg, "involution"):
        # exchanging back from (X_{k+1}, X_{k+2}) recovers X_k
        for k in range(kmin, kmax - 1):
            try:
                back = right_divide_exact(eval_exchange(S.poly(k + 1), X[k + 1]), X[k + 2])
                ok = back == X[k]
            except NotDivisible:
                ok = False
            report.record("involution", ok, f"exchanging back at X_{k + 2} does not return X_{k}")

    if _wanted(cfg, "bar"):
        if S.is_bar_invariant():
            sub = check_bar_invariance(S, krange)
            report.record("bar", sub.ok, "; ".join(sub.details))
        elif cfg.check == "bar":
            raise PreconditionFailed("bar check needs bar-invariant coefficients h_i")
        else:
            report.info["bar-skipped"] = report.info.get("bar-skipped", 0) + 1

    if _wanted(cfg, "basis"):
        sub = standard_basis_check(S, cfg.bound)
        report.info["basis"] = {"count": sub.info["count"], "rank": sub.info["rank"]}
        for name, ok in sub.checks.items():
            report.record(f"basis-{name}", ok)
        report.details.extend(sub.details)
    return report, X


def _rank_two_output(out, cfg, X, report):
    if cfg.format == "json":
        payload = {
            "variables": [{"k": k, "value": X[k].to_json()} for k in sorted(X)],
            "checks": report.checks,
            "details": report.details,
            "info": report.info,
        }
        out.write(dumps(payload))
        return
    for k in sorted(X):
        out.write(f"X_{k} = {X[k]}\n")
    for line in report.lines():
        out.write(line + "\n")
    for key, val in sorted(report.info.items()):
        out.write(f"{key}: {val}\n")


def _first_failure(err, report):
    for name, ok in report.checks.items():
        if not ok:
            _fail(err, f"first failing property: {name}")
            return


def _range(cfg, default):
    if cfg.range:
        kmin, kmax = _int_list(cfg.range, "--range", 2)
    elif default:
        kmin, kmax = default
    else:
        kmin, kmax = 1, 8
    if kmin > kmax:
        raise UsageError("--range: kmin exceeds kmax")
    return kmin, kmax


def run_rank2(cfg, out, err):
    if not cfg.input:
        raise UsageError("--input is required")
    p1, p2, frange = load_rank_two(cfg.input)
    S = ClusterSequence(p1, p2)
    report, X = rank_two_report(S, _range(cfg, frange), cfg)
    _rank_two_output(out, cfg, X, report)
    if not report.ok:
        _first_failure(err, report)
        return EXIT_FAIL
    return EXIT_OK


# --- verify and demo --------------------------------------------------------


def run_verify(cfg, out, err):
    """Verify one input file, or a reproducible random batch without one."""
    if cfg.input:
        obj = read_json(cfg.input)
        if isinstance(obj, dict) and "p1" in obj:
            p1, p2, frange = load_rank_two(obj)
            report, _ = rank_two_report(ClusterSequence(p1, p2), _range(cfg, frange), cfg)
        else:
            data = load_seed_data(obj)
            try:
                S = data.seed()
            except NotCompatible as exc:
                _fail(err, f"incompatible pair: {exc}")
                return EXIT_FAIL
            report = verify_seed(S)
            if cfg.check in ("all", "involution"):
                _involution_report(S, report)
    else:
        rng = random.Random(cfg.rng_seed)
        report = Report()
        for _ in range(cfg.count):
            S = random_seed(rng)
            sub = verify_seed(S)
            for name, ok in sub.checks.items():
                report.record(name, ok)
            report.details.extend(sub.details)
            if cfg.check in ("all", "involution"):
                _involution_report(S, report)
        krange = _range(cfg, (-3, 6))
        for _ in range(cfg.count):
            p1, p2 = random_rank_two(rng, max_degree=cfg.max_degree)
            rank_two_report(ClusterSequence(p1, p2), krange, cfg, report)
        report.info["instances"] = cfg.count
        report.info["rng-seed"] = cfg.rng_seed
    payload = {"checks": report.checks, "details": report.details, "info": report.info}
    lines = report.lines() + [f"{k}: {v}" for k, v in sorted(report.info.items())]
    _emit(out, cfg.format, payload, lines)
    if not report.ok:
        _first_failure(err, report)
        return EXIT_FAIL
    return EXIT_OK


def run_b2_demo(cfg, out, err):
    h = parse_qlaurent(json.loads(cfg.h)) if cfg.h else QLaurent(1)
    S = b2_seed(h)
    report = verify_seed(S)
    _involution_report(S, report)
    seq = b2_sequence(h)
    krange = _range(cfg, (1, 8))
    X = {k: cluster_var(seq, k) for k in range(krange[0], krange[1] + 1)}
    periodic = cluster_var(seq, 7) == cluster_var(seq, 1) and cluster_var(seq, 8) == cluster_var(seq, 2)
    report.record("period-6", periodic, "X_7, X_8 differ from X_1, X_2")
    frames = []
    T = S
    for k in (1, 2, 1, 2, 1, 2):
        T = mutate_seed(T, k)
        frames.append(T.frame)
    if cfg.format == "json":
        payload = {
            "h": h.to_pairs(),
            "D": list(S.pair.D),
            "variables": [{"k": k, "value": X[k].to_json()} for k in sorted(X)],
            "mutation-frames": [[x.to_json() for x in f] for f in frames],
            "checks": report.checks,
        }
        out.write(dumps(payload))
    else:
        out.write(f"h = {h}\n{_diag(S.pair.D)}\n")
        for k in sorted(X):
            out.write(f"X_{k} = {X[k]}\n")
        for step, f in enumerate(frames, 1):
            out.write(f"after {step} alternating mutations: ({f[0]}, {f[1]})\n")
        for line in report.lines():
            out.write(line + "\n")
    return EXIT_OK if report.ok else EXIT_FAIL


COMMANDS = {
    "check": run_check,
    "mutate": run_mutate,
    "rank2": run_rank2,
    "verify": run_verify,
    "b2-demo": run_b2_demo,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="qcluster", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--input", "-i", help="seed or rank-two problem file (JSON)")
    parser.add_argument("--seq", default="", help='mutation directions, e.g. "1,2,1"')
    parser.add_argument("--range", help='index interval "kmin,kmax"')
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--rng-seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=20, help="random instances for verify")
    parser.add_argument("--max-degree", type=int, default=2, help="exchange degrees for random verify")
    parser.add_argument("--check", choices=CHECKS, default="all")
    parser.add_argument("--bound", type=int, default=2, help="degree bound for the basis check")
    parser.add_argument("--h", help="middle coefficient for b2-demo as [[e, c], ...]")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def _glue_negative_values(argv):
    # "--range -2,4" would read "-2,4" as a flag; rewrite to "--range=-2,4"
    out = []
    it = iter(argv)
    for arg in it:
        if arg in ("--range", "--seq"):
            val = next(it, None)
            out.append(arg if val is None else f"{arg}={val}")
        else:
            out.append(arg)
    return out


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if cfg.verbose:
        logging.basicConfig(level=logging.DEBUG if cfg.verbose > 1 else logging.INFO, stream=err)
    t0 = time.perf_counter()
    try:
        status = COMMANDS[cfg.command](cfg, out, err)
        log.info("%s finished with status %d in %.3fs", cfg.command, status, time.perf_counter() - t0)
        return status
    except (UsageError, InputError, PreconditionFailed) as exc:
        _fail(err, str(exc))
        return EXIT_INPUT
    except NotDivisible as exc:
        _fail(err, str(exc))
        return EXIT_FAIL
    except (ValueError, json.JSONDecodeError) as exc:
        _fail(err, str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
