"""Command-line front end: ``tailspace <command> ...``.

Exit status is 0 when every check or claim passes, 1 when one fails and 2
on an error.  Errors print a single line ``error: <reason>: <message>``.
JSON output is canonical, so reruns with the same arguments are byte
identical; wall-clock times go to the run manifest only.
"""
from __future__ import annotations

import argparse
import contextlib
import dataclasses
import inspect
import json
import os
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, codes, constructions, core, io
from ._validation import CapacityError
from .dyadic import NotDyadicError, to_str
from .markov import DisconnectedGeneratorError
from .verify import SUITES, SWEEPS, KappaSolverError, summarize
from .verify import checks

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

REASONS = (
    (CapacityError, "capacity"),
    (codes.SearchExhaustedError, "search-exhausted"),
    (io.FormatError, "format"),
    (NotDyadicError, "not-dyadic"),
    (DisconnectedGeneratorError, "disconnected-generator"),
    (KappaSolverError, "solver"),
    (OSError, "io"),
    (ValueError, "invalid-argument"),
)

RANDOMIZED_KINDS = {"balanced", "harper-witness", "mean-adjust"}


class UsageError(Exception):
    def __init__(self, reason, message):
        super().__init__(message)
        self.reason = reason


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("usage", message)


def _floats(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


# output -------------------------------------------------------------------


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)


def _format_for(args):
    fmt = getattr(args, "format", None)
    if fmt:
        return fmt
    out = getattr(args, "out", None)
    return "csv" if out and str(out).endswith(".csv") else "json"


def _reports_payload(name, reports):
    return {
        "check": name,
        "all_pass": all(r.passed for r in reports),
        "summary": summarize(reports),
        "reports": [r.to_json() for r in reports],
    }


def _plain_summary(summary):
    return {k: {**v, "min_slack": _jsonable(v["min_slack"])} for k, v in summary.items()}


def _jsonable(x):
    x = float(x)
    return x if np.isfinite(x) else str(x)


def _fmt_frac(q):
    return to_str(Fraction(q))


# analyze ------------------------------------------------------------------


def cmd_analyze(args):
    f = io.function_from_json(io.read_json(args.file))
    spec = core.fwht(f)
    order = np.lexsort((np.arange(f.size), -np.abs(spec.coeffs)))
    top = [
        {"subset": [i + 1 for i in range(f.n) if S >> i & 1], "coefficient": float(spec.coeffs[S])}
        for S in order[: args.top]
        if spec.coeffs[S] != 0
    ]
    out = {
        "n": f.n,
        "kind": f.kind,
        "mean": _fmt_frac(f.exact_mean()) if f.is_boolean else f.mean(),
        "variance": float(np.mean(f.values**2) - f.mean() ** 2),
        "spectrum": {"top": top, "degree_profile": [float(w) for w in spec.degree_profile()]},
        "tail_k": core.tail_level(f, include_constant=True),
        "tail_k_mean_exempt": core.tail_level(f),
        "norms": {repr(p): core.lp_norm(f, p) for p in args.p_grid},
    }
    if f.is_boolean:
        piv = core.pivotal_profile(f)
        out["influences"] = [
            {"coordinate": i + 1, "pivotal": _fmt_frac(q), "resampling": _fmt_frac(q / 2)}
            for i, q in enumerate(piv)
        ]
        out["total_pivotal"] = _fmt_frac(sum(piv, Fraction(0)))
        out["max_pivotal"] = _fmt_frac(max(piv))
    k_max = f.n if args.k is None else args.k
    certs = []
    for k in range(0, min(k_max, f.n) + 1):
        for include in (False, True):
            c = core.tail_certificate(f, k, include_constant=include)
            certs.append({"k": k, "include_constant": include, "exact": c.exact,
                          "member": c.passes(), "max_violation": c.max_violation})
    out["tail_certificates"] = certs
    _emit(io.dumps(out), args.out)
    return EXIT_OK


# construct ----------------------------------------------------------------


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise UsageError("missing-parameter", f"{args.kind} needs --" + ", --".join(missing))


def _plain_record(f, params):
    rec = constructions.ConstructionRecord(f, params)
    rec.report["tail_k"] = core.tail_level(f, include_constant=True)
    rec.report["tail_k_mean_exempt"] = core.tail_level(f)
    return rec


def _load_code(path):
    return io.code_from_json(io.read_json(path))


def build(args):
    kind = args.kind
    if kind in RANDOMIZED_KINDS and args.seed is None:
        raise UsageError("seed-required", f"construct {kind} is randomized; pass --seed")
    if kind == "tribes":
        _need(args, "b", "r")
        rec = constructions.or_compose(constructions.and_function(args.r), args.b)
    elif kind == "alleq":
        _need(args, "r")
        rec = _plain_record(constructions.alleq(args.r), {"r": args.r})
    elif kind == "coding-tribes":
        if args.code is not None:
            block = codes.indicator(_load_code(args.code))
        else:
            _need(args, "r")
            block = constructions.alleq(args.r)
        b = args.b
        if b is None:
            b = constructions.choose_b(constructions.prob_true(block), mode="closest")
        rec = constructions.or_compose(block, b)
    elif kind == "balanced":
        _need(args, "m")
        rec = constructions.balanced_coding_tribes(args.m, seed=args.seed, k=args.k)
    elif kind == "harper-witness":
        _need(args, "m")
        code = _load_code(args.code) if args.code else None
        rec = constructions.harper_witness(args.m, delta=args.delta, seed=args.seed, code=code)
    elif kind == "mean-adjust":
        _need(args, "n-target", "t", "code")
        f = constructions.mean_adjust(args.n_target, args.t, _load_code(args.code), seed=args.seed)
        rec = _plain_record(f, {"n_target": args.n_target, "t": args.t, "seed": args.seed})
        rec.claim("mean", "eq", Fraction(args.t, 2**args.n_target), f.exact_mean())
    else:  # argparse restricts the choices
        raise UsageError("usage", f"unknown construction {kind!r}")
    rec.report.setdefault("tail_k", core.tail_level(rec.function, include_constant=True))
    return rec


def cmd_construct(args):
    rec = build(args)
    record = io.record_to_json(rec)
    if args.out is None:
        _emit(io.dumps(record), None)
    else:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        io.write_json(io.function_to_json(rec.function), out / "function.json")
        io.write_json(record, out / "record.json")
    return EXIT_OK if rec.all_hold else EXIT_FAIL


# codes --------------------------------------------------------------------


def _weight_json(w):
    return "inf" if w == codes.INFINITE_WEIGHT else int(w)


def _code_summary(C):
    return {**io.code_to_json(C), "dim": C.dim, "min_weight": _weight_json(codes.min_weight(C))}


def cmd_codes(args):
    status = EXIT_OK
    if args.action == "search":
        C = codes.good_code_search(args.mprime, args.delta, args.seed, budget=args.budget)
        out = {**_code_summary(C), "meta": io._plain(dict(C.meta))}
    elif args.action == "dual":
        out = _code_summary(codes.dual(_load_code(args.file)))
    elif args.action == "weight":
        C = _load_code(args.file)
        out = {**_code_summary(C), "dual_min_weight": _weight_json(codes.min_weight(codes.dual(C)))}
    else:  # tail
        C = _load_code(args.file)
        criterion, certificate = codes.macwilliams_crosscheck(C, args.k)
        out = {**_code_summary(C), "k": args.k, "criterion": criterion, "certificate": certificate,
               "agree": criterion == certificate}
        status = EXIT_OK if criterion == certificate else EXIT_FAIL
    _emit(io.dumps(out), args.out)
    return status


# verify / sweep -----------------------------------------------------------

# CLI flag -> keyword of the sweep function, first match wins
_FLAG_KEYWORDS = {
    "n": ("n_max", "max_states"),
    "k": ("k_max",),
    "p_grid": ("p_grid",),
    "t_grid": ("t_grid",),
    "trials": ("trials",),
    "seed": ("seed",),
    "workers": ("workers",),
}


def _sweep_kwargs(func, args, check_id):
    accepted = inspect.signature(func).parameters
    kwargs = {}
    for flag, keywords in _FLAG_KEYWORDS.items():
        value = getattr(args, flag, None)
        if value is None:
            continue
        key = next((k for k in keywords if k in accepted), None)
        if key is None:
            if flag == "workers":
                continue
            raise UsageError("unsupported-flag", f"{check_id} does not take --{flag.replace('_', '-')}")
        kwargs[key] = value
    return kwargs


def _retol(reports, tol):
    """Re-judge reports at ``tol``, keeping failures that are not about slack."""
    out = []
    for r in reports:
        if r.passed == (r.slack >= -r.tol):
            r = dataclasses.replace(r, tol=tol, passed=bool(r.slack >= -tol))
        out.append(r)
    return out


def run_check(check_id, args):
    if check_id in SWEEPS:
        if args.seed is None:
            raise UsageError("seed-required", f"{check_id} is a randomized sweep; pass --seed")
        reports = SWEEPS[check_id](**_sweep_kwargs(SWEEPS[check_id], args, check_id))
    elif check_id in SUITES:
        for flag in ("n", "k", "t_grid", "trials"):
            if getattr(args, flag, None) is not None:
                raise UsageError("unsupported-flag", f"{check_id} does not take --{flag.replace('_', '-')}")
        func = SUITES[check_id]
        kwargs = {"p_grid": args.p_grid} if args.p_grid is not None and "p_grid" in inspect.signature(func).parameters else {}
        if args.p_grid is not None and not kwargs:
            raise UsageError("unsupported-flag", f"{check_id} does not take --p-grid")
        reports = func(**kwargs)
    else:
        raise UsageError("unknown-check", f"unknown check {check_id!r}; choose from {', '.join(CHECK_IDS)}")
    if args.tol is not None:
        reports = _retol(reports, args.tol)
    return reports


def _write_reports(name, reports, args):
    if _format_for(args) == "csv":
        _emit(io.reports_to_csv(reports), args.out)
    else:
        payload = _reports_payload(name, reports)
        payload["summary"] = _plain_summary(payload["summary"])
        _emit(io.dumps(payload), args.out)


def cmd_verify(args):
    reports = run_check(args.check_id, args)
    _write_reports(args.check_id, reports, args)
    if args.out is not None:
        failures = sum(not r.passed for r in reports)
        print(f"{args.check_id}: {len(reports)} reports, {failures} failures")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_sweep(args):
    names = args.checks or list(SWEEPS) + list(SUITES)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary = {}
    ok = True
    for name in names:
        sub = argparse.Namespace(**{**vars(args), "n": None, "k": None, "p_grid": None, "t_grid": None, "tol": None})
        if name in SUITES:
            sub.trials = None
        reports = run_check(name, sub)
        ext = "csv" if args.format == "csv" else "json"
        target = out / f"{name}.{ext}"
        if ext == "csv":
            target.write_text(io.reports_to_csv(reports))
        else:
            payload = _reports_payload(name, reports)
            payload["summary"] = _plain_summary(payload["summary"])
            io.write_json(payload, target)
        passed = all(r.passed for r in reports)
        ok &= passed
        summary[name] = {"reports": len(reports), "failures": sum(not r.passed for r in reports), "all_pass": passed}
        print(f"{name}: {len(reports)} reports, {summary[name]['failures']} failures")
    io.write_json({"seed": args.seed, "checks": summary, "all_pass": ok}, out / "summary.json")
    return EXIT_OK if ok else EXIT_FAIL


# manifests ----------------------------------------------------------------


def _output_files(out):
    p = Path(out)
    if p.is_dir():
        return {str(q.relative_to(p)): io.digest(q) for q in sorted(p.rglob("*")) if q.is_file()}
    if p.is_file():
        return {p.name: io.digest(p)}
    return {}


def _input_files(args):
    files = {}
    for name in ("file", "code"):
        value = getattr(args, name, None)
        if value and Path(value).is_file():
            files[value] = io.digest(value)
    return files


def write_manifest(path, argv, args, status, seconds):
    manifest = {
        "argv": list(argv),
        "cwd": os.getcwd(),
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "tolerances": {
            "sweep": checks.SWEEP_TOL, "pointwise": checks.POINTWISE_TOL,
            "solver": checks.SOLVER_TOL, "override": getattr(args, "tol", None),
        },
        "inputs": _input_files(args),
        "out": getattr(args, "out", None),
        "outputs": _output_files(args.out) if getattr(args, "out", None) else {},
        "exit_status": status,
        "wall_clock_seconds": seconds,
    }
    Path(path).write_text(json.dumps(manifest, sort_keys=True, indent=1) + "\n")


def _strip_manifest(argv):
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--manifest":
            skip = True
        elif not a.startswith("--manifest="):
            out.append(a)
    return out


def _rebase_out(argv, new_out):
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a == "--out":
            out += ["--out", new_out]
            i += 2
            continue
        out.append(f"--out={new_out}" if a.startswith("--out=") else a)
        i += 1
    return out


@contextlib.contextmanager
def _working_dir(path):
    old = os.getcwd()
    os.chdir(path)
    try:
        yield
    finally:
        os.chdir(old)


def cmd_replay(args):
    manifest = json.loads(Path(args.manifest).read_text())
    if not manifest.get("out"):
        raise UsageError("not-replayable", "manifest records no output path")
    with tempfile.TemporaryDirectory() as tmp:
        name = Path(manifest["out"]).name
        target = str(Path(tmp) / name)
        with _working_dir(manifest["cwd"]), contextlib.redirect_stdout(sys.stderr):
            status = _run(_rebase_out(manifest["argv"], target))
        actual = _output_files(target)
    expected = manifest["outputs"]
    files = sorted(set(expected) | set(actual))
    result = {
        "files": {f: {"expected": expected.get(f), "actual": actual.get(f),
                      "identical": expected.get(f) == actual.get(f)} for f in files},
        "exit_status": {"expected": manifest["exit_status"], "actual": status},
    }
    result["identical"] = all(v["identical"] for v in result["files"].values()) and status == manifest["exit_status"]
    _emit(io.dumps(result), args.out)
    return EXIT_OK if result["identical"] else EXIT_FAIL


# parser -------------------------------------------------------------------

CHECK_IDS = tuple(SWEEPS) + tuple(SUITES)


def _add_check_flags(p):
    p.add_argument("--n", type=int, help="largest dimension (states for Markov sweeps)")
    p.add_argument("--k", type=int, help="largest tail level")
    p.add_argument("--p-grid", type=_floats, help="comma-separated exponents")
    p.add_argument("--t-grid", type=_floats, help="comma-separated times")
    p.add_argument("--trials", type=int)
    p.add_argument("--tol", type=float, help="re-judge every report at this tolerance")


def _add_common(p, seed_required=False):
    p.add_argument("--seed", type=int, required=seed_required)
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.add_argument("--manifest", help="write a run manifest here")


def build_parser():
    parser = _Parser(prog="tailspace", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="spectrum, influences, tail certificates and norms of a function file")
    p.add_argument("file")
    p.add_argument("--k", type=int, help="largest tail level to certify (default n)")
    p.add_argument("--p-grid", type=_floats, default=(1.0, 1.5, 2.0, 4.0))
    p.add_argument("--top", type=int, default=10)
    _add_common(p)

    p = sub.add_parser("construct", help="build a function and its construction record")
    p.add_argument("kind", choices=["tribes", "alleq", "coding-tribes", "balanced", "harper-witness", "mean-adjust"])
    for name in ("b", "r", "m", "k", "t", "n-target"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--code", help="code file")
    _add_common(p)

    p = sub.add_parser("codes", help="linear codes over GF(2)")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = csub.add_parser("search", help="seeded search for a code with large dual distance")
    q.add_argument("--mprime", type=int, required=True)
    q.add_argument("--delta", type=float, default=0.5)
    q.add_argument("--budget", type=int, default=2000)
    _add_common(q, seed_required=True)
    for action, text in (("dual", "dual code"), ("weight", "minimum weights of a code and its dual")):
        q = csub.add_parser(action, help=text)
        q.add_argument("file")
        _add_common(q)
    q = csub.add_parser("tail", help="cross-check the MacWilliams criterion against the spectrum")
    q.add_argument("file")
    q.add_argument("--k", type=int, required=True)
    _add_common(q)

    p = sub.add_parser("verify", help="run one check or sweep")
    p.add_argument("check_id", metavar="check_id", help="one of: " + ", ".join(CHECK_IDS))
    _add_check_flags(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"])
    _add_common(p)

    p = sub.add_parser("sweep", help="run several checks with their default sizes into a directory")
    p.add_argument("checks", nargs="*", metavar="check_id")
    p.add_argument("--trials", type=int, help="override the instance count of every sweep")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--manifest")

    p = sub.add_parser("replay", help="rerun a manifest and compare output digests")
    p.add_argument("manifest")
    p.add_argument("--out")
    return parser


COMMANDS = {
    "analyze": cmd_analyze,
    "construct": cmd_construct,
    "codes": cmd_codes,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "replay": cmd_replay,
}


def _run(argv):
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    status = COMMANDS[args.command](args)
    if getattr(args, "manifest", None):
        write_manifest(args.manifest, _strip_manifest(argv), args, status, time.perf_counter() - start)
    return status


def _reason(exc):
    if isinstance(exc, UsageError):
        return exc.reason
    for cls, reason in REASONS:
        if isinstance(exc, cls):
            return reason
    return "internal"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        return _run(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001 - every error becomes one line
        message = " ".join(str(exc).split()) or type(exc).__name__
        print(f"error: {_reason(exc)}: {message}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
