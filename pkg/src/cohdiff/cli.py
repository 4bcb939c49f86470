"""Command-line front end.

Exit codes: 0 when the verdict is ok, 1 when it is a failure (type error,
fuel exhaustion, failed check), 2 for usage, I/O and parse errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .diffmod import diff_mod
from .machine import DeterminismViolation, check_determinism, run
from .pcoh.adequacy import adequacy_check, parse_schedule
from .pcoh.semantics import SemanticsError, psem_bounded
from .syntax import NAT, ParseError, parse_term, parse_type, read_header, render, render_type, t_shift
from .typecheck import TypeError_, check

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    input_digest: str
    verdict: str  # ok | fail | inconclusive
    statistics: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_json(self) -> str:
        body = {"schema_version": SCHEMA_VERSION, "command": self.command,
                "input_digest": self.input_digest, "verdict": self.verdict,
                "statistics": self.statistics, "artifacts": self.artifacts, "details": self.details}
        return json.dumps(_strip_timing(body), indent=2, sort_keys=True, default=str) + "\n"


def _strip_timing(x):
    # wall-clock numbers would make reports differ between identical runs
    if isinstance(x, dict):
        return {k: _strip_timing(v) for k, v in x.items() if k != "seconds"}
    if isinstance(x, list):
        return [_strip_timing(v) for v in x]
    return x


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _read(path: str) -> tuple[str, bytes]:
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return raw.decode("utf-8"), raw


def parse_context(text: str | None):
    """``x : Nat, f : Nat -> Nat`` into a typing context."""
    if not text:
        return ()
    ctx = []
    depth, cur = 0, ""
    parts = []
    for ch in text:
        # split on commas outside parentheses
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    for p in parts:
        if ":" not in p:
            raise UsageError(f"bad context entry {p.strip()!r}")
        name, ty = p.split(":", 1)
        ctx.append((name.strip(), parse_type(ty.strip())))
    return tuple(ctx)


def load_program(path: str):
    """Source, raw bytes, context and parsed term of a .pcfd file."""
    src, raw = _read(path)
    ctx = parse_context(read_header(src, "context"))
    term = parse_term(src, tuple(x for x, _ in ctx))
    return src, raw, ctx, term


def _emit(report: RunReport, args) -> None:
    if getattr(args, "report", None):
        Path(args.report).write_text(report.to_json(), encoding="utf-8")


def _exit_for(verdict: str) -> int:
    return 0 if verdict == "ok" else 1


# -- subcommands -----------------------------------------------------------------------


def cmd_check(args) -> int:
    _, raw, ctx, term = load_program(args.file)
    rep = check(ctx, term)
    if not rep.ok:
        print(f"type error ({rep.kind}): {rep.message}", file=sys.stderr)
        verdict, details = "fail", {"kind": rep.kind, "message": rep.message}
    else:
        print(render_type(rep.type))
        verdict, details = "ok", {"type": render_type(rep.type)}
    _emit(RunReport("check", digest(raw), verdict, details=details), args)
    return _exit_for(verdict)


def cmd_diff(args) -> int:
    _, raw, ctx, term = load_program(args.file)
    if args.var not in dict(ctx):
        raise UsageError(f"variable {args.var!r} is not declared in the context header")
    rep = check(ctx, term)
    if not rep.ok:
        print(f"type error ({rep.kind}): {rep.message}", file=sys.stderr)
        _emit(RunReport("diff", digest(raw), "fail", details={"message": rep.message}), args)
        return 1
    out = diff_mod(args.var, term)
    shifted = tuple((x, t_shift(a) if x == args.var else a) for x, a in ctx)
    rep2 = check(shifted, out)
    print(render(out))
    details = {"term": render(out), "type": render_type(rep2.type) if rep2.ok else None}
    verdict = "ok" if rep2.ok and rep2.type == t_shift(rep.type) else "fail"
    if verdict != "ok":
        print("differential modification is not of type T B", file=sys.stderr)
    _emit(RunReport("diff", digest(raw), verdict, details=details), args)
    return _exit_for(verdict)


def _closed_nat(ctx, term) -> str | None:
    if ctx:
        return "program must be closed"
    rep = check((), term)
    if not rep.ok:
        return f"type error ({rep.kind}): {rep.message}"
    if rep.type != NAT:
        return f"program has type {render_type(rep.type)}, expected Nat"
    return None


def cmd_run(args) -> int:
    _, raw, ctx, term = load_program(args.file)
    err = _closed_nat(ctx, term)
    if err:
        print(err, file=sys.stderr)
        _emit(RunReport("run", digest(raw), "fail", details={"message": err}), args)
        return 1
    res = run(term, fuel=args.fuel, trace=bool(args.trace))
    print(res.describe())
    artifacts = {}
    if args.trace:
        Path(args.trace).write_text(json.dumps(res.trace, indent=1) + "\n", encoding="utf-8")
        artifacts["trace"] = args.trace
    verdict = "fail" if res.outcome == "fuel-exhausted" else "ok"
    stats = {"steps": res.steps, "branch_points": res.branch_points, "erased": res.erased,
             "fuel": args.fuel}
    _emit(RunReport("run", digest(raw), verdict, stats, artifacts, {"outcome": res.outcome, "value": res.value}),
          args)
    return _exit_for(verdict)


def _vector_lines(vec: dict) -> list[str]:
    return [f"{''.join(map(str, w)) or 'e'}:{n} {c}" for (w, n), c in vec.items()]


def cmd_denote(args) -> int:
    _, raw, ctx, term = load_program(args.file)
    if ctx:
        raise UsageError("denote expects a closed program")
    rep = check((), term)
    if not rep.ok:
        print(f"type error ({rep.kind}): {rep.message}", file=sys.stderr)
        return 1
    try:
        vec = psem_bounded(term, args.nat, args.degree, args.fix)
    except SemanticsError as e:
        print(str(e), file=sys.stderr)
        return 1
    lines = _vector_lines(vec)
    print("\n".join(lines) if lines else "0")
    details = {"vector": lines, "budget": [args.nat, args.degree, args.fix]}
    _emit(RunReport("denote", digest(raw), "ok", details=details), args)
    return 0


def _corpus_files(directory: str) -> list[Path]:
    d = Path(directory)
    if not d.is_dir():
        raise UsageError(f"{directory} is not a directory")
    return sorted(d.glob("*.pcfd"))


def _dir_digest(files) -> str:
    h = hashlib.sha256()
    for f in files:
        h.update(f.name.encode())
        h.update(b"\0")
        h.update(f.read_bytes())
    return "sha256:" + h.hexdigest()


def evaluate_file(path: Path, fuel: int, schedule) -> dict:
    """Typecheck, run, explore branches and cross-check one corpus file against its header."""
    out: dict = {"file": path.name}
    try:
        src, _, ctx, term = load_program(str(path))
    except (ParseError, UsageError) as e:
        return {**out, "pass": False, "error": f"parse: {e}"}
    expect = read_header(src, "expect")
    out["expect"] = expect
    if expect and expect.startswith("type "):
        rep = check(ctx, term)
        got = render_type(rep.type) if rep.ok else f"type error: {rep.message}"
        out["outcome"] = got
        out["pass"] = rep.ok and rep.type == parse_type(expect[5:])
        return out
    err = _closed_nat(ctx, term)
    if err:
        return {**out, "pass": expect == "ill-typed", "error": err}
    t0 = time.perf_counter()
    try:
        res = run(term, fuel=fuel)
    except DeterminismViolation as e:
        return {**out, "pass": False, "error": f"determinism: {e}"}
    out["outcome"] = res.describe()
    out["steps"] = res.steps
    det = check_determinism(term, fuel=fuel)
    out["determinism"] = {"ok": det.ok, "leaves": len(det.leaves), "complete": det.complete}
    ad = adequacy_check(term, schedule, fuel)
    out["adequacy"] = {"status": ad.status, "reached_at": list(ad.reached_at) if ad.reached_at else None}
    out["seconds"] = time.perf_counter() - t0
    if expect == "diverge":
        want_run = res.outcome == "fuel-exhausted"
        want_ad = ad.status in ("machine-fuel", "agree")
    elif expect == "zero":
        want_run = res.outcome == "zero"
        want_ad = ad.status == "agree"
    elif expect is not None and expect.isdigit():
        want_run = res.outcome == "numeral" and res.value == int(expect)
        want_ad = ad.status == "agree"
    else:
        return {**out, "pass": False, "error": "missing or malformed expect header"}
    det_ok = det.ok and (det.complete or expect == "diverge")
    if det.complete and res.outcome == "numeral":
        det_ok = det_ok and det.numeral == res.value
    out["pass"] = bool(want_run and want_ad and det_ok)
    return out


def cmd_corpus(args) -> int:
    files = _corpus_files(args.dir)
    schedule = parse_schedule(args.schedule)
    results = [evaluate_file(f, args.fuel, schedule) for f in files]
    passed = sum(r["pass"] for r in results)
    for r in results:
        status = "PASS" if r["pass"] else "FAIL"
        print(f"{status} {r['file']}: expect {r.get('expect')} got {r.get('outcome', r.get('error'))}")
    print(f"{passed}/{len(results)} pass")
    verdict = "ok" if passed == len(results) else "fail"
    stats = {"files": len(results), "passed": passed, "fuel": args.fuel, "schedule": [list(b) for b in schedule]}
    _emit(RunReport("corpus", _dir_digest(files), verdict, stats, details={"results": results}), args)
    return _exit_for(verdict)


def cmd_adequacy(args) -> int:
    files = _corpus_files(args.dir)
    schedule = parse_schedule(args.schedule)
    results = []
    contradictions = inconclusive = 0
    for f in files:
        try:
            src, _, ctx, term = load_program(str(f))
        except ParseError as e:
            results.append({"file": f.name, "status": "parse-error", "message": str(e)})
            contradictions += 1
            continue
        if _closed_nat(ctx, term):
            results.append({"file": f.name, "status": "skipped", "message": "not a closed Nat program"})
            continue
        ad = adequacy_check(term, schedule, args.fuel)
        results.append({"file": f.name, "status": ad.status, "machine": ad.machine,
                        "reached_at": list(ad.reached_at) if ad.reached_at else None,
                        "message": ad.message, "budgets": ad.budgets})
        contradictions += ad.status == "contradiction"
        inconclusive += ad.status == "inconclusive-budget"
        print(f"{ad.status:20s} {f.name} (machine: {ad.machine})")
    verdict = "fail" if contradictions else ("inconclusive" if inconclusive else "ok")
    stats = {"files": len(results), "contradictions": contradictions, "inconclusive": inconclusive,
             "schedule": [list(b) for b in schedule]}
    print(f"verdict: {verdict}")
    _emit(RunReport("adequacy", _dir_digest(files), verdict, stats, details={"results": results}), args)
    return 0 if verdict == "ok" else 1


def cmd_axioms(args) -> int:
    if args.model == "coh":
        from .coh.axioms import CohSuiteConfig, run_coh_suite
        cfg = CohSuiteConfig(max_web=args.max_web, degree=args.degree, bound=args.bound, seed=args.seed)
        rep = run_coh_suite(cfg)
    else:
        from .pcoh.axioms import PcohSuiteConfig, run_pcoh_suite
        cfg = PcohSuiteConfig(max_web=args.max_web, degree=args.degree, seed=args.seed)
        rep = run_pcoh_suite(cfg)
    for c in rep["checks"]:
        status = "PASS" if c["ok"] else "FAIL"
        print(f"{status} {c['name']:40s} {c['checked']:7d} checked, {c['violations']} violations ({c['mode']})")
    verdict = "ok" if rep["ok"] else "fail"
    inp = json.dumps(rep["config"], sort_keys=True).encode()
    _emit(RunReport(f"axioms {args.model}", digest(inp), verdict,
                    {"checks": len(rep["checks"])}, details=rep), args)
    return _exit_for(verdict)


# -- argument parsing --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cohdiff", description="PCF with differentials: machine, semantics, axioms.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add_report(q):
        q.add_argument("--report", metavar="OUT.json", help="write a JSON report")

    q = sub.add_parser("check", help="typecheck a program and print its type")
    q.add_argument("file")
    add_report(q)
    q.set_defaults(fn=cmd_check)

    q = sub.add_parser("diff", help="print the differential modification with respect to a variable")
    q.add_argument("file")
    q.add_argument("--var", required=True)
    add_report(q)
    q.set_defaults(fn=cmd_diff)

    q = sub.add_parser("run", help="run a closed Nat program on the machine")
    q.add_argument("file")
    q.add_argument("--fuel", type=int, default=10_000)
    q.add_argument("--trace", metavar="OUT.json")
    add_report(q)
    q.set_defaults(fn=cmd_run)

    q = sub.add_parser("denote", help="bounded PCOH semantics of a closed program")
    q.add_argument("file")
    q.add_argument("--nat", type=int, default=8)
    q.add_argument("--degree", type=int, default=3)
    q.add_argument("--fix", type=int, default=8)
    add_report(q)
    q.set_defaults(fn=cmd_denote)

    q = sub.add_parser("adequacy", help="cross-check machine and semantics on a directory")
    q.add_argument("dir")
    q.add_argument("--schedule", default="default")
    q.add_argument("--fuel", type=int, default=10_000)
    add_report(q)
    q.set_defaults(fn=cmd_adequacy)

    q = sub.add_parser("axioms", help="run the COH or PCOH axiom suite")
    q.add_argument("model", choices=["coh", "pcoh"])
    q.add_argument("--max-web", type=int, default=3)
    q.add_argument("--degree", type=int, default=None)
    q.add_argument("--bound", type=int, default=4)
    q.add_argument("--seed", type=int, default=0)
    add_report(q)
    q.set_defaults(fn=cmd_axioms)

    q = sub.add_parser("corpus", help="check a directory of programs against their expect headers")
    q.add_argument("dir")
    q.add_argument("--fuel", type=int, default=10_000)
    q.add_argument("--schedule", default="default")
    add_report(q)
    q.set_defaults(fn=cmd_corpus)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "cmd", None) == "axioms" and args.degree is None:
        args.degree = 2 if args.model == "coh" else 3
    for name in ("fuel", "nat", "fix", "max_web", "bound"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            print(f"--{name.replace('_', '-')} must be nonnegative", file=sys.stderr)
            return 2
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except TypeError_ as e:
        print(f"type error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
