"""Command-line front end.

Exit codes: 0 verified, 1 a check failed, 2 parse error, 3 verified only up
to a bound, 64 usage, 65 bad input file, 70 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import algebra as alg_mod
from . import frames as fr
from . import ordinal, proofs
from .formats import (
    FormatError,
    algebra_from_json,
    algebra_to_json,
    bundled_corpus,
    data_path,
    frame_from_json,
    frame_to_json,
    read_corpus,
    read_json,
    write_json,
)
from .semantics import DEFAULT_BUDGET, BudgetExceeded, check_duality, frame_validates, _has_quantifier
from .syntax import ParseError, dump, parse, predicates, random_formula, to_text

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_BOUNDED = 0, 1, 2, 3
EXIT_USAGE, EXIT_FORMAT, EXIT_BUDGET = 64, 65, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


@dataclass
class RunConfig:
    command: str
    max_domain: int = 2
    omega_bound: int = 8
    max_worlds: int = 3
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    format: str = "text"

    def __post_init__(self):
        for name in ("max_domain", "omega_bound", "max_worlds", "budget"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")


class Output:
    """Text lines or one JSON record per line."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, text: str, **record):
        if self.fmt == "jsonl":
            print(json.dumps(record or {"message": text}, sort_keys=True, ensure_ascii=False), file=self.stream)
        else:
            print(text, file=self.stream)


def _props(text: str, allowed: Sequence[str]) -> list[str]:
    props = [p.strip().lower() for p in text.split(",") if p.strip()]
    bad = [p for p in props if p not in allowed]
    if bad or not props:
        raise UsageError(f"unknown properties {bad}; choose from {', '.join(allowed)}")
    return props


# ---------------------------------------------------------------------------
# Commands


def cmd_parse(args, cfg: RunConfig, out: Output) -> int:
    try:
        f = parse(args.formula)
    except ParseError as e:
        out.emit(f"parse error at line {e.line}, column {e.column}: {e.message}",
                 error="parse", line=e.line, column=e.column, message=e.message)
        return EXIT_PARSE
    out.emit(dump(f), formula=to_text(f), ast=dump(f))
    return EXIT_OK


FRAME_PROPS = ("mt", "tp", "cf", "kripke", "gl")


def cmd_frame_check(args, cfg, out) -> int:
    frame = frame_from_json(read_json(args.file))
    props = _props(args.props, FRAME_PROPS)
    mods = [args.modality] if args.modality else list(frame.modalities)
    checks = {"mt": fr.check_mt, "tp": fr.check_tp, "cf": fr.check_cf, "kripke": fr.check_kripke,
              "gl": alg_mod.check_gl_frame}
    ok = True
    for m in mods:
        if m not in frame.neighborhoods:
            raise UsageError(f"frame has no modality {m!r}")
        for p in props:
            value = checks[p](frame, m)
            ok &= value
            out.emit(f"{m} {p}: {value}", modality=m, property=p, holds=value)
    return EXIT_OK if ok else EXIT_FAIL


ALGEBRA_PROPS = ("mt", "tp", "cf", "multiplicative", "ckl")


def cmd_algebra_check(args, cfg, out) -> int:
    alg = algebra_from_json(read_json(args.file))
    props = _props(args.props, ALGEBRA_PROPS)
    ok = True
    for p in props:
        if p == "ckl":
            value = alg_mod.check_ckl_algebra(alg)
            ok &= value
            out.emit(f"E,C ckl: {value}", modality="E,C", property=p, holds=value)
            continue
        fn = {"mt": alg_mod.check_algebra_mt, "tp": alg_mod.check_algebra_tp, "cf": alg_mod.check_algebra_cf,
              "multiplicative": alg_mod.check_completely_multiplicative}[p]
        for m in alg.modalities:
            value = fn(alg, m)
            ok &= value
            out.emit(f"{m} {p}: {value}", modality=m, property=p, holds=value)
    return EXIT_OK if ok else EXIT_FAIL


def _write_or_print(doc, path, out: Output):
    if path:
        write_json(doc, path)
    else:
        print(json.dumps(doc, sort_keys=True), file=out.stream)


def cmd_complex(args, cfg, out) -> int:
    frame = frame_from_json(read_json(args.file))
    _write_or_print(algebra_to_json(alg_mod.complex_algebra(frame)), args.output, out)
    return EXIT_OK


def cmd_qfilter(args, cfg, out) -> int:
    alg = algebra_from_json(read_json(args.file))
    try:
        qf = alg_mod.qfilter_frame(alg)
    except ValueError as e:
        raise FormatError(f"{args.file}: {e}") from None
    _write_or_print(frame_to_json(qf.frame), args.output, out)
    f = alg_mod.embedding(alg, (), qf.filters)
    mono = alg_mod.is_modal_monomorphism(alg, alg_mod.complex_algebra(qf.frame), f)
    ok = all(mono.values())
    for k, v in mono.items():
        out.emit(f"embedding {k}: {v}", check="embedding", property=k, holds=v)
    for m, row in alg_mod.preservation_report(alg).items():
        for p in ("mt", "tp", "cf"):
            if not row[f"algebra_{p}"]:
                out.emit(f"{m} {p} preserved: not-applicable", check="preservation", modality=m, property=p,
                         holds=None)
                continue
            v = row[f"frame_{p}"]
            ok &= v
            out.emit(f"{m} {p} preserved: {v}", check="preservation", modality=m, property=p, holds=v)
    return EXIT_OK if ok else EXIT_FAIL


def _is_exact(formula) -> bool:
    # Without quantifiers and non-0-ary predicates the domain size is irrelevant.
    return not _has_quantifier(formula) and all(a == 0 for a in predicates(formula).values())


def cmd_validate(args, cfg, out) -> int:
    frame = frame_from_json(read_json(args.file))
    try:
        f = parse(args.formula)
    except ParseError as e:
        out.emit(f"parse error at line {e.line}, column {e.column}: {e.message}", error="parse")
        return EXIT_PARSE
    res = frame_validates(frame, f, cfg.max_domain, cfg.budget, free="universal")
    if res.valid:
        exact = _is_exact(f)
        out.emit(f"valid{'' if exact else f' (domains up to {cfg.max_domain})'}", formula=to_text(f), valid=True,
                 bound=None if exact else cfg.max_domain)
        return EXIT_OK if exact else EXIT_BOUNDED
    m = res.model
    true_at = {p: [[c, list(t)] for c, rel in enumerate(ws) for t in sorted(rel)] for p, ws in m.extension.items()}
    out.emit(f"countermodel: domain {m.domain}, world {res.world}, assignment {res.assignment}, true_at {true_at}",
             formula=to_text(f), valid=False, domain=m.domain, world=res.world, assignment=res.assignment,
             true_at=true_at)
    return EXIT_FAIL


def cmd_duality(args, cfg, out) -> int:
    frame = frame_from_json(read_json(args.file)) if args.file else frame_from_json(read_json(data_path("frame3.json")))
    if args.random:
        rng = random.Random(cfg.seed)
        formulas = [random_formula(rng, 3, frame.modalities) for _ in range(args.random)]
    elif args.corpus:
        try:
            formulas = read_corpus(Path(args.corpus).read_text(encoding="utf-8"))
        except OSError as e:
            raise FormatError(f"{args.corpus}: {e.strerror}") from None
    else:
        formulas = bundled_corpus()
    report = check_duality(frame, formulas, cfg.max_domain, cfg.budget)
    for row in report.rows:
        mark = "agree" if row.agree else "DISAGREE"
        out.emit(f"{mark} frame={row.frame_valid} algebra={row.algebra_valid} {to_text(row.formula)}", **row.record())
    n_bad = len(report.disagreements)
    out.emit(f"{len(report)} formulas, {n_bad} disagreements", formulas=len(report), disagreements=n_bad)
    return EXIT_OK if n_bad == 0 else EXIT_FAIL


def cmd_gl_check(args, cfg, out) -> int:
    if args.file:
        frame = frame_from_json(read_json(args.file))
        value = alg_mod.check_gl_frame(frame, args.modality)
        out.emit(f"gl: {value}", property="gl", holds=value)
        return EXIT_OK if value else EXIT_FAIL
    ok = True
    for n in range(1, cfg.max_worlds + 1):
        total = passed = 0
        for rel in fr.strict_partial_orders(n):
            total += 1
            passed += alg_mod.check_gl_frame(fr.kripke_frame(n, rel))
        ok &= passed == total
        out.emit(f"{n} worlds: {passed}/{total} strict partial orders pass", worlds=n, frames=total, passed=passed)
    loop = alg_mod.check_gl_frame(fr.kripke_frame(1, [(0, 0)]))
    ok &= not loop
    out.emit(f"reflexive point passes: {loop}", frame="reflexive point", holds=loop)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_ckl_demo(args, cfg, out) -> int:
    ok = True
    if args.samples:
        laws = ordinal.verify_ckl_laws(args.samples, cfg.seed)
        ok &= laws.ok
        out.emit(f"laws over {args.samples} samples: {len(laws.violations)} violations",
                 samples=args.samples, violations=len(laws.violations))
        for law, x, y in laws.violations[:10]:
            out.emit(f"  {law}: x = {x}, y = {y}", law=law, x=str(x), y=str(y))
    rep = ordinal.demo_incompleteness()
    for line in rep.lines():
        out.emit(line, line=line)
    ok &= rep.refuted
    return EXIT_OK if ok else EXIT_FAIL


def cmd_prove_check(args, cfg, out) -> int:
    try:
        system = proofs.get_system(args.system)
    except proofs.ProofError as e:
        raise UsageError(str(e)) from None
    if args.file:
        doc = read_json(args.file)
        try:
            proof = proofs.proof_from_json(doc, Path(args.file).parent)
        except (proofs.ProofError, ParseError) as e:
            raise FormatError(f"{args.file}: {e}") from None
    else:
        proof = proofs.generate_mhformula_proof()
    report = proofs.check_proof(system, proof, cfg.omega_bound)
    for i, (step, verdict) in enumerate(zip(proof.steps, report.verdicts)):
        out.emit(f"{i}: {to_text(step.formula)}    [{verdict}]", step=i, formula=to_text(step.formula), verdict=verdict)
    out.emit(str(report.status), status=str(report.status))
    status = report.status
    if isinstance(status, proofs.Rejected):
        return EXIT_FAIL
    return EXIT_BOUNDED if isinstance(status, proofs.CheckedToBound) else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--max-domain", type=int, default=2)
    common.add_argument("--omega-bound", type=int, default=8)
    common.add_argument("--max-worlds", type=int, default=3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--format", choices=("text", "jsonl"), default="text")

    p = _Parser(prog="omegamodal", description="Neighborhood and algebraic semantics for predicate modal logics.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("parse", parents=[common], help="parse a formula and print its syntax tree")
    s.add_argument("formula")
    s.set_defaults(func=cmd_parse)

    frame = sub.add_parser("frame", help="frame commands")
    fsub = frame.add_subparsers(dest="action", parser_class=_Parser)
    s = fsub.add_parser("check", parents=[common], help="check frame properties")
    s.add_argument("file")
    s.add_argument("--props", default="mt,tp,cf")
    s.add_argument("--modality")
    s.set_defaults(func=cmd_frame_check)

    algebra = sub.add_parser("algebra", help="algebra commands")
    asub = algebra.add_subparsers(dest="action", parser_class=_Parser)
    s = asub.add_parser("check", parents=[common], help="check algebra properties")
    s.add_argument("file")
    s.add_argument("--props", default="mt,tp,cf")
    s.set_defaults(func=cmd_algebra_check)

    s = sub.add_parser("complex", parents=[common], help="complex algebra of a frame")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_complex)

    s = sub.add_parser("qfilter", parents=[common], help="Q-filter frame of an algebra, with verification")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_qfilter)

    s = sub.add_parser("validate", parents=[common], help="bounded validity of a formula on a frame")
    s.add_argument("file")
    s.add_argument("formula")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("duality", parents=[common], help="compare frame and complex-algebra validity")
    s.add_argument("file", nargs="?")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--corpus")
    g.add_argument("--random", type=int)
    s.set_defaults(func=cmd_duality)

    s = sub.add_parser("gl-check", parents=[common], help="GL-frame check of a frame, or of all small ones")
    s.add_argument("file", nargs="?")
    s.add_argument("--modality")
    s.set_defaults(func=cmd_gl_check)

    s = sub.add_parser("ckl-demo", parents=[common], help="the ordinal counterexample algebra")
    s.add_argument("--samples", type=int, default=500)
    s.set_defaults(func=cmd_ckl_demo)

    prove = sub.add_parser("prove", help="proof commands")
    psub = prove.add_subparsers(dest="action", parser_class=_Parser)
    s = psub.add_parser("check", parents=[common], help="check a proof file (default: the bundled one)")
    s.add_argument("system")
    s.add_argument("file", nargs="?")
    s.set_defaults(func=cmd_prove_check)
    return p


def main(argv: Sequence[str] | None = None, stream=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not hasattr(args, "func"):
            raise UsageError(parser.format_usage())
        cfg = RunConfig(args.command, args.max_domain, args.omega_bound, args.max_worlds, args.seed, args.budget,
                        args.format)
        return args.func(args, cfg, Output(cfg.format, stream))
    except UsageError as e:
        print(str(e).rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except ParseError as e:
        print(f"parse error at line {e.line}, column {e.column}: {e.message}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
