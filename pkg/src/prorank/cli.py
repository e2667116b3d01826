"""Command-line front end: ``prorank <command> ...``.

Exit status: 0 when everything decided passes (or a plain query succeeded),
1 when a check fails or an input is rejected, 2 when a cap left something
undecided. Caps come from ``--cap-*`` flags, then ``PRORANK_CAP_*``
environment variables, then the built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import Caps, RunConfig, caps_from_env
from .errors import ProrankError, Undecided

EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED = 0, 1, 2

INVARIANTS = ("order", "d", "rank", "profile", "frattini-series", "omega1", "powerful")
SCHEMAS = ("beta1", "gamma", "quotient-iso")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse's own status 2 would read as "undecided"
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ---------------------------------------------------------------------------
# argument helpers


def parse_primes(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return sorted({int(t) for t in text.replace(" ", "").split(",") if t})
    except ValueError as exc:
        raise UsageError(f"bad prime list {text!r}") from exc


def parse_prime_map(text: str | None) -> dict[int, int] | None:
    """``"2:2,3:1"`` -> ``{2: 2, 3: 1}``."""
    if text is None:
        return None
    out = {}
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        try:
            k, v = part.split(":")
            out[int(k)] = int(v)
        except ValueError as exc:
            raise UsageError(f"bad prime map entry {part!r}; expected p:value") from exc
    return out


def build_config(args) -> RunConfig:
    caps = caps_from_env()
    caps = caps.with_(order=args.cap_order, subgroups=args.cap_subgroups, steps=args.cap_steps,
                      search=args.cap_search, tower_order=args.cap_tower_order,
                      tower_depth=args.cap_tower_depth)
    return RunConfig(caps=caps, jobs=args.jobs, format=args.format, timing=args.timing)


def _is_family_doc(path: str) -> bool:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return False
    return isinstance(doc, dict) and ("family" in doc or "type" in doc) and "spec" not in doc


def load_target_group(path: str, depth: int | None, caps: Caps):
    """A group file, or a family file together with ``--depth``."""
    from .spec import load_group_file
    from .towers import finite_quotient, load_family_file
    if _is_family_doc(path):
        if depth is None:
            raise UsageError(f"{path} describes a family; pass --depth")
        return finite_quotient(load_family_file(path), depth, caps).group
    return load_group_file(path, caps)


def emit(obj: dict, fmt: str, text: str) -> None:
    if fmt == "structured":
        print(json.dumps(obj, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_invariant(args, cfg: RunConfig) -> int:
    from .group import factorize
    from .invariants import (frattini_series, is_powerful, min_generators, omega1, rank,
                             rank_profile)
    caps = cfg.caps
    G = load_target_group(args.target, args.depth, caps)
    which = args.which
    primes = sorted(factorize(G.order))
    if which == "order":
        value = G.order
    elif which == "d":
        value = min_generators(G, caps=caps)
    elif which == "rank":
        value = rank(G, caps=caps)
    elif which == "profile":
        pi = parse_primes(args.pi) or primes or [2]
        value = rank_profile(G, pi, caps).as_dict()
    elif which == "frattini-series":
        chain = frattini_series(G, args.depth_series, caps=caps)
        value = chain.orders
    elif which == "omega1":
        ps = parse_primes(args.pi) or primes
        value = {str(p): int(omega1(G, p).size) for p in ps}
    else:
        if len(primes) > 1:
            raise UsageError("powerful is defined for p-groups")
        value = True if not primes else is_powerful(G, primes[0])
    rec = {"group": G.label, "order": G.order, "invariant": which, "value": value}
    emit(rec, cfg.format, f"{which}: {_text_value(value)}")
    return EXIT_OK


def _text_value(v, top: bool = True) -> str:
    if isinstance(v, dict):
        if top:
            return " ".join(f"{k}={_text_value(x, False)}" for k, x in v.items())
        return "{" + ",".join(f"{k}:{_text_value(x, False)}" for k, x in v.items()) + "}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    return str(v)


def cmd_eval(args, cfg: RunConfig) -> int:
    from .fol.fast import eval_fast
    from .fol.naive import NaiveEvaluator
    from .fol.parser import parse_formula
    from .fol.syntax import is_sentence
    caps = cfg.caps
    try:
        text = Path(args.formula).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.formula}: {exc}") from exc
    f = parse_formula(text)
    if not is_sentence(f):
        raise UsageError("formula file must hold a sentence (no free variables)")
    G = load_target_group(args.group, args.depth, caps)
    witness, kind = {}, ""
    if args.mode == "fast":
        value = eval_fast(G, f, caps)
    else:
        out = NaiveEvaluator(G, caps).run(f, want_witness=args.witness)
        value, witness, kind = out.value, out.witness, out.witness_kind
    rec = {"group": G.label, "mode": args.mode, "value": value}
    text_out = "true" if value else "false"
    if args.witness and witness:
        rec["witness"] = witness
        rec["witness_kind"] = kind
        text_out += f"\n{kind}: " + " ".join(f"{k}={v}" for k, v in witness.items())
    emit(rec, cfg.format, text_out)
    return EXIT_OK


def cmd_build_sentence(args, cfg: RunConfig) -> int:
    from .fol.parser import parse_formula
    from .fol.prefix import prefix_class
    from .fol.schemas import build_beta1, build_gamma, build_quotient_iso_sentence
    from .fol.syntax import format_formula, size
    from .spec import load_group_file
    if args.schema == "beta1":
        pi = parse_primes(args.pi)
        if not pi or args.r is None:
            raise UsageError("beta1 needs --pi and --r")
        s = build_beta1(pi, args.r)
        header = f"beta1 pi={','.join(map(str, pi))} r={args.r}"
    elif args.schema == "gamma":
        if args.q is None:
            raise UsageError("gamma needs --q")
        s = build_gamma(args.q)
        header = f"gamma q={args.q}"
    else:
        if not args.b_file or not args.phi:
            raise UsageError("quotient-iso needs --b-file and --phi")
        B = load_group_file(args.b_file, cfg.caps)
        s = build_quotient_iso_sentence(B, parse_formula(args.phi))
        header = f"quotient-iso B={B.label} phi={args.phi}"
    pc = prefix_class(s)
    body = f"# {header}\n{format_formula(s)}\n"
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    rec = {"schema": args.schema, "prefix": pc.ascii, "size": size(s), "out": args.out}
    lines = [f"prefix: {pc} ({pc.ascii})", f"size: {size(s)}"]
    if args.out:
        lines.append(f"written: {args.out}")
    elif cfg.format != "structured":
        lines.append(body.rstrip("\n"))
    if cfg.format == "structured" and not args.out:
        rec["sentence"] = format_formula(s)
    emit(rec, cfg.format, "\n".join(lines))
    return EXIT_OK


def cmd_corpus(args, cfg: RunConfig) -> int:
    from .spec import dump_group_file
    from .verify.corpus import standard_corpus_entries
    primes = parse_primes(args.pi) or [2, 3]
    entries = standard_corpus_entries(args.max_order, primes, cfg.caps)
    if args.write:
        out = Path(args.write)
        out.mkdir(parents=True, exist_ok=True)
    for e in entries:
        rec = {"label": e.label, "order": e.group.order, "provenance": e.provenance}
        if args.write:
            name = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in e.label)
            path = out / f"{e.group.order:04d}_{name}.group"
            dump_group_file(path, e.group_spec(), e.label)
            rec["file"] = str(path)
        emit(rec, cfg.format, f"{e.group.order:>6}  {e.label:<28} {e.provenance}")
    if cfg.format != "structured":
        print(f"total: {len(entries)}")
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    from .verify.report import exit_code, render
    from .verify.suites import run_items
    items = verify_items(args, cfg)
    reports = run_items(items, cfg.jobs)
    sys.stdout.write(render(reports, cfg.format, cfg.timing))
    return exit_code(reports)


def verify_items(args, cfg: RunConfig):
    """Items for ``verify``: the named suite, or the check applied to an explicit target."""
    from .verify.suites import SUITES
    caps = cfg.caps
    check = args.check
    if check == "acceptance":
        from .verify.suites import ACCEPTANCE_ORDER
        return [it for name in ACCEPTANCE_ORDER for it in SUITES[name].build(caps)]
    if not args.target:
        return SUITES[check].build(caps)
    out = []
    for target in args.target:
        if target.startswith("corpus:"):
            out.extend(_group_items(check, _corpus_target(target, caps), args, caps))
        elif _is_family_doc(target):
            from .towers import load_family_file
            out.extend(_family_items(check, load_family_file(target), args, caps))
        else:
            from .spec import load_group_file
            out.extend(_group_items(check, [load_group_file(target, caps)], args, caps))
    return out


def _corpus_target(text: str, caps: Caps):
    from .verify.corpus import standard_corpus
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise UsageError("corpus target is corpus:MAX_ORDER[:P1,P2,...]")
    try:
        max_order = int(parts[1])
    except ValueError as exc:
        raise UsageError(f"bad corpus order in {text!r}") from exc
    primes = parse_primes(parts[2]) if len(parts) == 3 else [2, 3]
    return standard_corpus(max_order, primes, caps)


def _group_items(check: str, groups, args, caps: Caps):
    from .group import factorize
    from .verify import checks, suites
    from .verify.lucchini import verify_lucchini
    pi = parse_primes(args.pi)
    items = []
    for G in groups:
        gpi = pi or sorted(factorize(G.order)) or [2]
        if check == "thm-1-3":
            items.append(lambda G=G: checks.verify_thm_1_3(G, caps))
        elif check == "thm-2-1":
            items.append(lambda G=G, gpi=gpi: checks.verify_thm_2_1(G, None, args.r, gpi, caps))
        elif check == "cor-2-2":
            items.append(lambda G=G, gpi=gpi: checks.verify_cor_2_2(G, None, args.r, gpi, caps))
        elif check == "hl":
            items.append(lambda G=G: checks.verify_hl(G, None, caps))
        elif check == "lucchini":
            items.append(lambda G=G: verify_lucchini(G, caps))
        elif check == "rank-axiom":
            if args.r is None:
                items.append(lambda G=G, gpi=gpi: suites.rank_axiom_sweep(G, gpi, 3, caps))
            else:
                rvec = parse_prime_map(args.rvec)
                items.append(lambda G=G, gpi=gpi: rank_axiom_report(G, gpi, args.r, rvec, caps))
        elif check == "quotient-iso":
            if not args.phi or not args.b_file:
                raise UsageError("quotient-iso needs --phi and --b-file")
            from .spec import load_group_file
            B = load_group_file(args.b_file, caps)
            items.append(lambda G=G: suites.quotient_iso_report(G, args.phi, B, caps))
        elif check == "evaluators":
            items.append(lambda G=G: suites.evaluator_report(G, caps))
        else:
            raise UsageError(f"{check} takes a family target (family file)")
    return items


def _family_items(check: str, fam, args, caps: Caps):
    from .towers import JordanMetabelian, family_primes, rank_upper_bound
    from .verify import checks, suites
    depth = args.depth
    if check == "thm-1-4":
        return [lambda: checks.verify_thm_1_4(fam, caps)]
    if check == "dim-axiom":
        if args.r is None or args.dvec is None:
            return suites.dim_axiom_items(caps, [fam])
        dvec = parse_prime_map(args.dvec)
        pi = parse_primes(args.pi) or family_primes(fam)
        return [lambda: dim_axiom_report(fam, pi, args.r, dvec, caps)]
    if check == "example-2-3":
        if not isinstance(fam, JordanMetabelian):
            raise UsageError("example-2-3 needs a jordan_metabelian family")
        return [lambda: suites.example_2_3_report(fam.p, fam.n, caps)]
    if depth is None:
        raise UsageError(f"{check} on a family needs --depth")
    if check == "thm-1-3":
        if suites.beyond_enumeration(fam, depth, caps):
            return [lambda: checks.verify_thm_1_3_lattice(fam, depth, caps)]
        return [suites.tower_item(check, fam, depth, caps, lambda lv: checks.verify_thm_1_3(lv.group, caps))]
    if check == "thm-2-1":
        R = args.r if args.r is not None else rank_upper_bound(fam, caps)
        pi = parse_primes(args.pi) or family_primes(fam)
        if suites.beyond_enumeration(fam, depth, caps):
            return [lambda: checks.verify_thm_2_1_lattice(fam, depth, R, caps)]
        return [suites.tower_item(check, fam, depth, caps,
                                  lambda lv: checks.verify_thm_2_1(lv.group, lv.F, R, pi, caps))]
    # group checks on one level of the tower
    from .towers import finite_quotient
    G = finite_quotient(fam, depth, caps).group
    return _group_items(check, [G], args, caps)


def rank_axiom_report(G, pi, r: int, rvec, caps: Caps):
    """The rank axiom for one (r, rvec): pass when it holds, fail with the brute-force profile otherwise.

    Without ``rvec`` only the rank part is asked for.
    """
    from .invariants import rank_profile
    from .verify.checks import rank_axiom_trace
    from .verify.report import FAIL, run_check

    def body(rep):
        trace = rank_axiom_trace(G, pi, r, caps)
        prof = rank_profile(G, pi, caps)
        want_vec = rvec if rvec is not None else dict(prof.p_ranks)
        decided = trace.decide(want_vec, pi)
        oracle = prof.rank == r and all(prof.p_ranks.get(p, 0) == want_vec.get(p, 0) for p in pi)
        rep.quantities.update(decided=decided, profile=prof.as_dict(), layer_ranks=trace.layer_ranks,
                              semi_powerful=trace.gamma_ok, quotient_order=trace.quotient_order)
        if decided != oracle:
            rep.verdict = FAIL
            rep.witness = {"violated": "decider agrees with rank_profile", "oracle": oracle}
        elif not decided:
            rep.verdict = FAIL
            rep.witness = {"profile": prof.as_dict()}
            rep.message = "rank axiom does not hold"

    inputs = {"group": G.label, "order": G.order, "pi": list(pi), "r": r,
              "rvec": {str(k): v for k, v in sorted(rvec.items())} if rvec is not None else None}
    return run_check("rank-axiom", inputs, body)


def dim_axiom_report(fam, pi, r: int, dvec, caps: Caps):
    from .towers import describe_family, dim_analytic
    from .verify.checks import decide_dim_axiom
    from .verify.report import FAIL, run_check

    def body(rep):
        decided = decide_dim_axiom(fam, pi, r, dvec, caps)
        analytic = dim_analytic(fam)
        if not isinstance(analytic, dict):
            analytic = {pi[0]: analytic}
        oracle = all(analytic.get(p, 0) == dvec.get(p, 0) for p in pi)
        rep.quantities.update(decided=decided, dim=analytic)
        if decided != oracle:
            rep.verdict = FAIL
            rep.witness = {"violated": "decider agrees with the closed form", "oracle": oracle}
        elif not decided:
            rep.verdict = FAIL
            rep.witness = {"dim": analytic}
            rep.message = "dimension axiom does not hold"

    inputs = {"family": describe_family(fam), "pi": list(pi), "r": r,
              "dvec": {str(k): v for k, v in sorted(dvec.items())}}
    return run_check("dim-axiom", inputs, body)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    from .verify.suites import SUITES
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("caps and output")
    g.add_argument("--cap-order", type=int, help="largest group built from a spec")
    g.add_argument("--cap-subgroups", type=int, help="largest group whose subgroups are enumerated")
    g.add_argument("--cap-steps", type=int, help="naive evaluator step budget")
    g.add_argument("--cap-search", type=int, help="generator / isomorphism search budget")
    g.add_argument("--cap-tower-order", type=int, help="largest tower level built")
    g.add_argument("--cap-tower-depth", type=int, help="deepest tower level built")
    g.add_argument("--format", choices=("text", "structured"), default="text")
    g.add_argument("--jobs", type=int, default=1, help="worker processes for batch checks")
    g.add_argument("--timing", action="store_true", help="include wall-clock times in reports")

    p = _Parser(prog="prorank", description="Finite group engine and rank / dimension axiom checker.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("invariant", parents=[common], help="compute an invariant of a group")
    s.add_argument("target", help="group file, or family file with --depth")
    s.add_argument("which", choices=INVARIANTS)
    s.add_argument("--pi", help="prime list, e.g. 2,3")
    s.add_argument("--depth", type=int, help="tower level when the target is a family")
    s.add_argument("--series-length", dest="depth_series", type=int, default=8,
                   help="terms of the Frattini series to print")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("eval", parents=[common], help="evaluate a sentence on a group")
    s.add_argument("formula", help="formula file")
    s.add_argument("group", help="group file, or family file with --depth")
    s.add_argument("--mode", choices=("naive", "fast"), default="naive")
    s.add_argument("--witness", action="store_true", help="print the outer-block witness (naive)")
    s.add_argument("--depth", type=int)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("build-sentence", parents=[common], help="write a schema sentence")
    s.add_argument("schema", choices=SCHEMAS)
    s.add_argument("--pi")
    s.add_argument("--r", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--b-file")
    s.add_argument("--phi")
    s.add_argument("-o", "--out", help="output formula file (default: print)")
    s.set_defaults(func=cmd_build_sentence)

    s = sub.add_parser("verify", parents=[common], help="run a check batch")
    s.add_argument("check", choices=sorted(SUITES) + ["acceptance"])
    s.add_argument("target", nargs="*",
                   help="corpus:MAX[:P,..], group files or family files (default: the standard suite)")
    s.add_argument("--depth", type=int)
    s.add_argument("--pi")
    s.add_argument("--r", type=int)
    s.add_argument("--rvec", help="p-ranks, e.g. 2:2,3:1")
    s.add_argument("--dvec", help="dimensions, e.g. 2:2")
    s.add_argument("--phi")
    s.add_argument("--b-file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("corpus", parents=[common], help="list (and optionally write) the standard corpus")
    s.add_argument("--max-order", type=int, default=32)
    s.add_argument("--pi", help="prime list (default 2,3)")
    s.add_argument("--write", metavar="DIR", help="write one group file per entry")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = build_config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"prorank: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except Undecided as exc:
        print(f"prorank: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (ProrankError, ValueError, OSError) as exc:
        print(f"prorank: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
