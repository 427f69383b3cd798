"""Command line interface.

Queries exit 0 for yes and 1 for no; malformed input exits 2, violated side
conditions 3, and refusing an enumeration beyond the atom cap exits 4.
Output is byte-deterministic for a given input and options.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import engine, transforms
from .encodings import (
    ForallExistsEncoding,
    encode_forall_exists,
    encode_horn_tower,
    encode_inference,
    encode_model_checking,
    manifest,
    prenex_input,
)
from .errors import (
    EXIT_CAP,
    EXIT_NO,
    EXIT_PARSE,
    EXIT_SEMANTIC,
    EXIT_YES,
    CapExceeded,
    NestcircError,
    ParseError,
    SemanticError,
    VerifyFailed,
)
from .formulas import Exists, Formula
from .horn import flatten
from .parser import parse_formula, parse_model, parse_nat, parse_prenex, tokenize
from .printer import render_formula, render_model, render_nat
from .qbf import circ_to_qbf, nat_to_circ, nat_to_qbf, prenex_cnf, write_qdimacs
from .semantics import DEFAULT_CAP
from .theory import Nat, free_letters


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _parse_input(text: str, kind: str):
    """A theory starts with its 'ab' declaration; anything else is read as a
    formula.  --kind overrides the sniffing."""
    if kind == "nat":
        return parse_nat(text)
    if kind == "circ":
        return parse_formula(text)
    toks = tokenize(text)
    if toks and toks[0].kind == "ident" and toks[0].text == "ab":
        return parse_nat(text)
    return parse_formula(text)


def _load(args) -> Formula | Nat:
    return _parse_input(_read(args.file), args.kind)


def _answer(ans: engine.Answer) -> int:
    print("yes" if ans.value else "no")
    return EXIT_YES if ans.value else EXIT_NO


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check(args) -> int:
    obj = _load(args)
    model = parse_model(args.model)
    return _answer(
        engine.check_model(
            obj, model, strategy=args.strategy, cap=args.cap, verify=args.verify
        )
    )


def _cmd_infer(args) -> int:
    obj = _load(args)
    conclusion = parse_formula(args.query)
    return _answer(
        engine.infer(
            obj, conclusion, strategy=args.strategy, cap=args.cap, verify=args.verify
        )
    )


def _cmd_sat(args) -> int:
    obj = _load(args)
    return _answer(
        engine.satisfiable(
            obj, strategy=args.strategy, cap=args.cap, verify=args.verify
        )
    )


def _cmd_models(args) -> int:
    obj = _load(args)
    out = engine.models(
        obj, strategy=args.strategy, cap=args.cap, verify=args.verify
    )
    if isinstance(obj, Nat):
        order = free_letters(obj)
    else:
        from .theory import formula_alphabet

        order = formula_alphabet(obj)
    for m in out:
        print(render_model(m, order))
    return EXIT_YES


def _cmd_flatten(args) -> int:
    obj = _load(args)
    if not isinstance(obj, Nat):
        raise SemanticError("flattening applies to theories")
    flat = flatten(obj)
    index = {a: i + 1 for i, a in enumerate(flat.letters)}
    for a in flat.letters:
        print(f"c var {index[a]} {a}")
    print(f"p cnf {len(flat.letters)} {len(flat.clauses)}")
    for c in flat.clauses:
        nums = [index[p] for p in c.pos] + [-index[n] for n in c.neg]
        print(" ".join(str(x) for x in nums + [0]))
    if flat.model is None:
        print("c least UNSAT")
    else:
        print(f"c least {render_model(flat.model, flat.letters)}")
    return EXIT_YES


def _cmd_to_qdimacs(args) -> int:
    obj = _load(args)
    if isinstance(obj, Nat):
        qbf = nat_to_qbf(obj)
        if obj.ab:
            qbf = Exists(obj.ab, qbf)
    else:
        qbf = circ_to_qbf(obj)
    sys.stdout.write(write_qdimacs(prenex_cnf(qbf, closure=args.closure)))
    return EXIT_YES


def _cmd_sigma_star(args) -> int:
    obj = _load(args)
    if not isinstance(obj, Nat):
        raise SemanticError("this translation applies to theories")
    star = nat_to_circ(obj, keep_outer=args.keep_outer)
    print(render_formula(star.formula))
    if star.renamed:
        print(f"# renamed: {' '.join(star.renamed)}")
    return EXIT_YES


def _cmd_eliminate_fixed(args) -> int:
    obj = _load(args)
    if isinstance(obj, Nat):
        out, introduced = transforms.eliminate_fixed_nat(obj)
        print(render_nat(out))
    else:
        out, introduced = transforms.eliminate_fixed_circ(obj)
        print(render_formula(out))
    if introduced:
        print(f"# introduced: {' '.join(introduced)}")
    return EXIT_YES


def _cmd_lower_minmax(args) -> int:
    obj = _load(args)
    if not isinstance(obj, Nat):
        raise SemanticError("min/max lowering applies to theories")
    out, introduced = transforms.lower_extended(obj)
    print(render_nat(out))
    if introduced:
        print(f"# introduced: {' '.join(introduced)}")
    return EXIT_YES


def _split_letters(text: str) -> tuple[str, ...]:
    return tuple(n for n in text.replace(",", " ").split() if n)


def _cmd_prioritize(args) -> int:
    body = parse_formula(_read(args.file))
    levels = [
        _split_letters(part) for part in args.levels.split(";") if part.strip()
    ]
    floating = _split_letters(args.floating) if args.floating else ()
    out = transforms.compile_prioritized(body, levels, floating)
    print(render_formula(out))
    return EXIT_YES


def _cmd_encode(args) -> int:
    blocks, matrix = parse_prenex(_read(args.file))
    inp = prenex_input(blocks, matrix)
    if args.which == "fe":
        enc = encode_forall_exists(inp)
    elif args.which == "inf":
        enc = encode_inference(inp, close_params=args.params)
    elif args.which == "mc":
        enc = encode_model_checking(inp, outer_empty=args.outer_empty)
    else:
        enc = encode_horn_tower(inp)
    ident = args.id or (Path(args.file).stem if args.file != "-" else "stdin")
    record = manifest(enc, inp, ident)
    if isinstance(enc, ForallExistsEncoding):
        text = render_formula(enc.formula) + "\n"
        suffix = ".lc"
    else:
        text = render_nat(enc.theory) + "\n"
        suffix = ".nat"
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / (ident + suffix)).write_text(text)
        with (outdir / "manifest.jsonl").open("a") as fh:
            fh.write(json.dumps(record) + "\n")
        print(str(outdir / (ident + suffix)))
    else:
        sys.stdout.write(text)
        print(f"# manifest: {json.dumps(record)}")
    return EXIT_YES


def _cmd_stats(args) -> int:
    obj = _load(args)
    info = engine.stats(obj)
    for key, value in info.items():
        if isinstance(value, list):
            value = " ".join(str(v) for v in value)
        print(f"{key}: {value}")
    return EXIT_YES


# ---------------------------------------------------------------------------
# wiring


def _add_common(p: argparse.ArgumentParser, strategies: bool = True) -> None:
    p.add_argument("file", help="input file, or - for stdin")
    p.add_argument(
        "--kind",
        choices=("auto", "circ", "nat"),
        default="auto",
        help="how to read the input (default: sniff)",
    )
    if strategies:
        p.add_argument(
            "--strategy",
            choices=engine.STRATEGIES,
            default="auto",
            help="evaluation strategy",
        )
        p.add_argument(
            "--verify",
            action="store_true",
            help="answer twice with independent strategies and compare",
        )
        p.add_argument(
            "--cap",
            type=int,
            default=DEFAULT_CAP,
            help="refuse enumerations beyond this many letters",
        )


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="nestcirc",
        description="reasoning with nested circumscription and abnormality theories",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="is a model a model?")
    _add_common(p)
    p.add_argument("-m", "--model", required=True, help="model literals, ~ for empty")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("infer", help="is a conclusion entailed?")
    _add_common(p)
    p.add_argument("-q", "--query", required=True, help="conclusion formula")
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("sat", help="is there any model?")
    _add_common(p)
    p.set_defaults(func=_cmd_sat)

    p = sub.add_parser("models", help="list all models")
    _add_common(p)
    p.set_defaults(func=_cmd_models)

    p = sub.add_parser(
        "flatten", help="Horn flat normal form as DIMACS plus its least model"
    )
    _add_common(p, strategies=False)
    p.set_defaults(func=_cmd_flatten)

    p = sub.add_parser("to-qdimacs", help="translate to prenex CNF, QDIMACS out")
    _add_common(p, strategies=False)
    p.add_argument(
        "--closure",
        choices=("exists", "forall"),
        default="exists",
        help="how to close any free letters",
    )
    p.set_defaults(func=_cmd_to_qdimacs)

    p = sub.add_parser(
        "sigma-star", help="rewrite a theory as one nested circumscribed formula"
    )
    _add_common(p, strategies=False)
    p.add_argument(
        "--keep-outer",
        action="store_true",
        help="leave the top-level abnormality letters unrenamed",
    )
    p.set_defaults(func=_cmd_sigma_star)

    p = sub.add_parser("eliminate-fixed", help="rewrite away fixed letters")
    _add_common(p, strategies=False)
    p.set_defaults(func=_cmd_eliminate_fixed)

    p = sub.add_parser("lower-minmax", help="rewrite away min/max letter lists")
    _add_common(p, strategies=False)
    p.set_defaults(func=_cmd_lower_minmax)

    p = sub.add_parser(
        "prioritize", help="compile priority levels into nested circumscription"
    )
    p.add_argument("file", help="plain formula file, or - for stdin")
    p.add_argument(
        "--levels",
        required=True,
        help="semicolon-separated letter groups, most preferred first",
    )
    p.add_argument("--floating", default="", help="letters left floating")
    p.set_defaults(func=_cmd_prioritize)

    p = sub.add_parser("encode", help="hardness encodings from a prenex QBF")
    p.add_argument("which", choices=("fe", "inf", "mc", "xhorn"))
    p.add_argument("file", help="prenex input file, or - for stdin")
    p.add_argument("-o", "--out", help="directory for the instance and manifest")
    p.add_argument("--id", help="instance name (default: input file stem)")
    p.add_argument(
        "--params",
        action="store_true",
        help="inf: close free matrix letters universally in one extra level",
    )
    p.add_argument(
        "--outer-empty",
        action="store_true",
        help="mc: use an empty outer letter group",
    )
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("stats", help="structural facts about the input")
    _add_common(p, strategies=False)
    p.set_defaults(func=_cmd_stats)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"refusing to enumerate: {exc}", file=sys.stderr)
        return EXIT_CAP
    except VerifyFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except SemanticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except NestcircError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
