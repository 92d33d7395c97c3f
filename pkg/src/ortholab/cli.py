"""Command-line front end.

Every command prints one report (JSON or a text rendering of the same
data).  Rationals are printed exactly, never as decimals, and a report is
byte-for-byte reproducible from the same argv and seed.

Exit codes: 0 on success (including "law holds"), 1 when a counterexample
was found, 2 on usage, file or parse errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__
from .classical import TwoStateVerdict, two_state_demo
from .dsl import (
    BooleanSetAlgebra,
    SubspaceLattice,
    check,
    parse_statement,
    parse_statement_lines,
)
from .lattice import (
    GAUSSIAN_RATIONAL,
    RATIONAL_REAL,
    Subspace,
    join,
    leq,
    meet,
    ortho,
    subspace_from_json,
    subspace_to_json,
)
from .linalg import vector_from_json
from .process import (
    check_distributivity,
    histories_to_json,
    holds_surely,
    hatch_demo,
    prob_of,
    run,
    spin_demo,
)
from .propositions import evaluate, proposition_from_json

__all__ = ["main"]


def _file_input(path: str) -> dict:
    with open(path, "rb") as fh:
        blob = fh.read()
    return {"path": path, "sha256": hashlib.sha256(blob).hexdigest()}


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _formula_summary(formulas: dict, histories) -> dict:
    return {
        name: {"surely": holds_surely(f, histories), "prob": str(prob_of(f, histories))}
        for name, f in formulas.items()
    }


def _identity_section(formulas: dict, histories, before: str, after: str) -> dict:
    """The three distributive-law comparisons over one demo's histories.

    ``before`` and ``after`` are the stage tags to use for the q/r atoms;
    p is always taken at the earlier stage.  The mixed comparison evaluates
    the two sides at different stages on purpose, which is flagged.
    """
    p = formulas[f"p_{before}"]
    q0, r0 = formulas[f"q_{before}"], formulas[f"r_{before}"]
    q1, r1 = formulas[f"q_{after}"], formulas[f"r_{after}"]
    sections = {
        "at_preparation": (p & (q0 | r0), (p & q0) | (p & r0)),
        "at_measurement": (p & (q1 | r1), (p & q1) | (p & r1)),
        "mixed_stages": (p & (q1 | r1), (p & q0) | (p & r0)),
    }
    return {
        name: check_distributivity(left, right, histories).to_json()
        for name, (left, right) in sections.items()
    }


def _demo_spin() -> dict:
    stages, formulas = spin_demo()
    histories = run(stages)
    named = dict(formulas)
    named["p_i & q_o"] = formulas["p_i"] & formulas["q_o"]
    named["q_i | r_i"] = formulas["q_i"] | formulas["r_i"]
    named["q_o | r_o"] = formulas["q_o"] | formulas["r_o"]
    named["q'_i | r'_i"] = formulas["q'_i"] | formulas["r'_i"]
    named["p_f | q_f"] = formulas["p_f"] | formulas["q_f"]
    return {
        "histories": histories_to_json(histories),
        "formulas": _formula_summary(named, histories),
        "identities": _identity_section(formulas, histories, "i", "o"),
    }


def _demo_hatch() -> dict:
    stages, formulas = hatch_demo()
    histories = run(stages)
    named = dict(formulas)
    named["p_i & q_o"] = formulas["p_i"] & formulas["q_o"]
    named["q_i | r_i"] = formulas["q_i"] | formulas["r_i"]
    named["q_o | r_o"] = formulas["q_o"] | formulas["r_o"]
    return {
        "histories": histories_to_json(histories),
        "formulas": _formula_summary(named, histories),
        "identities": _identity_section(formulas, histories, "i", "o"),
    }


def _two_state_labels(verdict: TwoStateVerdict) -> dict:
    return {
        verdict.certainly_first: "[k,0]",
        verdict.certainly_second: "[0,k]",
        verdict.balanced: "[k,k]",
        verdict.whole: "[k,j]",
        Subspace.zero(2): "[0,0]",
    }


def _two_state_json(verdict: TwoStateVerdict) -> dict:
    labels = _two_state_labels(verdict)

    def side(s: Subspace) -> dict:
        return {"label": labels.get(s, "?"), "subspace": subspace_to_json(s)}

    return {
        "field": verdict.field,
        "pairwise_meets_zero": verdict.pairwise_meets_zero,
        "left": side(verdict.left),
        "right": side(verdict.right),
        "verdict": "distributive" if verdict.is_distributive else "not distributive",
    }


def _demo_two_state() -> dict:
    by_field = {
        field: _two_state_json(two_state_demo(field))
        for field in (RATIONAL_REAL, GAUSSIAN_RATIONAL)
    }
    per_field = list(by_field.values())
    agree = all(
        entry["left"]["label"] == per_field[0]["left"]["label"]
        and entry["right"]["label"] == per_field[0]["right"]["label"]
        and entry["verdict"] == per_field[0]["verdict"]
        for entry in per_field
    )
    by_field["fields_agree"] = agree
    return by_field


def _cmd_demo(args) -> tuple[dict, dict, int]:
    which = args.which
    if which == "spin":
        return _demo_spin(), {}, 0
    if which == "hatch":
        return _demo_hatch(), {}, 0
    return _demo_two_state(), {}, 0


def _cmd_lattice(args) -> tuple[dict, dict, int]:
    binary = args.op in ("meet", "join", "leq")
    if binary and args.fileB is None:
        raise ValueError(f"lattice {args.op} needs two subspace files")
    if not binary and args.fileB is not None:
        raise ValueError("lattice ortho takes a single subspace file")
    inputs = {"fileA": _file_input(args.fileA)}
    a = subspace_from_json(_load_json(args.fileA))
    if binary:
        inputs["fileB"] = _file_input(args.fileB)
        b = subspace_from_json(_load_json(args.fileB))
    if args.op == "meet":
        results = {"result": subspace_to_json(meet(a, b))}
    elif args.op == "join":
        results = {"result": subspace_to_json(join(a, b))}
    elif args.op == "leq":
        results = {"leq": leq(a, b)}
    else:
        results = {"result": subspace_to_json(ortho(a))}
    return results, inputs, 0


def _cmd_check(args) -> tuple[dict, dict, int]:
    if (args.statement is None) == (args.file is None):
        raise ValueError("check needs exactly one of a statement argument or --file")
    if args.structure == "subspace":
        structure = SubspaceLattice(args.dim)
    else:
        structure = BooleanSetAlgebra(args.dim)
    if args.statement is not None:
        statements = [parse_statement(args.statement)]
        inputs = {"statement": args.statement}
    else:
        with open(args.file, "r", encoding="utf-8") as fh:
            statements = parse_statement_lines(fh.read())
        inputs = {"file": _file_input(args.file)}
    reports = [check(s, structure, trials=args.trials, seed=args.seed) for s in statements]
    code = 0 if all(r.holds for r in reports) else 1
    if len(reports) == 1 and args.statement is not None:
        return reports[0].to_json(), inputs, code
    return {"checks": [r.to_json() for r in reports]}, inputs, code


def _cmd_props(args) -> tuple[dict, dict, int]:
    inputs = {
        "prop_file": _file_input(args.prop_file),
        "state_file": _file_input(args.state_file),
    }
    prop = proposition_from_json(_load_json(args.prop_file))
    state_data = _load_json(args.state_file)
    state = vector_from_json(state_data["state"])
    return {"value": evaluate(prop, state)}, inputs, 0


def _render_text(value, indent: int = 0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_atom_text(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_atom_text(item)}")
    else:
        lines.append(f"{pad}{_atom_text(value)}")
    return lines


def _atom_text(value) -> str:
    if value is True:
        return "true"
    if value is False:
        return "false"
    return str(value)


def _build_parser() -> argparse.ArgumentParser:
    # global flags work before or after the subcommand; SUPPRESS keeps the
    # subparser from clobbering a value given at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="ortholab",
        description="Exact subspace-lattice and measurement-logic workbench.",
    )
    parser.add_argument("--format", choices=("json", "text"), default="text")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p_demo = sub.add_parser("demo", parents=[common], help="run a built-in demonstration")
    p_demo.add_argument("which", choices=("spin", "hatch", "two-state"))

    p_lat = sub.add_parser("lattice", parents=[common], help="subspace lattice operations")
    p_lat.add_argument("op", choices=("meet", "join", "ortho", "leq"))
    p_lat.add_argument("fileA")
    p_lat.add_argument("fileB", nargs="?")

    p_check = sub.add_parser("check", parents=[common], help="check a lattice identity")
    p_check.add_argument("statement", nargs="?")
    p_check.add_argument("--file", help="statements file: one per line, '#' comments")
    p_check.add_argument("--structure", choices=("subspace", "boolean"), required=True)
    p_check.add_argument("--dim", type=int, default=2)
    p_check.add_argument("--trials", type=int, default=1000)

    p_props = sub.add_parser("props", parents=[common], help="evaluate a proposition file")
    p_props.add_argument("action", choices=("eval",))
    p_props.add_argument("prop_file")
    p_props.add_argument("state_file")
    return parser


_HANDLERS = {
    "demo": _cmd_demo,
    "lattice": _cmd_lattice,
    "check": _cmd_check,
    "props": _cmd_props,
}


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        results, inputs, code = _HANDLERS[args.command](args)
    except KeyError as exc:
        print(f"ortholab: error: missing key {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, TypeError) as exc:
        print(f"ortholab: error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": list(argv),
        "inputs": inputs,
        "results": results,
        "seed": args.seed,
        "version": __version__,
    }
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print("\n".join(_render_text(report)))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
