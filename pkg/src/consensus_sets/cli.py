"""Command-line front end.

Exit codes: 0 consensus / success, 1 not a consensus set / check failed,
2 input or usage error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import decider
from .errors import ConsensusError, DimacsError, InstanceTooLarge, NotSymmetric, ResourceCapExceeded
from .io import (
    DocumentError,
    MatrixSetDocument,
    digest,
    load_json,
    to_dot,
    verdict_report,
    witness_from_dict,
)
from .reductions import build_variant_graphs, parse_dimacs
from .simulator import SwitchingWord, simulate, witness_state_word

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> bytes:
    try:
        if path == "-":
            return sys.stdin.buffer.read()
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_doc(path: str) -> tuple[MatrixSetDocument, bytes]:
    raw = _read(path)
    try:
        return MatrixSetDocument.loads(raw.decode("utf-8")), raw
    except UnicodeDecodeError:
        raise InputError(f"{path}: not UTF-8 text") from None
    except DocumentError as exc:
        raise InputError(f"{path}: {exc}") from None


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"expected a comma-separated list of integers, got {text!r}") from None


def cmd_decide(args) -> int:
    doc, raw = _load_doc(args.input)
    start = time.perf_counter()
    try:
        v = decider.decide(doc.matrices, args.algorithm, args.state_cap)
    except NotSymmetric as exc:
        raise InputError(f"--algorithm symmetric needs symmetric matrices: {exc}") from None
    seconds = time.perf_counter() - start
    if args.json:
        report = verdict_report(v, digest(raw), seconds, doc.node_labels)
        print(json.dumps(report, indent=1))
    else:
        print(f"decision: {v.decision.value}")
        print(f"algorithm: {v.algorithm.value}")
        print(f"theorem bound: {v.theorem_bound}")
        if v.is_consensus:
            print(f"scrambling index: {v.scrambling_index}")
        else:
            i, j = v.witness.row_pair
            print(f"witness rows: {doc.label(i)}, {doc.label(j)}")
            print(f"witness prefix: {list(v.witness.prefix)}")
            print(f"witness cycle: {list(v.witness.cycle)}")
    return EXIT_OK if v.is_consensus else EXIT_NO


def cmd_reduce(args) -> int:
    raw = _read(args.cnf)
    try:
        f = parse_dimacs(raw.decode("utf-8"))
    except (DimacsError, UnicodeDecodeError) as exc:
        raise InputError(f"{args.cnf}: {exc}") from None
    graphs = build_variant_graphs(f, args.variant)
    doc = MatrixSetDocument(tuple(g.to_matrix() for g in graphs), graphs[0].nodes)
    _write(args.out, doc.dumps())
    if args.dot:
        _write(args.dot, to_dot(graphs, f"{args.variant}_gadget"))
    return EXIT_OK


def cmd_verify(args) -> int:
    doc, _ = _load_doc(args.input)
    try:
        w = witness_from_dict(load_json(_read(args.witness).decode("utf-8")))
    except (DocumentError, UnicodeDecodeError) as exc:
        raise InputError(f"{args.witness}: {exc}") from None
    check = decider.check_witness(doc.matrices, w)
    if check.reason in ("index_out_of_range", "row_out_of_range", "bad_row_pair"):
        raise InputError(f"witness does not fit the matrix set: {check.reason}")
    print("witness verified" if check.ok else f"witness rejected: {check.reason}")
    return EXIT_OK if check.ok else EXIT_NO


def _parse_x0(text: str | None, n: int) -> list[Fraction]:
    if text is None:
        return [Fraction(1)] + [Fraction(0)] * (n - 1)
    try:
        x0 = [Fraction(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"cannot parse --x0 {text!r}") from None
    if len(x0) != n:
        raise InputError(f"--x0 has {len(x0)} entries, expected {n}")
    return x0


def cmd_simulate(args) -> int:
    doc, _ = _load_doc(args.input)
    if args.random_seed is not None:
        word = SwitchingWord.random(doc.k, args.steps, args.random_seed)
    elif args.witness:
        try:
            w = witness_from_dict(load_json(_read(args.witness).decode("utf-8")))
        except DocumentError as exc:
            raise InputError(f"{args.witness}: {exc}") from None
        try:
            word, pinned_x0, _ = witness_state_word(doc.matrices, w)
        except (IndexError, ValueError) as exc:
            raise InputError(f"witness does not fit the matrix set: {exc}") from None
    else:
        cycle = _int_list(args.cycle) if args.cycle is not None else None
        word = SwitchingWord(_int_list(args.prefix or ""), cycle or None)
        if cycle is None and len(word.prefix) < args.steps:
            raise InputError(f"finite word of length {len(word.prefix)} cannot drive {args.steps} steps")
    try:
        word.check_range(doc.k)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.witness and args.x0 is None:
        x0 = pinned_x0
    else:
        x0 = _parse_x0(args.x0, doc.n)
    traj = simulate(doc.matrices, word, x0, args.steps)
    if args.csv:
        _write(args.csv, traj.to_csv())
    if not args.csv or args.csv != "-":
        hit = traj.steps_to(args.threshold)
        print(f"steps: {args.steps}")
        print(f"final state: {' '.join(repr(float(v)) for v in traj.states[-1])}")
        print(f"final disagreement: {traj.disagreement[-1]!r}")
        print(f"steps to disagreement < {args.threshold:g}: {'never' if hit is None else hit}")
    return EXIT_OK


def cmd_index(args) -> int:
    doc, _ = _load_doc(args.input)
    idx = decider.scrambling_index(doc.matrices, args.state_cap)
    print("none" if idx is None else idx)
    return EXIT_OK if idx is not None else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="consensus-sets", description="Decide and explore consensus sets of stochastic matrices.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide whether a matrix set is a consensus set")
    p.add_argument("input", help="matrix-set JSON document ('-' for stdin)")
    p.add_argument("--algorithm", choices=["auto", "pairs", "theorem", "literal", "symmetric"], default="auto")
    p.add_argument("--json", action="store_true", help="print a JSON verdict report")
    p.add_argument("--state-cap", type=int, default=decider.DEFAULT_STATE_CAP)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("reduce", help="build gadget matrices from a DIMACS CNF file")
    p.add_argument("cnf")
    p.add_argument("--variant", choices=["directed", "doubled", "undirected"], default="directed")
    p.add_argument("--out", help="output path for the matrix set (default stdout)")
    p.add_argument("--dot", help="also write the gadget graphs as DOT")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="check a non-consensus witness")
    p.add_argument("input")
    p.add_argument("witness", help="witness JSON or a verdict report containing one")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="simulate x(t+1) = P_tau(t) x(t)")
    p.add_argument("input")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--random-seed", type=int, help="uniform random switching with this seed")
    g.add_argument(
        "--witness",
        help="replay a witness cycle in state space (reversed cycle; default x0 pins the witness rows)",
    )
    g.add_argument("--prefix", help="explicit word prefix, e.g. 0,1,1")
    p.add_argument("--cycle", help="word cycle repeated after the prefix")
    p.add_argument("--x0", help="initial state, e.g. 1,0,0 (default e_0)")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--threshold", type=float, default=1e-6)
    p.add_argument("--csv", help="write the trajectory as CSV ('-' for stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("index", help="print the scrambling index or 'none'")
    p.add_argument("input")
    p.add_argument("--state-cap", type=int, default=decider.DEFAULT_STATE_CAP)
    p.set_defaults(func=cmd_index)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "steps", 0) < 0:
        print("error: --steps must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ResourceCapExceeded, InstanceTooLarge) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ConsensusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
