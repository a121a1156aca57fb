"""JSON documents, verdict reports and DOT export."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from decimal import Decimal
from importlib import resources
from typing import Sequence

from .decider import ConsensusVerdict, NonConsensusWitness
from .errors import ConsensusError
from .reductions import LabeledDigraph
from .stochastic import StochasticMatrix, validate


class DocumentError(ConsensusError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class MatrixSetDocument:
    matrices: tuple[StochasticMatrix, ...]
    node_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))
        if not self.matrices:
            raise DocumentError("a matrix set needs at least one matrix")
        n = self.matrices[0].n
        for idx, m in enumerate(self.matrices):
            if m.n != n:
                raise DocumentError(f"matrix {idx} is {m.n}x{m.n}, expected {n}x{n}")
        if self.node_labels is not None:
            labels = tuple(self.node_labels)
            object.__setattr__(self, "node_labels", labels)
            if len(labels) != n:
                raise DocumentError(f"{len(labels)} node labels for dimension {n}")
            if len(set(labels)) != n:
                raise DocumentError("node labels must be unique")

    @property
    def n(self) -> int:
        return self.matrices[0].n

    @property
    def k(self) -> int:
        return len(self.matrices)

    def label(self, i: int) -> str:
        return self.node_labels[i] if self.node_labels else str(i)

    def to_dict(self) -> dict:
        out = {"n": self.n, "k": self.k, "matrices": [m.to_strings() for m in self.matrices]}
        if self.node_labels is not None:
            out["node_labels"] = list(self.node_labels)
        return out

    def dumps(self) -> str:
        """Pretty JSON with one matrix row per line."""
        d = self.to_dict()
        lines = ["{", f' "n": {d["n"]},', f' "k": {d["k"]},', ' "matrices": [']
        for mi, m in enumerate(d["matrices"]):
            lines.append("  [")
            for ri, row in enumerate(m):
                lines.append("   " + json.dumps(row) + ("," if ri < len(m) - 1 else ""))
            lines.append("  ]" + ("," if mi < len(d["matrices"]) - 1 else ""))
        if "node_labels" in d:
            lines.append(" ],")
            lines.append(' "node_labels": ' + json.dumps(d["node_labels"]))
        else:
            lines.append(" ]")
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, data) -> "MatrixSetDocument":
        if not isinstance(data, dict):
            raise DocumentError("top level must be a JSON object")
        for key in ("n", "k", "matrices"):
            if key not in data:
                raise DocumentError(f"missing field {key!r}")
        n, k, raw = data["n"], data["k"], data["matrices"]
        if not isinstance(n, int) or not isinstance(k, int) or n < 1 or k < 1:
            raise DocumentError("'n' and 'k' must be positive integers")
        if not isinstance(raw, list) or len(raw) != k:
            raise DocumentError(f"'matrices' must be a list of {k} matrices")
        mats = []
        for idx, m in enumerate(raw):
            if not isinstance(m, list) or len(m) != n or any(not isinstance(r, list) or len(r) != n for r in m):
                raise DocumentError(f"matrix {idx} is not {n}x{n}")
            try:
                mats.append(validate(m))
            except (ValueError, TypeError) as exc:
                raise DocumentError(f"matrix {idx}: {exc}") from exc
        labels = data.get("node_labels")
        if labels is not None and (not isinstance(labels, list) or not all(isinstance(s, str) for s in labels)):
            raise DocumentError("'node_labels' must be a list of strings")
        return cls(tuple(mats), tuple(labels) if labels is not None else None)

    @classmethod
    def loads(cls, text: str) -> "MatrixSetDocument":
        return cls.from_dict(load_json(text))


def load_json(text: str):
    # decimals become Decimal so they convert to exact rationals
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def witness_to_dict(w: NonConsensusWitness) -> dict:
    return {"row_pair": list(w.row_pair), "prefix": list(w.prefix), "cycle": list(w.cycle)}


def witness_from_dict(data) -> NonConsensusWitness:
    if isinstance(data, dict) and "witness" in data:
        data = data["witness"]
    if not isinstance(data, dict):
        raise DocumentError("witness must be a JSON object")
    try:
        pair, prefix, cycle = data["row_pair"], data["prefix"], data["cycle"]
    except KeyError as exc:
        raise DocumentError(f"witness is missing {exc.args[0]!r}") from None
    for name, seq in (("row_pair", pair), ("prefix", prefix), ("cycle", cycle)):
        if not isinstance(seq, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in seq):
            raise DocumentError(f"witness field {name!r} must be a list of integers")
    if len(pair) != 2:
        raise DocumentError("row_pair must have two entries")
    return NonConsensusWitness(tuple(pair), tuple(prefix), tuple(cycle))


def verdict_report(
    v: ConsensusVerdict, input_digest: str, seconds: float, labels: Sequence[str] | None = None
) -> dict:
    out = {
        "decision": v.decision.value,
        "algorithm": v.algorithm.value,
        "scrambling_index": v.scrambling_index,
        "theorem_bound": v.theorem_bound,
        "witness": witness_to_dict(v.witness) if v.witness else None,
        "timings": {"decide_seconds": seconds},
        "input_digest": input_digest,
    }
    if v.witness and labels:
        out["witness"]["row_labels"] = [labels[i] for i in v.witness.row_pair]
    return out


def load_schema(name: str) -> dict:
    return json.loads(resources.files("consensus_sets").joinpath("schemas", name).read_text())


# DOT edge colours by the set of graphs containing the edge
EDGE_COLORS = {
    frozenset({0, 1}): "brown",
    frozenset({0}): "blue",
    frozenset({1}): "red",
    frozenset({2}): "green",
}
OTHER_COLOR = "black"


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graphs: Sequence[LabeledDigraph], name: str = "gadget") -> str:
    """One DOT graph overlaying ``graphs``; each edge coloured by membership."""
    nodes = graphs[0].nodes
    undirected = all(g.undirected for g in graphs)
    order = {x: i for i, x in enumerate(nodes)}
    membership: dict[tuple[str, str], set[int]] = {}
    for gi, g in enumerate(graphs):
        for a, b in g.edges:
            if undirected and order[a] > order[b]:
                a, b = b, a
            membership.setdefault((a, b), set()).add(gi)
    arrow = "--" if undirected else "->"
    lines = [f"{'graph' if undirected else 'digraph'} {_quote(name)} {{", "  node [shape=circle];"]
    lines += [f"  {_quote(x)};" for x in nodes]
    for (a, b), gs in sorted(membership.items(), key=lambda e: (order[e[0][0]], order[e[0][1]])):
        color = EDGE_COLORS.get(frozenset(gs), OTHER_COLOR)
        tag = ",".join(str(g) for g in sorted(gs))
        lines.append(f'  {_quote(a)} {arrow} {_quote(b)} [color={color}, graphs="{tag}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
