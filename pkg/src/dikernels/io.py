"""Instance files, JSON certificates and DOT export.

Instance grammar, one item per line::

    # comment
    digraph <n> <m>
    e <u> <v>          (exactly m of these)
    S <id> <id> ...    (optional; T is the complement)
    w <v> <weight>     (optional; missing weights are 0)
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import Digraph, DigraphError, PartitionCheck, bits, classify_partition, to_mask


class InstanceError(DigraphError):
    """Malformed instance file; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1, kind: str = "syntax"):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.kind = kind


@dataclass(frozen=True)
class Instance:
    graph: Digraph
    S: tuple[int, ...] | None = None
    weights: tuple[int, ...] | None = None

    @property
    def T(self) -> tuple[int, ...] | None:
        if self.S is None:
            return None
        s = set(self.S)
        return tuple(v for v in range(self.graph.n) if v not in s)

    @property
    def partition(self) -> PartitionCheck | None:
        if self.S is None:
            return None
        return classify_partition(self.graph, self.S, self.T)


def _column(raw: str, index: int) -> int:
    """1-based column of the ``index``-th whitespace-separated token."""
    pos = 0
    for i in range(index + 1):
        while raw[pos].isspace():
            pos += 1
        if i == index:
            return pos + 1
        while pos < len(raw) and not raw[pos].isspace():
            pos += 1
    return pos + 1


def _ints(raw: str, tokens: list[str], lineno: int, start: int = 1) -> list[int]:
    values = []
    for i, tok in enumerate(tokens[start:], start):
        try:
            value = int(tok, 10)
        except ValueError:
            raise InstanceError(f"expected an integer, got {tok!r}", lineno, _column(raw, i)) from None
        if value < 0:
            raise InstanceError(f"negative value {value}", lineno, _column(raw, i))
        values.append(value)
    return values


def parse_instance(text: str, check_partition: bool = True) -> Instance:
    """Parse instance text; ``check_partition=False`` skips the S/T validity check."""
    n: int | None = None
    m = 0
    header_line = 0
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    S: list[int] | None = None
    S_line = 0
    weights: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        head = tokens[0]
        if head == "digraph":
            if n is not None:
                raise InstanceError("second header line", lineno)
            if len(tokens) != 3:
                raise InstanceError("header must be 'digraph <n> <m>'", lineno)
            n, m = _ints(raw, tokens, lineno)
            header_line = lineno
        elif head == "e":
            if len(tokens) != 3:
                raise InstanceError("edge line must be 'e <u> <v>'", lineno)
            u, v = _ints(raw, tokens, lineno)
            if u == v:
                raise InstanceError(f"loop at vertex {u}", lineno, _column(raw, 2), kind="loop")
            if n is None:
                raise InstanceError("edge before the 'digraph' header", lineno)
            for i, x in ((1, u), (2, v)):
                if x >= n:
                    raise InstanceError(f"vertex {x} out of range 0..{n - 1}", lineno, _column(raw, i), kind="range")
            if (u, v) in seen:
                raise InstanceError(f"duplicate edge ({u},{v})", lineno, kind="duplicate")
            seen.add((u, v))
            edges.append((u, v))
        elif head == "S":
            if n is None:
                raise InstanceError("S line before the 'digraph' header", lineno)
            if S is not None:
                raise InstanceError("second S line", lineno)
            S = _ints(raw, tokens, lineno)
            for i, x in enumerate(S, 1):
                if x >= n:
                    raise InstanceError(f"vertex {x} out of range 0..{n - 1}", lineno, _column(raw, i), kind="range")
            if len(set(S)) != len(S):
                raise InstanceError("repeated vertex in S", lineno)
            S_line = lineno
        elif head == "w":
            if n is None:
                raise InstanceError("weight line before the 'digraph' header", lineno)
            if len(tokens) != 3:
                raise InstanceError("weight line must be 'w <v> <weight>'", lineno)
            v, weight = _ints(raw, tokens, lineno)
            if v >= n:
                raise InstanceError(f"vertex {v} out of range 0..{n - 1}", lineno, _column(raw, 1), kind="range")
            if v in weights:
                raise InstanceError(f"second weight for vertex {v}", lineno)
            weights[v] = weight
        else:
            raise InstanceError(f"unknown line type {head!r}", lineno)
    if n is None:
        raise InstanceError("missing 'digraph <n> <m>' header", max(1, len(text.splitlines())))
    if len(edges) != m:
        raise InstanceError(f"header announces {m} edges, found {len(edges)}", header_line)
    G = Digraph.from_edges(n, edges)
    inst = Instance(
        G,
        tuple(sorted(S)) if S is not None else None,
        tuple(weights.get(v, 0) for v in range(n)) if weights else None,
    )
    if S is not None and check_partition:
        check = inst.partition
        if check.kind == "invalid":
            raise InstanceError(f"partition is invalid: {check.reason}", S_line, kind="partition")
    return inst


def emit_instance(G: Digraph, S: Iterable[int] | None = None, weights: Sequence[int] | None = None) -> str:
    """Canonical instance text: sorted edges, then S, then every weight."""
    lines = [f"digraph {G.n} {G.edge_count}"]
    lines += [f"e {u} {v}" for u, v in sorted(G.edges())]
    if S is not None:
        lines.append(" ".join(["S", *map(str, sorted(S))]))
    if weights is not None:
        lines += [f"w {v} {x}" for v, x in enumerate(weights)]
    return "\n".join(lines) + "\n"


def instance_hash(inst: Instance) -> str:
    return hashlib.sha256(emit_instance(inst.graph, inst.S, inst.weights).encode()).hexdigest()


# ---------------------------------------------------------------- certificates

def fraction_text(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    if not sep:
        raise ValueError(f"bound {text!r} is not of the form p/q")
    return Fraction(int(num), int(den))


def certificate_dict(
    algorithm: str,
    inst: Instance,
    kernel: Iterable[int],
    k: int,
    bound: Fraction | int | None,
    witness: dict[int, list[int]],
    valid: bool,
    *,
    bound_kind: str = "size-at-most",
    coverage: int | None = None,
    extra: dict | None = None,
) -> dict:
    doc = {
        "algorithm": algorithm,
        "input_hash": instance_hash(inst),
        "kernel": sorted(kernel),
        "k": k,
        "bound": None if bound is None else fraction_text(bound),
        "bound_kind": bound_kind,
        "valid": valid,
        "witness": {str(v): list(p) for v, p in sorted(witness.items())},
    }
    if coverage is not None:
        doc["coverage"] = coverage
    if extra:
        doc.update(extra)
    return doc


def dump_certificate(doc: dict) -> str:
    """Canonical JSON: sorted keys, no spaces, trailing newline."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def verify_certificate(inst: Instance, doc: dict) -> str | None:
    """Re-check a certificate against an instance; None if it holds, else the reason."""
    try:
        if doc.get("input_hash") != instance_hash(inst):
            return "input hash does not match the instance"
        if doc.get("valid") is not True:
            return "certificate is marked invalid"
        G = inst.graph
        k = doc["k"]
        kernel = doc["kernel"]
        if not isinstance(k, int) or k < 1:
            return f"bad k {k!r}"
        if sorted(set(kernel)) != kernel or any(not isinstance(v, int) or not 0 <= v < G.n for v in kernel):
            return "kernel must be a sorted list of distinct vertex ids"
        K = to_mask(kernel)
        for u in kernel:
            inside = G.out[u] & K
            if inside:
                return f"edge ({u},{next(iter(bits(inside)))}) inside the kernel"
        witness = doc["witness"]
        for v in range(G.n):
            path = witness.get(str(v))
            if not path:
                return f"no witness path for vertex {v}"
            if path[0] not in kernel or path[-1] != v or len(path) - 1 > k:
                return f"witness path for {v} is not a path of length <= {k} from the kernel"
            for a, b in zip(path, path[1:]):
                if not (0 <= a < G.n and 0 <= b < G.n and G.has_edge(a, b)):
                    return f"witness path for {v} uses a non-edge ({a},{b})"
        bound = doc.get("bound")
        kind = doc.get("bound_kind", "size-at-most")
        if bound is not None:
            limit = parse_fraction(bound)
            if kind == "size-at-most":
                if len(kernel) > limit:
                    return f"kernel size {len(kernel)} exceeds bound {bound}"
            elif kind == "coverage-at-least":
                if inst.weights is not None:
                    f = inst.weights
                else:
                    f = (doc.get("uniform_weight", 0),) * G.n
                covered = sum(f[v] for v in bits(K | G.out_union(K)))
                if doc.get("coverage") != covered:
                    return f"coverage {doc.get('coverage')} does not match recomputed {covered}"
                if covered < limit:
                    return f"coverage {covered} is below bound {bound}"
            else:
                return f"unknown bound kind {kind!r}"
    except (KeyError, TypeError, ValueError) as exc:
        return f"malformed certificate: {exc}"
    return None


# ------------------------------------------------------------------------ DOT

def emit_dot(G: Digraph, highlight: Iterable[int] = ()) -> str:
    marked = set(highlight)
    lines = ["digraph G {"]
    for v in range(G.n):
        lines.append(f'  {v} [class="kernel"];' if v in marked else f"  {v};")
    for u, v in G.edges():
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
