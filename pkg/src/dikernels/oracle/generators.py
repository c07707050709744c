"""Seeded random instance generators.

Every generator draws from its own ``random.Random(seed)``, walks vertex pairs
in a fixed order and so produces identical output for identical specs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..graph import Digraph

KINDS = (
    "tournament",
    "split",
    "break",
    "arborescence-plus-edges",
    "strongly-connected",
    "single-source-acyclic",
)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int = 0  # total size, for the unpartitioned kinds
    n_s: int = 0
    n_t: int = 0
    density: float = 0.5
    extra: int = 0  # extra edges for arborescence-plus-edges
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        if min(self.n, self.n_s, self.n_t, self.extra) < 0:
            raise ValueError("sizes must be nonnegative")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class Generated:
    graph: Digraph
    S: int | None = None
    T: int | None = None


def generate(spec: GeneratorSpec) -> Generated:
    rng = random.Random(spec.seed)
    return _MAKERS[spec.kind](spec, rng)


def _tournament_masks(ids: list[int], out: list[int], rng: random.Random) -> None:
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            if rng.random() < 0.5:
                out[a] |= 1 << b
            else:
                out[b] |= 1 << a


def _cross(S: range, T: range, out: list[int], density: float, rng: random.Random) -> None:
    for s in S:
        for t in T:
            if rng.random() < density:
                if rng.random() < 0.5:
                    out[s] |= 1 << t
                else:
                    out[t] |= 1 << s


def _tournament(spec, rng):
    out = [0] * spec.n
    _tournament_masks(list(range(spec.n)), out, rng)
    return Generated(Digraph.from_out_masks(out))


def _split(spec, rng):
    ns, nt = spec.n_s, spec.n_t
    if ns == 0:
        raise ValueError("split instances need n_s >= 1")
    if nt == 0:
        raise ValueError("with n_t = 0 every S-vertex is a source; need n_t >= 1")
    n = ns + nt
    out = [0] * n
    T = range(ns, n)
    _tournament_masks(list(T), out, rng)
    _cross(range(ns), T, out, spec.density, rng)
    for s in range(ns):
        if not any(out[t] >> s & 1 for t in T):
            t = rng.choice(T)
            out[s] &= ~(1 << t)
            out[t] |= 1 << s
    S = (1 << ns) - 1
    return Generated(Digraph.from_out_masks(out), S, ((1 << n) - 1) & ~S)


def _break(spec, rng):
    ns, nt = spec.n_s, spec.n_t
    n = ns + nt
    out = [0] * n
    order = list(range(ns))
    rng.shuffle(order)
    for i, a in enumerate(order):
        for b in order[i + 1:]:
            if rng.random() < spec.density:
                out[a] |= 1 << b
    T = range(ns, n)
    _tournament_masks(list(T), out, rng)
    _cross(range(ns), T, out, spec.density, rng)
    S = (1 << ns) - 1
    return Generated(Digraph.from_out_masks(out), S, ((1 << n) - 1) & ~S)


def _arborescence(spec, rng):
    n = spec.n
    if n == 0:
        raise ValueError("need n >= 1")
    order = list(range(n))
    rng.shuffle(order)
    out = [0] * n
    for i in range(1, n):
        out[order[rng.randrange(i)]] |= 1 << order[i]
    room = n * (n - 1) - (n - 1)
    if spec.extra > room:
        raise ValueError(f"only {room} extra edges fit on {n} vertices")
    added = 0
    while added < spec.extra:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v and not out[u] >> v & 1:
            out[u] |= 1 << v
            added += 1
    return Generated(Digraph.from_out_masks(out))


def _strongly_connected(spec, rng):
    n = spec.n
    if n == 0:
        raise ValueError("need n >= 1")
    order = list(range(n))
    rng.shuffle(order)
    out = [0] * n
    if n > 1:
        for i in range(n):
            out[order[i]] |= 1 << order[(i + 1) % n]
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < spec.density:
                out[u] |= 1 << v
    return Generated(Digraph.from_out_masks(out))


def _single_source_acyclic(spec, rng):
    n = spec.n
    if n == 0:
        raise ValueError("need n >= 1")
    order = list(range(n))
    rng.shuffle(order)
    out = [0] * n
    for i in range(1, n):
        v = order[i]
        out[order[rng.randrange(i)]] |= 1 << v
        for j in range(i):
            if rng.random() < spec.density:
                out[order[j]] |= 1 << v
    return Generated(Digraph.from_out_masks(out))


_MAKERS = {
    "tournament": _tournament,
    "split": _split,
    "break": _break,
    "arborescence-plus-edges": _arborescence,
    "strongly-connected": _strongly_connected,
    "single-source-acyclic": _single_source_acyclic,
}
