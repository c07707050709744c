"""Exhaustive, deterministic enumeration of small digraph families.

Families
--------
``all-oriented``
    every loop-free simple digraph (digons allowed).
``no-source-oriented``
    oriented graphs (no digons) in which every vertex has an in-neighbour.
``split``
    ``(G, S, T)`` with ``S`` stable and nonempty, ``T`` a tournament, ``G``
    oriented and no source in ``S``.  ``S`` is always ``0..s-1``.
``break``
    ``(G, S, T)`` with ``G[S]`` acyclic, ``T`` a tournament, ``G`` oriented.
    ``S`` is always ``0..s-1``.
``single-source-acyclic``
    acyclic digraphs with exactly one source.
``acyclic``
    all acyclic digraphs.

With ``dedup`` on, one representative per isomorphism class is produced
(for ``split``/``break`` the isomorphisms must map ``S`` to ``S``).  Classes
are built by vertex-by-vertex augmentation with nauty certificates, except
for ``split``, where ``S``-vertices are interchangeable and an instance is a
tournament class plus a multiset of ``S``-vertex attachment types, reduced
modulo the tournament's automorphisms.  :func:`canonical_code` is the slow
permutation-minimum code, kept as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations, product
from typing import Callable, Iterator, Sequence

import pynauty

from ..graph import Digraph, bits, is_acyclic_mask

FAMILIES = ("all-oriented", "no-source-oriented", "split", "break", "single-source-acyclic", "acyclic")
DEFAULT_CEILING = 8


class CeilingExceeded(ValueError):
    pass


@dataclass(frozen=True)
class EnumerationSpec:
    n: int
    family: str
    dedup: bool = True
    ceiling: int = DEFAULT_CEILING

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.n > self.ceiling:
            raise CeilingExceeded(f"n={self.n} is above the enumeration ceiling {self.ceiling}")


@dataclass(frozen=True)
class Instance:
    index: int
    graph: Digraph
    S: int | None = None  # bitmask, for split/break families
    T: int | None = None

    @property
    def code(self) -> str:
        """Compact text id: out-masks in hex, plus the S mask when present."""
        body = ".".join(format(m, "x") for m in self.graph.out)
        if self.S is None:
            return f"{self.graph.n}:{body}"
        return f"{self.graph.n}:{body}:S{self.S:x}"


def enumerate_instances(spec: EnumerationSpec) -> Iterator[Instance]:
    """Deterministic stream of the instances described by ``spec``."""
    stream = _STREAMS[spec.family](spec.n, spec.dedup)
    for i, (out, S, T) in enumerate(stream):
        yield Instance(i, Digraph.from_out_masks(out), S, T)


def count_instances(spec: EnumerationSpec) -> int:
    return sum(1 for _ in _STREAMS[spec.family](spec.n, spec.dedup))


# ------------------------------------------------------------- canonical code

def canonical_code(G: Digraph, S: int | None = None) -> tuple:
    """Lexicographically smallest adjacency code over all relabellings.

    With ``S`` given, only relabellings that keep ``S`` as the first ``|S|``
    ids count, so the code identifies the partitioned structure.
    """
    n = G.n
    if S is None:
        perms: Sequence[tuple[int, ...]] = list(permutations(range(n)))
        prefix: tuple = ()
    else:
        s_part = list(bits(S))
        t_part = [v for v in range(n) if not S >> v & 1]
        perms = [a + b for a in permutations(s_part) for b in permutations(t_part)]
        prefix = (len(s_part),)
    best = None
    for p in perms:  # p[i] = old vertex placed at position i
        code = tuple(G.out[p[i]] >> p[j] & 1 for i in range(n) for j in range(n))
        if best is None or code < best:
            best = code
    return prefix + (best or ())


# ---------------------------------------------------------------- nauty glue

@lru_cache(maxsize=None)
def _bit_list(mask: int) -> tuple[int, ...]:
    return tuple(bits(mask))


def certificate(out: Sequence[int], colour: int | None = None) -> bytes:
    n = len(out)
    adj = {v: list(_bit_list(out[v])) for v in range(n) if out[v]}
    if colour is None:
        g = pynauty.Graph(n, directed=True, adjacency_dict=adj)
        return pynauty.certificate(g)
    cells = [set(bits(colour))] if colour else []
    g = pynauty.Graph(n, directed=True, adjacency_dict=adj, vertex_coloring=cells)
    return bytes([colour.bit_count()]) + pynauty.certificate(g)


def automorphisms(out: Sequence[int]) -> list[tuple[int, ...]]:
    """Full automorphism group (as permutations ``v -> p[v]``) of a small digraph."""
    n = len(out)
    if n == 0:
        return [()]
    g = pynauty.Graph(n, directed=True, adjacency_dict={v: list(bits(out[v])) for v in range(n)})
    gens = [tuple(p) for p in pynauty.autgrp(g)[0]]
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for q in gens:
                r = tuple(q[p[v]] for v in range(n))
                if r not in group:
                    group.add(r)
                    nxt.append(r)
        frontier = nxt
    return sorted(group)


def _augment(
    n: int,
    extensions: Callable[[tuple[int, ...]], Iterator[tuple[int, ...]]],
    removable: Callable[[tuple[int, ...]], int],
    seed: tuple[tuple[int, ...], ...] = ((),),
) -> Iterator[tuple[int, ...]]:
    """Isomorphism classes on ``n`` vertices grown one vertex at a time.

    ``extensions(out)`` yields every admissible way of adding vertex
    ``len(out)``; ``removable(out)`` is the mask of vertices whose deletion
    leaves a member of the family (the new vertex always is one).  Smaller
    orders are deduplicated with a set of certificates and kept in memory.
    The top order streams with canonical augmentation, so it needs no global
    set: a child is kept only if its new vertex lies in the automorphism
    orbit of a canonically chosen removable vertex, and siblings are
    compared only when the parent has symmetries.
    """
    if n == 0:
        yield from seed
        return
    level = list(seed)
    for m in range(1, n):
        seen: set[bytes] = set()
        nxt = []
        for parent in level:
            for child in extensions(parent):
                cert = certificate(child)
                if cert not in seen:
                    seen.add(cert)
                    nxt.append(child)
        level = nxt
    for parent in level:
        symmetric = len(parent) > 1 and _has_symmetry(parent)
        siblings: set[bytes] = set()
        for child in extensions(parent):
            if not _canonical_last(child, removable(child)):
                continue
            if symmetric:
                cert = certificate(child)
                if cert in siblings:
                    continue
                siblings.add(cert)
            yield child


def _nauty_graph(out: Sequence[int]) -> pynauty.Graph:
    n = len(out)
    return pynauty.Graph(n, directed=True, adjacency_dict={v: list(_bit_list(out[v])) for v in range(n) if out[v]})


def _has_symmetry(out: Sequence[int]) -> bool:
    return bool(pynauty.autgrp(_nauty_graph(out))[0])


def _canonical_last(child: tuple[int, ...], removable: int) -> bool:
    """Whether the last vertex is (up to automorphism) the canonical removable one.

    A cheap invariant picks the candidates; nauty breaks the remaining ties.
    """
    n = len(child)
    x = n - 1
    inn = [0] * n
    for v in range(n):
        for w in _bit_list(child[v]):
            inn[w] |= 1 << v
    din = [m.bit_count() for m in inn]
    dout = [m.bit_count() for m in child]

    def inv(v):
        return (
            din[v],
            dout[v],
            sum(dout[u] for u in _bit_list(inn[v])),
            sum(din[u] for u in _bit_list(child[v])),
        )

    mine = inv(x)
    ties = []
    for v in _bit_list(removable):
        other = inv(v)
        if other > mine:
            return False
        if other == mine:
            ties.append(v)
    if len(ties) == 1:
        return True
    g = _nauty_graph(child)
    lab = pynauty.canon_label(g)
    orbits = pynauty.autgrp(g)[3]
    tie_set = set(ties)
    for v in reversed(lab):
        if v in tie_set:
            return orbits[v] == orbits[x]
    raise AssertionError("unreachable")


def _pair_states(m: int, digons: bool) -> Iterator[tuple[int, int]]:
    """(in-mask, out-mask) pairs for a new vertex joining ``m`` old ones."""
    states = (0, 1, 2, 3) if digons else (0, 1, 2)
    for pattern in product(states, repeat=m):
        into = outof = 0
        for v, st in enumerate(pattern):
            if st & 1:
                into |= 1 << v  # old v -> new
            if st & 2:
                outof |= 1 << v  # new -> old v
        yield into, outof


def _attach(parent: tuple[int, ...], into: int, outof: int) -> tuple[int, ...]:
    x = len(parent)
    return tuple(parent[v] | ((into >> v & 1) << x) for v in range(x)) + (outof,)


def _digraph_ext(digons: bool):
    def ext(parent):
        for into, outof in _pair_states(len(parent), digons):
            yield _attach(parent, into, outof)
    return ext


def _tournament_ext(parent):
    m = len(parent)
    full = (1 << m) - 1
    for into in range(1 << m):
        yield _attach(parent, into, full & ~into)


def _sink_ext(parent):
    """New sink with at least one in-neighbour (keeps a single source)."""
    m = len(parent)
    lo = 1 if m else 0
    for into in range(lo, 1 << m):
        yield _attach(parent, into, 0)


def _any_sink_ext(parent):
    for into in range(1 << len(parent)):
        yield _attach(parent, into, 0)


def _everything(out: Sequence[int]) -> int:
    return (1 << len(out)) - 1


def _sinks(out: Sequence[int]) -> int:
    return sum(1 << v for v, m in enumerate(out) if not m)


def _has_source(out: Sequence[int]) -> bool:
    hit = 0
    for m in out:
        hit |= m
    return hit != (1 << len(out)) - 1


def _labelled(n: int, states: int) -> Iterator[tuple[int, ...]]:
    pairs = list(combinations(range(n), 2))
    for pattern in product(range(states), repeat=len(pairs)):
        out = [0] * n
        for (u, v), st in zip(pairs, pattern):
            if st & 1:
                out[u] |= 1 << v
            if st & 2:
                out[v] |= 1 << u
        yield tuple(out)


# ------------------------------------------------------------------- streams

def _all_digraphs(n, dedup):
    src = _augment(n, _digraph_ext(True), _everything) if dedup else _labelled(n, 4)
    for out in src:
        yield out, None, None


def _oriented(n: int, dedup: bool) -> Iterator[tuple[int, ...]]:
    return _augment(n, _digraph_ext(False), _everything) if dedup else _labelled(n, 3)


def oriented_classes(n: int) -> Iterator[tuple[int, ...]]:
    """Out-masks of one representative per isomorphism class of oriented graphs."""
    return _oriented(n, True)


def _no_source(n, dedup):
    for out in _oriented(n, dedup):
        if n and not _has_source(out):
            yield out, None, None


def _single_source_acyclic(n, dedup):
    if dedup:
        src = _augment(n, _sink_ext, _sinks)
    else:
        src = (out for out in _labelled(n, 3) if is_acyclic_mask(Digraph.from_out_masks(out), (1 << n) - 1))
    for out in src:
        if n and sum(1 for v in range(n) if not any(m >> v & 1 for m in out)) == 1:
            yield out, None, None


def tournament_classes(t: int) -> list[tuple[int, ...]]:
    return _tournament_classes(t)


@lru_cache(maxsize=None)
def _tournament_classes(t: int) -> list[tuple[int, ...]]:
    return list(_augment(t, _tournament_ext, _everything))


def _split_dedup(n):
    for s, t, tour, ms in _split_classes(n):
        yield _split_graph(s, t, [m << s for m in tour], ms), (1 << s) - 1, ((1 << n) - 1) & ~((1 << s) - 1)


def _split_classes(n: int) -> Iterator[tuple[int, int, tuple[int, ...], tuple[int, ...]]]:
    for s in range(1, n):
        t = n - s
        for tour in tournament_classes(t):
            # type code: base-3 digits over T positions; 1 = S->t, 2 = t->S
            codes = [c for c in range(3 ** t) if _has_digit(c, 2, t)]
            perms = [p for p in automorphisms(tour) if p != tuple(range(t))]
            image = [{c: _permute_code(c, p, t) for c in codes} for p in perms]
            for ms in combinations_with_replacement(codes, s):
                if any(tuple(sorted(img[c] for c in ms)) < ms for img in image):
                    continue
                yield s, t, tour, ms


def split_digraphs(n: int) -> Iterator[tuple[Digraph, int, int]]:
    """Split classes on n vertices as (graph, S, T), with S = {0..s-1}.

    Same order as the deduplicated split family, but builds in-masks
    directly; used by the large sweeps.
    """
    for s, t, tour, ms in _split_classes(n):
        fwd, back = _code_tables(s, t)
        tout, tin = _shifted_tournament(s, tour)
        out = [0] * s + tout
        inn = [0] * s + tin
        for i, c in enumerate(ms):
            bi = 1 << i
            out[i] = fwd[c][0]
            inn[i] = back[c][0]
            for v in fwd[c][1]:
                inn[v] |= bi
            for v in back[c][1]:
                out[v] |= bi
        full_s = (1 << s) - 1
        yield Digraph(n, out, inn), full_s, ((1 << n) - 1) & ~full_s


@lru_cache(maxsize=None)
def _shifted_tournament(s: int, tour: tuple[int, ...]) -> tuple[list[int], list[int]]:
    t = len(tour)
    tin = [0] * t
    for u in range(t):
        for w in bits(tour[u]):
            tin[w] |= 1 << (s + u)
    return [m << s for m in tour], tin


@lru_cache(maxsize=None)
def _code_tables(s: int, t: int):
    fwd, back = [], []
    for code in range(3 ** t):
        f = b = 0
        for j in range(t):
            d = code % 3
            code //= 3
            if d == 1:
                f |= 1 << (s + j)
            elif d == 2:
                b |= 1 << (s + j)
        fwd.append((f, tuple(bits(f))))
        back.append((b, tuple(bits(b))))
    return fwd, back


def _has_digit(code: int, digit: int, t: int) -> bool:
    for _ in range(t):
        if code % 3 == digit:
            return True
        code //= 3
    return False


def _permute_code(code: int, p: tuple[int, ...], t: int) -> int:
    digits = [0] * t
    for j in range(t):
        digits[p[j]] = code % 3
        code //= 3
    return sum(d * 3 ** j for j, d in enumerate(digits))


def _split_graph(s: int, t: int, tout: list[int], ms: Sequence[int]) -> tuple[int, ...]:
    fwd, back = _code_tables(s, t)
    out = [0] * s + list(tout)
    for i, code in enumerate(ms):
        out[i] = fwd[code][0]
        for v in back[code][1]:
            out[v] |= 1 << i
    return tuple(out)


def _split_labelled(n):
    for s in range(1, n):
        full_s = (1 << s) - 1
        for out in _partitioned_labelled(n, s, stable=True):
            if all(any(m >> i & 1 for m in out) for i in range(s)):
                yield out, full_s, ((1 << n) - 1) & ~full_s


def _partitioned_labelled(n: int, s: int, stable: bool) -> Iterator[tuple[int, ...]]:
    S = range(s)
    T = range(s, n)
    spairs = [] if stable else list(combinations(S, 2))
    tpairs = list(combinations(T, 2))
    stpairs = [(a, b) for a in S for b in T]
    for so in product((0, 1, 2), repeat=len(spairs)):
        base = [0] * n
        for (a, b), o in zip(spairs, so):
            if o == 1:
                base[a] |= 1 << b
            elif o == 2:
                base[b] |= 1 << a
        if spairs and not is_acyclic_mask(Digraph.from_out_masks(base), (1 << s) - 1):
            continue
        for to in product((1, 2), repeat=len(tpairs)):
            tb = list(base)
            for (a, b), o in zip(tpairs, to):
                if o == 1:
                    tb[a] |= 1 << b
                else:
                    tb[b] |= 1 << a
            for st in product((0, 1, 2), repeat=len(stpairs)):
                out = list(tb)
                for (a, b), o in zip(stpairs, st):
                    if o == 1:
                        out[a] |= 1 << b
                    elif o == 2:
                        out[b] |= 1 << a
                yield tuple(out)


def _split(n, dedup):
    return _split_dedup(n) if dedup else _split_labelled(n)


def _break(n, dedup):
    if not dedup:
        for s in range(0, n + 1):
            full_s = (1 << s) - 1
            for out in _partitioned_labelled(n, s, stable=False):
                yield out, full_s, ((1 << n) - 1) & ~full_s
        return
    for out, S in break_structures(n):
        yield out, S, ((1 << n) - 1) & ~S


def break_structures(n: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Break structures up to S-preserving isomorphism, relabelled so S = 0..s-1."""
    level: list[tuple[tuple[int, ...], int]] = [((), 0)]
    for m in range(1, n + 1):
        seen: set[bytes] = set()
        nxt = []
        for out, S in level:
            T = ((1 << (m - 1)) - 1) & ~S
            for into, outof in _pair_states(m - 1, False):
                child = _attach(out, into, outof)
                x = m - 1
                if T & ~(into | outof) == 0:  # new vertex to T: adjacent to all of T
                    _keep(child, S, seen, nxt)
                sm = S | (1 << x)
                if is_acyclic_mask(Digraph.from_out_masks(child), sm):
                    _keep(child, sm, seen, nxt)
        level = nxt
    for out, S in level:
        yield _s_first(out, S)


def _keep(out, S, seen, acc):
    cert = certificate(out, S)
    if cert not in seen:
        seen.add(cert)
        acc.append((out, S))


def _s_first(out: tuple[int, ...], S: int) -> tuple[tuple[int, ...], int]:
    n = len(out)
    order = [v for v in range(n) if S >> v & 1] + [v for v in range(n) if not S >> v & 1]
    pos = {v: i for i, v in enumerate(order)}
    new = [0] * n
    for v in range(n):
        m = 0
        for w in bits(out[v]):
            m |= 1 << pos[w]
        new[pos[v]] = m
    return tuple(new), (1 << S.bit_count()) - 1


def _acyclic(n, dedup):
    if dedup:
        src = _augment(n, _any_sink_ext, _sinks)
    else:
        src = (out for out in _labelled(n, 3) if is_acyclic_mask(Digraph.from_out_masks(out), (1 << n) - 1))
    for out in src:
        yield out, None, None


_STREAMS = {
    "acyclic": _acyclic,
    "all-oriented": _all_digraphs,
    "no-source-oriented": _no_source,
    "split": _split,
    "break": _break,
    "single-source-acyclic": _single_source_acyclic,
}
