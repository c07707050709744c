"""Digraph representation and the covering predicates everything else is built on.

Vertices are dense ids ``0..n-1``.  Adjacency is kept as Python ints used as
bitsets: bit ``u`` of ``out[v]`` is set iff ``v -> u`` is an edge.  Python ints
are arbitrary precision, so the same representation serves 5 vertices and
50 000 vertices.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence


class DigraphError(ValueError):
    """Raised for malformed digraph input."""


class LoopError(DigraphError):
    pass


class DuplicateEdgeError(DigraphError):
    pass


class VertexRangeError(DigraphError):
    pass


class PreconditionError(ValueError):
    """An algorithm was called on an input outside its domain."""


class InvariantViolation(RuntimeError):
    """A step that the underlying proof guarantees did not go through.

    Never expected on valid input; seeing one means there is a bug.
    """


# ---------------------------------------------------------------- bit helpers

def _bits_iter(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# small masks dominate the exhaustive runs, so their bit lists are precomputed
_SMALL = 1 << 12
_BIT_TABLE = tuple(tuple(_bits_iter(m)) for m in range(_SMALL))


def bits(mask: int) -> Iterable[int]:
    """Set bit positions of ``mask`` in increasing order."""
    if mask < _SMALL:
        return _BIT_TABLE[mask]
    return _bits_iter(mask)


def bit_lister(n: int) -> Callable[[int], Iterable[int]]:
    """``bits`` for masks below ``2**n``; a bare table lookup when n is small."""
    return _BIT_TABLE.__getitem__ if n <= 12 else _bits_iter


def lowest(mask: int) -> int:
    """Index of the lowest set bit (``mask`` must be nonzero)."""
    return (mask & -mask).bit_length() - 1


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def to_set(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


# ------------------------------------------------------------------- digraph

class Digraph:
    """Immutable loop-free simple digraph on vertices ``0..n-1``."""

    __slots__ = ("n", "out", "inn", "_cache")

    def __init__(self, n: int, out: Sequence[int], inn: Sequence[int]):
        self.n = n
        self.out = tuple(out)
        self.inn = tuple(inn)
        self._cache: dict = {}

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
        return build_digraph(n, edges)

    @classmethod
    def from_out_masks(cls, out: Sequence[int]) -> Digraph:
        """Build from out-neighbour bitmasks (trusted; no loop/range checks)."""
        n = len(out)
        inn = [0] * n
        listed = bit_lister(n)
        for u in range(n):
            bu = 1 << u
            for v in listed(out[u]):
                inn[v] |= bu
        return cls(n, out, inn)

    # -- basic queries
    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Digraph) and self.n == other.n and self.out == other.out

    def __hash__(self) -> int:
        return hash((self.n, self.out))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, edges={self.edges()})"

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.out[u])]

    @property
    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.out)

    def out_neighbours(self, v: int) -> list[int]:
        return list(bits(self.out[v]))

    def in_neighbours(self, v: int) -> list[int]:
        return list(bits(self.inn[v]))

    def neighbours_mask(self, v: int) -> int:
        return self.out[v] | self.inn[v]

    def sources(self) -> list[int]:
        return [v for v in range(self.n) if not self.inn[v]]

    def sinks(self) -> list[int]:
        return [v for v in range(self.n) if not self.out[v]]

    def is_oriented(self) -> bool:
        return all(not (self.out[v] & self.inn[v]) for v in range(self.n))

    def out_union(self, mask: int) -> int:
        """Union of the out-neighbourhoods of the vertices in ``mask``."""
        out = self.out
        acc = 0
        for v in bits(mask):
            acc |= out[v]
        return acc

    def ball2(self) -> tuple[int, ...]:
        """Per vertex, the mask of vertices it 2-covers (itself included)."""
        cached = self._cache.get("ball2")
        if cached is None:
            out = self.out
            listed = bit_lister(self.n)
            balls = []
            for v in range(self.n):
                acc = (1 << v) | out[v]
                for w in listed(out[v]):
                    acc |= out[w]
                balls.append(acc)
            cached = tuple(balls)
            self._cache["ball2"] = cached
        return cached

    def ball(self, k: int) -> tuple[int, ...]:
        """Per vertex, the mask of vertices reachable by a path of length <= k."""
        if k == 2:
            return self.ball2()
        key = ("ball", k)
        cached = self._cache.get(key)
        if cached is None:
            cached = tuple(reach_within(self, 1 << v, k) for v in range(self.n))
            self._cache[key] = cached
        return cached

    def induced(self, vertices: Iterable[int]) -> tuple[Digraph, list[int]]:
        """Induced subdigraph, relabelled to ``0..m-1``; returns it with the old ids."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        kept_mask = to_mask(keep)
        out = []
        for v in keep:
            out.append(to_mask(index[w] for w in bits(self.out[v] & kept_mask)))
        return Digraph.from_out_masks(out), keep


def build_digraph(n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
    """Validate an edge list and build the digraph."""
    if n < 0:
        raise VertexRangeError(f"vertex count must be nonnegative, got {n}")
    out = [0] * n
    inn = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"edge ({u},{v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise LoopError(f"loop at vertex {u}")
        if out[u] >> v & 1:
            raise DuplicateEdgeError(f"duplicate edge ({u},{v})")
        out[u] |= 1 << v
        inn[v] |= 1 << u
    return Digraph(n, out, inn)


# ------------------------------------------------------------------ covering

def reach_within(G: Digraph, xmask: int, k: int) -> int:
    """Mask of vertices joined from ``xmask`` by a directed path of length <= k."""
    seen = frontier = xmask
    for _ in range(k):
        frontier = G.out_union(frontier) & ~seen
        if not frontier:
            break
        seen |= frontier
    return seen


def shortest_paths_from(G: Digraph, xmask: int, k: int) -> dict[int, list[int]]:
    """Shortest witness path (length <= k) from ``xmask`` to every vertex it reaches.

    Level-synchronous BFS; a vertex's parent is its smallest-id in-neighbour on
    the previous level, so the result depends only on the input.
    """
    parent: dict[int, int] = {}
    seen = frontier = xmask
    for _ in range(k):
        nxt = G.out_union(frontier) & ~seen
        if not nxt:
            break
        for w in bits(nxt):
            parent[w] = lowest(G.inn[w] & frontier)
        seen |= nxt
        frontier = nxt
    paths: dict[int, list[int]] = {}
    for v in bits(seen):
        path = [v]
        while path[-1] in parent:
            path.append(parent[path[-1]])
        path.reverse()
        paths[v] = path
    return paths


def k_covers(G: Digraph, X: Iterable[int], Y: Iterable[int], k: int) -> bool:
    """True iff every vertex of ``Y`` is joined from ``X`` by a path of length <= k."""
    ymask = to_mask(Y)
    return not (ymask & ~reach_within(G, to_mask(X), k))


def is_stable_mask(G: Digraph, mask: int) -> bool:
    return not (G.out_union(mask) & mask)


def is_stable(G: Digraph, X: Iterable[int]) -> bool:
    return is_stable_mask(G, to_mask(X))


def is_k_kernel_mask(G: Digraph, mask: int, k: int) -> bool:
    if G.out_union(mask) & mask:
        return False
    if k == 2:
        balls = G.ball2()
        acc = 0
        for v in bits(mask):
            acc |= balls[v]
        return acc == G.all_mask
    return reach_within(G, mask, k) == G.all_mask


def is_k_kernel(G: Digraph, X: Iterable[int], k: int) -> bool:
    return is_k_kernel_mask(G, to_mask(X), k)


# -------------------------------------------------------------- certificates

@dataclass(frozen=True)
class KernelCertificate:
    """A verified k-kernel together with a shortest witness path per vertex."""

    kernel: tuple[int, ...]
    k: int
    witness: dict[int, list[int]] = field(repr=False)
    claimed_bound: Fraction | None = None
    algorithm: str = "verify"
    coverage: int | None = None

    @property
    def size(self) -> int:
        return len(self.kernel)


@dataclass(frozen=True)
class VerificationFailure:
    reason: str
    edge: tuple[int, int] | None = None
    vertex: int | None = None

    def __bool__(self) -> bool:
        return False


def verify_kernel(
    G: Digraph,
    X: Iterable[int],
    k: int,
    claimed_bound: Fraction | None = None,
    algorithm: str = "verify",
) -> KernelCertificate | VerificationFailure:
    """Check that ``X`` is a k-kernel; return a certificate or the first violation."""
    X = sorted(set(X))
    for v in X:
        if not 0 <= v < G.n:
            return VerificationFailure(f"vertex {v} is not in the digraph", vertex=v)
    xmask = to_mask(X)
    for u in X:
        inside = G.out[u] & xmask
        if inside:
            w = lowest(inside)
            return VerificationFailure(f"edge ({u},{w}) inside the set", edge=(u, w))
    paths = shortest_paths_from(G, xmask, k)
    for v in range(G.n):
        if v not in paths:
            return VerificationFailure(f"vertex {v} is not {k}-covered", vertex=v)
    if claimed_bound is not None and len(X) > claimed_bound:
        return VerificationFailure(f"size {len(X)} exceeds claimed bound {claimed_bound}")
    return KernelCertificate(tuple(X), k, paths, claimed_bound, algorithm)


def check_certificate(G: Digraph, cert: KernelCertificate) -> bool:
    """Independent re-check of a certificate's witness paths and bound."""
    kmask = to_mask(cert.kernel)
    if not is_stable_mask(G, kmask):
        return False
    if cert.claimed_bound is not None and len(cert.kernel) > cert.claimed_bound:
        return False
    for v in range(G.n):
        path = cert.witness.get(v)
        if not path or path[-1] != v or path[0] not in cert.kernel or len(path) - 1 > cert.k:
            return False
        if any(not G.has_edge(a, b) for a, b in zip(path, path[1:])):
            return False
    return True


# ---------------------------------------------------------------- partitions

@dataclass(frozen=True)
class PartitionCheck:
    kind: str  # "valid-split" | "valid-break" | "invalid"
    reason: str = ""

    @property
    def is_split(self) -> bool:
        return self.kind == "valid-split"

    @property
    def is_break(self) -> bool:
        return self.kind in ("valid-split", "valid-break")


def is_tournament_mask(G: Digraph, mask: int) -> bool:
    for v in bits(mask):
        others = mask & ~(1 << v)
        if (G.out[v] | G.inn[v]) & others != others:
            return False
    return True


def is_acyclic_mask(G: Digraph, mask: int) -> bool:
    """Whether ``G[mask]`` has no directed cycle (repeated sink stripping)."""
    remaining = mask
    while remaining:
        sinks = 0
        for v in bits(remaining):
            if not (G.out[v] & remaining):
                sinks |= 1 << v
        if not sinks:
            return False
        remaining &= ~sinks
    return True


def classify_partition(G: Digraph, S: Iterable[int], T: Iterable[int]) -> PartitionCheck:
    """Classify ``(S, T)`` as a split, a break (but not a split), or invalid."""
    S, T = set(S), set(T)
    if S & T:
        return PartitionCheck("invalid", f"S and T share vertex {min(S & T)}")
    missing = set(range(G.n)) - (S | T)
    if missing:
        return PartitionCheck("invalid", f"vertex {min(missing)} in neither S nor T")
    extra = (S | T) - set(range(G.n))
    if extra:
        return PartitionCheck("invalid", f"vertex {min(extra)} is not in the digraph")
    for v in range(G.n):
        both = G.out[v] & G.inn[v]
        if both:
            return PartitionCheck("invalid", f"digon between {v} and {lowest(both)}")
    smask, tmask = to_mask(S), to_mask(T)
    for v in bits(tmask):
        others = tmask & ~(1 << v) & ~(G.out[v] | G.inn[v])
        if others:
            return PartitionCheck("invalid", f"T vertices {v} and {lowest(others)} are nonadjacent")
    if not is_acyclic_mask(G, smask):
        return PartitionCheck("invalid", "S contains a directed cycle")
    if is_stable_mask(G, smask):
        return PartitionCheck("valid-split")
    return PartitionCheck("valid-break", "S is acyclic but not stable")


# --------------------------------------------------------- structural utils

def topological_order(G: Digraph) -> list[int] | None:
    """Kahn's algorithm, always taking the smallest available id; None if cyclic."""
    indeg = [m.bit_count() for m in G.inn]
    heap = [v for v in range(G.n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in bits(G.out[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    return order if len(order) == G.n else None


def is_acyclic(G: Digraph) -> bool:
    return topological_order(G) is not None


@dataclass(frozen=True)
class Arborescence:
    root: int
    parent: dict[int, int]
    order: tuple[int, ...]  # BFS order: by level, then by id


def spanning_arborescence(G: Digraph) -> Arborescence | None:
    """BFS arborescence from the smallest-id vertex that reaches every vertex."""
    if G.n == 0:
        return None
    full = G.all_mask
    for r in range(G.n):
        if reach_within(G, 1 << r, G.n) != full:
            continue
        parent: dict[int, int] = {}
        order = [r]
        seen = frontier = 1 << r
        while frontier:
            nxt = G.out_union(frontier) & ~seen
            for w in bits(nxt):
                parent[w] = lowest(G.inn[w] & frontier)
                order.append(w)
            seen |= nxt
            frontier = nxt
        return Arborescence(r, parent, tuple(order))
    return None


# ------------------------------------------------------------ digon removal

@dataclass(frozen=True)
class DigonStep:
    action: str  # "delete-edge" | "delete-pair" | "delete-source"
    edge: tuple[int, int] | None = None
    chosen: int | None = None  # vertex put into every lifted kernel
    removed: tuple[int, ...] = ()


@dataclass(frozen=True)
class DigonReduction:
    """An oriented, source-free digraph obtained from a source-free one.

    ``graph`` is relabelled to ``0..m-1``; ``kept[i]`` is the original id of
    its vertex ``i``.  ``lift`` turns a 2-kernel of ``graph`` into a 2-kernel
    of the original digraph.
    """

    graph: Digraph
    kept: tuple[int, ...]
    log: tuple[DigonStep, ...]

    @property
    def forced(self) -> tuple[int, ...]:
        return tuple(sorted(s.chosen for s in self.log if s.chosen is not None))

    def lift(self, kernel: Iterable[int]) -> list[int]:
        return sorted({self.kept[v] for v in kernel} | set(self.forced))


def reduce_digons(G: Digraph) -> DigonReduction:
    """Remove digons while keeping every vertex with an in-neighbour.

    For each digon ``u<->v`` (``u<v``, lexicographic order) delete ``u->v`` if
    ``v`` keeps an in-neighbour, else ``v->u`` if ``u`` does.  Otherwise ``u``
    and ``v`` see only each other: ``u`` is forced into the kernel and ``u``,
    ``v`` and their out-neighbours are deleted.  Any source this creates is
    forced in the same way (it and its out-neighbours go).
    """
    if G.sources():
        raise PreconditionError(f"input has a source: {G.sources()[0]}")
    out = list(G.out)
    inn = list(G.inn)
    alive = G.all_mask
    log: list[DigonStep] = []

    def delete(mask: int) -> None:
        nonlocal alive
        alive &= ~mask
        for w in bits(mask):
            for x in bits(out[w]):
                inn[x] &= ~(1 << w)
            for x in bits(inn[w]):
                out[x] &= ~(1 << w)
            out[w] = inn[w] = 0

    def peel_sources() -> None:
        while True:
            fresh = [w for w in bits(alive) if not inn[w]]
            if not fresh:
                return
            r = fresh[0]
            gone = (1 << r) | out[r]
            log.append(DigonStep("delete-source", chosen=r, removed=tuple(bits(gone))))
            delete(gone)

    while True:
        digon = None
        for u in bits(alive):
            back = out[u] & inn[u] & ~((1 << (u + 1)) - 1)
            if back:
                digon = (u, lowest(back))
                break
        if digon is None:
            break
        u, v = digon
        if (inn[v] & ~(1 << u)):
            out[u] &= ~(1 << v)
            inn[v] &= ~(1 << u)
            log.append(DigonStep("delete-edge", edge=(u, v)))
        elif (inn[u] & ~(1 << v)):
            out[v] &= ~(1 << u)
            inn[u] &= ~(1 << v)
            log.append(DigonStep("delete-edge", edge=(v, u)))
        else:
            gone = (1 << u) | (1 << v) | out[u] | out[v]
            log.append(DigonStep("delete-pair", edge=(u, v), chosen=u, removed=tuple(bits(gone))))
            delete(gone)
            peel_sources()

    kept = tuple(bits(alive))
    index = {v: i for i, v in enumerate(kept)}
    new_out = [to_mask(index[w] for w in bits(out[v])) for v in kept]
    return DigonReduction(Digraph.from_out_masks(new_out), kept, tuple(log))
