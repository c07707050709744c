"""Kernels of acyclic digraphs and of digraphs with a spanning arborescence."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import (
    Digraph,
    InvariantViolation,
    KernelCertificate,
    PreconditionError,
    VerificationFailure,
    bits,
    build_digraph,
    spanning_arborescence,
    to_mask,
    topological_order,
    verify_kernel,
)


def one_kernel_mask(G: Digraph, mask: int, order: list[int] | None = None) -> int:
    """Unique 1-kernel of the acyclic induced subdigraph ``G[mask]``.

    Vertices are taken in topological order; a vertex joins iff none of its
    in-neighbours already joined.
    """
    if order is None:
        order = topological_order(G)
        if order is None:
            raise PreconditionError("digraph is not acyclic")
    inn = G.inn
    kernel = 0
    for v in order:
        if mask >> v & 1 and not (inn[v] & kernel):
            kernel |= 1 << v
    return kernel


def induced_one_kernel(G: Digraph, mask: int) -> int:
    """Unique 1-kernel of ``G[mask]`` where only the induced part need be acyclic."""
    inn = G.inn
    remaining = mask
    kernel = 0
    # strip sources of G[remaining] in rounds: each round is one topological layer
    while remaining:
        layer = [v for v in bits(remaining) if not (inn[v] & remaining)]
        if not layer:
            raise PreconditionError("induced subdigraph is not acyclic")
        for v in layer:
            if not (inn[v] & kernel):
                kernel |= 1 << v
        remaining &= ~to_mask(layer)
    return kernel


def unique_one_kernel(G: Digraph) -> frozenset[int]:
    """The unique stable set of an acyclic digraph that 1-covers every vertex."""
    order = topological_order(G)
    if order is None:
        raise PreconditionError("digraph is not acyclic")
    return frozenset(bits(one_kernel_mask(G, G.all_mask, order)))


def reachability(G: Digraph, order: list[int] | None = None) -> list[int]:
    """``reach[v]``: mask of vertices joined from ``v`` by a path of any length (v included)."""
    if order is None:
        order = topological_order(G)
        if order is None:
            raise PreconditionError("digraph is not acyclic")
    reach = [0] * G.n
    for v in reversed(order):
        acc = 1 << v
        for w in bits(G.out[v]):
            acc |= reach[w]
        reach[v] = acc
    return reach


def _single_source_order(G: Digraph) -> tuple[list[int], int]:
    order = topological_order(G)
    if order is None:
        raise PreconditionError("digraph is not acyclic")
    sources = G.sources()
    if len(sources) != 1:
        raise PreconditionError(f"expected exactly one source, found {len(sources)}")
    return order, sources[0]


def k_cover_set(G: Digraph, k: int) -> frozenset[int]:
    """A set of at most ``1 + (|G|-1)/(k+1)`` vertices that k-covers an acyclic single-source digraph.

    Repeatedly take the vertex whose descendant set (itself included) is
    smallest among those with at least ``k+1`` members, and delete that set.
    Deleted sets are closed under reachability, so descendant sets inside the
    remaining digraph are just the originals intersected with what is left.
    """
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    order, root = _single_source_order(G)
    reach = reachability(G, order)
    alive = G.all_mask
    chosen = 0
    while True:
        if alive.bit_count() <= k:
            chosen |= 1 << root
            break
        best = -1
        best_size = 0
        for v in bits(alive):
            size = (reach[v] & alive).bit_count()
            if size >= k + 1 and (best < 0 or size < best_size):
                best, best_size = v, size
        chosen |= 1 << best
        if best == root:
            break
        alive &= ~reach[best]
    return frozenset(bits(chosen))


def k_kernel_single_source_acyclic(G: Digraph, k: int) -> KernelCertificate:
    """k-kernel of size at most ``1 + (|G|-2)/k`` in an acyclic digraph with one source."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if G.n < 2:
        raise PreconditionError("need at least two vertices")
    order, _ = _single_source_order(G)
    cover = to_mask(k_cover_set(G, k - 1))
    kernel = one_kernel_mask(G, cover, order)
    bound = 1 + Fraction(G.n - 2, k)
    return _certify(G, kernel, k, bound, "acyclic-k-kernel")


@dataclass(frozen=True)
class EdgeBipartition:
    """Edges split by a vertex numbering: ``forward`` go to later positions."""

    order: tuple[int, ...]
    forward: Digraph
    backward: Digraph


def edge_bipartition(G: Digraph) -> EdgeBipartition:
    arb = spanning_arborescence(G)
    if arb is None:
        raise PreconditionError("digraph has no spanning arborescence")
    pos = {v: i for i, v in enumerate(arb.order)}
    fwd = [0] * G.n
    bwd = [0] * G.n
    for u in range(G.n):
        for v in bits(G.out[u]):
            if pos[u] < pos[v]:
                fwd[u] |= 1 << v
            else:
                bwd[u] |= 1 << v
    return EdgeBipartition(arb.order, Digraph.from_out_masks(fwd), Digraph.from_out_masks(bwd))


def k_kernel_arborescence(G: Digraph, k: int) -> KernelCertificate:
    """k-kernel of size at most ``1 + (|G|-2)/(k-1)`` when G has a spanning arborescence."""
    if k < 2:
        raise PreconditionError("k must be at least 2")
    if G.n < 2:
        raise PreconditionError("need at least two vertices")
    parts = edge_bipartition(G)
    inner = k_kernel_single_source_acyclic(parts.forward, k - 1)
    kernel = induced_one_kernel(parts.backward, to_mask(inner.kernel))
    bound = 1 + Fraction(G.n - 2, k - 1)
    return _certify(G, kernel, k, bound, "arborescence-k-kernel")


def _certify(G: Digraph, kernel: int, k: int, bound: Fraction, name: str) -> KernelCertificate:
    cert = verify_kernel(G, bits(kernel), k, claimed_bound=bound, algorithm=name)
    if isinstance(cert, VerificationFailure):
        raise InvariantViolation(f"{name}: {cert.reason}")
    return cert


def tight_instance(k: int, m: int) -> Digraph:
    """Acyclic single-source digraph with no k-kernel smaller than ``1 + (|G|-2)/k``.

    Vertex 0 -> 1, then ``m`` directed paths of ``k`` vertices each hang off 1.
    """
    if k < 2 or m < 1:
        raise PreconditionError("need k >= 2 and m >= 1")
    edges = [(0, 1)]
    for i in range(m):
        head = 2 + i * k
        edges.append((1, head))
        edges.extend((head + j, head + j + 1) for j in range(k - 1))
    return build_digraph(2 + m * k, edges)

