"""Exhaustive kernel search.  Exponential; guarded by vertex count."""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from ..graph import Digraph, bits
from ..guards import check_size


def _balls(G: Digraph, k: int) -> list[int]:
    """Per-vertex k-balls by plain BFS over edge lists (independent of ``reach_within``)."""
    succ = [[] for _ in range(G.n)]
    for u, v in G.edges():
        succ[u].append(v)
    balls = []
    for src in range(G.n):
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            if dist[u] == k:
                continue
            for w in succ[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        balls.append(sum(1 << w for w in dist))
    return balls


def min_k_kernel_bruteforce(G: Digraph, k: int, max_n: int | None = None) -> tuple[int, frozenset[int]] | None:
    """Smallest stable set that k-covers ``V(G)``, by increasing cardinality.

    Returns ``(size, set)`` with the lexicographically first minimum set, or
    None when no k-kernel exists.
    """
    check_size(G.n, max_n, 20)
    if G.n == 0:
        return 0, frozenset()
    balls = _balls(G, k)
    full = G.all_mask
    out = G.out
    for size in range(1, G.n + 1):
        for combo in combinations(range(G.n), size):
            reach = nbrs = K = 0
            for v in combo:
                reach |= balls[v]
                nbrs |= out[v]
                K |= 1 << v
            if reach == full and not (nbrs & K):
                return size, frozenset(combo)
    return None


def stable_sets(G: Digraph) -> Iterator[int]:
    """All stable sets (as masks), including the empty set, in a fixed order."""
    n = G.n
    nbr = [G.out[v] | G.inn[v] for v in range(n)]

    def grow(start: int, current: int, blocked: int) -> Iterator[int]:
        yield current
        for v in range(start, n):
            if not blocked >> v & 1:
                yield from grow(v + 1, current | (1 << v), blocked | nbr[v] | (1 << v))

    yield from grow(0, 0, 0)


def k_kernels(G: Digraph, k: int, max_n: int | None = None) -> Iterator[int]:
    """Every k-kernel of G, as a bitmask."""
    check_size(G.n, max_n, 20)
    balls = _balls(G, k)
    full = G.all_mask
    for K in stable_sets(G):
        reach = 0
        for v in bits(K):
            reach |= balls[v]
        if reach == full:
            yield K


def is_strong_two_kernel(G: Digraph, T: int, K: int) -> bool:
    """Every T-vertex is 1-covered by K or 2-covered from a vertex of K inside T."""
    one = K | G.out_union(K)
    near = (K & T) | G.out_union(K & T)
    return not (T & ~(one | near | G.out_union(near)))


def strong_two_kernels(G: Digraph, T: int, max_n: int | None = None) -> Iterator[int]:
    for K in k_kernels(G, 2, max_n):
        if is_strong_two_kernel(G, T, K):
            yield K


def has_small_two_kernel(G: Digraph, limit: int) -> int | None:
    """A 2-kernel with at most ``limit`` vertices (first found), or None."""
    balls = _balls(G, 2)
    full = G.all_mask
    out = G.out
    for size in range(1, limit + 1):
        for combo in combinations(range(G.n), size):
            reach = nbrs = K = 0
            for v in combo:
                reach |= balls[v]
                nbrs |= out[v]
                K |= 1 << v
            if reach == full and not (nbrs & K):
                return K
    return None



def one_kernel_counts(batch: Sequence[Sequence[int]], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Number of 1-kernels and the smallest one (as a mask, -1 if none) per digraph.

    Vectorised over the batch and over all ``2^n`` subsets, so it is meant for
    many small digraphs of the same order (``n <= 12``).
    """
    if n > 12:
        raise ValueError("one_kernel_counts is for n <= 12")
    subsets = np.arange(1 << n, dtype=np.uint16)
    out = np.asarray(batch, dtype=np.uint16).reshape(len(batch), n)
    unstable = np.zeros((len(batch), 1 << n), dtype=bool)
    covered = np.zeros((len(batch), 1 << n), dtype=np.uint16)
    for v in range(n):
        member = ((subsets >> v) & 1).astype(bool)
        col = out[:, v][:, None]
        unstable |= member[None, :] & ((col & subsets[None, :]) != 0)
        covered |= np.where(member[None, :], col | np.uint16(1 << v), np.uint16(0))
    kernel = ~unstable & (covered == (1 << n) - 1)
    counts = kernel.sum(axis=1)
    first = np.where(counts > 0, kernel.argmax(axis=1), -1)
    return counts, first
