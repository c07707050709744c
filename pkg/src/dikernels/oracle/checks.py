"""Brute-force checks of the conjectures and lemmas, for desk-scale instances.

Each checker returns a small verdict object instead of raising, so that a
failing instance can be reported (and saved) by the search harness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..acyclic import induced_one_kernel
from ..graph import Digraph, bits, classify_partition, is_k_kernel_mask
from ..guards import check_size
from .bruteforce import _balls, has_small_two_kernel, min_k_kernel_bruteforce, stable_sets, strong_two_kernels

VACUOUS = "vacuous"
HOLDS = "holds"
COUNTEREXAMPLE = "counterexample"


@dataclass(frozen=True)
class Verdict:
    status: str  # VACUOUS | HOLDS | COUNTEREXAMPLE
    kernel: tuple[int, ...] | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != COUNTEREXAMPLE


def check_small_qk_conjecture(G: Digraph, max_n: int | None = None) -> Verdict:
    """Sourceless digraphs should have a 2-kernel with at most ``|G|/2`` vertices."""
    check_size(G.n, max_n, 20)
    if G.n == 0 or G.sources():
        return Verdict(VACUOUS)
    K = has_small_two_kernel(G, G.n // 2)
    if K is not None:
        return Verdict(HOLDS, tuple(bits(K)))
    best = min_k_kernel_bruteforce(G, 2, max_n)
    if best is None:
        return Verdict(COUNTEREXAMPLE, None, "no 2-kernel at all")
    size, witness = best
    return Verdict(COUNTEREXAMPLE, tuple(sorted(witness)), f"minimum 2-kernel has {size} vertices")


def check_large_kernel_shadow(G: Digraph, max_n: int | None = None) -> Verdict:
    """Some 2-kernel ``K`` has ``|N+[K]| >= |G|/2`` (this also shows a 2-kernel exists)."""
    check_size(G.n, max_n, 20)
    balls = _balls(G, 2)
    full = G.all_mask
    seen_kernel = False
    for K in stable_sets(G):
        reach = 0
        hood = K
        for v in bits(K):
            reach |= balls[v]
            hood |= G.out[v]
        if reach != full:
            continue
        seen_kernel = True
        if 2 * hood.bit_count() >= G.n:
            return Verdict(HOLDS, tuple(bits(K)))
    if not seen_kernel:
        return Verdict(COUNTEREXAMPLE, None, "no 2-kernel at all")
    return Verdict(COUNTEREXAMPLE, None, "every 2-kernel has a small closed out-neighbourhood")


def check_two_kernel_exists(G: Digraph, max_n: int | None = None) -> Verdict:
    best = min_k_kernel_bruteforce(G, 2, max_n)
    if best is None:
        return Verdict(COUNTEREXAMPLE, None, "no 2-kernel")
    return Verdict(HOLDS, tuple(sorted(best[1])))


# ------------------------------------------------------------------ split lemma

def split_problems(G: Digraph, S: int, v: int) -> int:
    """Problems for ``v``, straight from the definition, using plain BFS balls."""
    balls = _balls(G, 2)
    found = 0
    for s in bits(G.inn[v] & S):
        if balls[v] >> s & 1:
            continue
        far = S & ~(G.out[v] | G.inn[v]) & ~(1 << v)
        if any(balls[x] >> s & 1 for x in bits(far)):
            continue
        found |= 1 << s
    return found


@dataclass(frozen=True)
class LemmaVerdict:
    holds: bool
    uncovered: tuple[int, ...] = ()  # T-vertices in no strong 2-kernel
    witnesses: dict[int, int] = field(default_factory=dict)
    failures: tuple[int, ...] = ()


def check_goodvert_lemma(G: Digraph, S: int, T: int, max_n: int | None = None) -> LemmaVerdict:
    """Each T-vertex outside every strong 2-kernel has a dominated neighbour ``w``.

    ``w`` must differ from ``v``, be adjacent to ``v``, satisfy
    ``N-(w) <= N-(v)``, and be a problem for ``v`` if it lies in ``S``.
    """
    check_size(G.n, max_n, 20)
    if not classify_partition(G, bits(S), bits(T)).is_split:
        raise ValueError("not a valid split")
    inside = 0
    for K in strong_two_kernels(G, T, max_n):
        inside |= K
    uncovered = tuple(bits(T & ~inside))
    witnesses: dict[int, int] = {}
    failures = []
    for v in uncovered:
        probs = split_problems(G, S, v)
        for w in bits(G.out[v] | G.inn[v]):
            if G.inn[w] & ~G.inn[v]:
                continue
            if S >> w & 1 and not probs >> w & 1:
                continue
            witnesses[v] = w
            break
        else:
            failures.append(v)
    return LemmaVerdict(not failures, uncovered, witnesses, tuple(failures))


# ------------------------------------------------------------ break reduction

@dataclass(frozen=True)
class ReductionVerdict:
    holds: bool
    fired: int  # number of (v, w) pairs where the reduction applies
    reason: str = ""


def _delete_vertex(G: Digraph, v: int) -> list[int]:
    """Out-masks of ``G - v`` kept on the original ids (``v`` isolated)."""
    drop = ~(1 << v)
    out = [m & drop for m in G.out]
    out[v] = 0
    return out


def check_absorb_reduction(G: Digraph, S: int, T: int, max_n: int | None = None) -> ReductionVerdict:
    """Soundness of deleting a T-vertex whose anchored set misses some ``w``.

    For every ``v`` in ``T`` such that ``{v} | A(M(v))`` fails to 2-cover some
    ``w``: ``N-(w) <= N-(v)``; every 2-kernel of ``G - v`` is a 2-kernel of
    ``G``; and whenever such a kernel has ``w`` in its closed out-neighbourhood
    it also has ``v`` there, so shifting ``f(v)`` onto ``w`` never overstates
    the covered weight.
    """
    check_size(G.n, max_n, 20)
    if not classify_partition(G, bits(S), bits(T)).is_break:
        raise ValueError("not a valid break")
    full = G.all_mask
    balls = _balls(G, 2)
    fired = 0
    for v in bits(T):
        free = full & ~(1 << v) & ~(G.out[v] | G.inn[v])
        cand = (1 << v) | induced_one_kernel(G, free)
        reach = 0
        for x in bits(cand):
            reach |= balls[x]
        missed = full & ~reach
        if not missed:
            continue
        H = Digraph.from_out_masks(_delete_vertex(G, v))
        rest = full & ~(1 << v)
        hballs = _balls(H, 2)
        kernels = []
        for K in stable_sets(H):
            if K >> v & 1:
                continue
            r = 0
            for x in bits(K):
                r |= hballs[x]
            if not (rest & ~r):
                kernels.append(K)
        for w in bits(missed):
            fired += 1
            if G.inn[w] & ~G.inn[v]:
                return ReductionVerdict(False, fired, f"N-({w}) not inside N-({v})")
            for K in kernels:
                if not is_k_kernel_mask(G, K, 2):
                    return ReductionVerdict(False, fired, f"2-kernel {list(bits(K))} of G-{v} fails in G")
                hood = K | G.out_union(K)
                if hood >> w & 1 and not hood >> v & 1:
                    return ReductionVerdict(False, fired, f"{w} covered but {v} not by {list(bits(K))}")
    return ReductionVerdict(True, fired)



def check_weighted_large(G: Digraph, f, max_n: int | None = None) -> Verdict:
    """Some 2-kernel ``K`` has ``2 f(N+[K]) >= f(V)``."""
    check_size(G.n, max_n, 20)
    total = sum(f)
    balls = _balls(G, 2)
    full = G.all_mask
    for K in stable_sets(G):
        reach = 0
        hood = K
        for v in bits(K):
            reach |= balls[v]
            hood |= G.out[v]
        if reach == full and 2 * sum(f[v] for v in bits(hood)) >= total:
            return Verdict(HOLDS, tuple(bits(K)))
    return Verdict(COUNTEREXAMPLE, None, "no 2-kernel covers half the weight")
