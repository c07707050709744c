"""Weighted large 2-kernels in oriented graphs with a break.

A *break* is a partition ``(S, T)`` with ``G[S]`` acyclic and ``G[T]`` a
tournament.  For nonnegative integer weights ``f`` the algorithm finds a
2-kernel ``K`` with ``2 f(N+[K]) >= f(V)`` that is *special*: either ``K`` lies
inside ``S``, or ``K = {v} | A(M(v))`` for some ``v`` in ``T``, where ``M(v)``
is the set of vertices nonadjacent to ``v`` and ``A`` the unique 1-kernel.

The graph-dependent part of the recursion (which vertices get absorbed, which
sinks get promoted, which edges get added) never looks at ``f``, so it is
computed once as a :class:`BreakPlan`; weights only enter through the
absorbed weight transfers and the final choice in the tournament.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .acyclic import induced_one_kernel
from .graph import (
    Digraph,
    InvariantViolation,
    PreconditionError,
    bits,
    classify_partition,
    is_acyclic_mask,
    is_k_kernel_mask,
    lowest,
    to_mask,
)
from .guards import check_size


def non_neighbourhood(G: Digraph, v: int) -> frozenset[int]:
    """Vertices other than ``v`` that are neither in- nor out-neighbours of ``v``."""
    return frozenset(bits(G.all_mask & ~(1 << v) & ~(G.out[v] | G.inn[v])))


def closed_out_mask(G: Digraph, K: int) -> int:
    return K | G.out_union(K)


def weight_of(f: Sequence[int], mask: int) -> int:
    return sum(f[v] for v in bits(mask))


# ---------------------------------------------------------------- the plan

@dataclass(frozen=True)
class _Absorb:
    gone: int  # deleted tournament vertex
    into: int  # vertex that inherits its weight


@dataclass(frozen=True)
class _Augment:
    """Frame where sink ``s`` of G[S] got edges from the T-vertices in ``added``."""

    s: int
    added: int
    S: int
    T: int
    alive: int
    out: tuple[int, ...]


class _State:
    __slots__ = ("out", "inn", "alive", "S", "T")

    def __init__(self, G: Digraph, S: int, T: int):
        self.out = list(G.out)
        self.inn = list(G.inn)
        self.alive = G.all_mask
        self.S = S
        self.T = T

    def delete(self, v: int) -> None:
        bit = 1 << v
        for x in bits(self.out[v]):
            self.inn[x] &= ~bit
        for x in bits(self.inn[v]):
            self.out[x] &= ~bit
        self.out[v] = self.inn[v] = 0
        self.alive &= ~bit
        self.T &= ~bit

    def out_union(self, mask: int) -> int:
        out = self.out
        acc = 0
        for v in bits(mask):
            acc |= out[v]
        return acc

    def reach2(self, mask: int) -> int:
        one = self.out_union(mask)
        return mask | one | self.out_union(one)

    def one_kernel(self, mask: int) -> int:
        inn = self.inn
        remaining = mask
        kernel = 0
        while remaining:
            layer = 0
            for v in bits(remaining):
                if not (inn[v] & remaining):
                    layer |= 1 << v
            if not layer:
                raise InvariantViolation("S is not acyclic")
            for v in bits(layer):
                if not (inn[v] & kernel):
                    kernel |= 1 << v
            remaining &= ~layer
        return kernel

    def anchored(self, v: int) -> int:
        free = self.alive & ~(1 << v) & ~(self.out[v] | self.inn[v])
        return (1 << v) | self.one_kernel(free)


class BreakPlan:
    """Weight-independent skeleton of the recursion for one ``(G, S, T)``."""

    def __init__(self, G: Digraph, S, T, *, check: bool = True):
        smask = S if isinstance(S, int) else to_mask(S)
        tmask = T if isinstance(T, int) else to_mask(T)
        if check:
            verdict = classify_partition(G, bits(smask), bits(tmask))
            if not verdict.is_break:
                raise PreconditionError(f"not a valid break: {verdict.reason}")
        self.G = G
        self.S = smask
        self.T = tmask
        self.steps: list[_Absorb | _Augment] = []
        self._cache: dict[int, int] = {}
        self._build()

    def _build(self) -> None:
        st = _State(self.G, self.S, self.T)
        while True:
            absorbed = self._absorb_step(st)
            if absorbed:
                continue
            if not st.S:
                break
            s = next(u for u in bits(st.S) if not (st.out[u] & st.S))
            missing = st.T & ~(st.out[s] | st.inn[s])
            if missing:
                self.steps.append(_Augment(s, missing, st.S, st.T, st.alive, tuple(st.out)))
                for t in bits(missing):
                    st.out[t] |= 1 << s
                st.inn[s] |= missing
            st.S &= ~(1 << s)
            st.T |= 1 << s
        self.final_out = tuple(st.out)
        self.final_T = st.T

    def _absorb_step(self, st: _State) -> bool:
        for v in bits(st.T):
            cand = st.anchored(v)
            uncovered = st.alive & ~st.reach2(cand)
            if not uncovered:
                continue
            w = lowest(uncovered)
            if st.inn[w] & ~st.inn[v]:
                raise InvariantViolation(f"uncovered vertex {w} has an in-neighbour outside N-({v})")
            self.steps.append(_Absorb(v, w))
            st.delete(v)
            return True
        return False

    # -- weights enter here
    def _final_weights(self, f: Sequence[int]) -> list[int]:
        g = list(f)
        for step in self.steps:
            if isinstance(step, _Absorb):
                g[step.into] += g[step.gone]
                g[step.gone] = 0
        return g

    def king(self, f: Sequence[int]) -> int:
        g = self._final_weights(f)
        out = self.final_out
        best, best_w = -1, -1
        for v in bits(self.final_T):
            w = g[v]
            for u in bits(out[v]):
                w += g[u]
            if w > best_w:
                best, best_w = v, w
        return best

    def kernel_for_king(self, king: int) -> int:
        if king not in self._cache:
            self._cache[king] = self._map_back(1 << king)
        return self._cache[king]

    def _map_back(self, K: int) -> int:
        for step in reversed(self.steps):
            if isinstance(step, _Augment):
                K = self._undo_augment(step, K)
        return K

    def _undo_augment(self, fr: _Augment, K: int) -> int:
        s = fr.s
        out = fr.out
        if not (K & ~fr.S):
            # kernel inside S: keep it if it still 2-covers s, else add s
            if is_kernel_in(out, fr.alive, K):
                return K
            return K | (1 << s)
        v = lowest(K & fr.T)
        if not (fr.added >> v & 1):
            return K
        rest = K & ~(1 << v)
        if any(out[a] >> s & 1 for a in bits(rest)):
            return K
        return K | (1 << s)

    def solve(self, f: Sequence[int]) -> int:
        return self.kernel_for_king(self.king(f))


def is_kernel_in(out: Sequence[int], alive: int, K: int) -> bool:
    """2-kernel test on a digraph given by out-masks restricted to ``alive``."""
    one = 0
    for v in bits(K):
        if out[v] & K:
            return False
        one |= out[v]
    two = 0
    for v in bits(one & alive):
        two |= out[v]
    return not (alive & ~(K | one | two))


# ---------------------------------------------------------------- public API

@dataclass(frozen=True)
class SpecialKernel:
    kernel: tuple[int, ...]
    shape: str  # "subset-of-S" | "anchored"
    anchor: int | None
    coverage: int
    total_weight: int

    @property
    def bound(self) -> Fraction:
        return Fraction(self.total_weight, 2)


def _shape_of(G: Digraph, S: int, T: int, K: int) -> tuple[str, int | None]:
    if not (K & ~S):
        return "subset-of-S", None
    anchors = K & T
    if anchors.bit_count() != 1:
        raise InvariantViolation(f"kernel meets T in {anchors.bit_count()} vertices")
    v = lowest(anchors)
    free = G.all_mask & ~(1 << v) & ~(G.out[v] | G.inn[v])
    if K != (1 << v) | induced_one_kernel(G, free):
        raise InvariantViolation(f"kernel is not {v} plus the 1-kernel of its non-neighbourhood")
    return "anchored", v


def _certify_shape(G: Digraph, S: int, T: int, K: int) -> tuple[str, int | None]:
    if not is_k_kernel_mask(G, K, 2):
        raise InvariantViolation("result is not a 2-kernel")
    return _shape_of(G, S, T, K)


def _with_weights(G: Digraph, f: Sequence[int], K: int, shape: tuple[str, int | None]) -> SpecialKernel:
    coverage = weight_of(f, closed_out_mask(G, K))
    total = sum(f)
    if 2 * coverage < total:
        raise InvariantViolation(f"coverage {coverage} below half of {total}")
    return SpecialKernel(tuple(bits(K)), shape[0], shape[1], coverage, total)


def certify_special(G: Digraph, S: int, T: int, f: Sequence[int], K: int) -> SpecialKernel:
    """Check that ``K`` is a special 2-kernel covering half the weight, and describe it."""
    return _with_weights(G, f, K, _certify_shape(G, S, T, K))


def _check_weights(G: Digraph, f: Sequence[int]) -> list[int]:
    f = list(f)
    if len(f) != G.n:
        raise PreconditionError(f"need {G.n} weights, got {len(f)}")
    if any(not isinstance(x, int) or x < 0 for x in f):
        raise PreconditionError("weights must be nonnegative integers")
    return f


def large_two_kernel(G: Digraph, S, T, f: Sequence[int]) -> SpecialKernel:
    """Special 2-kernel ``K`` with ``f(N+[K]) >= f(V)/2`` for a break ``(S, T)``."""
    f = _check_weights(G, f)
    plan = BreakPlan(G, S, T)
    return certify_special(G, plan.S, plan.T, f, plan.solve(f))


def large_two_kernels(G: Digraph, S, T, weight_maps: Iterable[Sequence[int]]) -> list[SpecialKernel]:
    """Same as :func:`large_two_kernel` for several weight maps sharing one plan.

    Different weights often pick the same kernel, so shape checks are cached.
    """
    plan = BreakPlan(G, S, T)
    shapes: dict[int, tuple[str, int | None]] = {}
    results = []
    for f in weight_maps:
        f = _check_weights(G, f)
        K = plan.solve(f)
        if K not in shapes:
            shapes[K] = _certify_shape(G, plan.S, plan.T, K)
        results.append(_with_weights(G, f, K, shapes[K]))
    return results


def find_break(G: Digraph, max_n: int | None = None) -> tuple[int, int] | None:
    """A break ``(S, T)`` with ``|T|`` as large as possible, or None.

    Among the largest tournaments the lexicographically smallest vertex list
    wins.  Exponential in the worst case, hence the size guard.
    """
    check_size(G.n, max_n, 24)
    if not G.is_oriented():
        return None
    nbr = [G.out[v] | G.inn[v] for v in range(G.n)]
    cliques: list[tuple[int, ...]] = []

    def grow(clique: tuple[int, ...], cand: int) -> None:
        cliques.append(clique)
        for v in bits(cand):
            grow(clique + (v,), cand & nbr[v] & ~((1 << (v + 1)) - 1))

    grow((), G.all_mask)
    cliques.sort(key=lambda c: (-len(c), c))
    for clique in cliques:
        T = to_mask(clique)
        S = G.all_mask & ~T
        if is_acyclic_mask(G, S):
            return S, T
    return None


# ------------------------------------------------------ mixed conjecture check

@dataclass(frozen=True)
class MixedVerdict:
    holds: bool
    kernel: tuple[int, ...] | None
    mode: str


def check_mixed_conjecture(
    G: Digraph, f: Sequence[int], mode: str = "open", max_n: int | None = None
) -> MixedVerdict:
    """Search all 2-kernels for one with ``|K| + f(V)/2 <= |G|/2 + f(N+(K))``.

    ``mode`` picks the open out-neighbourhood ``N+(K)`` or the closed one
    ``N+[K]`` (``K`` together with its out-neighbours).
    """
    if mode not in ("open", "closed"):
        raise ValueError(f"mode must be 'open' or 'closed', not {mode!r}")
    check_size(G.n, max_n, 18)
    f = _check_weights(G, f)
    total = sum(f)
    ball2 = G.ball2()
    full = G.all_mask
    out = G.out
    for size in range(1, G.n + 1):
        for combo in combinations(range(G.n), size):
            K = 0
            reach = 0
            nbrs = 0
            for v in combo:
                K |= 1 << v
                reach |= ball2[v]
                nbrs |= out[v]
            if reach != full or nbrs & K:
                continue
            hood = nbrs if mode == "open" else nbrs | K
            if 2 * size + total <= G.n + 2 * weight_of(f, hood):
                return MixedVerdict(True, combo, mode)
    return MixedVerdict(False, None, mode)
