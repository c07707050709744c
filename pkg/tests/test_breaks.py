from __future__ import annotations

import random
from itertools import product

import pytest

from dikernels.acyclic import unique_one_kernel
from dikernels.breaks import (
    BreakPlan,
    check_mixed_conjecture,
    closed_out_mask,
    find_break,
    large_two_kernel,
    large_two_kernels,
    non_neighbourhood,
    weight_of,
)
from dikernels.graph import (
    PreconditionError,
    bits,
    build_digraph,
    classify_partition,
    is_k_kernel,
    to_mask,
)
from dikernels.oracle.checks import check_small_qk_conjecture
from dikernels.oracle.enumeration import EnumerationSpec, break_structures, enumerate_instances
from dikernels.oracle.generators import GeneratorSpec, generate

C3 = build_digraph(3, [(0, 1), (1, 2), (2, 0)])


def _assert_special(G, S, T, f, sk):
    K = to_mask(sk.kernel)
    assert is_k_kernel(G, sk.kernel, 2)
    assert 2 * weight_of(f, closed_out_mask(G, K)) >= sum(f)
    assert sk.coverage == weight_of(f, closed_out_mask(G, K))
    if sk.shape == "subset-of-S":
        assert K & ~S == 0
    else:
        assert sk.shape == "anchored"
        v = sk.anchor
        assert T >> v & 1
        M = sorted(non_neighbourhood(G, v))
        H, ids = G.induced(M)
        assert set(sk.kernel) == {v} | {ids[i] for i in unique_one_kernel(H)}


# ---------------------------------------------------------------- helpers

def test_non_neighbourhood_examples():
    for v in range(3):
        assert non_neighbourhood(C3, v) == set()
    assert non_neighbourhood(build_digraph(3, []), 0) == {1, 2}
    assert non_neighbourhood(build_digraph(3, [(0, 1), (1, 2)]), 0) == {2}


# ------------------------------------------------------------------ examples

def test_three_cycle_example():
    # t = 0, s0 = 1, s1 = 2; every vertex ties in the final tournament,
    # so the smallest id wins
    G = build_digraph(3, [(0, 1), (1, 2), (2, 0)])
    sk = large_two_kernel(G, {1, 2}, {0}, [1, 1, 1])
    assert sk.kernel == (0,) and sk.coverage == 2 and sk.shape == "anchored"


def test_edgeless_s():
    G = build_digraph(3, [])
    f = [3, 1, 4]
    sk = large_two_kernel(G, {0, 1, 2}, set(), f)
    assert sk.kernel == (0, 1, 2) and sk.coverage == 8 and sk.shape == "subset-of-S"


def test_zero_weights_still_kernel():
    G = build_digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    sk = large_two_kernel(G, {1, 3}, {0, 2}, [0, 0, 0, 0])
    assert is_k_kernel(G, sk.kernel, 2) and sk.coverage == 0


def test_rejects_invalid_input():
    with pytest.raises(PreconditionError):
        large_two_kernel(C3, {0, 1, 2}, set(), [1, 1, 1])
    G = build_digraph(2, [(0, 1)])
    with pytest.raises(PreconditionError):
        large_two_kernel(G, {0}, {1}, [1])
    with pytest.raises(PreconditionError):
        large_two_kernel(G, {0}, {1}, [1, -1])


# -------------------------------------------------------------- exhaustive

@pytest.mark.parametrize("n", range(1, 5))
def test_all_weights_exhaustive(n):
    maps = list(product(range(3), repeat=n))
    for out, S in break_structures(n):
        G = build_digraph(n, [(u, v) for u in range(n) for v in bits(out[u])])
        T = G.all_mask & ~S
        for f, sk in zip(maps, large_two_kernels(G, S, T, maps)):
            _assert_special(G, S, T, f, sk)


@pytest.mark.parametrize("n", range(1, 5))
def test_labelled_breaks(n):
    rng = random.Random(n)
    for inst in enumerate_instances(EnumerationSpec(n, "break", dedup=False)):
        f = [rng.randrange(3) for _ in range(n)]
        _assert_special(inst.graph, inst.S, inst.T, f, large_two_kernel(inst.graph, inst.S, inst.T, f))


def test_random_breaks():
    rng = random.Random(7)
    for _ in range(300):
        spec = GeneratorSpec("break", n_s=rng.randint(0, 10), n_t=rng.randint(0, 10),
                             density=rng.random(), seed=rng.getrandbits(64))
        g = generate(spec)
        if g.graph.n == 0:
            continue
        f = [rng.randrange(5) for _ in range(g.graph.n)]
        _assert_special(g.graph, g.S, g.T, f, large_two_kernel(g.graph, g.S, g.T, f))


def test_weight_conservation():
    rng = random.Random(3)
    fired = 0
    for out, S in break_structures(5):
        G = build_digraph(5, [(u, v) for u in range(5) for v in bits(out[u])])
        plan = BreakPlan(G, S, G.all_mask & ~S)
        f = [rng.randrange(4) for _ in range(5)]
        assert sum(plan._final_weights(f)) == sum(f)
        fired += any(type(s).__name__ == "_Absorb" for s in plan.steps)
    assert fired > 0


# ------------------------------------------------------------ tournaments

@pytest.mark.parametrize("n", range(1, 7))
def test_king_argmax_covers_half(n):
    # validates the base-case choice: some closed out-neighbourhood carries half
    for inst in enumerate_instances(EnumerationSpec(n, "break")):
        if inst.S:
            continue
        G = inst.graph
        assert classify_partition(G, (), range(n)).is_break
        for f in product(range(3), repeat=n):
            best = max(weight_of(f, closed_out_mask(G, 1 << v)) for v in range(n))
            assert 2 * best >= sum(f)


@pytest.mark.parametrize("n", range(1, 6))
def test_king_is_argmax_of_final_tournament(n):
    for inst in enumerate_instances(EnumerationSpec(n, "break")):
        if inst.S:
            continue
        G = inst.graph
        plan = BreakPlan(G, 0, G.all_mask)
        for f in product(range(3), repeat=n):
            g = plan._final_weights(f)
            score = {v: g[v] + weight_of(g, plan.final_out[v]) for v in bits(plan.final_T)}
            assert score[plan.king(f)] == max(score.values())


# -------------------------------------------------------------- find_break

def test_find_break():
    assert find_break(C3) == (0, 0b111)
    C4 = build_digraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert find_break(C4) == (0b1100, 0b0011)
    assert find_break(build_digraph(2, [(0, 1), (1, 0)])) is None
    S, T = find_break(build_digraph(3, []))
    assert T.bit_count() == 1 and S.bit_count() == 2


# ------------------------------------------------------------ mixed inequality

def test_mixed_examples():
    v = check_mixed_conjecture(build_digraph(1, []), [0])
    assert not v.holds
    v = check_mixed_conjecture(C3, [1, 1, 1], mode="closed")
    assert v.holds and v.kernel == (0,)


def test_mixed_zero_weights_is_small_kernel_check():
    for n in range(2, 6):
        for inst in enumerate_instances(EnumerationSpec(n, "no-source-oriented")):
            G = inst.graph
            assert check_mixed_conjecture(G, [0] * n).holds == check_small_qk_conjecture(G).ok


def test_mixed_bad_mode():
    with pytest.raises(ValueError):
        check_mixed_conjecture(C3, [1, 1, 1], mode="half")
