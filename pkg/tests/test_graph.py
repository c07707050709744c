from __future__ import annotations

from collections import deque
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from dikernels.graph import (
    Digraph,
    DuplicateEdgeError,
    LoopError,
    PreconditionError,
    VerificationFailure,
    VertexRangeError,
    build_digraph,
    check_certificate,
    classify_partition,
    is_k_kernel,
    is_stable,
    k_covers,
    reduce_digons,
    shortest_paths_from,
    spanning_arborescence,
    topological_order,
    verify_kernel,
)
from dikernels.oracle.bruteforce import k_kernels
from dikernels.oracle.enumeration import EnumerationSpec, enumerate_instances

PATH3 = [(0, 1), (1, 2)]
CYCLE3 = [(0, 1), (1, 2), (2, 0)]


def digraphs(max_n: int = 7):
    """Hypothesis strategy: arbitrary loop-free digraphs (digons allowed)."""

    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
        return build_digraph(n, chosen)

    return build()


def bfs_dist(n, edges, sources):
    """Independent distances from a vertex set, from a plain edge list."""
    adj = {v: [] for v in range(n)}
    for u, v in edges:
        adj[u].append(v)
    dist = {s: 0 for s in sources}
    q = deque(sources)
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


# ------------------------------------------------------------ construction

def test_build_single_vertex():
    G = build_digraph(1, [])
    assert G.n == 1 and G.edges() == []


def test_build_path():
    G = build_digraph(3, PATH3)
    assert G.edges() == PATH3
    assert G.out_neighbours(1) == [2] and G.in_neighbours(1) == [0]


def test_build_errors_are_distinct():
    with pytest.raises(DuplicateEdgeError):
        build_digraph(2, [(0, 1), (0, 1)])
    with pytest.raises(LoopError):
        build_digraph(2, [(1, 1)])
    with pytest.raises(VertexRangeError):
        build_digraph(2, [(0, 2)])


@given(digraphs())
def test_transpose_consistency(G):
    for u in range(G.n):
        for v in range(G.n):
            assert (v in G.out_neighbours(u)) == (u in G.in_neighbours(v))


# ----------------------------------------------------------------- covering

def test_k_covers_examples():
    assert k_covers(build_digraph(1, []), {0}, {0}, 0)
    P = build_digraph(3, PATH3)
    assert k_covers(P, {0}, {2}, 2)
    assert not k_covers(P, {0}, {2}, 1)


@given(digraphs(6), st.data())
def test_k_covers_monotone(G, data):
    X = data.draw(st.sets(st.integers(0, G.n - 1)))
    Y = data.draw(st.sets(st.integers(0, G.n - 1)))
    extra = data.draw(st.sets(st.integers(0, G.n - 1)))
    k = data.draw(st.integers(0, 4))
    if k_covers(G, X, Y, k):
        assert k_covers(G, X | extra, Y, k + data.draw(st.integers(0, 3)))


@given(digraphs(7), st.data())
def test_shortest_witness_paths(G, data):
    X = data.draw(st.sets(st.integers(0, G.n - 1), min_size=1))
    paths = shortest_paths_from(G, sum(1 << x for x in X), G.n)
    dist = bfs_dist(G.n, G.edges(), sorted(X))
    assert set(paths) == set(dist)
    for v, p in paths.items():
        assert len(p) - 1 == dist[v] and p[0] in X and p[-1] == v


# -------------------------------------------------------------- verification

def test_verify_kernel_examples():
    P = build_digraph(3, PATH3)
    cert = verify_kernel(P, {0, 2}, 1)
    assert cert and cert.kernel == (0, 2)
    bad = verify_kernel(P, {0, 1}, 2)
    assert isinstance(bad, VerificationFailure) and bad.edge == (0, 1)
    C = build_digraph(3, CYCLE3)
    cert = verify_kernel(C, {0}, 2)
    assert cert.witness == {0: [0], 1: [0, 1], 2: [0, 1, 2]}


def test_verify_reports_uncovered_vertex():
    P = build_digraph(3, PATH3)
    bad = verify_kernel(P, {1}, 2)
    assert bad.vertex == 0


def _oracle_is_kernel(G: Digraph, X, k) -> bool:
    edges = G.edges()
    if any(u in X and v in X for u, v in edges):
        return False
    dist = bfs_dist(G.n, edges, sorted(X))
    return all(v in dist and dist[v] <= k for v in range(G.n))


def _check_all_subsets(G: Digraph) -> None:
    for size in range(G.n + 1):
        for X in combinations(range(G.n), size):
            for k in (1, 2, 3):
                got = verify_kernel(G, X, k)
                assert bool(got) == _oracle_is_kernel(G, set(X), k)
                if got:
                    assert check_certificate(G, got)


@pytest.mark.parametrize("n", range(1, 6))
def test_verify_matches_oracle_on_all_classes(n):
    # every digraph up to isomorphism; both predicates are label-invariant
    for inst in enumerate_instances(EnumerationSpec(n, "all-oriented")):
        _check_all_subsets(inst.graph)


@given(digraphs(6))
def test_verify_matches_oracle_random(G):
    _check_all_subsets(G)


def test_check_certificate_rejects_tampering():
    C = build_digraph(3, CYCLE3)
    cert = verify_kernel(C, {0}, 2)
    cert.witness[2] = [0, 2]  # non-edge
    assert not check_certificate(C, cert)


# ---------------------------------------------------------------- partitions

def test_classify_partition_examples():
    assert classify_partition(build_digraph(2, [(0, 1)]), {1}, {0}).kind == "valid-split"
    G = build_digraph(3, [(0, 1), (1, 2), (0, 2)])
    r = classify_partition(G, {0, 1}, {2})
    assert r.kind == "valid-break" and r.is_break and not r.is_split
    r = classify_partition(build_digraph(2, []), set(), {0, 1})
    assert r.kind == "invalid" and "nonadjacent" in r.reason


def test_classify_partition_invalid_cases():
    C = build_digraph(3, CYCLE3)
    assert classify_partition(C, {0, 1, 2}, set()).reason == "S contains a directed cycle"
    D = build_digraph(2, [(0, 1), (1, 0)])
    assert "digon" in classify_partition(D, {0}, {1}).reason
    assert "neither" in classify_partition(C, {0}, {1}).reason


# ------------------------------------------------------------- structure

def test_spanning_arborescence_examples():
    arb = spanning_arborescence(build_digraph(3, CYCLE3))
    assert arb.root == 0 and arb.parent == {1: 0, 2: 1}
    assert spanning_arborescence(build_digraph(2, [])) is None
    assert spanning_arborescence(build_digraph(3, PATH3)).root == 0


def test_arborescence_smallest_root_and_parent():
    G = build_digraph(4, [(1, 0), (0, 2), (0, 3), (2, 3), (3, 1)])
    arb = spanning_arborescence(G)
    assert arb.root == 0 and arb.parent == {2: 0, 3: 0, 1: 3}


def test_topological_order_examples():
    assert topological_order(build_digraph(3, PATH3)) == [0, 1, 2]
    assert topological_order(build_digraph(2, [(0, 1), (1, 0)])) is None
    assert topological_order(build_digraph(2, [])) == [0, 1]


@given(digraphs(7))
def test_topological_order_edges_forward(G):
    order = topological_order(G)
    if order is not None:
        pos = {v: i for i, v in enumerate(order)}
        assert all(pos[u] < pos[v] for u, v in G.edges())


# -------------------------------------------------------------------- digons

def test_reduce_digons_keeps_vertices():
    G = build_digraph(3, [(0, 1), (1, 0), (2, 0), (2, 1), (0, 2)])
    red = reduce_digons(G)
    assert red.kept == (0, 1, 2) and red.forced == ()
    H = red.graph
    assert H.is_oriented() and not H.sources()
    # brute force: which single deletions of a digon edge leave no source
    for step in red.log:
        assert step.action == "delete-edge"
    assert [s.edge for s in red.log] == [(0, 1), (2, 0)]


def test_reduce_digons_identity_on_oriented():
    G = build_digraph(3, CYCLE3)
    red = reduce_digons(G)
    assert red.graph == G and red.log == ()


def test_reduce_digons_pure_two_cycle():
    red = reduce_digons(build_digraph(2, [(0, 1), (1, 0)]))
    assert red.graph.n == 0 and red.forced == (0,)
    assert red.lift([]) == [0]


def test_reduce_digons_rejects_source():
    with pytest.raises(PreconditionError):
        reduce_digons(build_digraph(2, [(0, 1)]))


@pytest.mark.parametrize("n", range(1, 7))
def test_reduce_digons_lifts_every_kernel(n):
    for inst in enumerate_instances(EnumerationSpec(n, "all-oriented")):
        G = inst.graph
        if G.sources():
            continue
        red = reduce_digons(G)
        H = red.graph
        assert H.is_oriented() and not H.sources()
        for K in k_kernels(H, 2):
            lifted = red.lift(i for i in range(H.n) if K >> i & 1)
            assert is_k_kernel(G, lifted, 2), (G.edges(), lifted)


def test_is_stable():
    P = build_digraph(3, PATH3)
    assert is_stable(P, {0, 2}) and not is_stable(P, {1, 2})
