"""2-kernels of size at most |G|/2 in split digraphs.

A split digraph is an oriented graph whose vertices divide into a stable set
``S`` and a tournament ``T``.  Given such a split with ``S`` nonempty and no
source in ``S``, :func:`small_quasi_kernel` builds a 2-kernel of size at most
``|G|/2`` by the constructive argument below.

Notation used throughout (all sets are bitmasks over vertex ids):

* a *problem* for ``v`` in ``T`` is an in-neighbour ``s`` in ``S`` that ``v``
  does not 2-cover and that no ``S``-non-neighbour of ``v`` 2-covers;
* ``B`` is the set of ``T``-vertices with a problem, ``zb[b]`` the chosen
  problem of ``b`` and ``Z`` the set of chosen problems;
* ``Q`` is the set of ``S``-vertices outside ``Z`` whose in-neighbours all lie
  in ``B``; ``bq[q]`` is a chosen in-neighbour in ``B``;
* every other ``S``-vertex ``s`` gets an in-neighbour ``ts[s]`` in ``T - B``;
* ``phi`` groups ``V - (B | Z)`` into classes indexed by the vertices of an
  auxiliary digraph ``H`` on ``(T - B) | Z``, and each vertex of ``H`` gets a
  (doubled) score from the class sizes of its ``H``-in-neighbours and
  non-neighbours.

A vertex of minimum score anchors the construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import (
    Digraph,
    InvariantViolation,
    KernelCertificate,
    PreconditionError,
    VerificationFailure,
    bit_lister,
    bits,
    classify_partition,
    lowest,
    to_mask,
    verify_kernel,
)


@dataclass(slots=True)
class SplitAnalysis:
    """The bookkeeping behind the construction; sets are bitmasks.

    Not frozen: it is built once per instance in the exhaustive sweeps, where
    frozen-dataclass construction is a measurable share of the cost.
    """

    S: int
    T: int
    B: int
    zb: dict[int, int]
    Z: int
    bq: dict[int, int]
    Q: int
    ts: dict[int, int]
    phi: dict[int, int]
    h_vertices: int
    h_out: dict[int, int]
    h_in: dict[int, int]
    score2: dict[int, int]

    @property
    def H(self) -> Digraph:
        """The auxiliary digraph, on the full id range (vertices outside H isolated)."""
        n = max(self.S | self.T, 1).bit_length()
        return Digraph.from_out_masks([self.h_out.get(v, 0) for v in range(n)])

    def phi_size(self, u: int) -> int:
        return self.phi[u].bit_count()

    def phi_in(self, u: int) -> int:
        return sum(self.phi_size(w) for w in bits(self.h_in[u]))

    def phi_out(self, u: int) -> int:
        return sum(self.phi_size(w) for w in bits(self.h_out[u]))

    def phi_zero(self, u: int) -> int:
        if self.Z >> u & 1:
            return self.Q.bit_count()
        return self.phi_size(u)


def _problems(G: Digraph, S: int, v: int, ball2: tuple[int, ...]) -> int:
    cand = G.inn[v] & S & ~ball2[v]
    if not cand:
        return 0
    covered = 0
    for s in bits(S & ~(G.out[v] | G.inn[v])):
        covered |= ball2[s]
    return cand & ~covered


def problems_of(G: Digraph, S, T, v: int) -> frozenset[int]:
    """The ``S``-vertices that are problems for ``v``."""
    smask, tmask = _as_mask(S), _as_mask(T)
    if not tmask >> v & 1:
        raise PreconditionError(f"vertex {v} is not in T")
    return frozenset(bits(_problems(G, smask, v, G.ball2())))


def _as_mask(X) -> int:
    return X if isinstance(X, int) else to_mask(X)


def _check_split(G: Digraph, S: int, T: int) -> None:
    check = classify_partition(G, bits(S), bits(T))
    if not check.is_split:
        raise PreconditionError(f"not a valid split: {check.reason}")
    if not S:
        raise PreconditionError("S is empty")
    for s in bits(S):
        if not G.inn[s]:
            raise PreconditionError(f"vertex {s} of S is a source")


def _analyse(G: Digraph, S: int, T: int) -> SplitAnalysis:
    listed = bit_lister(G.n)
    ball2 = G.ball2()
    inn, out = G.inn, G.out
    zb: dict[int, int] = {}
    B = Z = 0
    for t in listed(T):
        # inlined _problems: this loop is the hot spot of the exhaustive runs
        cand = inn[t] & S & ~ball2[t]
        if not cand:
            continue
        for s in listed(S & ~(out[t] | inn[t])):
            cand &= ~ball2[s]
        if cand:
            z = (cand & -cand).bit_length() - 1
            zb[t] = z
            B |= 1 << t
            Z |= 1 << z
    TB = T & ~B
    bq: dict[int, int] = {}
    ts: dict[int, int] = {}
    Q = 0
    phi: dict[int, int] = dict.fromkeys(listed(Z), 0) if Z else {}
    for t in listed(TB):
        phi[t] = 1 << t
    for s in listed(S & ~Z):
        t = inn[s] & TB
        if t:
            t = (t & -t).bit_length() - 1
            ts[s] = t
            phi[t] |= 1 << s
        else:
            Q |= 1 << s
            b = inn[s] & B
            b = (b & -b).bit_length() - 1
            bq[s] = b
            phi[zb[b]] |= 1 << s

    hv = TB | Z
    h_out: dict[int, int] = {}
    h_in: dict[int, int] = {}
    for t in listed(TB):
        h_out[t] = (out[t] & TB) | (Z & ~inn[t])
        h_in[t] = inn[t] & hv
    for z in listed(Z):
        h_out[z] = out[z] & TB
        h_in[z] = TB & ~out[z]
    size = {u: m.bit_count() for u, m in phi.items()}
    qsize = Q.bit_count()
    score2: dict[int, int] = {}
    for u in listed(hv):
        phi_minus = 0
        for w in listed(h_in[u]):
            phi_minus += size[w]
        score2[u] = 2 * phi_minus + (qsize if Z >> u & 1 else size[u])
    return SplitAnalysis(S, T, B, zb, Z, bq, Q, ts, phi, hv, h_out, h_in, score2)


def split_analysis(G: Digraph, S, T) -> SplitAnalysis:
    """Compute ``B, Z, Q, phi, H`` and the doubled scores for a valid split."""
    smask, tmask = _as_mask(S), _as_mask(T)
    _check_split(G, smask, tmask)
    return _analyse(G, smask, tmask)


# ------------------------------------------------------------ construction

def _from_problem_vertex(G: Digraph, an: SplitAnalysis, v: int) -> int:
    """Anchor ``v`` in ``Z``: kernel inside ``S``."""
    S, T, Z, Q = an.S, an.T, an.Z, an.Q
    inn = G.inn
    J = S & ~Z & G.ball2()[v]
    A = S & ~(J | Q | Z)
    K = A | Z
    cov1 = K | G.out_union(K)
    not_pure_up = 0
    for t in bits(T):
        if inn[t] & S:
            not_pure_up |= 1 << t
    for t in bits(not_pure_up & ~cov1):
        if cov1 >> t & 1:
            continue
        x = lowest(inn[t] & S)
        K |= 1 << x
        cov1 |= G.out[x]
    return K


def _from_tournament_vertex(G: Digraph, an: SplitAnalysis, v: int) -> int:
    """Anchor ``v`` in ``T - B``: kernel is ``v`` plus ``S``-vertices nonadjacent to it."""
    listed = bit_lister(G.n)
    S, Z, Q, B = an.S, an.Z, an.Q, an.B
    out, inn = G.out, G.inn
    ball2 = G.ball2()
    TB = an.T & ~B
    nbrs = out[v] | inn[v]
    D = inn[v] & S
    F = TB & inn[v]
    Q1 = 0
    for z in listed(Z & ~inn[v]):
        Q1 |= an.phi[z]
    Q2 = Q & ~Q1
    J = S & ~Q & (out[v] | G.out_union(out[v] & TB))
    free = S & ~nbrs

    X = cov1 = 0
    for u in listed(F & ~ball2[v]):
        if cov1 >> u & 1:
            continue
        cands = inn[u] & free
        if not cands:
            raise InvariantViolation(f"no S-non-neighbour of {v} is adjacent to {u}")
        x = lowest(cands)
        X |= 1 << x
        cov1 |= out[x]

    Y = cov2 = 0
    for u in listed(D & ~(J | Q1) & ~ball2[v]):
        if cov2 >> u & 1:
            continue
        y = next((s for s in listed(free) if ball2[s] >> u & 1), None)
        if y is None:
            raise InvariantViolation(f"no S-non-neighbour of {v} 2-covers {u}")
        Y |= 1 << y
        cov2 |= ball2[y]

    # Z - D would also contain Z-vertices that v points to; those are covered by v
    return (1 << v) | (Z & ~nbrs) | (S & ~(Q | J | Z | D)) | X | Y | (Q2 & ~D)


def _endgame(G: Digraph, an: SplitAnalysis) -> int:
    """All minimum-score vertices have singleton classes: here ``S == Z`` and ``Q`` is empty."""
    S, T, Z = an.S, an.T, an.Z
    if S != Z or an.Q:
        raise InvariantViolation("tight case reached with S != Z or Q nonempty")
    out, inn = G.out, G.inn
    if not (T & ~(Z | G.out_union(Z) | G.out_union(G.out_union(Z) & T))):
        return Z
    pure_up = 0
    for t in bits(T):
        if not (inn[t] & S):
            pure_up |= 1 << t
    if not pure_up:
        raise InvariantViolation("Z does not 2-cover T but there is no pure-up vertex")
    p = max(bits(pure_up), key=lambda t: ((out[t] & pure_up).bit_count(), -t))
    K = (Z & ~out[p]) | (1 << p)
    if 2 * K.bit_count() <= G.n:
        return K
    return 1 << p


@dataclass(slots=True)
class SplitTrace:
    """Which branch produced the kernel (for tests and statistics)."""

    anchor: int
    case: str  # "problem-anchor" | "tournament-anchor" | "tight-endgame"
    min_score2: int


def split_kernel_mask(G: Digraph, S: int, T: int) -> tuple[int, SplitTrace, SplitAnalysis]:
    """Unverified construction on a split already known to be valid."""
    an = _analyse(G, S, T)
    if not an.score2:
        raise InvariantViolation("auxiliary digraph is empty")
    v = m2 = -1
    for u, sc in an.score2.items():  # keys in increasing id order
        if m2 < 0 or sc < m2:
            v, m2 = u, sc
    limit = G.n - 2 * an.Z.bit_count()
    if m2 > limit:
        raise InvariantViolation(f"minimum doubled score {m2} exceeds {limit}")
    if m2 == limit:
        tied = [u for u in bits(an.h_vertices) if an.score2[u] == m2]
        pick = next((u for u in tied if an.Z >> u & 1 and an.phi[u]), None)
        if pick is None:
            pick = next((u for u in tied if not an.Z >> u & 1 and an.phi[u].bit_count() >= 2), None)
        if pick is None:
            K = _endgame(G, an)
            return K, SplitTrace(lowest(K), "tight-endgame", m2), an
        v = pick
    if an.Z >> v & 1:
        return _from_problem_vertex(G, an, v), SplitTrace(v, "problem-anchor", m2), an
    return _from_tournament_vertex(G, an, v), SplitTrace(v, "tournament-anchor", m2), an


def small_quasi_kernel(G: Digraph, S, T, *, check: bool = True) -> KernelCertificate:
    """2-kernel of size at most ``|G|/2`` for a split with ``S`` nonempty and no source in ``S``."""
    smask, tmask = _as_mask(S), _as_mask(T)
    if check:
        _check_split(G, smask, tmask)
    K, _, _ = split_kernel_mask(G, smask, tmask)
    return _certify(G, K, "split-qk")


def small_quasi_kernel_general(G: Digraph, S, T) -> KernelCertificate:
    """As :func:`small_quasi_kernel` but also allowing ``S`` empty; G must have no source."""
    smask, tmask = _as_mask(S), _as_mask(T)
    sources = G.sources()
    if sources:
        raise PreconditionError(f"digraph has a source: {sources[0]}")
    if smask:
        return small_quasi_kernel(G, smask, tmask)
    check = classify_partition(G, (), bits(tmask))
    if not check.is_split:
        raise PreconditionError(f"not a valid split: {check.reason}")
    king = max(range(G.n), key=lambda v: (G.out[v].bit_count(), -v))
    return _certify(G, 1 << king, "split-qk")


def _certify(G: Digraph, K: int, name: str) -> KernelCertificate:
    cert = verify_kernel(G, bits(K), 2, claimed_bound=Fraction(G.n, 2), algorithm=name)
    if isinstance(cert, VerificationFailure):
        raise InvariantViolation(f"{name}: {cert.reason}")
    return cert
