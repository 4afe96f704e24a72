"""Signed weighted digraphs and their structural certificates.

Convention: ``A[i, j] != 0`` means agent ``j`` influences agent ``i``, so row
``i`` lists the influencers of ``i``. As a directed graph the edge runs
``j -> i``. Vertices are 0-based internally; files and reports use 1-based ids.
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from math import gcd

import networkx as nx
import numpy as np

from .errors import DecompositionError, GraphError


@dataclass(frozen=True)
class SignedDigraph:
    A: np.ndarray

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
            raise GraphError(f"adjacency must be a non-empty square matrix, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise GraphError("adjacency has non-finite entries")
        loops = np.flatnonzero(np.diag(A))
        if loops.size:
            raise GraphError(f"self-loop at vertex {loops[0] + 1}")
        A.flags.writeable = False
        object.__setattr__(self, "A", A)

    @classmethod
    def from_edges(cls, n, edges):
        """Build from ``(i, j, w)`` triples with 0-based ids; sets ``A[i, j] = w``."""
        A = np.zeros((n, n))
        for i, j, w in edges:
            A[i, j] = w
        return cls(A)

    @property
    def n(self):
        return self.A.shape[0]

    def edges(self):
        """Nonzero entries as ``(i, j, w)`` in row-major order."""
        return [(int(i), int(j), float(self.A[i, j])) for i, j in zip(*np.nonzero(self.A))]

    def negated(self):
        return SignedDigraph(-self.A)

    def digraph(self):
        """networkx view with edges ``j -> i`` for every nonzero ``A[i, j]``."""
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from((j, i) for i, j, _ in self.edges())
        return g


def unsigned_counterpart(G):
    return SignedDigraph(np.abs(G.A))


# ---------------------------------------------------------------- balance

class GraphClass(str, Enum):
    UNSIGNED = "Unsigned"
    BALANCED = "Balanced"
    ANTI_BALANCED = "AntiBalanced"
    CLUSTERABLE = "Clusterable"
    UNBALANCED = "Unbalanced"


@dataclass(frozen=True)
class BalanceCertificate:
    kind: GraphClass
    bipartition: tuple | None = None   # (V1, V2) as frozensets
    partition: tuple | None = None     # positive components when clusterable
    witness: tuple | None = None       # edges (i, j) of an inconsistent cycle

    @property
    def k(self):
        if self.kind is GraphClass.CLUSTERABLE:
            return len(self.partition)
        if self.kind in (GraphClass.BALANCED, GraphClass.ANTI_BALANCED):
            return 2
        return None

    @property
    def gauge_signs(self):
        """+1 on V1 and -1 on V2; only for unsigned or balanced certificates."""
        if self.kind not in (GraphClass.UNSIGNED, GraphClass.BALANCED):
            raise GraphError(f"{self.kind.value} graph has no sign gauge")
        V1, V2 = self.bipartition
        s = np.ones(len(V1) + len(V2))
        s[list(V2)] = -1.0
        return s

    def describe(self):
        label = self.kind.value
        if self.kind is GraphClass.CLUSTERABLE:
            label += f"({self.k})"
            parts = " ".join(_fmt_set(p) for p in self.partition)
            return f"{label}, parts {parts}"
        if self.bipartition is not None and self.kind is not GraphClass.UNSIGNED:
            V1, V2 = self.bipartition
            return f"{label}, V1={_fmt_set(V1)} V2={_fmt_set(V2)}"
        return label


def _fmt_set(s):
    return "{" + ",".join(str(v + 1) for v in sorted(s)) + "}"


def _sign_coloring(A):
    """Try to 2-colour vertices so positive edges join equal colours.

    Each undirected component is rooted at its smallest vertex, which gets
    colour +1. Returns ``(colour, witness)``; ``witness`` is None when the
    colouring is consistent, otherwise the edge list of the first
    inconsistent fundamental cycle.
    """
    n = A.shape[0]
    nbrs = [[] for _ in range(n)]
    constraints = []
    for i, j in zip(*np.nonzero(A)):
        i, j = int(i), int(j)
        s = 1 if A[i, j] > 0 else -1
        nbrs[i].append((j, s, (i, j)))
        nbrs[j].append((i, s, (i, j)))
        constraints.append((i, j, s))

    colour = np.zeros(n, dtype=int)
    parent = [None] * n          # (parent vertex, edge used)
    depth = np.zeros(n, dtype=int)
    for root in range(n):
        if colour[root]:
            continue
        colour[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, s, e in nbrs[u]:
                if not colour[v]:
                    colour[v] = colour[u] * s
                    parent[v] = (u, e)
                    depth[v] = depth[u] + 1
                    queue.append(v)

    for i, j, s in constraints:
        if colour[i] * colour[j] == s:
            continue
        up, down = [], []
        a, b = i, j
        while depth[a] > depth[b]:
            a, e = parent[a]
            up.append(e)
        while depth[b] > depth[a]:
            b, e = parent[b]
            down.append(e)
        while a != b:
            a, e = parent[a]
            up.append(e)
            b, e = parent[b]
            down.append(e)
        return colour, tuple(up + down[::-1] + [(i, j)])
    return colour, None


def _bipartition(colour):
    V1 = frozenset(int(v) for v in np.flatnonzero(colour > 0))
    V2 = frozenset(int(v) for v in np.flatnonzero(colour < 0))
    return V1, V2


def positive_components(A):
    """Components of the undirected graph formed by positive edges."""
    n = A.shape[0]
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((int(i), int(j)) for i, j in zip(*np.nonzero(A > 0)))
    comps = [frozenset(c) for c in nx.connected_components(g)]
    return tuple(sorted(comps, key=min))


def is_balanced(G):
    """Sign-consistent bipartition exists (V2 may be empty)."""
    return _sign_coloring(G.A)[1] is None


def is_anti_balanced(G):
    return is_balanced(G.negated())


def classify(G):
    """Return the :class:`BalanceCertificate` of ``G``.

    Classes are tested in the order Unsigned, Balanced, AntiBalanced,
    Clusterable (k >= 3), Unbalanced; the first that applies wins.
    """
    A = G.A
    colour, witness = _sign_coloring(A)
    if not np.any(A < 0):
        return BalanceCertificate(GraphClass.UNSIGNED, bipartition=_bipartition(colour))
    if witness is None:
        return BalanceCertificate(GraphClass.BALANCED, bipartition=_bipartition(colour))

    neg_colour, neg_witness = _sign_coloring(-A)
    if neg_witness is None:
        return BalanceCertificate(GraphClass.ANTI_BALANCED, bipartition=_bipartition(neg_colour))

    comps = positive_components(A)
    label = np.empty(G.n, dtype=int)
    for c, comp in enumerate(comps):
        label[list(comp)] = c
    ii, jj = np.nonzero(A < 0)
    if not np.any(label[ii] == label[jj]):
        return BalanceCertificate(GraphClass.CLUSTERABLE, partition=comps)
    return BalanceCertificate(GraphClass.UNBALANCED, witness=witness)


# ----------------------------------------------------------- connectivity

@dataclass(frozen=True)
class ConnectivityReport:
    irreducible: bool
    period: int            # gcd of directed cycle lengths, 0 if acyclic
    scc_list: tuple        # frozensets, sources of the j -> i graph first

    @property
    def aperiodic(self):
        return self.period == 1


def _scc_period(g, nodes):
    root = min(nodes)
    level = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in g.successors(u):
            if v in nodes and v not in level:
                level[v] = level[u] + 1
                queue.append(v)
    p = 0
    for u in nodes:
        for v in g.successors(u):
            if v in nodes:
                p = gcd(p, level[u] + 1 - level[v])
    return abs(p)


def strongly_connected_components(G):
    """SCCs in topological order of the condensation (influence sources first)."""
    g = G.digraph()
    cond = nx.condensation(g)
    order = nx.lexicographical_topological_sort(cond, key=lambda c: min(cond.nodes[c]["members"]))
    return g, tuple(frozenset(cond.nodes[c]["members"]) for c in order)


def connectivity(G):
    g, sccs = strongly_connected_components(unsigned_counterpart(G))
    period = 0
    for comp in sccs:
        period = gcd(period, _scc_period(g, comp))
    return ConnectivityReport(irreducible=len(sccs) == 1, period=period, scc_list=sccs)


def is_primitive(G):
    """Wielandt test: |A|^((n-1)^2 + 1) is entrywise positive."""
    B = (G.A != 0).astype(np.int64)
    n = G.n
    power = (n - 1) ** 2 + 1
    result = np.eye(n, dtype=np.int64)
    base = B
    while power:
        if power & 1:
            result = np.minimum(result @ base, 1)
        base = np.minimum(base @ base, 1)
        power >>= 1
    return bool(np.all(result > 0))


# ----------------------------------------------------------------- blocks

@dataclass(frozen=True)
class BlockDecomposition:
    ordering: np.ndarray   # ordering[k] = original vertex placed at position k
    r: int
    A11: np.ndarray
    A21: np.ndarray
    A22: np.ndarray
    leader: BalanceCertificate

    @property
    def n(self):
        return len(self.ordering)

    def permuted(self):
        """Reassemble ``[A11 0; A21 A22]`` in the decomposition's ordering."""
        r, n = self.r, self.n
        M = np.zeros((n, n))
        M[:r, :r] = self.A11
        M[r:, :r] = self.A21
        M[r:, r:] = self.A22
        return M

    def reassemble(self):
        """Adjacency matrix in the original vertex order."""
        M = self.permuted()
        out = np.empty_like(M)
        out[np.ix_(self.ordering, self.ordering)] = M
        return out


def block_decompose(G):
    """Put the unique closed SCC (the leader block) first.

    A closed SCC receives no influence from outside itself, so the top-right
    block of the reordered adjacency is zero.
    """
    g, sccs = strongly_connected_components(unsigned_counterpart(G))
    closed = [c for c in sccs if not any(u not in c for v in c for u in g.predecessors(v))]
    if len(closed) != 1:
        raise DecompositionError(
            f"expected exactly one closed strongly connected component, found {len(closed)}: "
            + " ".join(_fmt_set(c) for c in closed))
    leader = sorted(closed[0])
    followers = sorted(set(range(G.n)) - set(leader))
    order = np.array(leader + followers, dtype=int)
    r = len(leader)
    M = G.A[np.ix_(order, order)]
    if np.any(M[:r, r:] != 0):
        raise DecompositionError("leader block receives influence from followers")
    cert = classify(SignedDigraph(M[:r, :r]))
    if cert.kind not in (GraphClass.UNSIGNED, GraphClass.BALANCED):
        raise DecompositionError(
            f"leader block {_fmt_set(leader)} is {cert.kind.value}, not structurally balanced")
    return BlockDecomposition(ordering=order, r=r, A11=M[:r, :r].copy(), A21=M[r:, :r].copy(),
                              A22=M[r:, r:].copy(), leader=cert)
