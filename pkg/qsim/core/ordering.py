"""Elimination orders, fill-in (chordal) graphs and restricted orders."""

import itertools
import logging
from collections.abc import Iterable

import networkx as nx
from pydantic import BaseModel, ConfigDict, PrivateAttr, field_validator

from qsim.config import Heuristic

log = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 12


class OrderingError(ValueError):
    """Invalid order, non-chordal input or oversized exhaustive search."""


class EliminationOrder(BaseModel):
    """
    Bijection vertex -> rank in [1, |V|].

    `vertices` lists the vertices in elimination order, so the vertex at
    position i (0-based) has rank i + 1.
    """
    model_config = ConfigDict(frozen=True)

    vertices: tuple[int, ...]
    _rank: dict[int, int] = PrivateAttr(default_factory=dict)

    @field_validator("vertices")
    @classmethod
    def check_distinct(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if len(set(v)) != len(v):
            raise ValueError("elimination order repeats a vertex")
        return v

    def model_post_init(self, __context) -> None:
        self._rank = {v: i + 1 for i, v in enumerate(self.vertices)}

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: int) -> bool:
        return v in self._rank

    def rank(self, v: int) -> int:
        try:
            return self._rank[v]
        except KeyError:
            raise OrderingError(f"vertex {v} has no rank") from None

    def vertex_at(self, rank: int) -> int:
        if not 1 <= rank <= len(self.vertices):
            raise OrderingError(f"rank {rank} outside [1, {len(self.vertices)}]")
        return self.vertices[rank - 1]

    def to_text(self) -> str:
        return " ".join(str(v) for v in self.vertices)

    @classmethod
    def from_text(cls, text: str) -> "EliminationOrder":
        try:
            return cls(vertices=tuple(int(tok) for tok in text.split()))
        except ValueError as e:
            raise OrderingError(f"bad order text: {e}") from e

    @classmethod
    def from_ranks(cls, ranks: dict[int, int]) -> "EliminationOrder":
        """Build from an explicit {vertex: rank} mapping with ranks 1..|V|."""
        if sorted(ranks.values()) != list(range(1, len(ranks) + 1)):
            raise OrderingError("ranks must be exactly 1..|V|")
        return cls(vertices=tuple(sorted(ranks, key=ranks.__getitem__)))


def _adjacency(graph: nx.Graph) -> dict[int, set[int]]:
    return {v: {w for w in graph.neighbors(v) if w != v} for v in graph.nodes}


def _check_order(graph: nx.Graph, order: EliminationOrder) -> None:
    if len(order) != graph.number_of_nodes() or set(order.vertices) != set(graph.nodes):
        raise OrderingError(
            f"order over {len(order)} vertices does not match graph with "
            f"{graph.number_of_nodes()} vertices"
        )


def _fill_process(graph: nx.Graph, order: EliminationOrder) -> tuple[nx.Graph, list[int]]:
    """Connect the higher-ranked neighbours of every vertex in rank order."""
    _check_order(graph, order)
    fill_in = nx.Graph()
    fill_in.add_nodes_from(graph.nodes)
    fill_in.add_edges_from((u, v) for u, v in graph.edges if u != v)

    clique_sizes = []
    for i, v in enumerate(order.vertices, start=1):
        higher = sorted(w for w in fill_in.neighbors(v) if order.rank(w) > i)
        fill_in.add_edges_from(itertools.combinations(higher, 2))
        clique_sizes.append(len(higher) + 1)
    return fill_in, clique_sizes


def build_chordal_graph(graph: nx.Graph, order: EliminationOrder) -> nx.Graph:
    """Fill-in graph of `order`: a chordal supergraph of `graph`."""
    fill_in, _ = _fill_process(graph, order)
    return fill_in


def elimination_clique_sizes(graph: nx.Graph, order: EliminationOrder) -> list[int]:
    """Size of the clique formed when each vertex is eliminated, in rank order."""
    _, sizes = _fill_process(graph, order)
    return sizes


def treewidth_of_order(graph: nx.Graph, order: EliminationOrder) -> int:
    """Largest elimination clique minus one."""
    return max(elimination_clique_sizes(graph, order), default=1) - 1


def fill_edges(graph: nx.Graph, order: EliminationOrder) -> list[tuple[int, int]]:
    fill_in = build_chordal_graph(graph, order)
    return sorted(
        tuple(sorted((u, v))) for u, v in fill_in.edges if not graph.has_edge(u, v)
    )


def _mcs(adj: dict[int, set[int]], clique: Iterable[int]) -> EliminationOrder:
    """Maximum cardinality search, labelling from rank |V| downwards."""
    n = len(adj)
    cardinality = dict.fromkeys(adj, 0)
    labeled: set[int] = set()
    sequence = [0] * n
    pending = sorted(clique)

    for i in range(n, 0, -1):
        if pending:
            v = pending.pop(0)
        else:
            v = min((u for u in adj if u not in labeled), key=lambda u: (-cardinality[u], u))
        labeled.add(v)
        sequence[i - 1] = v
        for w in adj[v]:
            if w not in labeled:
                cardinality[w] += 1

    return EliminationOrder(vertices=tuple(sequence))


def mcs_order(graph: nx.Graph) -> EliminationOrder:
    """Plain MCS; a perfect elimination order whenever the graph is chordal."""
    return _mcs(_adjacency(graph), ())


def is_chordal(graph: nx.Graph) -> bool:
    """Zero-fill test: the MCS order of a chordal graph adds no edges."""
    if graph.number_of_nodes() == 0:
        return True
    return not fill_edges(graph, mcs_order(graph))


def restricted_mcs(fill_in: nx.Graph, clique: Iterable[int]) -> EliminationOrder:
    """
    MCS that labels the vertices of `clique` first, so they get the highest ranks.

    On a chordal graph the result is a perfect elimination order: eliminating
    along it adds no edges, hence it has the width of the graph's largest clique.
    """
    clique = set(clique)
    unknown = clique - set(fill_in.nodes)
    if unknown:
        raise OrderingError(f"vertices {sorted(unknown)} are not in the graph")
    for u, v in itertools.combinations(sorted(clique), 2):
        if not fill_in.has_edge(u, v):
            raise OrderingError(f"restricted set is not a clique: missing edge ({u}, {v})")

    order = _mcs(_adjacency(fill_in), clique)
    if fill_edges(fill_in, order):
        raise OrderingError("graph is not chordal")
    return order


def clique_ify(graph: nx.Graph, clique: Iterable[int]) -> nx.Graph:
    """Copy of `graph` with all pairs of `clique` connected."""
    result = nx.Graph(graph)
    result.add_edges_from(itertools.combinations(sorted(set(clique)), 2))
    return result


def minimal_triangulation(graph: nx.Graph, fill_in: nx.Graph) -> nx.Graph:
    """
    Remove fill edges from a triangulation until it is minimal.

    A fill edge uv can go iff the common neighbourhood of u and v is a clique
    (then uv lies in exactly one maximal clique and the graph stays chordal).
    A triangulation where no single fill edge can go is minimal.
    """
    result = nx.Graph(fill_in)
    fill = sorted(
        tuple(sorted((u, v))) for u, v in fill_in.edges if not graph.has_edge(u, v)
    )
    changed = True
    while changed and fill:
        changed = False
        for u, v in list(fill):
            common = set(result[u]) & set(result[v])
            if all(result.has_edge(a, b) for a, b in itertools.combinations(common, 2)):
                result.remove_edge(u, v)
                fill.remove((u, v))
                changed = True
    return result


def _min_fill_score(adj: dict[int, set[int]], v: int) -> int:
    return sum(1 for a, b in itertools.combinations(adj[v], 2) if b not in adj[a])


def greedy_order(graph: nx.Graph, heuristic: Heuristic = Heuristic.MIN_FILL) -> EliminationOrder:
    """
    Greedy elimination by min-fill or min-degree, ties to the smallest vertex id.

    If the heuristic's fill-in is not a minimal triangulation, an MCS order of
    the minimalised fill-in is returned instead; it is never wider.
    """
    if graph.number_of_nodes() == 0:
        raise OrderingError("cannot order an empty graph")

    adj = _adjacency(graph)
    if heuristic == Heuristic.MIN_FILL:
        score = _min_fill_score
    else:
        def score(a: dict[int, set[int]], v: int) -> int:
            return len(a[v])

    scores = {v: score(adj, v) for v in adj}
    sequence = []
    while adj:
        best = min(adj, key=lambda v: (scores[v], v))
        neighbors = adj.pop(best)
        del scores[best]
        for u in neighbors:
            adj[u].discard(best)
        for a, b in itertools.combinations(neighbors, 2):
            adj[a].add(b)
            adj[b].add(a)
        sequence.append(best)
        # only the neighbourhood and its neighbours can change score
        affected = set(neighbors)
        for u in neighbors:
            affected |= adj[u]
        for u in affected:
            scores[u] = score(adj, u)

    order = EliminationOrder(vertices=tuple(sequence))
    fill_in = build_chordal_graph(graph, order)
    minimal = minimal_triangulation(graph, fill_in)
    if minimal.number_of_edges() == fill_in.number_of_edges():
        return order

    log.debug(
        f"{heuristic.value}: dropped {fill_in.number_of_edges() - minimal.number_of_edges()} "
        "redundant fill edges"
    )
    return mcs_order(minimal)


def exhaustive_order(graph: nx.Graph) -> EliminationOrder:
    """
    Minimum-width order by search over eliminated vertex sets.

    The elimination graph after removing a set S does not depend on the order
    inside S, so results are memoised per remaining set. A branch is cut as
    soon as the vertex's degree reaches the best width found at that level.
    """
    n = graph.number_of_nodes()
    if n > EXHAUSTIVE_LIMIT:
        raise OrderingError(f"exhaustive search limited to {EXHAUSTIVE_LIMIT} vertices, got {n}")

    adj = _adjacency(graph)
    everything = frozenset(adj)
    memo: dict[frozenset[int], tuple[int, tuple[int, ...]]] = {}

    def degree(v: int, remaining: frozenset[int]) -> int:
        # neighbours of v once everything outside `remaining` is eliminated
        seen = {v}
        stack = [v]
        reached = 0
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in seen:
                    continue
                seen.add(w)
                if w in remaining:
                    reached += 1
                else:
                    stack.append(w)
        return reached

    def best(remaining: frozenset[int]) -> tuple[int, tuple[int, ...]]:
        if not remaining:
            return 0, ()
        if remaining in memo:
            return memo[remaining]
        result: tuple[int, tuple[int, ...]] | None = None
        for v in sorted(remaining):
            deg = degree(v, remaining)
            if result is not None and deg >= result[0]:
                continue
            sub_width, sub_sequence = best(remaining - {v})
            width = max(deg, sub_width)
            if result is None or width < result[0]:
                result = (width, (v,) + sub_sequence)
        memo[remaining] = result
        return result

    width, sequence = best(everything)
    log.debug(f"Exhaustive search over {n} vertices: treewidth {width}")
    return EliminationOrder(vertices=sequence)


def restricted_order_pipeline(
    graph: nx.Graph,
    clique: Iterable[int] = (),
    heuristic: Heuristic = Heuristic.MIN_FILL,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> tuple[EliminationOrder, int]:
    """
    Order with the vertices of `clique` eliminated last, at no loss of width.

    1. connect `clique` into a clique (G~)
    2. order G~ (exhaustive when small enough, otherwise greedy)
    3. build the fill-in graph of that order
    4. restricted MCS on the fill-in graph

    Returns the order and its treewidth on G~.
    """
    clique = sorted(set(clique))
    unknown = set(clique) - set(graph.nodes)
    if unknown:
        raise OrderingError(f"vertices {sorted(unknown)} are not in the graph")
    if graph.number_of_nodes() == 0:
        return EliminationOrder(vertices=()), 0

    g_tilde = clique_ify(graph, clique)
    if g_tilde.number_of_nodes() <= min(exhaustive_limit, EXHAUSTIVE_LIMIT):
        unrestricted = exhaustive_order(g_tilde)
    else:
        unrestricted = greedy_order(g_tilde, heuristic)

    fill_in = build_chordal_graph(g_tilde, unrestricted)
    order = restricted_mcs(fill_in, clique)
    treewidth = treewidth_of_order(g_tilde, order)
    log.info(
        f"Restricted order over {len(order)} vertices with {len(clique)} pinned last: "
        f"treewidth {treewidth}"
    )
    return order, treewidth
