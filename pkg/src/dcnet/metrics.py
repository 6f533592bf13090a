"""Per-node and per-pair metrics on competition networks.

Degrees and CON scores count votes; closeness and betweenness run on the
simple projection (parallel edges cannot shorten a path); PageRank runs
on the reversed multigraph with multiplicity-weighted transitions.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from dcnet.network import CompetitionNetwork, SimpleDigraph, reverse, simple_projection


class ClosenessMode(enum.Enum):
    INVERSE_SUM = "inverse-sum"      # 1 / sum of distances to reachable nodes
    REACHABLE_MEAN = "reachable-mean"  # |reachable| / sum of distances


@dataclass(frozen=True)
class PageRankConfig:
    damping: float = 0.85
    tolerance: float = 1e-10
    max_iterations: int = 1000
    weighting: str = "multiplicity"  # "multiplicity" or "collapsed"

    def __post_init__(self):
        if not (0.0 < self.damping < 1.0):
            raise ValueError("damping must lie in (0, 1)")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be a positive integer")
        if self.weighting not in ("multiplicity", "collapsed"):
            raise ValueError("weighting must be 'multiplicity' or 'collapsed'")


class PageRankConvergenceError(RuntimeError):
    """Power iteration did not converge; carries the last iterate."""

    def __init__(self, iterations: int, last_iterate: list[float]):
        super().__init__(f"PageRank did not converge after {iterations} iterations")
        self.iterations = iterations
        self.last_iterate = last_iterate


@dataclass(frozen=True)
class MetricsRow:
    player: int
    name: str
    tribe: str | None
    in_degree: int
    out_degree: int
    closeness: float
    con_score: int
    betweenness: float
    pagerank: float
    jaccard_score: float


def _map_sources(fn, sources, workers: int):
    """Apply fn over sources, optionally on a thread pool; order is by source."""
    if workers <= 1:
        return [fn(s) for s in sources]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, sources))


# -- degrees and CON ---------------------------------------------------------

def degrees(net: CompetitionNetwork) -> list[tuple[int, int]]:
    """Per-node (in_degree, out_degree), counted with multiplicity."""
    return [
        (sum(net.in_counts[u].values()), sum(net.out_counts[u].values()))
        for u in range(net.n)
    ]


def con_pair(net: CompetitionNetwork, u: int, v: int, weighted: bool = False) -> int:
    """Number of distinct common out-neighbors of u and v.

    With ``weighted=True`` each common out-neighbor w contributes
    min(multiplicity(u->w), multiplicity(v->w)) instead of 1; this variant
    is experimental and not used by any published figure.
    """
    if u == v:
        raise ValueError("con_pair requires two distinct nodes")
    common = net.out_sets[u] & net.out_sets[v]
    if not weighted:
        return len(common)
    return sum(min(net.out_counts[u][w], net.out_counts[v][w]) for w in common)


def con_score(net: CompetitionNetwork, u: int, weighted: bool = False) -> int:
    """Sum of con_pair(u, v) over every other node v."""
    return sum(con_pair(net, u, v, weighted) for v in range(net.n) if v != u)


def con_set(net: CompetitionNetwork, members, weighted: bool = False) -> int:
    """Sum of con_pair over unordered pairs inside the set (needs >= 2 nodes)."""
    ids = sorted(set(members))
    if len(ids) < 2:
        raise ValueError("con_set requires at least 2 distinct nodes")
    total = 0
    for i, u in enumerate(ids):
        for v in ids[i + 1:]:
            total += con_pair(net, u, v, weighted)
    return total


def jaccard_pair(net: CompetitionNetwork, u: int, v: int) -> float:
    """Jaccard overlap of the distinct out-neighbor sets; 0 when both are empty."""
    if u == v:
        raise ValueError("jaccard_pair requires two distinct nodes")
    a, b = net.out_sets[u], net.out_sets[v]
    union = len(a | b)
    if union == 0:
        return 0.0
    return len(a & b) / union


def jaccard_score(net: CompetitionNetwork, u: int) -> float:
    return sum(jaccard_pair(net, u, v) for v in range(net.n) if v != u)


# -- distance-based metrics --------------------------------------------------

def _bfs_distances(g: SimpleDigraph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in sorted(g.out_adj[u]):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def closeness(net: CompetitionNetwork, u: int,
              mode: ClosenessMode = ClosenessMode.REACHABLE_MEAN) -> float:
    return closeness_all(net, mode)[u]


def closeness_all(net: CompetitionNetwork,
                  mode: ClosenessMode = ClosenessMode.REACHABLE_MEAN,
                  workers: int = 1) -> list[float]:
    g = simple_projection(net)

    def one(source: int) -> float:
        dist = _bfs_distances(g, source)
        reach = [d for v, d in enumerate(dist) if v != source and d > 0]
        if not reach:
            return 0.0
        total = sum(reach)
        if mode is ClosenessMode.INVERSE_SUM:
            return 1.0 / total
        return len(reach) / total

    return _map_sources(one, range(net.n), workers)


def betweenness(net: CompetitionNetwork, v: int) -> float:
    return betweenness_all(net)[v]


def betweenness_all(net: CompetitionNetwork, workers: int = 1) -> list[float]:
    """Unnormalized directed betweenness (Brandes accumulation) on the simple projection."""
    g = simple_projection(net)

    def one(source: int) -> list[float]:
        # Single-source shortest-path counting followed by dependency accumulation.
        dist = [-1] * g.n
        sigma = [0] * g.n
        preds: list[list[int]] = [[] for _ in range(g.n)]
        dist[source] = 0
        sigma[source] = 1
        order: list[int] = []
        queue = deque([source])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in sorted(g.out_adj[u]):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
                if dist[w] == dist[u] + 1:
                    sigma[w] += sigma[u]
                    preds[w].append(u)
        delta = [0.0] * g.n
        contrib = [0.0] * g.n
        for w in reversed(order):
            for u in preds[w]:
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w])
            if w != source:
                contrib[w] = delta[w]
        return contrib

    per_source = _map_sources(one, range(net.n), workers)
    # Fixed accumulation order (by source index) keeps float sums deterministic.
    totals = [0.0] * net.n
    for contrib in per_source:
        for v in range(net.n):
            totals[v] += contrib[v]
    return totals


# -- PageRank ----------------------------------------------------------------

def _pagerank(net: CompetitionNetwork, config: PageRankConfig) -> list[float]:
    n = net.n
    if n == 0:
        return []
    if config.weighting == "multiplicity":
        weights = [dict(c) for c in net.out_counts]
    else:
        weights = [{v: 1 for v in s} for s in net.out_sets]
    out_total = [sum(w.values()) for w in weights]
    x = [1.0 / n] * n
    d = config.damping
    for _ in range(config.max_iterations):
        dangling = sum(x[u] for u in range(n) if out_total[u] == 0)
        nxt = [(1.0 - d) / n + d * dangling / n] * n
        for u in range(n):
            if out_total[u] == 0:
                continue
            share = d * x[u] / out_total[u]
            for v, w in weights[u].items():
                nxt[v] += share * w
        if sum(abs(a - b) for a, b in zip(nxt, x)) < config.tolerance:
            return nxt
        x = nxt
    raise PageRankConvergenceError(config.max_iterations, x)


def pagerank_reversed(net: CompetitionNetwork,
                      config: PageRankConfig | None = None) -> list[float]:
    """PageRank of the edge-reversed network (votes received push rank outward)."""
    return _pagerank(reverse(net), config or PageRankConfig())


# -- assembled table ---------------------------------------------------------

def table_order(net: CompetitionNetwork) -> list[int]:
    """Roster order for reports: winner first, then latest-eliminated first."""
    def key(i: int):
        p = net.players[i]
        elim = p.elimination_order if p.elimination_order is not None else math.inf
        return (not p.is_winner, -elim if elim != math.inf else -math.inf, i)
    return sorted(range(net.n), key=key)


def metrics_table(net: CompetitionNetwork,
                  closeness_mode: ClosenessMode = ClosenessMode.REACHABLE_MEAN,
                  pagerank_config: PageRankConfig | None = None,
                  workers: int = 1) -> list[MetricsRow]:
    degs = degrees(net)
    close = closeness_all(net, closeness_mode, workers)
    betw = betweenness_all(net, workers)
    pr = pagerank_reversed(net, pagerank_config)
    rows = []
    for i in table_order(net):
        p = net.players[i]
        rows.append(MetricsRow(
            player=i,
            name=p.name,
            tribe=p.tribe,
            in_degree=degs[i][0],
            out_degree=degs[i][1],
            closeness=close[i],
            con_score=con_score(net, i),
            betweenness=betw[i],
            pagerank=pr[i],
            jaccard_score=jaccard_score(net, i),
        ))
    return rows


def metrics_csv(rows: list[MetricsRow]) -> str:
    lines = ["name,tribe,in_degree,out_degree,closeness,con,betweenness,pagerank,jaccard"]
    for r in rows:
        lines.append(
            f"{r.name},{r.tribe or ''},{r.in_degree},{r.out_degree},"
            f"{r.closeness:.6f},{r.con_score},{r.betweenness:.6f},"
            f"{r.pagerank:.6f},{r.jaccard_score:.6f}"
        )
    return "\n".join(lines) + "\n"
