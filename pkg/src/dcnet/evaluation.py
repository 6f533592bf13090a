"""Leader prediction: rankings, top-k winner hits, and cross-season summaries."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from dcnet.ingest import SeasonManifest
from dcnet.metrics import (
    ClosenessMode,
    PageRankConfig,
    closeness_all,
    con_score,
    degrees,
    jaccard_score,
    pagerank_reversed,
)
from dcnet.network import CompetitionNetwork, build_network


class RankingMethod(enum.Enum):
    CON = "con"
    PAGERANK_REVERSED = "pagerank"
    JACCARD = "jaccard"
    CLOSENESS = "closeness"
    OUT_DEGREE = "out-degree"
    NEG_IN_DEGREE = "neg-in-degree"


class TiePolicy(enum.Enum):
    OPTIMISTIC = "optimistic"
    PESSIMISTIC = "pessimistic"


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class SummaryRow:
    show: str
    method: RankingMethod
    k: int
    tie_policy: TiePolicy
    hits: int
    seasons: int
    hit_rate: float           # percent, rounded half-up to 1 decimal
    raw_ratio: float
    baseline_min: float       # percent, rounded to 1 decimal
    baseline_max: float


@dataclass(frozen=True)
class EvaluationSummary:
    rows: tuple[SummaryRow, ...]


@dataclass(frozen=True)
class FinalistProfile:
    name: str
    is_winner: bool
    ranks: dict  # RankingMethod -> 1-based rank (ties share the best rank)
    summary: str


def round1(value: float) -> float:
    """Half-up rounding to one decimal, as printed in summary tables."""
    return float(Decimal(repr(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def _goodness(net: CompetitionNetwork, method: RankingMethod,
              closeness_mode: ClosenessMode = ClosenessMode.REACHABLE_MEAN,
              pagerank_config: PageRankConfig | None = None) -> list[float]:
    """Per-node score where larger always means a better rank."""
    if method is RankingMethod.CON:
        return [float(con_score(net, u)) for u in range(net.n)]
    if method is RankingMethod.PAGERANK_REVERSED:
        return pagerank_reversed(net, pagerank_config)
    if method is RankingMethod.JACCARD:
        return [jaccard_score(net, u) for u in range(net.n)]
    if method is RankingMethod.CLOSENESS:
        return closeness_all(net, closeness_mode)
    degs = degrees(net)
    if method is RankingMethod.OUT_DEGREE:
        return [float(od) for _, od in degs]
    return [-float(ind) for ind, _ in degs]  # NEG_IN_DEGREE


def rank_by_metric(net: CompetitionNetwork, method: RankingMethod,
                   closeness_mode: ClosenessMode = ClosenessMode.REACHABLE_MEAN,
                   pagerank_config: PageRankConfig | None = None) -> list[tuple[int, float]]:
    """Nodes ordered best-first under the method; ties broken by node index."""
    good = _goodness(net, method, closeness_mode, pagerank_config)
    order = sorted(range(net.n), key=lambda u: (-good[u], u))
    if method is RankingMethod.NEG_IN_DEGREE:
        return [(u, -good[u]) for u in order]  # report the raw in-degree
    return [(u, good[u]) for u in order]


def winner_in_top_k(net: CompetitionNetwork, manifest: SeasonManifest,
                    method: RankingMethod, k: int,
                    tie_policy: TiePolicy = TiePolicy.OPTIMISTIC,
                    pagerank_config: PageRankConfig | None = None) -> bool:
    if k < 1:
        raise EvaluationError("k must be a positive integer")
    winners = [i for i, p in enumerate(manifest.players) if p.is_winner]
    if not winners:
        raise EvaluationError(f"{manifest.season_id}: no winner flagged")
    w = winners[0]
    good = _goodness(net, method, pagerank_config=pagerank_config)
    if tie_policy is TiePolicy.OPTIMISTIC:
        return sum(1 for v in range(net.n) if good[v] > good[w]) < k
    return sum(1 for v in range(net.n) if v != w and good[v] >= good[w]) < k


def random_baseline(n: int, k: int) -> float:
    """Chance (percent) that the winner lands in a uniform random k-subset."""
    if not (1 <= k <= n):
        raise EvaluationError("need 1 <= k <= n")
    return 100.0 * k / n


def aggregate_seasons(manifests: list[SeasonManifest],
                      methods: list[RankingMethod],
                      ks: list[int],
                      tie_policy: TiePolicy = TiePolicy.OPTIMISTIC) -> EvaluationSummary:
    """Cross-season hit rates per (show, method, k) with the random-set baseline range."""
    if not manifests:
        raise EvaluationError("no seasons to aggregate")
    by_show: dict[str, list[SeasonManifest]] = {}
    for m in sorted(manifests, key=lambda m: m.season_id):
        by_show.setdefault(m.show, []).append(m)

    rows = []
    for show in sorted(by_show):
        seasons = by_show[show]
        nets = {}
        for m in seasons:
            try:
                nets[m.season_id] = build_network(m)
            except Exception as exc:
                raise EvaluationError(f"{m.season_id}: {exc}") from exc
        for method in methods:
            for k in ks:
                hits = 0
                baselines = []
                for m in seasons:
                    try:
                        hits += winner_in_top_k(nets[m.season_id], m, method, k, tie_policy)
                        baselines.append(random_baseline(len(m.players), k))
                    except EvaluationError:
                        raise
                    except Exception as exc:
                        raise EvaluationError(f"{m.season_id}: {exc}") from exc
                ratio = hits / len(seasons)
                rows.append(SummaryRow(
                    show=show, method=method, k=k, tie_policy=tie_policy,
                    hits=hits, seasons=len(seasons),
                    hit_rate=round1(100.0 * ratio), raw_ratio=ratio,
                    baseline_min=round1(min(baselines)),
                    baseline_max=round1(max(baselines)),
                ))
    return EvaluationSummary(tuple(rows))


_PROFILE_METHODS = (RankingMethod.CLOSENESS, RankingMethod.CON,
                    RankingMethod.NEG_IN_DEGREE, RankingMethod.OUT_DEGREE)


def dch_leader_profile(net: CompetitionNetwork,
                       manifest: SeasonManifest) -> list[FinalistProfile]:
    """How each finalist ranks under the four leader indicators."""
    finalists = [i for i, p in enumerate(manifest.players) if p.is_finalist]
    if not finalists:
        raise EvaluationError(f"{manifest.season_id}: no finalist flagged")
    goods = {m: _goodness(net, m) for m in _PROFILE_METHODS}
    profiles = []
    for i in finalists:
        ranks = {
            m: 1 + sum(1 for v in range(net.n) if g[v] > g[i])
            for m, g in goods.items()
        }
        parts = ", ".join(
            f"{m.value} #{ranks[m]}" for m in _PROFILE_METHODS
        )
        p = net.players[i]
        tag = "winner" if p.is_winner else "finalist"
        profiles.append(FinalistProfile(
            name=p.name, is_winner=p.is_winner, ranks=ranks,
            summary=f"{p.name} ({tag}): {parts}",
        ))
    return profiles
