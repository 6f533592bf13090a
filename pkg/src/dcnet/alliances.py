"""Alliance cohesion: edge density, near-independence, and subset search.

Edge density counts every vote with both endpoints inside the set,
regardless of direction and with multiplicity, over the number of
unordered pairs; it can exceed 1.  An ordered-pair denominator is kept
as an alternative convention (it is exactly half the default).
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from math import comb

from dcnet.ingest import SeasonManifest
from dcnet.metrics import con_set
from dcnet.network import CompetitionNetwork


class DensityDenominator(enum.Enum):
    UNORDERED_PAIRS = "unordered"
    ORDERED_PAIRS = "ordered"


class SearchBudgetError(ValueError):
    """Exhaustive enumeration would exceed the configured subset budget."""


@dataclass(frozen=True)
class AllianceReport:
    label: str
    members: frozenset[int]
    member_names: tuple[str, ...]
    edge_count: int
    edge_density: float
    epsilon: float
    near_independent: bool
    con_internal: int


@dataclass(frozen=True)
class SearchConfig:
    min_size: int
    max_size: int
    top_k: int = 10
    strategy: str = "exhaustive"  # or "local_search"
    restarts: int = 20
    max_iterations: int = 200
    seed: int = 0
    budget: int = 5_000_000

    def __post_init__(self):
        if self.min_size < 2 or self.max_size < self.min_size:
            raise ValueError("need 2 <= min_size <= max_size")
        if self.top_k < 1:
            raise ValueError("top_k must be positive")
        if self.strategy not in ("exhaustive", "local_search"):
            raise ValueError("strategy must be 'exhaustive' or 'local_search'")


def internal_edge_count(net: CompetitionNetwork, members: frozenset[int]) -> int:
    """Votes with both endpoints inside the set, with multiplicity, any direction."""
    total = 0
    for u in members:
        counts = net.out_counts[u]
        for v in members:
            if v != u:
                total += counts[v]
    return total


def edge_density(net: CompetitionNetwork, members,
                 denom: DensityDenominator = DensityDenominator.UNORDERED_PAIRS) -> float:
    ids = frozenset(members)
    if len(ids) < 2:
        raise ValueError("edge density needs at least 2 nodes")
    count = internal_edge_count(net, ids)
    pairs = comb(len(ids), 2)
    if denom is DensityDenominator.ORDERED_PAIRS:
        pairs *= 2
    return count / pairs


def global_edge_density(net: CompetitionNetwork,
                        denom: DensityDenominator = DensityDenominator.UNORDERED_PAIRS) -> float:
    if net.n < 2:
        raise ValueError("global edge density needs at least 2 nodes")
    return edge_density(net, range(net.n), denom)


def is_near_independent(net: CompetitionNetwork, members, epsilon: float) -> bool:
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    return edge_density(net, members) <= epsilon


def alliance_report(net: CompetitionNetwork, label: str, members,
                    epsilon: float = 0.0) -> AllianceReport:
    ids = frozenset(members)
    density = edge_density(net, ids)
    return AllianceReport(
        label=label,
        members=ids,
        member_names=tuple(sorted(net.names[i] for i in ids)),
        edge_count=internal_edge_count(net, ids),
        edge_density=density,
        epsilon=epsilon,
        near_independent=density <= epsilon,
        con_internal=con_set(net, ids),
    )


def rank_declared_alliances(net: CompetitionNetwork, manifest: SeasonManifest,
                            epsilon: float = 0.0) -> list[AllianceReport]:
    """Reports for every declared alliance, ascending by density, ties by label."""
    reports = [
        alliance_report(net, a.label, frozenset(net.node_id(m) for m in a.members), epsilon)
        for a in manifest.alliances
    ]
    reports.sort(key=lambda r: (r.edge_density, r.label))
    return reports


def _ranked(items: list[tuple[frozenset[int], float]]) -> list[tuple[frozenset[int], float]]:
    return sorted(items, key=lambda it: (it[1], tuple(sorted(it[0]))))


def search_alliances(net: CompetitionNetwork,
                     config: SearchConfig) -> list[tuple[frozenset[int], float]]:
    """Lowest-density subsets per size, merged into one ranking.

    The exhaustive strategy is exact; local search restarts from seeded
    random subsets and descends by single-member swaps, so its output is
    deterministic for a given seed.
    """
    if config.max_size > net.n:
        raise ValueError("max_size exceeds the number of players")
    sizes = range(config.min_size, config.max_size + 1)
    if config.strategy == "exhaustive":
        total = sum(comb(net.n, s) for s in sizes)
        if total > config.budget:
            raise SearchBudgetError(
                f"{total} subsets exceed the budget of {config.budget}")
        results: list[tuple[frozenset[int], float]] = []
        for size in sizes:
            scored = [
                (frozenset(c), edge_density(net, c))
                for c in itertools.combinations(range(net.n), size)
            ]
            results.extend(_ranked(scored)[: config.top_k])
        return _ranked(results)

    rng = random.Random(config.seed)
    results = []
    for size in sizes:
        seen: set[frozenset[int]] = set()
        minima: list[tuple[frozenset[int], float]] = []
        for _ in range(config.restarts):
            current = frozenset(rng.sample(range(net.n), size))
            density = edge_density(net, current)
            for _ in range(config.max_iterations):
                best = None
                for out in sorted(current):
                    for into in range(net.n):
                        if into in current:
                            continue
                        candidate = (current - {out}) | {into}
                        cd = edge_density(net, candidate)
                        if cd < density and (best is None or cd < best[1] or
                                             (cd == best[1] and tuple(sorted(candidate)) < tuple(sorted(best[0])))):
                            best = (frozenset(candidate), cd)
                if best is None:
                    break
                current, density = best
            if current not in seen:
                seen.add(current)
                minima.append((current, density))
        results.extend(_ranked(minima)[: config.top_k])
    return _ranked(results)


def refine_alliance(net: CompetitionNetwork, members) -> list[tuple[frozenset[int], float]]:
    """All sub-alliances (size >= 2) of a set, ascending by density."""
    ids = sorted(set(members))
    if len(ids) < 3:
        raise ValueError("refinement needs a set of at least 3 nodes")
    scored = []
    for size in range(2, len(ids) + 1):
        for combo in itertools.combinations(ids, size):
            scored.append((frozenset(combo), edge_density(net, combo)))
    return _ranked(scored)


def alliance_vs_global(net: CompetitionNetwork,
                       manifest: SeasonManifest) -> tuple[list[tuple[str, bool]], bool]:
    """Flag alliances strictly sparser than the whole network."""
    if not manifest.alliances:
        raise ValueError("no alliances declared")
    global_density = global_edge_density(net)
    flags = []
    for a in sorted(manifest.alliances, key=lambda a: a.label):
        ids = frozenset(net.node_id(m) for m in a.members)
        flags.append((a.label, edge_density(net, ids) < global_density))
    return flags, any(flag for _, flag in flags)
