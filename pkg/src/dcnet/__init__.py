"""Dynamic competition networks: build vote networks, score players, find alliances."""

from dcnet.ingest import (
    AllianceDeclaration,
    PlayerRecord,
    SeasonError,
    SeasonManifest,
    SeasonReferenceError,
    SeasonSchemaError,
    SeasonSemanticError,
    SeasonSyntaxError,
    VoteRecord,
    parse_season,
    serialize_season,
    validate_cross_season,
)
from dcnet.network import (
    CompetitionNetwork,
    SimpleDigraph,
    build_network,
    reverse,
    simple_projection,
)
from dcnet.metrics import (
    ClosenessMode,
    MetricsRow,
    PageRankConfig,
    PageRankConvergenceError,
    betweenness,
    betweenness_all,
    closeness,
    closeness_all,
    con_pair,
    con_score,
    con_set,
    degrees,
    jaccard_pair,
    jaccard_score,
    metrics_table,
    pagerank_reversed,
)
from dcnet.alliances import (
    AllianceReport,
    DensityDenominator,
    SearchBudgetError,
    SearchConfig,
    alliance_vs_global,
    edge_density,
    global_edge_density,
    is_near_independent,
    rank_declared_alliances,
    refine_alliance,
    search_alliances,
)
from dcnet.evaluation import (
    EvaluationError,
    EvaluationSummary,
    RankingMethod,
    TiePolicy,
    aggregate_seasons,
    dch_leader_profile,
    random_baseline,
    rank_by_metric,
    winner_in_top_k,
)

__version__ = "0.1.0"
