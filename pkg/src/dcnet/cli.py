"""Command-line front end.

Exit codes: 0 success, 1 data or validation error, 2 usage error.
Results go to stdout (or --output, written atomically); diagnostics go
to stderr.  Given the same inputs, options, and seed the output is
byte-identical, regardless of --workers.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from dcnet import alliances as alli
from dcnet import evaluation as evalmod
from dcnet import metrics as met
from dcnet import network as netmod
from dcnet.ingest import SeasonError, load_season, validate_cross_season


def _write_output(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    # Temp file then rename, so a failure never leaves a half-written file.
    target = Path(output)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=target.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _format_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _closeness_mode(name: str) -> met.ClosenessMode:
    return met.ClosenessMode(name)


def _denominator(name: str) -> alli.DensityDenominator:
    return alli.DensityDenominator(name)


def _parse_int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _parse_methods(text: str) -> list[evalmod.RankingMethod]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(evalmod.RankingMethod(part))
        except ValueError:
            choices = ",".join(m.value for m in evalmod.RankingMethod)
            raise argparse.ArgumentTypeError(f"unknown method {part!r} (choose from {choices})")
    if not out:
        raise argparse.ArgumentTypeError("no methods given")
    return out


def _load(path: str, up_to_round: int | None):
    manifest = load_season(path)
    return manifest, netmod.build_network(manifest, up_to_round)


def _cmd_metrics(args) -> str:
    _, net = _load(args.season, args.at_round)
    rows = met.metrics_table(net, args.closeness, workers=args.workers)
    if args.format == "csv":
        return met.metrics_csv(rows)
    return _format_table(
        ["name", "tribe", "ID", "OD", "C", "CON", "B", "PR", "J"],
        [[r.name, r.tribe or "", str(r.in_degree), str(r.out_degree),
          f"{r.closeness:.6f}", str(r.con_score), f"{r.betweenness:.6f}",
          f"{r.pagerank:.6f}", f"{r.jaccard_score:.6f}"] for r in rows],
    )


def _density_str(density: float) -> str:
    return f"{density:.6f}"


def _cmd_alliances(args) -> str:
    manifest, net = _load(args.season, args.at_round)
    reports = alli.rank_declared_alliances(net, manifest, args.epsilon)
    if args.denominator is alli.DensityDenominator.ORDERED_PAIRS:
        reports = [
            alli.AllianceReport(
                r.label, r.members, r.member_names, r.edge_count,
                r.edge_density / 2.0, r.epsilon, r.edge_density / 2.0 <= r.epsilon,
                r.con_internal)
            for r in reports
        ]
    body = [[r.label, ", ".join(r.member_names), _density_str(r.edge_density),
             str(r.edge_count), str(r.con_internal),
             "yes" if r.near_independent else "no"] for r in reports]
    if args.format == "csv":
        lines = ["label,members,edge_density,edge_count,con,near_independent"]
        for row in body:
            lines.append(",".join([row[0], '"' + row[1] + '"'] + row[2:]))
        return "\n".join(lines) + "\n"
    text = _format_table(["alliance", "members", "ED", "edges", "CON", "near-indep"], body)
    gd = alli.global_edge_density(net) if net.n >= 2 else 0.0
    return text + f"global edge density: {_density_str(gd)}\n"


def _cmd_search(args) -> str:
    _, net = _load(args.season, args.at_round)
    config = alli.SearchConfig(
        min_size=args.min_size, max_size=args.max_size, top_k=args.top_k,
        strategy=args.strategy, restarts=args.restarts, seed=args.seed,
    )
    ranked = alli.search_alliances(net, config)
    body = [[", ".join(sorted(net.names[i] for i in members)), _density_str(density)]
            for members, density in ranked]
    if args.format == "csv":
        lines = ["members,edge_density"]
        for members, density in ranked:
            names = ", ".join(sorted(net.names[i] for i in members))
            lines.append(f'"{names}",{_density_str(density)}')
        return "\n".join(lines) + "\n"
    return _format_table(["members", "ED"], body)


def _cmd_refine(args) -> str:
    manifest, net = _load(args.season, args.at_round)
    if args.alliance is not None:
        declared = {a.label: a for a in manifest.alliances}
        if args.alliance not in declared:
            raise SeasonError(f"no declared alliance labelled {args.alliance!r}")
        members = [net.node_id(m) for m in declared[args.alliance].members]
    else:
        names = [n.strip() for n in args.members.split(",") if n.strip()]
        missing = [n for n in names if n not in net.names]
        if missing:
            raise SeasonError(f"unknown player(s): {missing}")
        members = [net.node_id(n) for n in names]
    ranked = alli.refine_alliance(net, members)
    body = [[", ".join(sorted(net.names[i] for i in subset)), _density_str(density)]
            for subset, density in ranked]
    if args.format == "csv":
        lines = ["members,edge_density"]
        for row in body:
            lines.append(f'"{row[0]}",{row[1]}')
        return "\n".join(lines) + "\n"
    return _format_table(["subset", "ED"], body)


def _cmd_predict(args) -> str:
    manifest, net = _load(args.season, args.at_round)
    policies = ([evalmod.TiePolicy.OPTIMISTIC, evalmod.TiePolicy.PESSIMISTIC]
                if args.tie == "both" else [evalmod.TiePolicy(args.tie)])
    lines = []
    winner = manifest.winner().name
    for method in args.methods:
        for k in args.k:
            verdicts = []
            for policy in policies:
                hit = evalmod.winner_in_top_k(net, manifest, method, k, policy)
                verdicts.append(f"{policy.value}={'hit' if hit else 'miss'}")
            lines.append(f"{method.value} top-{k}: winner {winner} {' '.join(verdicts)}")
    lines.append("")
    for profile in evalmod.dch_leader_profile(net, manifest):
        lines.append(profile.summary)
    return "\n".join(lines) + "\n"


def _summary_rows(manifests, methods, ks, tie: str):
    rows = list(evalmod.aggregate_seasons(
        manifests, methods, ks, evalmod.TiePolicy.OPTIMISTIC
        if tie in ("optimistic", "both") else evalmod.TiePolicy.PESSIMISTIC).rows)
    if tie == "both":
        pess = evalmod.aggregate_seasons(
            manifests, methods, ks, evalmod.TiePolicy.PESSIMISTIC).rows
        by_key = {(r.show, r.method, r.k): r for r in rows}
        for r in pess:
            if by_key[(r.show, r.method, r.k)].hit_rate != r.hit_rate:
                rows.append(r)
    return rows


def _cmd_evaluate(args) -> str:
    directory = Path(args.seasons)
    paths = sorted(directory.glob("*.json"))
    if not paths:
        raise SeasonError(f"no season files found under {directory}")
    manifests = [load_season(p) for p in paths]
    problems = [d for d in validate_cross_season(manifests) if d.severity == "error"]
    if problems:
        raise SeasonError("; ".join(f"{d.season_id}: {d.message}" for d in problems))
    rows = _summary_rows(manifests, args.methods, args.k, args.tie)

    def method_label(row):
        # Pessimistic extras (only emitted when the rates differ) are suffixed.
        if args.tie == "both" and row.tie_policy is evalmod.TiePolicy.PESSIMISTIC:
            return f"{row.method.value}:pessimistic"
        return row.method.value

    rows.sort(key=lambda r: (r.show, r.method.value, r.k, r.tie_policy.value))
    if args.format == "csv":
        lines = ["show,method,k,hit_rate,baseline_min,baseline_max,seasons"]
        for r in rows:
            lines.append(f"{r.show},{method_label(r)},{r.k},{r.hit_rate:.1f},"
                         f"{r.baseline_min:.1f},{r.baseline_max:.1f},{r.seasons}")
        return "\n".join(lines) + "\n"
    return _format_table(
        ["show", "method", "k", "hit rate", "baseline", "seasons"],
        [[r.show, method_label(r), str(r.k), f"{r.hit_rate:.1f}",
          f"{r.baseline_min:.1f}-{r.baseline_max:.1f}", str(r.seasons)] for r in rows],
    )


def _cmd_export(args) -> str:
    _, net = _load(args.season, args.at_round)
    if args.format == "dot":
        return netmod.to_dot(net)
    if args.format == "graphml":
        return netmod.to_graphml(net)
    return netmod.to_edge_csv(net)


def _cmd_validate(args) -> str:
    manifests = []
    for path in args.seasons:
        p = Path(path)
        files = sorted(p.glob("*.json")) if p.is_dir() else [p]
        for f in files:
            manifests.append(load_season(f))
    diagnostics = validate_cross_season(manifests)
    for d in diagnostics:
        print(f"{d.severity}: {d.season_id}: {d.message}", file=sys.stderr)
    if any(d.severity == "error" for d in diagnostics):
        raise SeasonError("corpus validation failed")
    return f"{len(manifests)} season(s) OK\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcnet",
                                     description="Dynamic competition network toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, season=True):
        if season:
            p.add_argument("season", help="season JSON file")
        p.add_argument("--at-round", type=int, default=None,
                       help="only include votes up to and including this round")
        p.add_argument("--format", choices=["text", "csv"], default="text")
        p.add_argument("--output", "-o", default=None, help="write to file instead of stdout")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("metrics", help="per-player metric table")
    add_common(p)
    p.add_argument("--closeness", type=_closeness_mode, default=met.ClosenessMode.REACHABLE_MEAN,
                   help="closeness mode: reachable-mean (default) or inverse-sum")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("alliances", help="declared alliances ranked by edge density")
    add_common(p)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--denominator", type=_denominator,
                   default=alli.DensityDenominator.UNORDERED_PAIRS,
                   help="unordered (default) or ordered pair denominator")
    p.set_defaults(func=_cmd_alliances)

    p = sub.add_parser("search", help="low-density subset search")
    add_common(p)
    p.add_argument("--min-size", type=int, required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--strategy", choices=["exhaustive", "local_search"], default="exhaustive")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("refine", help="rank the sub-alliances of a set by density")
    add_common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--alliance", help="declared alliance label")
    group.add_argument("--members", help="comma-separated player names")
    p.set_defaults(func=_cmd_refine)

    p = sub.add_parser("predict", help="is the winner in the top k under each method?")
    add_common(p)
    p.add_argument("--methods", type=_parse_methods,
                   default=[evalmod.RankingMethod.CON])
    p.add_argument("--k", type=_parse_int_list, default=[3, 5])
    p.add_argument("--tie", choices=["optimistic", "pessimistic", "both"],
                   default="optimistic")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("evaluate", help="cross-season hit-rate summary")
    p.add_argument("seasons", help="directory of season JSON files")
    p.add_argument("--methods", type=_parse_methods,
                   default=[evalmod.RankingMethod.CON,
                            evalmod.RankingMethod.PAGERANK_REVERSED,
                            evalmod.RankingMethod.JACCARD])
    p.add_argument("--k", type=_parse_int_list, default=[3, 5])
    p.add_argument("--tie", choices=["optimistic", "pessimistic", "both"],
                   default="optimistic")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("export", help="serialize the network")
    p.add_argument("season")
    p.add_argument("--at-round", type=int, default=None)
    p.add_argument("--format", choices=["dot", "graphml", "csv"], default="dot")
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("validate", help="parse files and run corpus checks")
    p.add_argument("seasons", nargs="+", help="season files or directories")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
        _write_output(text, getattr(args, "output", None))
    except (SeasonError, evalmod.EvaluationError, alli.SearchBudgetError,
            met.PageRankConvergenceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
