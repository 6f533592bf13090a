"""Directed multigraph construction and graph views.

The vote network keeps every parallel edge together with the round it was
cast in.  Distance-based metrics run on the collapsed simple projection;
PageRank runs on the reversal.  Node ids are dense integers in roster
order, so exports and metric tables are byte-stable.
"""

from __future__ import annotations

from collections import Counter

from dcnet.ingest import PlayerRecord, SeasonManifest


class CompetitionNetwork:
    """Immutable directed multigraph over a season roster.

    Edges are (source, target, round) triples stored in canonical
    (round, source, target) order; adjacency is kept in both directions.
    """

    __slots__ = ("players", "names", "n", "edges", "out_counts", "in_counts",
                 "out_sets", "in_sets", "_name_to_id")

    def __init__(self, players: tuple[PlayerRecord, ...], edges):
        self.players = tuple(players)
        self.names = tuple(p.name for p in self.players)
        self.n = len(self.players)
        self._name_to_id = {name: i for i, name in enumerate(self.names)}
        if len(self._name_to_id) != self.n:
            raise ValueError("player names must be unique")
        canon = sorted(tuple(e) for e in edges)
        canon.sort(key=lambda e: (e[2], e[0], e[1]))
        out_counts = [Counter() for _ in range(self.n)]
        in_counts = [Counter() for _ in range(self.n)]
        for src, dst, rnd in canon:
            if src == dst:
                raise ValueError(f"self-loop at node {src}")
            if not (0 <= src < self.n and 0 <= dst < self.n):
                raise ValueError(f"edge ({src},{dst}) out of range")
            if rnd < 1:
                raise ValueError(f"round {rnd} must be positive")
            out_counts[src][dst] += 1
            in_counts[dst][src] += 1
        self.edges = tuple(canon)
        self.out_counts = tuple(out_counts)
        self.in_counts = tuple(in_counts)
        self.out_sets = tuple(frozenset(c) for c in out_counts)
        self.in_sets = tuple(frozenset(c) for c in in_counts)

    def node_id(self, name: str) -> int:
        return self._name_to_id[name]

    def edge_multiset(self) -> Counter:
        return Counter(self.edges)

    def __eq__(self, other):
        if not isinstance(other, CompetitionNetwork):
            return NotImplemented
        return self.names == other.names and self.edges == other.edges

    def __hash__(self):
        return hash((self.names, self.edges))

    def __repr__(self):
        return f"CompetitionNetwork(n={self.n}, edges={len(self.edges)})"


class SimpleDigraph:
    """Parallel edges collapsed, rounds dropped; substrate for distance metrics."""

    __slots__ = ("names", "n", "out_adj", "in_adj")

    def __init__(self, names: tuple[str, ...], out_adj):
        self.names = tuple(names)
        self.n = len(self.names)
        self.out_adj = tuple(frozenset(a) for a in out_adj)
        in_adj = [set() for _ in range(self.n)]
        for u, nbrs in enumerate(self.out_adj):
            for v in nbrs:
                in_adj[v].add(u)
        self.in_adj = tuple(frozenset(a) for a in in_adj)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(u, v) for u, nbrs in enumerate(self.out_adj) for v in nbrs}

    def __eq__(self, other):
        if not isinstance(other, SimpleDigraph):
            return NotImplemented
        return self.names == other.names and self.out_adj == other.out_adj

    def __hash__(self):
        return hash((self.names, self.out_adj))


def build_network(manifest: SeasonManifest, up_to_round: int | None = None) -> CompetitionNetwork:
    """Build the vote network from a manifest, optionally truncated to early rounds.

    The node set is the full roster, isolated players included.  The round
    filter is inclusive: ``up_to_round=t`` keeps every vote with round <= t.
    """
    if up_to_round is not None and up_to_round < 1:
        raise ValueError("up_to_round must be a positive integer")
    ids = {p.name: i for i, p in enumerate(manifest.players)}
    edges = [
        (ids[v.voter], ids[v.target], v.round)
        for v in manifest.votes
        if up_to_round is None or v.round <= up_to_round
    ]
    return CompetitionNetwork(manifest.players, edges)


def simple_projection(net: CompetitionNetwork) -> SimpleDigraph:
    return SimpleDigraph(net.names, net.out_sets)


def reverse(net: CompetitionNetwork) -> CompetitionNetwork:
    """Flip every edge, preserving multiplicities and rounds."""
    return CompetitionNetwork(net.players, [(d, s, r) for s, d, r in net.edges])


# ---------------------------------------------------------------------------
# Export formats.  Ordering is fixed (nodes by index, edges by
# (round, source, target)) so identical networks serialize identically.

def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_edge_csv(net: CompetitionNetwork) -> str:
    lines = ["round,voter,target"]
    for src, dst, rnd in net.edges:
        lines.append(f"{rnd},{net.names[src]},{net.names[dst]}")
    return "\n".join(lines) + "\n"


def to_dot(net: CompetitionNetwork) -> str:
    lines = ["digraph competition {"]
    for i, p in enumerate(net.players):
        attrs = [f'label="{_dot_escape(p.name)}"']
        if p.tribe is not None:
            attrs.append(f'tribe="{_dot_escape(p.tribe)}"')
        attrs.append(f'winner="{str(p.is_winner).lower()}"')
        attrs.append(f'finalist="{str(p.is_finalist).lower()}"')
        lines.append(f"  n{i} [{' '.join(attrs)}];")
    for src, dst, rnd in net.edges:
        lines.append(f"  n{src} -> n{dst} [round={rnd}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _xml_escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def to_graphml(net: CompetitionNetwork) -> str:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="d_tribe" for="node" attr.name="tribe" attr.type="string"/>',
        '  <key id="d_winner" for="node" attr.name="winner" attr.type="boolean"/>',
        '  <key id="d_finalist" for="node" attr.name="finalist" attr.type="boolean"/>',
        '  <key id="d_round" for="edge" attr.name="round" attr.type="int"/>',
        '  <graph id="G" edgedefault="directed">',
    ]
    for i, p in enumerate(net.players):
        out.append(f'    <node id="n{i}">')
        if p.tribe is not None:
            out.append(f'      <data key="d_tribe">{_xml_escape(p.tribe)}</data>')
        out.append(f'      <data key="d_winner">{str(p.is_winner).lower()}</data>')
        out.append(f'      <data key="d_finalist">{str(p.is_finalist).lower()}</data>')
        out.append("    </node>")
    for k, (src, dst, rnd) in enumerate(net.edges):
        out.append(f'    <edge id="e{k}" source="n{src}" target="n{dst}">')
        out.append(f'      <data key="d_round">{rnd}</data>')
        out.append("    </edge>")
    out.append("  </graph>")
    out.append("</graphml>")
    return "\n".join(out) + "\n"
