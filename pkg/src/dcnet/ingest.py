"""Season vote-log ingestion: parsing, validation, and serialization.

A season file is a UTF-8 JSON document with the top-level fields
``season_id``, ``show``, ``players``, ``votes``, and (optionally)
``alliances``.  Parsing is strict: unknown fields, dangling references,
self-votes, duplicate names, and winner-count violations are all rejected
with a dedicated error class so transcription mistakes fail loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class SeasonError(ValueError):
    """Base class for season-file problems."""


class SeasonSyntaxError(SeasonError):
    """The document is not well-formed JSON."""


class SeasonSchemaError(SeasonError):
    """A required field is missing, an unknown field is present, or a type is wrong."""


class SeasonReferenceError(SeasonError):
    """A vote or alliance names a player that was never declared."""


class SeasonSemanticError(SeasonError):
    """The document is structurally valid but violates a season invariant."""


@dataclass(frozen=True)
class PlayerRecord:
    name: str
    tribe: str | None = None
    elimination_order: int | None = None
    is_winner: bool = False
    is_finalist: bool = False


@dataclass(frozen=True)
class VoteRecord:
    round: int
    voter: str
    target: str


@dataclass(frozen=True)
class AllianceDeclaration:
    label: str
    members: frozenset[str]


@dataclass(frozen=True)
class SeasonManifest:
    season_id: str
    show: str
    players: tuple[PlayerRecord, ...]
    votes: tuple[VoteRecord, ...]
    alliances: tuple[AllianceDeclaration, ...] = ()

    def player_names(self) -> list[str]:
        return [p.name for p in self.players]

    def winner(self) -> PlayerRecord:
        return next(p for p in self.players if p.is_winner)

    def max_round(self) -> int:
        return max((v.round for v in self.votes), default=0)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    season_id: str
    message: str


_TOP_FIELDS = {"season_id", "show", "players", "votes", "alliances"}
_PLAYER_FIELDS = {"name", "tribe", "elimination_order", "is_winner", "is_finalist"}
_VOTE_FIELDS = {"round", "voter", "target"}
_ALLIANCE_FIELDS = {"label", "members"}


def _require(obj: dict, field: str, where: str):
    if field not in obj:
        raise SeasonSchemaError(f"{where}: missing required field {field!r}")
    return obj[field]


def _check_unknown(obj: dict, allowed: set[str], where: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise SeasonSchemaError(f"{where}: unknown field(s) {sorted(extra)!r}")


def _as_str(value, where: str) -> str:
    if not isinstance(value, str):
        raise SeasonSchemaError(f"{where}: expected a string, got {type(value).__name__}")
    return value


def _as_pos_int(value, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise SeasonSchemaError(f"{where}: expected a positive integer, got {value!r}")
    return value


def _as_bool(value, where: str) -> bool:
    if not isinstance(value, bool):
        raise SeasonSchemaError(f"{where}: expected a boolean, got {value!r}")
    return value


def _parse_player(obj, idx: int) -> PlayerRecord:
    where = f"players[{idx}]"
    if not isinstance(obj, dict):
        raise SeasonSchemaError(f"{where}: expected an object")
    _check_unknown(obj, _PLAYER_FIELDS, where)
    name = _as_str(_require(obj, "name", where), f"{where}.name").strip()
    if not name:
        raise SeasonSchemaError(f"{where}: player name must be non-empty")
    tribe = obj.get("tribe")
    if tribe is not None:
        tribe = _as_str(tribe, f"{where}.tribe")
    elim = obj.get("elimination_order")
    if elim is not None:
        elim = _as_pos_int(elim, f"{where}.elimination_order")
    is_winner = obj.get("is_winner", False)
    if is_winner is not None:
        is_winner = _as_bool(is_winner, f"{where}.is_winner")
    is_finalist = obj.get("is_finalist", False)
    if is_finalist is not None:
        is_finalist = _as_bool(is_finalist, f"{where}.is_finalist")
    return PlayerRecord(name, tribe, elim, bool(is_winner), bool(is_finalist))


def parse_season(data: bytes | str) -> SeasonManifest:
    """Parse and fully validate one season document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SeasonSyntaxError(f"not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SeasonSyntaxError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SeasonSchemaError("top level must be a JSON object")
    _check_unknown(doc, _TOP_FIELDS, "season")

    season_id = _as_str(_require(doc, "season_id", "season"), "season_id")
    show = _as_str(_require(doc, "show", "season"), "show")

    raw_players = _require(doc, "players", "season")
    if not isinstance(raw_players, list):
        raise SeasonSchemaError("players: expected a list")
    players = tuple(_parse_player(p, i) for i, p in enumerate(raw_players))

    names = [p.name for p in players]
    seen: set[str] = set()
    for name in names:
        if name in seen:
            raise SeasonSemanticError(f"duplicate player name {name!r}")
        seen.add(name)

    winners = [p for p in players if p.is_winner]
    if len(winners) != 1:
        raise SeasonSemanticError(f"expected exactly one winner, found {len(winners)}")
    if not winners[0].is_finalist:
        raise SeasonSemanticError(f"winner {winners[0].name!r} must be flagged as a finalist")

    raw_votes = _require(doc, "votes", "season")
    if not isinstance(raw_votes, list):
        raise SeasonSchemaError("votes: expected a list")
    votes = []
    for i, obj in enumerate(raw_votes):
        where = f"votes[{i}]"
        if not isinstance(obj, dict):
            raise SeasonSchemaError(f"{where}: expected an object")
        _check_unknown(obj, _VOTE_FIELDS, where)
        rnd = _as_pos_int(_require(obj, "round", where), f"{where}.round")
        voter = _as_str(_require(obj, "voter", where), f"{where}.voter").strip()
        target = _as_str(_require(obj, "target", where), f"{where}.target").strip()
        for who, role in ((voter, "voter"), (target, "target")):
            if who not in seen:
                raise SeasonReferenceError(f"{where}: {role} {who!r} is not a declared player")
        if voter == target:
            raise SeasonSemanticError(f"{where}: self-vote by {voter!r}")
        votes.append(VoteRecord(rnd, voter, target))

    raw_alliances = doc.get("alliances") or []
    if not isinstance(raw_alliances, list):
        raise SeasonSchemaError("alliances: expected a list")
    alliances = []
    for i, obj in enumerate(raw_alliances):
        where = f"alliances[{i}]"
        if not isinstance(obj, dict):
            raise SeasonSchemaError(f"{where}: expected an object")
        _check_unknown(obj, _ALLIANCE_FIELDS, where)
        label = _as_str(_require(obj, "label", where), f"{where}.label")
        raw_members = _require(obj, "members", where)
        if not isinstance(raw_members, list):
            raise SeasonSchemaError(f"{where}.members: expected a list")
        members = frozenset(_as_str(m, f"{where}.members").strip() for m in raw_members)
        unknown = members - seen
        if unknown:
            raise SeasonReferenceError(f"{where}: undeclared member(s) {sorted(unknown)!r}")
        if len(members) < 2:
            raise SeasonSemanticError(f"{where}: alliance needs at least 2 distinct members")
        alliances.append(AllianceDeclaration(label, members))

    return SeasonManifest(season_id, show, players, tuple(votes), tuple(alliances))


def serialize_season(manifest: SeasonManifest) -> str:
    """Render a manifest back to the canonical JSON season format."""
    doc = {
        "season_id": manifest.season_id,
        "show": manifest.show,
        "players": [
            {
                "name": p.name,
                "tribe": p.tribe,
                "elimination_order": p.elimination_order,
                "is_winner": p.is_winner,
                "is_finalist": p.is_finalist,
            }
            for p in manifest.players
        ],
        "votes": [
            {"round": v.round, "voter": v.voter, "target": v.target} for v in manifest.votes
        ],
        "alliances": [
            {"label": a.label, "members": sorted(a.members)} for a in manifest.alliances
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_season(path) -> SeasonManifest:
    """Read and parse a season file from disk."""
    with open(path, "rb") as fh:
        return parse_season(fh.read())


def validate_cross_season(manifests: list[SeasonManifest]) -> list[Diagnostic]:
    """Corpus-level checks; returns diagnostics instead of raising."""
    out: list[Diagnostic] = []
    seen: set[str] = set()
    for m in manifests:
        if m.season_id in seen:
            out.append(Diagnostic("error", m.season_id, "duplicate season_id"))
        seen.add(m.season_id)
        if not m.votes:
            out.append(Diagnostic("warning", m.season_id, "season has no votes"))
    return out
