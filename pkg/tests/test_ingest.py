import json

import pytest
from hypothesis import given, strategies as st

from dcnet.ingest import (
    SeasonReferenceError,
    SeasonSchemaError,
    SeasonSemanticError,
    SeasonSyntaxError,
    parse_season,
    serialize_season,
    validate_cross_season,
)
from conftest import make_season


def minimal_doc():
    return {
        "season_id": "s1",
        "show": "demo",
        "players": [
            {"name": "a", "is_winner": True, "is_finalist": True},
            {"name": "b"},
        ],
        "votes": [],
        "alliances": [],
    }


def test_minimal_document_parses():
    m = parse_season(json.dumps(minimal_doc()))
    assert m.season_id == "s1"
    assert [p.name for p in m.players] == ["a", "b"]
    assert m.votes == ()
    assert m.winner().name == "a"


def test_names_are_trimmed():
    doc = minimal_doc()
    doc["players"][1]["name"] = "  b  "
    doc["votes"] = [{"round": 1, "voter": " b ", "target": "a"}]
    m = parse_season(json.dumps(doc))
    assert m.players[1].name == "b"
    assert m.votes[0].voter == "b"


def test_malformed_json_is_syntax_error():
    with pytest.raises(SeasonSyntaxError):
        parse_season(b"{not json")


def test_invalid_utf8_is_syntax_error():
    with pytest.raises(SeasonSyntaxError):
        parse_season(b"\xff\xfe{}")


@pytest.mark.parametrize("drop", ["season_id", "show", "players", "votes"])
def test_missing_required_field(drop):
    doc = minimal_doc()
    del doc[drop]
    with pytest.raises(SeasonSchemaError):
        parse_season(json.dumps(doc))


def test_unknown_top_level_field_rejected():
    doc = minimal_doc()
    doc["extra"] = 1
    with pytest.raises(SeasonSchemaError):
        parse_season(json.dumps(doc))


def test_unknown_player_field_rejected():
    doc = minimal_doc()
    doc["players"][0]["nickname"] = "x"
    with pytest.raises(SeasonSchemaError):
        parse_season(json.dumps(doc))


def test_self_vote_rejected():
    doc = minimal_doc()
    doc["votes"] = [{"round": 1, "voter": "a", "target": "a"}]
    with pytest.raises(SeasonSemanticError):
        parse_season(json.dumps(doc))


def test_undeclared_voter_rejected():
    doc = minimal_doc()
    doc["votes"] = [{"round": 1, "voter": "zz", "target": "a"}]
    with pytest.raises(SeasonReferenceError):
        parse_season(json.dumps(doc))


def test_duplicate_player_rejected():
    doc = minimal_doc()
    doc["players"].append({"name": "a"})
    with pytest.raises(SeasonSemanticError):
        parse_season(json.dumps(doc))


@pytest.mark.parametrize("winners", [[], ["a", "b"]])
def test_winner_count_must_be_one(winners):
    doc = minimal_doc()
    for p in doc["players"]:
        p["is_winner"] = p["name"] in winners
        p["is_finalist"] = p["is_winner"]
    with pytest.raises(SeasonSemanticError):
        parse_season(json.dumps(doc))


def test_winner_must_be_finalist():
    doc = minimal_doc()
    doc["players"][0]["is_finalist"] = False
    with pytest.raises(SeasonSemanticError):
        parse_season(json.dumps(doc))


def test_nonpositive_round_rejected():
    doc = minimal_doc()
    doc["votes"] = [{"round": 0, "voter": "a", "target": "b"}]
    with pytest.raises(SeasonSchemaError):
        parse_season(json.dumps(doc))


def test_alliance_member_must_exist():
    doc = minimal_doc()
    doc["alliances"] = [{"label": "x", "members": ["a", "zz"]}]
    with pytest.raises(SeasonReferenceError):
        parse_season(json.dumps(doc))


def test_alliance_needs_two_members():
    doc = minimal_doc()
    doc["alliances"] = [{"label": "x", "members": ["a"]}]
    with pytest.raises(SeasonSemanticError):
        parse_season(json.dumps(doc))


def test_absent_alliances_field_means_empty():
    doc = minimal_doc()
    del doc["alliances"]
    assert parse_season(json.dumps(doc)).alliances == ()


# -- round-trip property ------------------------------------------------------

names_st = st.lists(
    st.text(alphabet="abcdefghij", min_size=1, max_size=4),
    min_size=2, max_size=8, unique=True,
)


@st.composite
def season_docs(draw):
    names = draw(names_st)
    n_votes = draw(st.integers(min_value=0, max_value=20))
    votes = []
    for _ in range(n_votes):
        voter, target = draw(st.sampled_from(
            [(a, b) for a in names for b in names if a != b]))
        votes.append((draw(st.integers(1, 6)), voter, target))
    alliances = []
    if len(names) >= 3 and draw(st.booleans()):
        alliances.append(("team", names[:3]))
    return make_season("rt", players=names, votes=votes, alliances=alliances)


@given(season_docs())
def test_round_trip(manifest):
    again = parse_season(serialize_season(manifest))
    assert again == manifest
    # every vote resolves both endpoints
    declared = set(again.player_names())
    for v in again.votes:
        assert v.voter in declared and v.target in declared


# -- cross-season validation --------------------------------------------------

def test_validate_empty_corpus():
    assert validate_cross_season([]) == []


def test_validate_duplicate_ids_and_empty_votes():
    a = make_season("S1", players=["a", "b"], votes=[(1, "a", "b")])
    b = make_season("S1", players=["a", "b"])
    diags = validate_cross_season([a, b])
    assert [d.severity for d in diags] == ["error", "warning"]
    assert diags[0].message == "duplicate season_id"
