import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dcnet.ingest import parse_season

DATA_DIR = Path(__file__).resolve().parents[1] / "data" / "seasons"


def make_season(season_id="fixture", show="fixture", players=None, votes=(),
                alliances=(), winner=None, finalists=()):
    """Quick season-document builder for tests; returns the parsed manifest."""
    players = list(players or [])
    winner = winner or players[0]
    finalists = set(finalists) | {winner}
    doc = {
        "season_id": season_id,
        "show": show,
        "players": [
            {"name": name, "is_winner": name == winner, "is_finalist": name in finalists}
            for name in players
        ],
        "votes": [{"round": r, "voter": a, "target": b} for r, a, b in votes],
        "alliances": [{"label": label, "members": list(members)} for label, members in alliances],
    }
    return parse_season(json.dumps(doc))


F1_VOTES = [
    (1, "a", "c"), (1, "b", "c"), (1, "c", "a"), (1, "d", "a"),
    (2, "a", "d"), (2, "b", "d"), (2, "d", "b"),
]

F2_VOTES = [(1, "a", "b"), (2, "a", "b"), (1, "b", "a")]


@pytest.fixture
def f1_manifest():
    return make_season("f1", players=list("abcd"), votes=F1_VOTES,
                       alliances=[("ab", ["a", "b"])], finalists=["b"])


@pytest.fixture
def f2_manifest():
    return make_season("f2", players=list("ab"), votes=F2_VOTES)


@pytest.fixture
def f1_net(f1_manifest):
    from dcnet.network import build_network
    return build_network(f1_manifest)


@pytest.fixture
def f2_net(f2_manifest):
    from dcnet.network import build_network
    return build_network(f2_manifest)


def load_fixture_season(name: str):
    from dcnet.ingest import load_season
    path = DATA_DIR / f"{name}.json"
    if not path.exists():
        pytest.fail(f"missing season fixture {path}")
    return load_season(path)
