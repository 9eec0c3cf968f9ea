from __future__ import annotations

import json
from pathlib import Path

import pytest

from erdos_rogers.construct import graph_from_dict

FIXTURES = Path(__file__).parent / "fixtures"


def q2_fixture_dict() -> dict:
    """14 vertices, one K5 of type Q2 on 0..4 plus a K_{3,3,3} on 5..13.

    Two 3-member colours give the triangles {0,1,4} and {2,3,4}; four
    two-member colours supply the remaining pairs 02, 03, 12, 13. The
    tripartite block has no K4, so it cannot add a K5.
    """
    classes = [
        {"members": [0, 1, 4], "parts": [1, 2, 3]},
        {"members": [2, 3, 4], "parts": [1, 2, 3]},
        {"members": [0, 2], "parts": [1, 2]},
        {"members": [0, 3], "parts": [1, 2]},
        {"members": [1, 2], "parts": [1, 2]},
        {"members": [1, 3], "parts": [1, 2]},
        {"members": list(range(5, 14)), "parts": [1, 1, 1, 2, 2, 2, 3, 3, 3]},
    ]
    return {"n": 14, "s": 3, "t": 5, "stage": "G0", "classes": classes}


@pytest.fixture
def q2_g0():
    return graph_from_dict(q2_fixture_dict())


@pytest.fixture(scope="session")
def smoke_config() -> dict:
    return json.loads((FIXTURES / "smoke.json").read_text())
