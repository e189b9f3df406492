from __future__ import annotations

import sys

import pytest
from hypothesis import strategies as st

from manycolour.core import EdgeColouring


@st.composite
def colourings(draw, n_min=1, n_max=7, r_min=1, r_max=5):
    n = draw(st.integers(n_min, n_max))
    r = draw(st.integers(r_min, r_max))
    cols = draw(st.lists(st.integers(0, r - 1), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    return EdgeColouring(n, r, tuple(cols))


@pytest.fixture(autouse=True)
def _run_log(tmp_path, monkeypatch):
    # keep CLI manifests out of the working tree
    monkeypatch.setenv("RUN_LOG", str(tmp_path / "run_log.jsonl"))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
