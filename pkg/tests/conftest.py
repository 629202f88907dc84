import sys
from pathlib import Path

import pytest

# Ensure src directory is on sys.path for imports
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from local_occupancy.graph import Graph, cycle, generate  # noqa: E402


@pytest.fixture(autouse=True)
def reset_env(monkeypatch):
    """Reset environment variables before each test."""
    monkeypatch.setenv("LOCC_ENVIRONMENT", "test")
    monkeypatch.delenv("LOCC_OTEL_EXPORTER_OTLP_ENDPOINT", raising=False)


@pytest.fixture
def c5():
    return cycle(5)


@pytest.fixture
def k2():
    return Graph.from_edges(2, [(0, 1)])


@pytest.fixture
def petersen_graph():
    return generate("petersen()")


@pytest.fixture
def graph_file(tmp_path):
    """Write a graph in edge-list form and return its path."""

    def write(text: str, name: str = "g.txt") -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write
