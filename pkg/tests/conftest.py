import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from raidgraph.graph import generate, random_connected  # noqa: E402


def family_graphs(max_n=8):
    out = []
    for size in range(3, max_n + 1):
        out.append((f"cycle{size}", generate("cycle", size)))
    for size in range(2, max_n + 1):
        out.append((f"path{size}", generate("path", size)))
        out.append((f"complete{size}", generate("complete", size)))
    for size in range(1, max_n):
        out.append((f"star{size}", generate("star", size)))
    return out


@pytest.fixture(scope="session")
def families():
    return family_graphs()


@pytest.fixture(scope="session")
def random_small():
    """Seeded connected graphs with 7..12 vertices."""
    return [random_connected(n, 0.3, seed) for n in range(7, 13) for seed in range(6)]
