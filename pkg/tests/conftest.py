import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from carbonpairs import Catalog, load_catalog, default_catalog_path

SHIPPED_KG = [17, 40, 40, 45, 45, 75, 89, 100, 200, 239, 270, 300, 400, 449, 800, 2300, 3300, 9000]


def write_catalog_file(path: Path, kg_values, titles=None) -> Path:
    """Write a minimal valid catalog document with the given footprints."""
    records = [
        {
            "id": idx,
            "title": titles[idx - 1] if titles else f"action {idx}",
            "description": f"assumptions for action {idx}",
            "kg_co2e": kg,
        }
        for idx, kg in enumerate(kg_values, start=1)
    ]
    path.write_text(json.dumps(records), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def shipped_catalog() -> Catalog:
    return load_catalog(default_catalog_path())


@pytest.fixture
def catalog_file(tmp_path):
    """Factory fixture: build a catalog file from a list of kg values."""

    def _make(kg_values, titles=None) -> Path:
        return write_catalog_file(tmp_path / f"catalog_{len(kg_values)}.json", kg_values, titles)

    return _make


def random_triplets(rng: np.random.Generator, m: int, n: int) -> list[tuple[int, int, float]]:
    """Random valid comparisons: distinct ids, lognormal positive ratios."""
    out = []
    for _ in range(n):
        i, j = rng.choice(np.arange(1, m + 1), size=2, replace=False)
        out.append((int(i), int(j), float(np.exp(rng.normal(0.0, 1.5)))))
    return out
