from pathlib import Path

import pytest

from dxrec.formats import parse_matrix
from dxrec.recommend import Dataset

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

TABLE_CSV = (DATA_DIR / "demo_matrix.csv").read_text("utf-8")

# the demo matrix, transcribed for direct row-level assertions
TABLE_SYMPTOMS = ["S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9", "S10"]
TABLE_ROWS = [
    ("D1", [1, 1, 1, 0, 1, 1, 1, 1, 0, 1]),
    ("D1", [1, 1, 0, 0, 1, 1, 1, 1, 1, 0]),
    ("D1", [1, 0, 0, 0, 1, 1, 1, 1, 1, 0]),
    ("D1", [0, 0, 0, 0, 1, 1, 1, 0, 0, 0]),
    ("D1", [0, 0, 0, 0, 1, 1, 0, 1, 0, 0]),
    ("D2", [0, 0, 1, 1, 1, 1, 1, 1, 0, 1]),
    ("D2", [0, 0, 0, 0, 0, 1, 1, 1, 0, 0]),
    ("D2", [0, 0, 1, 0, 1, 1, 1, 1, 0, 0]),
    ("D3", [1, 0, 0, 1, 1, 1, 1, 1, 1, 1]),
    ("D3", [0, 0, 0, 0, 1, 1, 1, 0, 0, 0]),
    ("D4", [1, 0, 0, 0, 1, 0, 0, 1, 0, 1]),
]


def table_rows_as_sets():
    return [
        (label, frozenset(s for s, b in zip(TABLE_SYMPTOMS, bits) if b))
        for label, bits in TABLE_ROWS
    ]


@pytest.fixture(scope="session")
def demo_csv_path() -> Path:
    return DATA_DIR / "demo_matrix.csv"


@pytest.fixture(scope="session")
def demo_spec_paths() -> tuple[Path, Path]:
    return DATA_DIR / "demo_spec_a.json", DATA_DIR / "demo_spec_b.json"


@pytest.fixture()
def demo_matrix():
    matrix, warnings = parse_matrix(TABLE_CSV)
    assert warnings == ()
    return matrix


@pytest.fixture()
def demo_dataset(demo_matrix) -> Dataset:
    return Dataset.from_matrix("demo", demo_matrix)
