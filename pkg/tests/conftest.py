import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

DATA = ROOT / "chanmetric" / "data"
GOLDEN = ROOT / "tests" / "golden"


@pytest.fixture
def data_file():
    def _path(name: str) -> str:
        return str(DATA / name)

    return _path


@pytest.fixture
def golden():
    def _read(name: str) -> str:
        return (GOLDEN / name).read_text(encoding="utf-8")

    return _read
