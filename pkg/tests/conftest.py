import shutil
from pathlib import Path

import pytest

from charlogic.evolver.store import VersionStore
from charlogic.llm.client import LlmClient
from charlogic.llm.providers import MockProvider
from charlogic.oracles.condition import TableConditionOracle
from charlogic.oracles.nli import TableNliJudge

DATA = Path(__file__).parent / "data"
MINIVERSE = DATA / "miniverse"
GOLDEN = DATA / "golden"


@pytest.fixture
def miniverse_pack() -> Path:
    return MINIVERSE / "pack.json"


@pytest.fixture
def miniverse_world():
    """Factory for a fresh (llm, oracle, nli) triple. Fresh means a new
    in-memory completion cache, so forward-pass counts are reproducible."""
    def make():
        llm = LlmClient(MockProvider.from_file(MINIVERSE / "mock_llm.json"))
        oracle = TableConditionOracle.from_file(
            MINIVERSE / "condition_table.json")
        nli = TableNliJudge.from_file(MINIVERSE / "nli_table.json")
        return llm, oracle, nli
    return make


@pytest.fixture
def miniverse_stores(tmp_path):
    """Mutable copy of the shipped profile stores (evolving runs commit
    new versions into the store directory)."""
    root = tmp_path / "profiles"
    shutil.copytree(MINIVERSE / "profiles", root)
    return {name: VersionStore(root, name)
            for name in ("Ayla", "Boro", "Cyra")}, root
