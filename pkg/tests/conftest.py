import json
from pathlib import Path

import pytest

from directsum_tool import bipyramid
from generator_set import GeneratorSet
from toolkit_config import Config

INSTANCE_DIR = Path(__file__).resolve().parent.parent / "instances"
SCHEMA_PATH = Path(__file__).resolve().parent.parent / "schemas" / "analysis_report.schema.json"

PENTAGON = ((1, 0, 1), (0, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1))


@pytest.fixture
def numerical_469() -> GeneratorSet:
    return GeneratorSet(((4,), (6,), (9,)), name="4_6_9")


@pytest.fixture
def numerical_345() -> GeneratorSet:
    return GeneratorSet(((3,), (4,), (5,)), name="3_4_5")


@pytest.fixture
def bipyramid3() -> GeneratorSet:
    return bipyramid(3)


@pytest.fixture
def pentagon() -> GeneratorSet:
    return GeneratorSet(PENTAGON, name="pentagon")


@pytest.fixture
def instance_dir() -> Path:
    return INSTANCE_DIR


@pytest.fixture
def schema() -> dict:
    return json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))


@pytest.fixture
def fresh_config(monkeypatch):
    """修改环境变量后重新读取配置，测试结束时恢复"""

    def reload(**env) -> Config:
        for key, value in env.items():
            monkeypatch.setenv(key, str(value))
        return Config.reload()

    yield reload
    monkeypatch.undo()
    Config.reload()
