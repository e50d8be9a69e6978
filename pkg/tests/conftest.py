import json
from pathlib import Path

import pytest

from relsearch.corpus import load_annotated_corpus, parse_chemprot
from relsearch.engine import PipelineConfig, run_pipeline, SearchEngine

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus_manifest() -> dict:
    return json.loads((FIXTURES / "corpus_small.manifest.json").read_text())


@pytest.fixture(scope="session")
def chemprot_manifest() -> dict:
    return json.loads((FIXTURES / "chemprot_small.manifest.json").read_text())


@pytest.fixture(scope="session")
def annotated():
    return load_annotated_corpus(FIXTURES / "corpus_small.jsonl")


@pytest.fixture(scope="session")
def chemprot():
    return parse_chemprot(FIXTURES / "chemprot_small")


@pytest.fixture(scope="session")
def small_build():
    config = PipelineConfig(
        corpus=FIXTURES / "corpus_small.jsonl",
        classifier="oracle",
        gold=FIXTURES / "corpus_small.gold.tsv",
    )
    return run_pipeline(config)


@pytest.fixture(scope="session")
def small_index(small_build):
    return small_build[0]


@pytest.fixture(scope="session")
def engine(small_index) -> SearchEngine:
    return SearchEngine(small_index)
