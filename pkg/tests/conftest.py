import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lexplain import build_sketches, read_vertical  # noqa: E402
from lexplain.grammar import load_bundled  # noqa: E402
from lexplain.synthetic import synthetic_corpus  # noqa: E402
from lexplain.thesaurus import Thesaurus  # noqa: E402

SAMPLE_DIR = Path(__file__).resolve().parents[1] / "src" / "lexplain" / "data" / "sample"
DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def sample_corpus():
    return read_vertical(SAMPLE_DIR / "sample.vert")


@pytest.fixture(scope="session")
def grammar():
    return load_bundled()


@pytest.fixture(scope="session")
def sample_index(sample_corpus, grammar):
    return build_sketches(sample_corpus, grammar)


@pytest.fixture(scope="session")
def sample_thesaurus(sample_index):
    return Thesaurus.for_index(sample_index)


@pytest.fixture(scope="session")
def synth_corpus():
    return synthetic_corpus()


@pytest.fixture(scope="session")
def synth_grammar():
    return load_bundled("synthetic.sg")


@pytest.fixture(scope="session")
def synth_index(synth_corpus, synth_grammar):
    return build_sketches(synth_corpus, synth_grammar)
