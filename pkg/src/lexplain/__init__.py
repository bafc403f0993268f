"""Word-meaning explanations from word sketches and a distributional thesaurus."""

from .corpus import Corpus, ingest_vertical, load_index, read_vertical
from .cql import find_matches, parse_query
from .explain import compose, render_structured, render_text
from .grammar import Grammar, parse_grammar
from .sketches import SketchIndex, build_sketches, log_dice
from .thesaurus import Thesaurus, similar

__version__ = "0.1.0"

__all__ = [
    "Corpus", "Grammar", "SketchIndex", "Thesaurus", "build_sketches", "compose",
    "find_matches", "ingest_vertical", "load_index", "log_dice", "parse_grammar",
    "parse_query", "read_vertical", "render_structured", "render_text", "similar",
]
