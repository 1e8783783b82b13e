"""Compressed static string dictionaries with binary-decomposition front coding."""

from .baseline import PfcDictionary
from .core import BuildConfig, Corpus, CorpusError, Dictionary, build, build_family
from .io import deserialize, ingest, load, save, serialize

__all__ = [
    "BuildConfig", "Corpus", "CorpusError", "Dictionary", "PfcDictionary",
    "build", "build_family", "deserialize", "ingest", "load", "save", "serialize",
]
