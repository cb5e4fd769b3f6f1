"""Frozen cofactor corpus for experiments and acceptance checks.

The corpus lives in a versioned JSON file shipped with the package, so
experiment outputs stay reproducible across installs. Entries range
from the trivial constant to a degree-8 minimax surrogate of a
non-smooth profile.
"""

from __future__ import annotations

import json
from collections import OrderedDict
from importlib import resources
from typing import Dict

from .polyfun import Polynomial

__all__ = ["CORPUS_VERSION", "standard_corpus", "corpus_entry"]

CORPUS_VERSION = 1


def _load_raw() -> dict:
    path = resources.files("bernseries").joinpath("data/corpus.json")
    raw = json.loads(path.read_text(encoding="utf-8"))
    if raw.get("version") != CORPUS_VERSION:
        raise RuntimeError(
            f"corpus file version {raw.get('version')!r} does not match "
            f"the supported version {CORPUS_VERSION}"
        )
    return raw


def standard_corpus() -> "OrderedDict[str, Polynomial]":
    """Name-to-cofactor map in the file's order."""
    raw = _load_raw()
    out: "OrderedDict[str, Polynomial]" = OrderedDict()
    for entry in raw["entries"]:
        out[entry["name"]] = Polynomial(entry["coeffs"])
    return out


def corpus_entry(name: str) -> Polynomial:
    """Single corpus cofactor by name."""
    corpus = standard_corpus()
    try:
        return corpus[name]
    except KeyError:
        known = ", ".join(corpus)
        raise KeyError(f"unknown corpus entry {name!r}; known: {known}") from None
