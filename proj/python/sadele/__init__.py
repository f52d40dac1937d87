"""Lexical simplification for Turkish."""

import json as _json

from ._sadele import (
    Pipeline,
    SadeleError,
    bleu,
    casefold,
    sari,
    sari_corpus,
    tokenize,
)

__all__ = [
    "Pipeline",
    "SadeleError",
    "bleu",
    "casefold",
    "sari",
    "sari_corpus",
    "simplify_with_trace",
    "tokenize",
]


def simplify_with_trace(pipeline, text, strict=False):
    """Return the simplified sentence and its trace record as a dict."""
    output, record = pipeline.simplify_traced(text, strict)
    return output, _json.loads(record)
