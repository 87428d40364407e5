"""Python access to the newslens core library and command line."""

import json

from . import _core
from ._core import (
    UndefinedCorrelation,
    bm25_scores,
    estimate_jaccard,
    minhash_signature,
    optimal_lsh_params,
    orientation_of,
    score_mention,
    shingle,
    tokenize,
    topic_subset,
)

__all__ = [
    "UndefinedCorrelation",
    "bm25_scores",
    "estimate_jaccard",
    "filter_linked",
    "minhash_signature",
    "optimal_lsh_params",
    "orientation_of",
    "run_cli",
    "score_mention",
    "shingle",
    "stability_check",
    "tokenize",
    "topic_subset",
    "validate_annotations",
]


def _jsonl(records):
    if isinstance(records, str):
        return records
    return "".join(json.dumps(r) + "\n" for r in records)


def validate_annotations(records):
    """Return (mentions, issues) for annotation JSONL text or a list of records."""
    lines, issues = _core.validate_annotations(_jsonl(records))
    return [json.loads(line) for line in lines], issues


def filter_linked(records, min_log_likelihood=-0.2):
    """Mentions whose link log-likelihood is strictly above the threshold."""
    return [json.loads(line) for line in _core.filter_linked(_jsonl(records), min_log_likelihood)]


def stability_check(records, top_k=1000, keep_fraction=0.5):
    """(pearson over mention counts, pearson over mean sentiment)."""
    return _core.stability_check(_jsonl(records), top_k, keep_fraction)


def run_cli(*args):
    """Run a CLI subcommand in-process; returns (exit_code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
