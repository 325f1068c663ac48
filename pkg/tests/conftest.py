"""Shared fixtures: synthetic corpora built once per session."""

from __future__ import annotations

import pytest

from crosshunt import synth
from crosshunt.bucketizer import BucketMap, CorpusBuckets
from crosshunt.graph_model import NodeKind


@pytest.fixture(scope="session")
def mini():
    """(corpus, cluster truth) for the ten-label subject corpus."""
    return synth.mini_label_corpus()


@pytest.fixture(scope="session")
def day2():
    """(corpus, per-graph attack truth) for the small hunt scenario."""
    return synth.day2_corpus()


@pytest.fixture(scope="session")
def demo_corpus():
    return synth.demo_pair()


@pytest.fixture(scope="session")
def tiny_family():
    return synth.tiny_graph_family(count=12)


def hand_buckets(subject: dict, object_: dict) -> CorpusBuckets:
    """Buckets built directly from assignment dicts (no hashing involved)."""
    return CorpusBuckets(
        {
            NodeKind.SUBJECT: BucketMap(
                NodeKind.SUBJECT, dict(subject), 0.6, 128, 42, "hand"
            ),
            NodeKind.OBJECT: BucketMap(
                NodeKind.OBJECT, dict(object_), 0.6, 128, 42, "hand"
            ),
        }
    )
