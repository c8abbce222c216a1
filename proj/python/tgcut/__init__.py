"""Template-driven graph-cut segmentation of tubular structures."""

import json

from ._tgcut import (
    GraphParams,
    Mask,
    Session,
    TgcutError,
    Volume,
    dsc,
    generate_phantom,
    hausdorff,
    load_nrrd,
    read_nrrd,
    replay,
    segment_one_slice,
    summarize,
    to_mask,
    volume_stats,
)

__all__ = [
    "GraphParams",
    "Mask",
    "Session",
    "TgcutError",
    "Volume",
    "dsc",
    "event_log",
    "generate_phantom",
    "hausdorff",
    "load_nrrd",
    "read_nrrd",
    "replay",
    "segment_one_slice",
    "summarize",
    "to_mask",
    "volume_stats",
]


def event_log(session):
    """The session's replay document as a dict."""
    return json.loads(session.event_log_json)
