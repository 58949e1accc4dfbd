"""Profile segmentation and LLM codification into programs."""

from .segment import (
    Granularity, Profile, Segment, load_profile, segment_profile,
    split_sentences,
)
from .codify import (
    CodifiedSegment, CodifyRun, codify_profile, codify_segment,
    extract_code_block, rag_fallback_program,
)

__all__ = [
    "Granularity", "Profile", "Segment", "load_profile", "segment_profile",
    "split_sentences",
    "CodifiedSegment", "CodifyRun", "codify_profile", "codify_segment",
    "extract_code_block", "rag_fallback_program",
]
