"""Program interpreter: tri-valued guards, seeded randomness, full trace."""

from .types import (
    BranchTaken,
    ChanceDrawn,
    Checked,
    ChoiceMade,
    RunSeed,
    Scene,
    TraceEvent,
    Tri,
    Triggered,
    TriggeredStatement,
)
from .seeds import segment_stream, substream_seed
from .trace import event_from_json, event_to_json, events_to_json
from .interpreter import eval_expr, execute_profile, execute_segment

__all__ = [
    "BranchTaken", "ChanceDrawn", "Checked", "ChoiceMade", "RunSeed",
    "Scene", "TraceEvent", "Tri", "Triggered", "TriggeredStatement",
    "segment_stream", "substream_seed",
    "event_from_json", "event_to_json", "events_to_json",
    "eval_expr", "execute_profile", "execute_segment",
]
