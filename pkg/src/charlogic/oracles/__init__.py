"""Semantic judges: tri-valued conditions, NLI scoring, preference."""

from .condition import (
    VERBALIZERS,
    ConditionVerdict,
    LlmConditionOracle,
    RemoteConditionOracle,
    TableConditionOracle,
)
from .nli import (
    RELATION_SCORE,
    LlmNliJudge,
    NliRelation,
    NliVerdict,
    TableNliJudge,
    nli_judge,
    text_hash,
)
from .preference import (
    LlmPreferenceJudge,
    PreferenceVerdict,
    ScriptedPreferenceJudge,
    preference_judge,
)
from .distill import export_distillation_data, records_from_eval

__all__ = [
    "VERBALIZERS", "ConditionVerdict", "LlmConditionOracle",
    "RemoteConditionOracle", "TableConditionOracle",
    "RELATION_SCORE", "LlmNliJudge", "NliRelation", "NliVerdict",
    "TableNliJudge", "nli_judge", "text_hash",
    "LlmPreferenceJudge", "PreferenceVerdict", "ScriptedPreferenceJudge",
    "preference_judge",
    "export_distillation_data", "records_from_eval",
]
