"""NLI judge: relation-to-score mapping, reflexivity, degradation."""

import pytest

from charlogic.engine.types import Scene
from charlogic.llm.client import LlmClient
from charlogic.llm.providers import MockProvider
from charlogic.oracles.nli import (LlmNliJudge, NliRelation, NliVerdict,
                                   RELATION_SCORE, TableNliJudge, nli_judge,
                                   text_hash)

REF = "Boro quotes the exact sum owed."
GOOD = "Boro reads the figure straight from his ledger and names it."
BAD = "Boro shrugs and says he has no idea what is owed."


def table_judge(entries):
    return TableNliJudge({
        text_hash(ref): {text_hash(resp): label for resp, label in rows}
        for ref, rows in entries.items()
    })


def test_score_mapping_is_fixed():
    assert RELATION_SCORE[NliRelation.ENTAILED] == 100
    assert RELATION_SCORE[NliRelation.NEUTRAL] == 50
    assert RELATION_SCORE[NliRelation.CONTRADICTED] == 0


def test_verdict_rejects_off_mapping_score():
    with pytest.raises(ValueError):
        NliVerdict(NliRelation.ENTAILED, 99)


@pytest.mark.parametrize("relation", list(NliRelation))
def test_verdict_of_builds_consistent_pair(relation):
    v = NliVerdict.of(relation)
    assert v.score == RELATION_SCORE[relation]


def test_table_lookup_by_hash():
    judge = table_judge({REF: [(GOOD, "entailed"), (BAD, "contradicted")]})
    assert judge.judge(REF, GOOD).score == 100
    assert judge.judge(REF, BAD).score == 0


def test_table_miss_degrades_to_neutral():
    judge = table_judge({REF: [(GOOD, "entailed")]})
    verdict = judge.judge(REF, "Something the table never saw.")
    assert verdict.relation is NliRelation.NEUTRAL
    assert verdict.score == 50


def test_identical_strings_skip_the_judge():
    judge = table_judge({})  # any lookup would come back neutral
    verdict = judge.judge(REF, REF)
    assert verdict.relation is NliRelation.ENTAILED


def test_empty_inputs_rejected():
    judge = table_judge({})
    with pytest.raises(ValueError):
        judge.judge("", GOOD)
    with pytest.raises(ValueError):
        judge.judge(REF, "")


def test_llm_judge_classifies():
    client = LlmClient(MockProvider([
        {"contains": GOOD, "completion": "entailed",
         "scores": {"entailed": -0.1, "neutral": -2.0, "contradicted": -5.0}},
        {"contains": BAD, "completion": "contradicted",
         "scores": {"contradicted": -0.2, "neutral": -1.0, "entailed": -4.0}},
    ]))
    judge = LlmNliJudge(client, model_name="mock")
    assert judge.judge(REF, GOOD).score == 100
    assert judge.judge(REF, BAD).score == 0


def test_llm_judge_unparseable_scores_neutral():
    client = LlmClient(MockProvider([
        {"contains": "", "completion": "hard to say"},
    ]))
    judge = LlmNliJudge(client, model_name="mock")
    assert judge.judge(REF, GOOD).relation is NliRelation.NEUTRAL


def test_llm_judge_scene_block_toggle():
    prompts = []

    class SpyProvider(MockProvider):
        def complete(self, prompt, **kwargs):
            prompts.append(prompt)
            return super().complete(prompt, **kwargs)

    scene = Scene(id="s", context="The ledger lies open on the counter.")
    entries = [{"contains": "", "completion": "neutral"}]
    with_scene = LlmNliJudge(LlmClient(SpyProvider(entries)),
                             model_name="mock", include_scene=True)
    with_scene.judge(REF, GOOD, scene)
    without = LlmNliJudge(LlmClient(SpyProvider(entries)),
                          model_name="mock", include_scene=False)
    without.judge(REF, GOOD, scene)
    assert scene.context in prompts[0]
    assert scene.context not in prompts[1]


def test_nli_judge_helper_delegates():
    judge = table_judge({REF: [(GOOD, "neutral")]})
    assert nli_judge(judge, REF, GOOD).score == 50
