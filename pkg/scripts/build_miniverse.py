"""Generate the miniverse fixture pack under tests/data/miniverse.

A tiny closed world: three characters, twelve scenes, scripted LLM
completions, and exact condition/NLI tables. Everything a benchmark run
touches is pinned, so runs are reproducible byte for byte and the
expected scores can be computed by hand:

    Ayla  (4 scenes, basic)     entailed/neutral/entailed/contradicted
                                -> mean 62.5
    Boro  (6 scenes, evolving)  two failures, two revisions
                                -> scores 100,100,0,100,50,100 = 75.0
    Cyra  (2 scenes, stochastic) one choice-of-3 and one chance(0.1)

The checked-in data is this script's output; rerun it after changing
anything here and commit the result.
"""

from __future__ import annotations

import json
import shutil
import sys
import tempfile
from pathlib import Path

from charlogic.bench.data import load_benchmark, save_scenes
from charlogic.bench.drivers import run_basic, run_evolving
from charlogic.engine.types import Scene
from charlogic.evolver.store import VersionStore
from charlogic.llm.client import GenerationConfig, LlmClient
from charlogic.llm.providers import MockProvider
from charlogic.oracles.condition import TableConditionOracle
from charlogic.oracles.nli import TableNliJudge, text_hash
from charlogic.responder import Grounding, Mode, Responder

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "miniverse"

MODEL = "mock-rp"

# --- profile texts (paragraph granularity gives the segment split) ---

AYLA_TEXT = (
    "Ayla is the harbor town's lamplighter. She greets strangers warmly "
    "and hums old sailing songs while she trims and lights the great "
    "lamps.\n\n"
    "She is fiercely protective of the lighthouse. Anyone who mocks it "
    "gets a sharp retort, and she never apologizes for that."
)

BORO_TEXT = (
    "Boro is the blacksmith's apprentice. He answers questions in short, "
    "blunt sentences and hates wasting charcoal.\n\n"
    "He keeps a ledger of every debt owed to the forge. When someone "
    "repays him, he crosses the entry out.\n\n"
    "Boro trusts the night watch completely and always follows their "
    "advice."
)

CYRA_TEXT = (
    "Cyra reads fortunes in the night market. She opens every reading "
    "with one of her three ritual greetings, the moon, the tide, or the "
    "star, and about one reading in ten her shuffle slips and she drops "
    "the cards."
)

# --- condition questions asked by the stored programs ---

QA_GREET = "Is someone greeting or meeting Ayla?"
QA_WORK = "Is Ayla working on the lighthouse lamps?"
QA_MOCK = "Is someone mocking the lighthouse?"
QB_ASK = "Is someone asking Boro a question?"
QB_REPAY = "Is someone repaying a debt to Boro?"
QB_ADVICE = "Is the night watch giving Boro advice?"
QB_BETRAY = "Has the night watch betrayed Boro?"
QC_READ = "Is Cyra beginning a reading?"

# --- statements the programs can fire ---

ST_GREET = "Ayla greets them warmly."
ST_HUM = "Ayla hums an old sailing song."
ST_RETORT = "Ayla snaps a sharp retort and does not apologize."
ST_BLUNT = "Boro answers in short, blunt sentences."
ST_CROSS = "Boro crosses the entry out of his ledger."
ST_SUM = "Boro names the exact sum from his ledger, then crosses the entry out."
ST_FOLLOW = "Boro follows the night watch's advice without question."
ST_REFUSE = "Boro refuses the advice and turns his back on the watch."
ST_MOON = "Cyra opens with the moon greeting."
ST_TIDE = "Cyra opens with the tide greeting."
ST_STAR = "Cyra opens with the star greeting."
ST_DROP = "Cyra drops her cards mid-shuffle."

# --- version-0 program sources ---

AYLA_S0 = f'''when scene:
    if check("{QA_GREET}"):
        trigger "{ST_GREET}"
    if check("{QA_WORK}"):
        trigger "{ST_HUM}"
'''

AYLA_S1 = f'''when scene:
    if check("{QA_MOCK}"):
        trigger "{ST_RETORT}"
'''

BORO_S0 = f'''when scene:
    if check("{QB_ASK}"):
        trigger "{ST_BLUNT}"
'''

BORO_S1 = f'''when scene:
    if check("{QB_REPAY}"):
        trigger "{ST_CROSS}"
'''

BORO_S2 = f'''when scene:
    if check("{QB_ADVICE}"):
        trigger "{ST_FOLLOW}"
'''

CYRA_S0 = f'''when scene:
    if check("{QC_READ}"):
        trigger choice(["{ST_MOON}", "{ST_TIDE}", "{ST_STAR}"])
        if chance(0.1):
            trigger "{ST_DROP}"
'''

# revised sources the scripted reviser proposes (fence content)

BORO_S2_V1 = f'''when scene:
    if check("{QB_ADVICE}"):
        if check("{QB_BETRAY}"):
            trigger "{ST_REFUSE}"
        else:
            trigger "{ST_FOLLOW}"
'''

BORO_S1_V2 = f'''when scene:
    if check("{QB_REPAY}"):
        trigger "{ST_SUM}"
'''

# --- scenes: (id, order, context, question, reference) ---

SCENES = [
    ("ayla-000", 0,
     "At dusk a traveling stranger steps onto the quay and calls a hello "
     "to Ayla while she trims her wicks.",
     "How does Ayla receive the stranger?",
     "Ayla welcomes the stranger warmly."),
    ("ayla-001", 1,
     "A merchant stops Ayla in the market square and asks what lamp oil "
     "sells for this season.",
     "What does Ayla say about the price?",
     "Ayla quotes the going rate for lamp oil from memory."),
    ("ayla-002", 2,
     "Evening falls and Ayla climbs the lighthouse stair to light the "
     "great lamps one by one.",
     "What does Ayla do as she works?",
     "Ayla hums a sailing song while she lights the lamps."),
    ("ayla-003", 3,
     "A drunk sailor jabs a thumb at the lighthouse and calls it a "
     "crumbling pile of rubble not worth its oil.",
     "How does Ayla answer the insult?",
     "Ayla fires back a sharp retort and refuses to apologize."),
    ("boro-000", 0,
     "A customer leans on the counter and asks Boro whether the blade he "
     "ordered will be ready by market day.",
     "How does Boro answer?",
     "Boro gives a short, blunt answer about the blade."),
    ("boro-001", 1,
     "Old Fenn counts out six copper coins on the anvil, repaying the "
     "debt he has owed the forge since spring.",
     "What does Boro do with the ledger?",
     "Boro crosses the repaid debt out of his ledger."),
    ("boro-002", 2,
     "Days after the night watch was caught stealing iron from the "
     "forge, watchman Hale leans in and advises Boro to move his stock "
     "to the guild cellar.",
     "How does Boro take the advice?",
     "Boro refuses the watchman's advice, remembering the stolen iron, "
     "and turns his back on him."),
    ("boro-003", 3,
     "Watchman Hale returns with word that river thieves are working the "
     "quarter and urges Boro to bar the forge early.",
     "Does Boro follow the warning?",
     "Boro rejects the night watch's advice outright."),
    ("boro-004", 4,
     "Mira the carter repays her debt for the wagon fittings and asks "
     "whether the sum squares with his book.",
     "How does Boro settle the debt?",
     "Boro names the exact sum owed from his ledger before crossing the "
     "entry out."),
    ("boro-005", 5,
     "The baker clears his account at last, setting a small stack of "
     "coins beside the forge.",
     "How does Boro close the entry?",
     "Boro names the exact sum from his ledger before crossing out the "
     "baker's debt."),
    ("cyra-000", 0,
     "A nervous apprentice sits at Cyra's table in the night market and "
     "asks for a reading about the moon tide.",
     "How does Cyra begin?",
     "Cyra opens the reading with her moon greeting."),
    ("cyra-001", 1,
     "A fisherman plants himself at the table and demands to know "
     "whether the storm will pass before dawn.",
     "How does Cyra open the reading?",
     "Cyra opens with one of her ritual greetings before reading the "
     "cards."),
]

CHARACTER_OF = {sid: sid.split("-")[0].capitalize()
                for sid, *_ in SCENES}

# unique phrase per scene; mock entries key on it
PHRASE = {
    "ayla-000": "steps onto the quay",
    "ayla-001": "what lamp oil sells for",
    "ayla-002": "climbs the lighthouse stair",
    "ayla-003": "crumbling pile of rubble",
    "boro-000": "ready by market day",
    "boro-001": "six copper coins on the anvil",
    "boro-002": "stock to the guild cellar",
    "boro-003": "river thieves are working the quarter",
    "boro-004": "squares with his book",
    "boro-005": "clears his account at last",
    "cyra-000": "reading about the moon tide",
    "cyra-001": "storm will pass before dawn",
}

CONDITIONS = {
    "ayla-000": {QA_GREET: "yes", QA_WORK: "no", QA_MOCK: "no"},
    "ayla-001": {QA_GREET: "no", QA_WORK: "no", QA_MOCK: "no"},
    "ayla-002": {QA_GREET: "no", QA_WORK: "yes", QA_MOCK: "no"},
    "ayla-003": {QA_GREET: "no", QA_WORK: "no", QA_MOCK: "yes"},
    "boro-000": {QB_ASK: "yes", QB_REPAY: "no", QB_ADVICE: "no",
                 QB_BETRAY: "no"},
    "boro-001": {QB_ASK: "no", QB_REPAY: "yes", QB_ADVICE: "no",
                 QB_BETRAY: "no"},
    "boro-002": {QB_ASK: "no", QB_REPAY: "no", QB_ADVICE: "yes",
                 QB_BETRAY: "yes"},
    "boro-003": {QB_ASK: "no", QB_REPAY: "no", QB_ADVICE: "yes",
                 QB_BETRAY: "yes"},
    "boro-004": {QB_ASK: "no", QB_REPAY: "yes", QB_ADVICE: "no",
                 QB_BETRAY: "yes"},
    "boro-005": {QB_ASK: "no", QB_REPAY: "yes", QB_ADVICE: "no",
                 QB_BETRAY: "yes"},
    "cyra-000": {QC_READ: "yes"},
    "cyra-001": {QC_READ: "yes"},
}

# --- scripted role-play responses ---

R = {
    "ayla-000": "Ayla lifts her lantern in welcome and greets the "
                "stranger warmly, asking after their crossing.",
    "ayla-001": "Ayla wipes her hands on her apron and says the harbor "
                "master sets the oil prices, not her.",
    "ayla-002": "Ayla climbs the spiral stair, lighting each lamp in "
                "turn while humming an old sailing song.",
    "ayla-003": "Ayla laughs nervously and apologizes to the sailor for "
                "the lighthouse's shabby state.",
    "boro-000": "Boro wipes the soot from his hands and says only: two "
                "days, no sooner.",
    "boro-001": "Boro takes the coins, opens his ledger, and crosses "
                "Fenn's entry out with a charcoal stub.",
    "boro-002-bad": "Boro nods at once and starts hauling his stock to "
                    "the guild cellar, just as the watchman says.",
    "boro-002-good": "Boro sets down his hammer, says he remembers the "
                     "stolen iron, and turns his back on watchman Hale.",
    "boro-003-bad": "Boro bars the forge early, trusting Hale's warning "
                    "completely.",
    "boro-003-good": "Boro keeps hammering and tells Hale flatly he will "
                     "take no advice from the watch since the iron went "
                     "missing.",
    "boro-004-vague": "Boro takes the payment and crosses the entry out "
                      "of his ledger without a word.",
    "boro-004-good": "Boro runs a finger down his ledger, names the "
                     "exact sum Mira owed, and only then crosses the "
                     "entry out.",
    "boro-005-vague": "Boro sweeps the coins into his box and crosses "
                      "the baker's entry from the ledger.",
    "boro-005-good": "Boro checks his ledger, names the exact sum the "
                     "baker owed, counts the coins against it, and "
                     "crosses the entry out.",
    "cyra-000-moon": "Cyra spreads her cards beneath the lantern and "
                     "opens with the moon greeting, her voice low.",
    "cyra-000-tide": "Cyra spreads her cards beneath the lantern and "
                     "opens with the tide greeting, her voice low.",
    "cyra-000-star": "Cyra spreads her cards beneath the lantern and "
                     "opens with the star greeting, her voice low.",
    "cyra-001-moon": "Cyra meets the fisherman's eye and opens with the "
                     "moon greeting before turning the first card.",
    "cyra-001-tide": "Cyra meets the fisherman's eye and opens with the "
                     "tide greeting before turning the first card.",
    "cyra-001-star": "Cyra meets the fisherman's eye and opens with the "
                     "star greeting before turning the first card.",
}

REVISE_S2_COMPLETION = (
    "The storyline shows the night watch betrayed Boro, so blind trust "
    "no longer holds; trust must hinge on whether the betrayal happened."
    "\n\n```\n" + BORO_S2_V1 + "```\n")

REVISE_S1_COMPLETION = (
    "The ledger habit implies Boro knows the figure; the expected "
    "behavior names the exact sum, so the fired statement must too."
    "\n\n```\n" + BORO_S1_V2 + "```\n")


def mock_entries() -> list[dict]:
    def rp(character, scene_id, completion, *extra):
        return {"contains": [f"You are role-playing as {character}",
                             PHRASE[scene_id], *extra],
                "completion": completion}

    entries = [
        # statement-specific entries must precede the scene-generic ones
        rp("Boro", "boro-002", R["boro-002-good"], ST_REFUSE),
        rp("Boro", "boro-002", R["boro-002-bad"]),
        rp("Boro", "boro-003", R["boro-003-good"], ST_REFUSE),
        rp("Boro", "boro-003", R["boro-003-bad"]),
        rp("Boro", "boro-004", R["boro-004-good"], ST_SUM),
        rp("Boro", "boro-004", R["boro-004-vague"]),
        rp("Boro", "boro-005", R["boro-005-good"], ST_SUM),
        rp("Boro", "boro-005", R["boro-005-vague"]),
        rp("Boro", "boro-000", R["boro-000"]),
        rp("Boro", "boro-001", R["boro-001"]),
        rp("Ayla", "ayla-000", R["ayla-000"]),
        rp("Ayla", "ayla-001", R["ayla-001"]),
        rp("Ayla", "ayla-002", R["ayla-002"]),
        rp("Ayla", "ayla-003", R["ayla-003"]),
    ]
    for scene_id in ("cyra-000", "cyra-001"):
        for mood in ("moon", "tide", "star"):
            entries.append(rp("Cyra", scene_id, R[f"{scene_id}-{mood}"],
                              f"opens with the {mood} greeting."))
    entries += [
        {"contains": ["most responsible for the mismatch",
                      PHRASE["boro-002"]],
         "completion": "s2"},
        {"contains": ["most responsible for the mismatch",
                      PHRASE["boro-004"]],
         "completion": "s1"},
        {"contains": ["Revise one decision program",
                      "Segment s2, current program",
                      PHRASE["boro-002"]],
         "completion": REVISE_S2_COMPLETION},
        {"contains": ["Revise one decision program",
                      "Segment s1, current program",
                      PHRASE["boro-004"]],
         "completion": REVISE_S1_COMPLETION},
        # catch-alls keep chat/preview endpoints usable on this pack
        {"contains": ["You are role-playing as Ayla"],
         "completion": "Ayla nods and goes back to tending her lamps."},
        {"contains": ["You are role-playing as Boro"],
         "completion": "Boro grunts and keeps working the bellows."},
        {"contains": ["You are role-playing as Cyra"],
         "completion": "Cyra shuffles her cards and watches in silence."},
    ]
    return entries


def nli_table() -> dict:
    refs = {sid: ref for sid, _, _, _, ref in SCENES}
    pairs = [
        (refs["ayla-000"], R["ayla-000"], "entailed"),
        (refs["ayla-001"], R["ayla-001"], "neutral"),
        (refs["ayla-002"], R["ayla-002"], "entailed"),
        (refs["ayla-003"], R["ayla-003"], "contradicted"),
        (refs["boro-000"], R["boro-000"], "entailed"),
        (refs["boro-001"], R["boro-001"], "entailed"),
        (refs["boro-002"], R["boro-002-bad"], "contradicted"),
        (refs["boro-002"], R["boro-002-good"], "entailed"),
        (refs["boro-003"], R["boro-003-bad"], "contradicted"),
        (refs["boro-003"], R["boro-003-good"], "entailed"),
        (refs["boro-004"], R["boro-004-vague"], "neutral"),
        (refs["boro-004"], R["boro-004-good"], "entailed"),
        (refs["boro-005"], R["boro-005-vague"], "neutral"),
        (refs["boro-005"], R["boro-005-good"], "entailed"),
        (refs["cyra-000"], R["cyra-000-moon"], "entailed"),
        (refs["cyra-000"], R["cyra-000-tide"], "neutral"),
        (refs["cyra-000"], R["cyra-000-star"], "neutral"),
        (refs["cyra-001"], R["cyra-001-moon"], "entailed"),
        (refs["cyra-001"], R["cyra-001-tide"], "entailed"),
        (refs["cyra-001"], R["cyra-001-star"], "entailed"),
    ]
    table: dict[str, dict[str, str]] = {}
    for reference, response, relation in pairs:
        table.setdefault(text_hash(reference), {})[
            text_hash(response)] = relation
    return table


def write_pack(out: Path) -> None:
    if out.exists():
        shutil.rmtree(out)
    out.mkdir(parents=True)

    for name, text in (("Ayla", AYLA_TEXT), ("Boro", BORO_TEXT),
                       ("Cyra", CYRA_TEXT)):
        (out / f"{name.lower()}.json").write_text(
            json.dumps({"character": name, "artifact": "miniverse",
                        "text": text}, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8")

    scenes = [Scene(id=sid, context=context, question=question,
                    reference_action=reference, artifact="miniverse",
                    character=CHARACTER_OF[sid], order_index=order)
              for sid, order, context, question, reference in SCENES]
    save_scenes(scenes, out / "scenes.jsonl")

    (out / "pack.json").write_text(json.dumps({
        "artifact": "miniverse",
        "scenes": "scenes.jsonl",
        "characters": [
            {"name": "Ayla", "tier": "main", "profile": "ayla.json"},
            {"name": "Boro", "tier": "main", "profile": "boro.json"},
            {"name": "Cyra", "tier": "minor", "profile": "cyra.json"},
        ],
    }, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")

    (out / "condition_table.json").write_text(
        json.dumps(CONDITIONS, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8")
    (out / "nli_table.json").write_text(
        json.dumps(nli_table(), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8")
    (out / "mock_llm.json").write_text(
        json.dumps(mock_entries(), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8")

    profiles = out / "profiles"
    VersionStore.init(profiles, "Ayla", {"s0": AYLA_S0, "s1": AYLA_S1},
                      ["s0", "s1"],
                      manifest_extra={"granularity": "paragraph",
                                      "model": MODEL})
    VersionStore.init(profiles, "Boro",
                      {"s0": BORO_S0, "s1": BORO_S1, "s2": BORO_S2},
                      ["s0", "s1", "s2"],
                      manifest_extra={"granularity": "paragraph",
                                      "model": MODEL})
    VersionStore.init(profiles, "Cyra", {"s0": CYRA_S0}, ["s0"],
                      manifest_extra={"granularity": "paragraph",
                                      "model": MODEL})


def _fresh(out: Path):
    benchmark = load_benchmark(out / "pack.json")
    llm = LlmClient(MockProvider.from_file(out / "mock_llm.json"))
    oracle = TableConditionOracle.from_file(out / "condition_table.json")
    nli = TableNliJudge.from_file(out / "nli_table.json")
    return benchmark, llm, oracle, nli


def self_check(out: Path) -> None:
    benchmark, llm, oracle, nli = _fresh(out)
    stores = {name: VersionStore(out / "profiles", name)
              for name in ("Ayla", "Boro", "Cyra")}
    gen = GenerationConfig(MODEL)

    result = run_basic(benchmark, oracle, nli, llm, stores,
                       generation=gen)
    by_char: dict[str, list[int]] = {}
    for record in result.records:
        by_char.setdefault(record.character, []).append(record.score)
    assert by_char["Ayla"] == [100, 50, 100, 0], by_char["Ayla"]
    assert by_char["Boro"] == [100, 100, 0, 0, 50, 50], by_char["Boro"]
    assert not result.errors, result.errors

    with tempfile.TemporaryDirectory() as td:
        shutil.copytree(out / "profiles" / "Boro", Path(td) / "Boro")
        store = VersionStore(td, "Boro")
        benchmark2, llm2, oracle2, nli2 = _fresh(out)
        entry = benchmark2.entry("Boro")
        evo = run_evolving(benchmark2, oracle2, nli2, llm2,
                           {"Boro": store}, generation=gen)
        boro_records = [r for r in evo.records if r.character == "Boro"]
        assert [r.score for r in boro_records] == [100, 100, 0, 100, 50,
                                                   100], boro_records
        assert store.versions == [0, 1, 2]
        revs = store.revisions()
        assert [(r.version, r.scene_id, r.blamed_segment, r.issue)
                for r in revs] == [
            (1, "boro-002", "s2", "contradicted"),
            (2, "boro-004", "s1", "neutral")], revs
        # revised scenes judge entailed on re-run
        _, llm3, oracle3, nli3 = _fresh(out)
        responder = Responder(llm3, oracle3, gen)
        for revision in revs:
            scene = benchmark2.scenes_by_id[revision.scene_id]
            grounding = Grounding(Mode.CODIFIED, "Boro",
                                  tuple(store.programs(revision.version)))
            rr = responder.respond(scene, grounding)
            verdict = nli3.judge(scene.reference_action, rr.response, scene)
            assert verdict.score == 100, (revision.scene_id, rr.response)
    print("self-check passed: Ayla basic 62.5, Boro evolving 75.0, "
          "2 single-segment revisions, revised scenes entail")


def main() -> int:
    write_pack(OUT)
    self_check(OUT)
    print(f"wrote fixture pack to {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
