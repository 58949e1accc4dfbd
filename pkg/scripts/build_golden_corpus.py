"""Generate the golden program corpus under tests/data/golden.

Mix of handwritten corner cases and seeded generator output. The
round-trip tests parse every file, reformat, and reparse; the corpus
must cover if-depths 1 through 4, branching (elif/else), and both
random constructs. Rerun after grammar changes and commit the output.
"""

from __future__ import annotations

import random
import shutil
import sys
from pathlib import Path

from charlogic.dsl.analysis import metrics
from charlogic.dsl.ast import Program
from charlogic.dsl.generate import random_program
from charlogic.dsl.parser import parse

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "golden"

HANDWRITTEN = {
    "g01_trigger_only": '''when scene:
    trigger "She waves."
''',
    "g02_if_depth1": '''when scene:
    if check("Is it raining?"):
        trigger "He opens his umbrella."
''',
    "g03_else": '''when scene:
    if check("Is the door locked?"):
        trigger "She knocks twice."
    else:
        trigger "She walks straight in."
''',
    "g04_elif_chain": '''when scene:
    if check("Is the market open?"):
        trigger "He buys bread."
    elif check("Is the baker at home?"):
        trigger "He knocks at the bakery door."
    elif chance(0.5):
        trigger "He waits on the steps."
    else:
        trigger "He goes home hungry."
''',
    "g05_depth2": '''when scene:
    if check("Is anyone watching?"):
        if check("Is the guard asleep?"):
            trigger "She slips past the gate."
''',
    "g06_depth3_mixed": '''when scene:
    if check("Is it night?"):
        if not check("Is the lamp lit?"):
            if chance(0.25):
                trigger "He stumbles on the stair."
            else:
                trigger "He feels his way up slowly."
''',
    "g07_depth4": '''when scene:
    if check("Is the festival underway?"):
        if check("Is she wearing the mask?"):
            if check("Does anyone recognize her?"):
                if chance(0.5):
                    trigger "She vanishes into the crowd."
                else:
                    trigger "She brazens it out."
            else:
                trigger "She dances unbothered."
''',
    "g08_let_var": '''when scene:
    let mood = choice(["She answers cheerfully.", "She answers wistfully.", "She answers sharply."])
    if check("Is someone talking to her?"):
        trigger mood
''',
    "g09_or_and_precedence": '''when scene:
    if check("Is he armed?") and check("Is he angry?") or check("Is he cornered?"):
        trigger "He lashes out."
''',
    "g10_parens_not": '''when scene:
    if not (check("Is she tired?") or chance(0.1)):
        trigger "She keeps rowing."
''',
    "g11_escapes": '''when scene:
    if check("Did someone say \\"traitor\\"?"):
        trigger "He answers: \\"Never.\\" and grips the rail \\\\ hard."
''',
    "g12_let_chain": '''when scene:
    let opener = "She bows."
    let closer = opener
    if true:
        trigger opener
    if false:
        trigger "He never says this."
    trigger closer
''',
    "g13_multi_stmt_blocks": '''when scene:
    if check("Is the kettle boiling?"):
        trigger "She warms the pot."
        trigger "She counts three spoonfuls."
        if chance(0.2):
            trigger "She hums to herself."
    trigger "She sets out two cups."
''',
    "g14_choice_trigger": '''when scene:
    if check("Is he asked to play paper-scissors-stone?"):
        trigger choice(["He plays paper.", "He plays scissors.", "He plays stone."])
''',
}

GENERATED_COUNT = 26


def main() -> int:
    if OUT.exists():
        shutil.rmtree(OUT)
    OUT.mkdir(parents=True)

    for name, source in HANDWRITTEN.items():
        result = parse(source, name)
        assert isinstance(result, Program), (name, result)
        (OUT / f"{name}.cpl").write_text(source, encoding="utf-8")

    for i in range(GENERATED_COUNT):
        rng = random.Random(1000 + i)
        program = random_program(rng, f"gen{i}",
                                 max_depth=1 + i % 4,
                                 allow_random=i % 3 != 2)
        name = f"g{15 + i:02d}_gen_seed{1000 + i}"
        (OUT / f"{name}.cpl").write_text(program.source_text,
                                         encoding="utf-8")

    # coverage: every if-depth 1..4, branching, and randomness
    depths = set()
    branch = False
    rand = False
    for path in sorted(OUT.glob("*.cpl")):
        result = parse(path.read_text(encoding="utf-8"), path.stem)
        assert isinstance(result, Program), (path.name, result)
        m = metrics(result)
        depths.add(m.if_depth)
        branch = branch or m.has_branch
        rand = rand or m.has_random
    missing = {1, 2, 3, 4} - depths
    assert not missing, f"corpus misses if-depths {missing}"
    assert branch and rand, (branch, rand)
    total = len(list(OUT.glob("*.cpl")))
    assert total >= 30, total
    print(f"wrote {total} golden programs (if-depths {sorted(depths)})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
