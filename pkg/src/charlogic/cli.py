"""Command-line entry point.

One binary, subcommand style. All randomness flows from --seed; the
resolved config is echoed into every report so a run can be reproduced
from its artifacts alone.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .bench.data import load_benchmark, read_records
from .bench.drivers import (
    compare_runs, run_basic, run_evolving, run_stochastic, write_run,
)
from .bench.scoring import render_report, score_run
from .codifier.codify import codify_profile
from .codifier.segment import Granularity, load_profile
from .engine.trace import events_to_json
from .engine.types import Scene
from .evolver.store import VersionStore, list_characters
from .llm.client import GenerationConfig, LlmClient
from .llm.providers import provider_from_spec
from .oracles.condition import (
    LlmConditionOracle, RemoteConditionOracle, TableConditionOracle,
)
from .oracles.distill import export_distillation_data, records_from_eval
from .oracles.nli import LlmNliJudge, TableNliJudge
from .oracles.preference import LlmPreferenceJudge
from .responder import Grounding, Mode, Responder

log = logging.getLogger(__name__)

CHAT_WINDOW_TURNS = 20


@dataclass
class RunConfig:
    benchmark: str = ""
    profiles: str = "profiles"
    output: str = "runs"
    provider: str = "http"           # http | echo | mock:<script.json>
    model: str = ""                  # generation model
    oracle_model: str = ""           # condition/judge model
    oracle: str = "llm"              # llm | remote | table:<table.json>
    nli: str = "llm"                 # llm | table:<table.json>
    granularity: str = "paragraph"
    mode: str = "codified"
    cot_budget: int = 0
    k: int = 4
    base_seed: int = 0
    workers: int = 1
    temperature: float = 0.0
    max_tokens: int = 512
    cache_dir: str = ".cp-cache"
    include_scene: bool = True

    @classmethod
    def load(cls, config_path: str | None,
             overrides: dict) -> "RunConfig":
        values: dict = {}
        if config_path:
            raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
            known = {f.name for f in dataclasses.fields(cls)}
            for key in raw:
                if key not in known:
                    raise SystemExit(f"error: unknown config key: {key!r}")
            values.update(raw)
        for key, value in overrides.items():
            if value is not None:
                values[key] = value
        cfg = cls(**values)
        if not cfg.model:
            cfg.model = os.environ.get("CP_LLM_MODEL", "")
        if not cfg.oracle_model:
            cfg.oracle_model = os.environ.get("CP_ORACLE_MODEL", cfg.model)
        return cfg

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def build_client(cfg: RunConfig) -> LlmClient:
    provider = provider_from_spec(cfg.provider)
    cache_dir = cfg.cache_dir or None
    return LlmClient(provider, cache_dir=cache_dir,
                     max_concurrency=max(cfg.workers, 1))


def build_oracle(cfg: RunConfig, client: LlmClient):
    if cfg.oracle == "llm":
        return LlmConditionOracle(client, cfg.oracle_model or None)
    if cfg.oracle == "remote":
        return RemoteConditionOracle()
    if cfg.oracle.startswith("table:"):
        return TableConditionOracle.from_file(cfg.oracle[len("table:"):])
    raise SystemExit(f"error: unknown oracle backend: {cfg.oracle!r}")


def build_nli(cfg: RunConfig, client: LlmClient):
    if cfg.nli == "llm":
        return LlmNliJudge(client, cfg.oracle_model or cfg.model,
                           include_scene=cfg.include_scene)
    if cfg.nli.startswith("table:"):
        return TableNliJudge.from_file(cfg.nli[len("table:"):])
    raise SystemExit(f"error: unknown NLI backend: {cfg.nli!r}")


def _generation(cfg: RunConfig) -> GenerationConfig:
    return GenerationConfig(cfg.model, temperature=cfg.temperature,
                            max_tokens=cfg.max_tokens)


def _make_run_dir(output: str) -> Path:
    base = Path(output)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    run_dir = base / stamp
    bump = 0
    while run_dir.exists():
        bump += 1
        run_dir = base / f"{stamp}-{bump}"
    run_dir.mkdir(parents=True)
    return run_dir


def _load_stores(cfg: RunConfig, benchmark) -> dict[str, VersionStore]:
    stores = {}
    for entry in benchmark.characters:
        try:
            stores[entry.character] = VersionStore(cfg.profiles,
                                                   entry.character)
        except FileNotFoundError:
            pass
    return stores


# --- subcommands ---

def cmd_codify(args: argparse.Namespace) -> int:
    cfg = RunConfig.load(args.config, _overrides(args))
    client = build_client(cfg)
    profile = load_profile(args.profile)
    run = codify_profile(
        profile, client, Granularity(cfg.granularity),
        include_randomness=args.randomness,
        max_attempts=args.max_attempts,
        config=_generation(cfg),
        max_workers=cfg.workers)
    sources = {c.segment.id: _formatted(c) for c in run.codified}
    order = [c.segment.id for c in run.codified]
    VersionStore.init(cfg.profiles, profile.character, sources, order,
                      manifest_extra={
                          "granularity": run.granularity.value,
                          "model": run.model,
                          "attempts": {c.segment.id: c.attempts
                                       for c in run.codified},
                          "failures": run.failures,
                      })
    print(f"codified {len(run.codified)} segments for {profile.character} "
          f"-> {Path(cfg.profiles) / profile.character / 'v0'}")
    if run.failures:
        print("fallback (retrieval wrapper) for: " + ", ".join(run.failures))
    return 0


def _formatted(codified) -> str:
    from .dsl.formatter import format_program
    return format_program(codified.program)


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = RunConfig.load(args.config, _overrides(args))
    if not cfg.benchmark:
        raise SystemExit("error: missing config key: benchmark")
    benchmark = load_benchmark(cfg.benchmark)
    client = build_client(cfg)
    oracle = build_oracle(cfg, client)
    nli = build_nli(cfg, client)
    stores = _load_stores(cfg, benchmark)
    echo = cfg.to_json()
    if args.scenario == "basic":
        result = run_basic(benchmark, oracle, nli, client, stores,
                           Mode(cfg.mode), _generation(cfg), cfg.cot_budget,
                           cfg.base_seed, cfg.workers,
                           Granularity(cfg.granularity), echo)
    elif args.scenario == "evolving":
        result = run_evolving(benchmark, oracle, nli, client, stores,
                              _generation(cfg), cfg.cot_budget,
                              cfg.base_seed, textual=cfg.mode == "textual",
                              config_echo=echo)
    else:
        result = run_stochastic(benchmark, oracle, nli, client, stores,
                                cfg.k, cfg.base_seed, _generation(cfg),
                                cfg.cot_budget, cfg.workers, echo)
    run_dir = _make_run_dir(cfg.output)
    write_run(run_dir, result)
    print((run_dir / "report.txt").read_text(encoding="utf-8"))
    print(f"run artifacts: {run_dir}")
    if result.errors:
        print("failures:", *result.errors, sep="\n  ", file=sys.stderr)
    return 1 if result.failed else 0


def cmd_evolve(args: argparse.Namespace) -> int:
    cfg = RunConfig.load(args.config, _overrides(args))
    if not cfg.benchmark:
        raise SystemExit("error: missing config key: benchmark")
    benchmark = load_benchmark(cfg.benchmark)
    if args.character:
        benchmark = dataclasses.replace(
            benchmark,
            characters=tuple(e for e in benchmark.characters
                             if e.character == args.character))
        if not benchmark.characters:
            raise SystemExit(f"error: no character {args.character!r} "
                             "in benchmark")
    client = build_client(cfg)
    oracle = build_oracle(cfg, client)
    nli = build_nli(cfg, client)
    stores = _load_stores(cfg, benchmark)
    result = run_evolving(benchmark, oracle, nli, client, stores,
                          _generation(cfg), cfg.cot_budget, cfg.base_seed,
                          config_echo=cfg.to_json())
    for entry in benchmark.characters:
        store = stores.get(entry.character)
        if store is None:
            continue
        revisions = store.revisions()
        print(f"{entry.character}: {store.latest_version + 1} versions, "
              f"{len(revisions)} revisions")
        for revision in revisions:
            print(f"  v{revision.version}: scene {revision.scene_id} "
                  f"[{revision.issue}] revised {revision.blamed_segment}")
    return 1 if result.failed else 0


def cmd_chat(args: argparse.Namespace) -> int:
    cfg = RunConfig.load(args.config, _overrides(args))
    client = build_client(cfg)
    oracle = build_oracle(cfg, client)
    store = VersionStore(cfg.profiles, args.character)
    programs = tuple(store.programs(args.version))
    grounding = Grounding(Mode.CODIFIED, args.character, programs=programs)
    responder = Responder(client, oracle, _generation(cfg), cfg.cot_budget)
    history: list[str] = []
    turn = 0
    print(f"chatting with {args.character} "
          f"(v{args.version if args.version is not None else store.latest_version}); "
          "ctrl-d or /quit to leave")
    while True:
        try:
            user = input("you> ")
        except EOFError:
            print()
            break
        if user.strip() in {"/quit", "/exit"}:
            break
        if not user.strip():
            continue
        turn += 1
        context = "\n".join(history + [f"User: {user}"])
        scene = Scene(id=f"chat-{turn}", context=context, question="")
        record = responder.respond(scene, grounding)
        print(f"{args.character}> {record.response}")
        if args.trace:
            for event in events_to_json(list(record.trace)):
                print("  " + json.dumps(event, ensure_ascii=False))
        history.append(f"User: {user}")
        history.append(f"{args.character}: {record.response}")
        history = history[-2 * CHAT_WINDOW_TURNS:]
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    cfg = RunConfig.load(args.config, _overrides(args))
    client = build_client(cfg)
    oracle = build_oracle(cfg, client)
    app = create_app(cfg.profiles, client, oracle, _generation(cfg),
                     session_dump_dir=Path(cfg.output) / "sessions")
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_export_distill(args: argparse.Namespace) -> int:
    rows = [json.loads(line) for line in
            Path(args.records).read_text(encoding="utf-8").splitlines()
            if line.strip()]
    benchmark = load_benchmark(args.benchmark)
    scene_texts = {scene_id: scene.context
                   for scene_id, scene in benchmark.scenes_by_id.items()}
    records = records_from_eval(rows, scene_texts)
    if not records:
        print("no condition checks found in records", file=sys.stderr)
        return 1
    out = export_distillation_data(records, args.out)
    count = sum(1 for _ in out.open(encoding="utf-8"))
    print(f"wrote {count} cases to {out}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    records = read_records(args.records)
    benchmark = load_benchmark(args.benchmark) if args.benchmark else None
    report = score_run(records, k=args.k, benchmark=benchmark)
    if args.compare:
        cfg = RunConfig.load(args.config, _overrides(args))
        client = build_client(cfg)
        judge = LlmPreferenceJudge(client, cfg.oracle_model or cfg.model,
                                   include_scene=cfg.include_scene)
        if benchmark is None:
            raise SystemExit("error: --compare needs --benchmark for "
                             "reference actions")
        other = read_records(args.compare)
        report.preference = compare_runs(benchmark, records, other, judge)
    print(render_report(report), end="")
    return 0


def _overrides(args: argparse.Namespace) -> dict:
    keys = ("benchmark", "profiles", "output", "provider", "model",
            "oracle_model", "oracle", "nli", "granularity", "mode",
            "cot_budget", "k", "base_seed", "workers", "temperature",
            "max_tokens", "cache_dir")
    return {key: getattr(args, key, None) for key in keys}


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (flags override it)")
    p.add_argument("--benchmark", help="benchmark pack JSON")
    p.add_argument("--profiles", help="codified profile store root")
    p.add_argument("--output", help="run output root")
    p.add_argument("--provider", help="http | echo | mock:<script.json>")
    p.add_argument("--model", help="generation model name")
    p.add_argument("--oracle-model", dest="oracle_model",
                   help="condition/judge model name")
    p.add_argument("--oracle", help="llm | remote | table:<table.json>")
    p.add_argument("--nli", help="llm | table:<table.json>")
    p.add_argument("--granularity",
                   choices=["section", "paragraph", "sentence"])
    p.add_argument("--mode", choices=[m.value for m in Mode])
    p.add_argument("--cot-budget", dest="cot_budget", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", dest="base_seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--temperature", type=float)
    p.add_argument("--max-tokens", dest="max_tokens", type=int)
    p.add_argument("--cache-dir", dest="cache_dir")


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("CHARLOGIC_LOG", "WARNING"))
    parser = argparse.ArgumentParser(
        prog="charlogic",
        description="codified character profiles: compile, run, evolve")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codify", help="compile a profile into programs")
    p.add_argument("--profile", required=True, help="profile JSON")
    p.add_argument("--randomness", action="store_true",
                   help="prompt for chance/choice where behavior varies")
    p.add_argument("--max-attempts", dest="max_attempts", type=int,
                   default=3)
    _add_config_flags(p)
    p.set_defaults(fn=cmd_codify)

    p = sub.add_parser("eval", help="run a benchmark scenario")
    p.add_argument("scenario", choices=["basic", "evolving", "stochastic"])
    _add_config_flags(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("evolve", help="update profiles along the storyline")
    p.add_argument("--character", help="restrict to one character")
    _add_config_flags(p)
    p.set_defaults(fn=cmd_evolve)

    p = sub.add_parser("chat", help="interactive role-play")
    p.add_argument("--character", required=True)
    p.add_argument("--version", type=int, default=None)
    p.add_argument("--trace", action="store_true",
                   help="dump trace events after each turn")
    _add_config_flags(p)
    p.set_defaults(fn=cmd_chat)

    p = sub.add_parser("serve", help="HTTP API for the web console")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    _add_config_flags(p)
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("export-distill",
                       help="mine condition checks into classifier data")
    p.add_argument("--records", required=True, help="records.jsonl")
    p.add_argument("--benchmark", required=True, help="benchmark pack JSON")
    p.add_argument("--out", required=True, help="output JSONL")
    p.set_defaults(fn=cmd_export_distill)

    p = sub.add_parser("report", help="re-render a report from records")
    p.add_argument("--records", required=True, help="records.jsonl")
    p.add_argument("--compare", help="second records.jsonl to judge against")
    _add_config_flags(p)  # provides --k and --benchmark
    p.set_defaults(fn=cmd_report)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
