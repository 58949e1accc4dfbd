"""HTTP API over the profile store and responder.

Serves the web console. Sessions live in memory; each one is dumped to
JSONL when the server shuts down so chats survive as artifacts. Endpoints
never mutate profile versions.
"""

from __future__ import annotations

import itertools
import json
import logging
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .engine.trace import events_to_json
from .engine.types import Scene
from .evolver.store import VersionStore, list_characters
from .llm.client import GenerationConfig, LlmClient
from .responder import Grounding, Mode, Responder

log = logging.getLogger(__name__)

CHAT_WINDOW_TURNS = 20


class SessionRequest(BaseModel):
    character: str
    version: int | None = None


class TurnRequest(BaseModel):
    user_text: str


class PreviewScene(BaseModel):
    context: str
    question: str = ""


class PreviewRequest(BaseModel):
    character: str
    scene: PreviewScene | str
    version: int | None = None


@dataclass
class Session:
    id: str
    character: str
    version: int
    grounding: Grounding
    transcript: list[dict] = field(default_factory=list)
    turn_count: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)


def _triggered_json(record) -> list[dict]:
    return [{"text": t.text, "segment_id": t.segment_id,
             "path": list(t.path), "uncertain": t.uncertain}
            for t in record.triggered]


def create_app(profiles_root: str | Path, client: LlmClient, oracle,
               generation: GenerationConfig | None = None,
               cot_budget: int = 0,
               session_dump_dir: str | Path | None = None) -> FastAPI:
    profiles_root = Path(profiles_root)
    responder = Responder(client, oracle, generation, cot_budget)
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    ids = itertools.count(1)

    app = FastAPI(title="charlogic")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])

    def _store(character: str) -> VersionStore:
        try:
            return VersionStore(profiles_root, character)
        except FileNotFoundError:
            raise HTTPException(404, f"no profile for {character!r}")

    def _grounding(character: str, version: int | None) -> tuple[Grounding, int]:
        store = _store(character)
        resolved = store.latest_version if version is None else version
        try:
            programs = tuple(store.programs(resolved))
        except FileNotFoundError:
            raise HTTPException(404,
                                f"{character!r} has no version {resolved}")
        return Grounding(Mode.CODIFIED, character, programs=programs), resolved

    @app.post("/sessions")
    def open_session(body: SessionRequest) -> dict:
        grounding, resolved = _grounding(body.character, body.version)
        with registry_lock:
            session_id = f"s{next(ids):04d}"
            sessions[session_id] = Session(session_id, body.character,
                                           resolved, grounding)
        return {"session_id": session_id, "character": body.character,
                "version": resolved}

    def _session(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"no session {session_id!r}")
        return session

    @app.post("/sessions/{session_id}/turns")
    def take_turn(session_id: str, body: TurnRequest) -> dict:
        session = _session(session_id)
        if not body.user_text.strip():
            raise HTTPException(422, "user_text must be non-empty")
        with session.lock:
            window = [f"{t['speaker']}: {t['text']}"
                      for t in session.transcript]
            window = window[-2 * CHAT_WINDOW_TURNS:]
            session.turn_count += 1
            scene = Scene(
                id=f"{session.id}-t{session.turn_count}",
                context="\n".join(window + [f"User: {body.user_text}"]),
                question="")
            record = responder.respond(scene, session.grounding)
            trace = events_to_json(list(record.trace))
            session.transcript.append(
                {"speaker": "User", "text": body.user_text})
            session.transcript.append(
                {"speaker": session.character, "text": record.response,
                 "triggered": _triggered_json(record), "trace": trace})
        return {"response": record.response,
                "triggered": _triggered_json(record),
                "trace": trace}

    @app.get("/sessions/{session_id}")
    def show_session(session_id: str) -> dict:
        session = _session(session_id)
        with session.lock:
            transcript = list(session.transcript)
        return {"session_id": session.id, "character": session.character,
                "version": session.version, "transcript": transcript}

    @app.get("/profiles")
    def profiles() -> list[dict]:
        out = []
        for character in list_characters(profiles_root):
            store = VersionStore(profiles_root, character)
            out.append({"character": character,
                        "versions": store.versions})
        return out

    @app.get("/profiles/{character}/versions")
    def versions(character: str) -> dict:
        store = _store(character)
        return {
            "character": character,
            "versions": store.versions,
            "revisions": [
                {"version": r.version, "scene_id": r.scene_id,
                 "blamed_segment": r.blamed_segment, "issue": r.issue,
                 "rationale": r.rationale}
                for r in store.revisions()],
        }

    @app.get("/profiles/{character}/versions/{n}")
    def version_sources(character: str, n: int) -> dict:
        store = _store(character)
        try:
            sources = store.sources(n)
        except FileNotFoundError:
            raise HTTPException(404, f"{character!r} has no version {n}")
        return {"character": character, "version": n,
                "segment_order": store.segment_order,
                "sources": sources}

    @app.post("/eval/preview")
    def preview(body: PreviewRequest) -> dict:
        grounding, resolved = _grounding(body.character, body.version)
        if isinstance(body.scene, str):
            context, question = body.scene, ""
        else:
            context, question = body.scene.context, body.scene.question
        if not context.strip():
            raise HTTPException(422, "scene context must be non-empty")
        scene = Scene(id="preview", context=context, question=question)
        record = responder.respond(scene, grounding)
        return {"response": record.response, "version": resolved,
                "triggered": _triggered_json(record),
                "trace": events_to_json(list(record.trace))}

    @app.on_event("shutdown")
    def dump_sessions() -> None:
        if session_dump_dir is None:
            return
        dump_root = Path(session_dump_dir)
        with registry_lock:
            pending = list(sessions.values())
        if not pending:
            return
        dump_root.mkdir(parents=True, exist_ok=True)
        stamp = time.strftime("%Y%m%d-%H%M%S")
        for session in pending:
            path = dump_root / f"{stamp}-{session.id}.jsonl"
            with path.open("w", encoding="utf-8") as fh:
                for turn in session.transcript:
                    fh.write(json.dumps(turn, ensure_ascii=False) + "\n")
        log.info("dumped %d session transcripts to %s",
                 len(pending), dump_root)

    return app
