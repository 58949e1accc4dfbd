/** Session state and orchestration behind the chat pane.
 *
 * Holds the transcript plus the latest turn's trace exactly as the
 * server sent them. All rendering goes through the pure functions in
 * render.ts, so a scripted fetch is enough to test the whole flow.
 */

import { ApiError, ConsoleApi } from "./api";
import {
  renderErrorBanner,
  renderTrace,
  renderTranscript,
  renderTriggered,
} from "./render";
import type {
  SessionOpened,
  TraceEvent,
  TranscriptEntry,
  TriggeredStatement,
} from "./types";

export interface ConsoleView {
  transcript: string;
  trace: string;
  triggered: string;
  banner: string;
  status: string;
}

export class ChatConsole {
  session: SessionOpened | null = null;
  private entries: TranscriptEntry[] = [];
  private lastTrace: TraceEvent[] = [];
  private lastTriggered: TriggeredStatement[] = [];
  private error = "";

  constructor(private readonly api: ConsoleApi) {}

  get transcript(): readonly TranscriptEntry[] {
    return this.entries;
  }

  async open(character: string, version?: number): Promise<void> {
    this.error = "";
    try {
      this.session = await this.api.openSession(character, version);
      this.entries = [];
      this.lastTrace = [];
      this.lastTriggered = [];
    } catch (err) {
      this.fail(err);
    }
  }

  async send(text: string): Promise<void> {
    if (this.session === null) {
      this.error = "open a session first";
      return;
    }
    if (!text.trim()) return;
    this.error = "";
    try {
      const reply = await this.api.sendTurn(this.session.session_id, text);
      this.entries.push({ speaker: "User", text });
      this.entries.push({
        speaker: this.session.character,
        text: reply.response,
      });
      this.lastTrace = reply.trace;
      this.lastTriggered = reply.triggered;
    } catch (err) {
      // the transcript is kept as-is; only the banner changes
      this.fail(err);
    }
  }

  private fail(err: unknown): void {
    if (err instanceof ApiError) {
      this.error = err.status ? `${err.status}: ${err.message}` : err.message;
    } else {
      this.error = String(err);
    }
  }

  view(): ConsoleView {
    const status = this.session
      ? `${this.session.character} @ v${this.session.version} ` +
        `(${this.session.session_id})`
      : "no session";
    return {
      transcript: renderTranscript(this.entries),
      trace: renderTrace(this.lastTrace),
      triggered: renderTriggered(this.lastTriggered),
      banner: renderErrorBanner(this.error),
      status,
    };
  }
}
