/** Thin fetch client over the charlogic serve endpoints. */

import type {
  PreviewReply,
  ProfileListing,
  SessionOpened,
  SessionView,
  TurnReply,
  VersionLog,
  VersionSources,
} from "./types";

export class ApiError extends Error {
  readonly status: number;

  constructor(message: string, status: number) {
    super(message);
    this.name = "ApiError";
    this.status = status;
  }
}

function extractDetail(body: string): string {
  try {
    const parsed = JSON.parse(body) as { detail?: unknown };
    if (typeof parsed.detail === "string") return parsed.detail;
  } catch {
    // not JSON, fall through to the raw body
  }
  return body;
}

export class ConsoleApi {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let reply: Response;
    try {
      reply = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(`cannot reach server: ${String(err)}`, 0);
    }
    if (!reply.ok) {
      const detail = extractDetail(await reply.text());
      throw new ApiError(detail || reply.statusText, reply.status);
    }
    return (await reply.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  openSession(character: string, version?: number): Promise<SessionOpened> {
    const body: Record<string, unknown> = { character };
    if (version !== undefined) body.version = version;
    return this.post("/sessions", body);
  }

  sendTurn(sessionId: string, userText: string): Promise<TurnReply> {
    return this.post(`/sessions/${encodeURIComponent(sessionId)}/turns`, {
      user_text: userText,
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}`);
  }

  listProfiles(): Promise<ProfileListing[]> {
    return this.request("/profiles");
  }

  versionLog(character: string): Promise<VersionLog> {
    return this.request(
      `/profiles/${encodeURIComponent(character)}/versions`,
    );
  }

  versionSources(character: string, n: number): Promise<VersionSources> {
    return this.request(
      `/profiles/${encodeURIComponent(character)}/versions/${n}`,
    );
  }

  preview(
    character: string,
    scene: string,
    version?: number,
  ): Promise<PreviewReply> {
    const body: Record<string, unknown> = { character, scene };
    if (version !== undefined) body.version = version;
    return this.post("/eval/preview", body);
  }
}
