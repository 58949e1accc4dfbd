/** Payload shapes of the charlogic HTTP API, mirrored field for field.
 *
 * The console renders these as received; nothing here is computed
 * client-side except the version diff, which compares two sources
 * payloads without modifying either.
 */

export type Verdict = "true" | "false" | "unknown";

interface EventBase {
  v: number;
  segment_id: string;
}

export interface CheckedEvent extends EventBase {
  event: "checked";
  question: string;
  verdict: Verdict;
  source: string;
  cached: boolean;
}

export interface ChanceDrawnEvent extends EventBase {
  event: "chance_drawn";
  p: number;
  draw: number;
  passed: boolean;
}

export interface ChoiceMadeEvent extends EventBase {
  event: "choice_made";
  options: string[];
  chosen_index: number;
}

export interface TriggeredEvent extends EventBase {
  event: "triggered";
  text: string;
  uncertain: boolean;
}

export interface BranchTakenEvent extends EventBase {
  event: "branch_taken";
  kind: string;
  arm: number | null;
}

export type TraceEvent =
  | CheckedEvent
  | ChanceDrawnEvent
  | ChoiceMadeEvent
  | TriggeredEvent
  | BranchTakenEvent;

export interface TriggeredStatement {
  text: string;
  segment_id: string;
  path: number[];
  uncertain: boolean;
}

export interface SessionOpened {
  session_id: string;
  character: string;
  version: number;
}

export interface TurnReply {
  response: string;
  triggered: TriggeredStatement[];
  trace: TraceEvent[];
}

export interface TranscriptEntry {
  speaker: string;
  text: string;
  triggered?: TriggeredStatement[];
  trace?: TraceEvent[];
}

export interface SessionView {
  session_id: string;
  character: string;
  version: number;
  transcript: TranscriptEntry[];
}

export interface ProfileListing {
  character: string;
  versions: number[];
}

export interface RevisionEntry {
  version: number;
  scene_id: string;
  blamed_segment: string;
  issue: string;
  rationale: string;
}

export interface VersionLog {
  character: string;
  versions: number[];
  revisions: RevisionEntry[];
}

export interface VersionSources {
  character: string;
  version: number;
  segment_order: string[];
  sources: Record<string, string>;
}

export interface PreviewReply {
  response: string;
  version: number;
  triggered: TriggeredStatement[];
  trace: TraceEvent[];
}
