/** HTML-string renderers. Pure functions over API payloads so the
 * whole presentation layer is testable without a DOM; main.ts only
 * assigns their output to innerHTML.
 */

import { changedSegments, diffLines } from "./diff";
import type {
  ProfileListing,
  TraceEvent,
  TranscriptEntry,
  TriggeredStatement,
  VersionLog,
  VersionSources,
} from "./types";

const ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
  "'": "&#39;",
};

export function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => ESCAPES[ch] ?? ch);
}

export function renderTranscript(entries: TranscriptEntry[]): string {
  if (entries.length === 0) {
    return '<p class="empty">No turns yet. Say something.</p>';
  }
  return entries
    .map((entry) => {
      const role = entry.speaker === "User" ? "user" : "character";
      return (
        `<div class="turn ${role}">` +
        `<span class="speaker">${escapeHtml(entry.speaker)}</span>` +
        `<span class="text">${escapeHtml(entry.text)}</span></div>`
      );
    })
    .join("\n");
}

function verdictBadge(verdict: string): string {
  return `<span class="badge verdict-${verdict}">${verdict.toUpperCase()}</span>`;
}

function traceRow(event: TraceEvent): string {
  const seg = escapeHtml(event.segment_id);
  switch (event.event) {
    case "checked":
      return (
        `<tr class="trace-row trace-checked verdict-${event.verdict}">` +
        `<td>${seg}</td><td>check</td>` +
        `<td>${escapeHtml(event.question)}</td>` +
        `<td>${verdictBadge(event.verdict)}` +
        `${event.cached ? ' <span class="cached">cached</span>' : ""}</td></tr>`
      );
    case "chance_drawn":
      return (
        `<tr class="trace-row trace-chance"><td>${seg}</td><td>chance</td>` +
        `<td>p=${event.p}, drew ${event.draw.toFixed(4)}</td>` +
        `<td>${event.passed ? "passed" : "failed"}</td></tr>`
      );
    case "choice_made":
      return (
        `<tr class="trace-row trace-choice"><td>${seg}</td><td>choice</td>` +
        `<td>${escapeHtml(event.options.join(" | "))}</td>` +
        `<td>picked ${event.chosen_index}</td></tr>`
      );
    case "triggered":
      return (
        `<tr class="trace-row trace-triggered"><td>${seg}</td>` +
        `<td>trigger</td><td>${escapeHtml(event.text)}</td>` +
        `<td>${event.uncertain ? "uncertain" : ""}</td></tr>`
      );
    case "branch_taken":
      return (
        `<tr class="trace-row trace-branch"><td>${seg}</td><td>branch</td>` +
        `<td>${escapeHtml(event.kind)}</td>` +
        `<td>${event.arm === null ? "" : `arm ${event.arm}`}</td></tr>`
      );
  }
}

export function renderTrace(trace: TraceEvent[]): string {
  if (trace.length === 0) {
    return '<p class="empty">No trace for this turn.</p>';
  }
  const rows = trace.map(traceRow).join("\n");
  return (
    '<table class="trace"><thead><tr>' +
    "<th>segment</th><th>event</th><th>detail</th><th>outcome</th>" +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderTriggered(statements: TriggeredStatement[]): string {
  if (statements.length === 0) {
    return '<p class="empty">No profile rule fired.</p>';
  }
  const items = statements
    .map(
      (s) =>
        `<li class="statement${s.uncertain ? " uncertain" : ""}">` +
        `${escapeHtml(s.text)} ` +
        `<span class="segment-id">${escapeHtml(s.segment_id)}</span></li>`,
    )
    .join("\n");
  return `<ul class="triggered">${items}</ul>`;
}

export function renderErrorBanner(message: string): string {
  if (!message) return "";
  return `<div class="banner error">${escapeHtml(message)}</div>`;
}

export function renderProfiles(profiles: ProfileListing[]): string {
  return profiles
    .map(
      (p) =>
        `<option value="${escapeHtml(p.character)}">` +
        `${escapeHtml(p.character)} (${p.versions.length} versions)</option>`,
    )
    .join("\n");
}

export function renderRevisionLog(log: VersionLog): string {
  if (log.revisions.length === 0) {
    return '<p class="empty">No revisions; only version 0 exists.</p>';
  }
  const items = log.revisions
    .map(
      (r) =>
        `<li class="revision"><strong>v${r.version}</strong> ` +
        `scene ${escapeHtml(r.scene_id)} ` +
        `[${escapeHtml(r.issue)}] revised ` +
        `<span class="segment-id">${escapeHtml(r.blamed_segment)}</span>` +
        `<div class="rationale">${escapeHtml(r.rationale)}</div></li>`,
    )
    .join("\n");
  return `<ul class="revisions">${items}</ul>`;
}

function renderDiffBody(oldSource: string, newSource: string): string {
  return diffLines(oldSource, newSource)
    .map(
      (line) =>
        `<div class="diff-line diff-${
          line.tag === "-" ? "del" : line.tag === "+" ? "add" : "ctx"
        }">${escapeHtml(line.tag)} ${escapeHtml(line.text)}</div>`,
    )
    .join("\n");
}

export function renderVersionDiff(
  before: VersionSources,
  after: VersionSources,
): string {
  const changes = changedSegments(before, after);
  const header =
    `<h3>v${before.version} &rarr; v${after.version}: ` +
    `${changes.length} segment${changes.length === 1 ? "" : "s"} changed</h3>`;
  if (changes.length === 0) return header;
  const blocks = changes
    .map(
      (c) =>
        `<div class="segment-diff" data-segment="${escapeHtml(c.segmentId)}">` +
        `<h4><span class="segment-id">${escapeHtml(c.segmentId)}</span>` +
        ` ${c.change}</h4>` +
        `<pre class="diff">${renderDiffBody(c.oldSource, c.newSource)}</pre>` +
        `</div>`,
    )
    .join("\n");
  return header + blocks;
}

export function renderVersionSources(payload: VersionSources): string {
  const blocks = payload.segment_order
    .map((segmentId) => {
      const source = payload.sources[segmentId] ?? "";
      return (
        `<div class="segment-source">` +
        `<h4><span class="segment-id">${escapeHtml(segmentId)}</span></h4>` +
        `<pre>${escapeHtml(source)}</pre></div>`
      );
    })
    .join("\n");
  return `<h3>v${payload.version} sources</h3>${blocks}`;
}
