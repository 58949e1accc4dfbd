/** Segment-level and line-level diffs between two profile versions.
 *
 * Programs are a handful of lines each, so a plain LCS table is fine.
 */

import type { VersionSources } from "./types";

export type SegmentChange = "changed" | "added" | "removed";

export interface SegmentDiff {
  segmentId: string;
  change: SegmentChange;
  oldSource: string;
  newSource: string;
}

export interface DiffLine {
  tag: " " | "-" | "+";
  text: string;
}

/** Segments whose source differs between two versions, in the order
 * the newer version lists them (removed segments keep the old order). */
export function changedSegments(
  before: VersionSources,
  after: VersionSources,
): SegmentDiff[] {
  const out: SegmentDiff[] = [];
  for (const segmentId of after.segment_order) {
    const oldSource = before.sources[segmentId];
    const newSource = after.sources[segmentId];
    if (newSource === undefined) continue;
    if (oldSource === undefined) {
      out.push({ segmentId, change: "added", oldSource: "", newSource });
    } else if (oldSource !== newSource) {
      out.push({ segmentId, change: "changed", oldSource, newSource });
    }
  }
  for (const segmentId of before.segment_order) {
    if (
      before.sources[segmentId] !== undefined &&
      after.sources[segmentId] === undefined
    ) {
      out.push({
        segmentId,
        change: "removed",
        oldSource: before.sources[segmentId] ?? "",
        newSource: "",
      });
    }
  }
  return out;
}

function splitLines(text: string): string[] {
  if (text === "") return [];
  return text.replace(/\n$/, "").split("\n");
}

/** Unified line diff via longest common subsequence. */
export function diffLines(oldText: string, newText: string): DiffLine[] {
  const a = splitLines(oldText);
  const b = splitLines(newText);
  const rows = a.length + 1;
  const cols = b.length + 1;
  const lcs: number[][] = Array.from({ length: rows }, () =>
    new Array<number>(cols).fill(0),
  );
  for (let i = a.length - 1; i >= 0; i--) {
    for (let j = b.length - 1; j >= 0; j--) {
      lcs[i]![j] =
        a[i] === b[j]
          ? lcs[i + 1]![j + 1]! + 1
          : Math.max(lcs[i + 1]![j]!, lcs[i]![j + 1]!);
    }
  }
  const out: DiffLine[] = [];
  let i = 0;
  let j = 0;
  while (i < a.length && j < b.length) {
    if (a[i] === b[j]) {
      out.push({ tag: " ", text: a[i]! });
      i++;
      j++;
    } else if (lcs[i + 1]![j]! >= lcs[i]![j + 1]!) {
      out.push({ tag: "-", text: a[i]! });
      i++;
    } else {
      out.push({ tag: "+", text: b[j]! });
      j++;
    }
  }
  for (; i < a.length; i++) out.push({ tag: "-", text: a[i]! });
  for (; j < b.length; j++) out.push({ tag: "+", text: b[j]! });
  return out;
}
