/** DOM wiring. Everything interesting happens in api/console/render;
 * this file only moves strings between them and the page.
 */

import { ApiError, ConsoleApi } from "./api";
import { ChatConsole } from "./console";
import {
  renderErrorBanner,
  renderProfiles,
  renderRevisionLog,
  renderVersionDiff,
  renderVersionSources,
} from "./render";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const serverInput = el<HTMLInputElement>("server-url");
const connectButton = el<HTMLButtonElement>("connect");
const characterSelect = el<HTMLSelectElement>("character");
const openButton = el<HTMLButtonElement>("open-session");
const statusSpan = el<HTMLSpanElement>("status");
const bannerDiv = el<HTMLDivElement>("banner");
const transcriptDiv = el<HTMLDivElement>("transcript");
const turnInput = el<HTMLInputElement>("turn-input");
const sendButton = el<HTMLButtonElement>("send");
const triggeredDiv = el<HTMLDivElement>("triggered");
const traceDiv = el<HTMLDivElement>("trace-panel");
const revisionsDiv = el<HTMLDivElement>("revision-log");
const pairSelect = el<HTMLSelectElement>("diff-pair");
const diffDiv = el<HTMLDivElement>("version-diff");

let api = new ConsoleApi();
let chat = new ChatConsole(api);

function showError(err: unknown): void {
  const message =
    err instanceof ApiError
      ? err.status
        ? `${err.status}: ${err.message}`
        : err.message
      : String(err);
  bannerDiv.innerHTML = renderErrorBanner(message);
}

function sync(): void {
  const view = chat.view();
  bannerDiv.innerHTML = view.banner;
  transcriptDiv.innerHTML = view.transcript;
  traceDiv.innerHTML = view.trace;
  triggeredDiv.innerHTML = view.triggered;
  statusSpan.textContent = view.status;
  transcriptDiv.scrollTop = transcriptDiv.scrollHeight;
}

async function connect(): Promise<void> {
  api = new ConsoleApi(serverInput.value.replace(/\/+$/, ""));
  chat = new ChatConsole(api);
  try {
    const profiles = await api.listProfiles();
    characterSelect.innerHTML = renderProfiles(profiles);
    characterSelect.disabled = profiles.length === 0;
    openButton.disabled = profiles.length === 0;
    bannerDiv.innerHTML = "";
    statusSpan.textContent = `connected, ${profiles.length} profiles`;
  } catch (err) {
    showError(err);
  }
}

async function showDiff(character: string): Promise<void> {
  const pair = pairSelect.value;
  if (!pair) {
    diffDiv.innerHTML = "";
    return;
  }
  const [oldV, newV] = pair.split(":").map(Number);
  try {
    if (oldV === newV) {
      // single-version store: show the sources instead of a diff
      const only = await api.versionSources(character, newV ?? 0);
      diffDiv.innerHTML = renderVersionSources(only);
      return;
    }
    const [before, after] = await Promise.all([
      api.versionSources(character, oldV ?? 0),
      api.versionSources(character, newV ?? 0),
    ]);
    diffDiv.innerHTML = renderVersionDiff(before, after);
  } catch (err) {
    showError(err);
  }
}

async function loadVersionBrowser(character: string): Promise<void> {
  try {
    const log = await api.versionLog(character);
    revisionsDiv.innerHTML = renderRevisionLog(log);
    const pairs: string[] = [];
    for (let i = 1; i < log.versions.length; i++) {
      const a = log.versions[i - 1];
      const b = log.versions[i];
      pairs.push(`<option value="${a}:${b}">v${a} &rarr; v${b}</option>`);
    }
    if (pairs.length === 0 && log.versions.length === 1) {
      const only = log.versions[0];
      pairs.push(`<option value="${only}:${only}">v${only} sources</option>`);
    }
    pairSelect.innerHTML = pairs.join("\n");
    pairSelect.disabled = pairs.length === 0;
    if (pairs.length > 0) {
      pairSelect.selectedIndex = pairs.length - 1;
      await showDiff(character);
    } else {
      diffDiv.innerHTML = "";
    }
  } catch (err) {
    showError(err);
  }
}

async function openSession(): Promise<void> {
  const character = characterSelect.value;
  if (!character) return;
  await chat.open(character);
  sync();
  if (chat.session !== null) {
    await loadVersionBrowser(character);
  }
}

async function send(): Promise<void> {
  const text = turnInput.value;
  if (!text.trim()) return;
  turnInput.value = "";
  sendButton.disabled = true;
  try {
    await chat.send(text);
  } finally {
    sendButton.disabled = false;
  }
  sync();
  turnInput.focus();
}

connectButton.addEventListener("click", () => void connect());
openButton.addEventListener("click", () => void openSession());
sendButton.addEventListener("click", () => void send());
turnInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter") void send();
});
pairSelect.addEventListener("change", () =>
  void showDiff(characterSelect.value),
);
characterSelect.addEventListener("change", () =>
  void loadVersionBrowser(characterSelect.value),
);

void connect();
