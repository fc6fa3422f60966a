/** Page wiring: transcript verification panel and hash-to-prime benchmark
 * with a scatter plot, both driven through the background worker. */
import { toCsv, type BenchRow } from "./bench.js";
import type { WorkerRequest, WorkerResponse } from "./worker.js";

const worker = new Worker(new URL("./worker.js", import.meta.url), { type: "module" });

const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

const fileInput = $<HTMLInputElement>("transcript-file");
const urlInput = $<HTMLInputElement>("transcript-url");
const fetchButton = $<HTMLButtonElement>("fetch-transcript");
const strictBox = $<HTMLInputElement>("strict-mode");
const verifyButton = $<HTMLButtonElement>("verify-button");
const checksBody = $<HTMLTableSectionElement>("checks-body");
const verdictLine = $<HTMLParagraphElement>("verdict");

const samplesInput = $<HTMLInputElement>("bench-samples");
const bitsInput = $<HTMLInputElement>("bench-bits");
const hintBox = $<HTMLInputElement>("bench-hint");
const benchButton = $<HTMLButtonElement>("bench-button");
const benchStatus = $<HTMLParagraphElement>("bench-status");
const exportButton = $<HTMLButtonElement>("bench-export");
const canvas = $<HTMLCanvasElement>("bench-canvas");

let transcriptText: string | null = null;
let benchRows: BenchRow[] = [];
let jobRunning = false;

function setBusy(running: boolean): void {
  jobRunning = running;
  verifyButton.disabled = running || transcriptText === null;
  benchButton.disabled = running;
}

fileInput.addEventListener("change", async () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  transcriptText = await file.text();
  verdictLine.textContent = `loaded ${file.name} (${file.size} bytes)`;
  setBusy(jobRunning);
});

fetchButton.addEventListener("click", async () => {
  try {
    const resp = await fetch(urlInput.value);
    if (!resp.ok) throw new Error(`HTTP ${resp.status}`);
    transcriptText = await resp.text();
    verdictLine.textContent = `fetched transcript (${transcriptText.length} bytes)`;
  } catch (err) {
    transcriptText = null;
    verdictLine.textContent = `fetch failed: ${err instanceof Error ? err.message : err}`;
  }
  setBusy(jobRunning);
});

verifyButton.addEventListener("click", () => {
  if (transcriptText === null || jobRunning) return;
  checksBody.replaceChildren();
  verdictLine.textContent = "verifying…";
  setBusy(true);
  send({ kind: "verify", transcriptText, strict: strictBox.checked });
});

benchButton.addEventListener("click", () => {
  if (jobRunning) return;
  benchRows = [];
  drawScatter();
  benchStatus.textContent = "running…";
  exportButton.disabled = true;
  setBusy(true);
  send({
    kind: "bench",
    samples: Math.max(1, Number(samplesInput.value) || 1024),
    bits: Math.max(16, Number(bitsInput.value) || 1024),
    hint: hintBox.checked,
  });
});

exportButton.addEventListener("click", () => {
  const blob = new Blob([toCsv(benchRows)], { type: "text/csv" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = hintBox.checked ? "hprime-hint.csv" : "hprime-full.csv";
  a.click();
  URL.revokeObjectURL(a.href);
});

function send(req: WorkerRequest): void {
  worker.postMessage(req);
}

worker.onmessage = (event: MessageEvent<WorkerResponse>) => {
  const msg = event.data;
  switch (msg.kind) {
    case "verify-result": {
      checksBody.replaceChildren(
        ...msg.checks.map((check) => {
          const row = document.createElement("tr");
          row.className = check.passed ? "pass" : "fail";
          const name = document.createElement("td");
          name.textContent = check.name;
          const status = document.createElement("td");
          status.textContent = check.passed ? "PASS" : "FAIL";
          const detail = document.createElement("td");
          detail.textContent = check.detail;
          row.append(name, status, detail);
          return row;
        }),
      );
      verdictLine.textContent = `${msg.ok ? "transcript VALID" : "transcript INVALID"} — verified in ${msg.elapsedMs.toFixed(1)} ms`;
      verdictLine.className = msg.ok ? "pass" : "fail";
      setBusy(false);
      break;
    }
    case "bench-row":
      benchRows.push(msg.row);
      if (benchRows.length % 16 === 0) drawScatter();
      break;
    case "bench-progress":
      benchStatus.textContent = `running… ${msg.done}/${msg.total}`;
      break;
    case "bench-done":
      drawScatter();
      benchStatus.textContent = `done: max ${msg.maxMs.toFixed(1)} ms, mean ${msg.meanMs.toFixed(1)} ms over ${benchRows.length} samples`;
      exportButton.disabled = benchRows.length === 0;
      setBusy(false);
      break;
    case "error":
      verdictLine.textContent = `error: ${msg.message}`;
      verdictLine.className = "fail";
      benchStatus.textContent = "";
      setBusy(false);
      break;
  }
};

function drawScatter(): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  if (benchRows.length === 0) return;
  const maxMs = Math.max(...benchRows.map((r) => r.elapsedMs), 1e-6);
  const maxIndex = Math.max(...benchRows.map((r) => r.sampleIndex), 1);
  ctx.fillStyle = "#888";
  ctx.font = "10px sans-serif";
  ctx.fillText(`${maxMs.toFixed(1)} ms`, 4, 10);
  ctx.fillText("0", 4, height - 2);
  ctx.fillStyle = "#2563eb";
  for (const row of benchRows) {
    const x = 20 + (row.sampleIndex / maxIndex) * (width - 28);
    const y = height - 12 - (row.elapsedMs / maxMs) * (height - 24);
    ctx.fillRect(x, y, 2.5, 2.5);
  }
}

setBusy(false);
