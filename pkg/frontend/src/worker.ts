/// <reference lib="webworker" />
/** Background worker: runs verification and benchmarking off the UI thread,
 * one job at a time, streaming progress back to the page. */
import { benchSample } from "./bench.js";
import { parseTranscript, verifyTranscript } from "./transcript.js";

export type WorkerRequest =
  | { kind: "verify"; transcriptText: string; strict: boolean }
  | { kind: "bench"; samples: number; bits: number; hint: boolean };

export type WorkerResponse =
  | { kind: "verify-result"; ok: boolean; checks: { name: string; passed: boolean; detail: string }[]; elapsedMs: number }
  | { kind: "bench-progress"; done: number; total: number }
  | { kind: "bench-row"; row: { sampleIndex: number; iterations: number; elapsedMs: number; primalityTests: number } }
  | { kind: "bench-done"; maxMs: number; meanMs: number }
  | { kind: "error"; message: string };

let busy = false;

function post(msg: WorkerResponse): void {
  (self as unknown as Worker).postMessage(msg);
}

self.onmessage = async (event: MessageEvent<WorkerRequest>) => {
  if (busy) {
    post({ kind: "error", message: "a job is already running" });
    return;
  }
  busy = true;
  try {
    const req = event.data;
    if (req.kind === "verify") {
      const start = performance.now();
      const transcript = parseTranscript(req.transcriptText);
      const report = await verifyTranscript(transcript, req.strict);
      post({
        kind: "verify-result",
        ok: report.ok,
        checks: report.checks,
        elapsedMs: performance.now() - start,
      });
    } else {
      let total = 0;
      let max = 0;
      for (let i = 0; i < req.samples; i++) {
        const row = benchSample(i, req.bits, req.hint);
        post({ kind: "bench-row", row });
        total += row.elapsedMs;
        max = Math.max(max, row.elapsedMs);
        post({ kind: "bench-progress", done: i + 1, total: req.samples });
      }
      post({ kind: "bench-done", maxMs: max, meanMs: req.samples ? total / req.samples : 0 });
    }
  } catch (err) {
    post({ kind: "error", message: err instanceof Error ? err.message : String(err) });
  } finally {
    busy = false;
  }
};
