/**
 * Shared-fixture agreement: the browser core must produce the exact same
 * per-check verdicts as the native verifier, in both modes, for all five
 * fixture transcripts (three honest, two tampered).
 */
import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { parseTranscript, signedBytes, verifyTranscript } from "../src/transcript.js";

const FIXTURES = join(__dirname, "..", "fixtures");

interface ManifestEntry {
  file: string;
  verdicts: Record<"default" | "strict", { ok: boolean; checks: Record<string, boolean> }>;
}

const manifest = JSON.parse(readFileSync(join(FIXTURES, "manifest.json"), "utf8")) as {
  transcripts: ManifestEntry[];
};

describe("native/browser verdict agreement", () => {
  it("covers three honest and two tampered transcripts", () => {
    const expectOk = manifest.transcripts.map((t) => t.verdicts.default.ok);
    expect(expectOk.filter(Boolean).length).toBe(3);
    expect(expectOk.filter((ok) => !ok).length).toBe(2);
  });

  for (const entry of manifest.transcripts) {
    for (const mode of ["default", "strict"] as const) {
      it(`${entry.file} (${mode}) matches the native verdict`, async () => {
        const raw = readFileSync(join(FIXTURES, entry.file), "utf8");
        const transcript = parseTranscript(raw);
        const report = await verifyTranscript(transcript, mode === "strict");
        const expected = entry.verdicts[mode];
        expect(report.ok).toBe(expected.ok);
        const got = Object.fromEntries(report.checks.map((c) => [c.name, c.passed]));
        expect(got).toEqual(expected.checks);
      });
    }
  }

  it("reconstructs the exact signed bytes from parsed fields", () => {
    const raw = readFileSync(join(FIXTURES, "honest-1.json"), "utf8").trim();
    const transcript = parseTranscript(raw);
    const obj = JSON.parse(raw) as Record<string, unknown>;
    delete obj.signature;
    // field order is fixed, so a plain re-serialization must round-trip
    const expected = JSON.stringify(obj);
    expect(new TextDecoder().decode(signedBytes(transcript))).toBe(expected);
  });

  it("rejects malformed transcript JSON without crashing", () => {
    expect(() => parseTranscript("{oops")).toThrow();
    expect(() => parseTranscript('{"version": 2}')).toThrow();
    expect(() => parseTranscript('{"version": 1, "winners": "x"}')).toThrow();
  });
});
