// Contract test against real engine output: fixtures/telemetry.jsonl holds
// verbatim wire envelopes captured from headless engine runs.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { isErrorReply, parseServerMessage } from "../src/types.js";
import { applyMessage, initialViewModel, isPenaltyLit } from "../src/viewmodel.js";

const here = dirname(fileURLToPath(import.meta.url));
const lines = readFileSync(join(here, "fixtures", "telemetry.jsonl"), "utf-8")
  .trim()
  .split("\n");

describe("real engine telemetry", () => {
  it("every captured envelope parses", () => {
    for (const line of lines) {
      const msg = parseServerMessage(line);
      expect(isErrorReply(msg)).toBe(false);
    }
  });

  it("folding the stream reproduces the session story", () => {
    let vm = initialViewModel();
    const phases = new Set<string>();
    let sawWind = false;
    let penaltyLitAtSomePoint = false;
    for (const line of lines) {
      vm = applyMessage(vm, parseServerMessage(line));
      if (vm.record) {
        phases.add(vm.record.phase);
        sawWind ||= vm.record.feedback.wind_on;
      }
      penaltyLitAtSomePoint ||= isPenaltyLit(vm);
    }
    expect(phases).toContain("calib_baseline");
    expect(phases).toContain("pull");
    expect(phases).toContain("success");
    expect(sawWind).toBe(true);
    expect(penaltyLitAtSomePoint).toBe(true);
    expect(vm.eventLog.some((e) => e.text === "penalty_hold")).toBe(true);
  });

  it("vibe array from the engine is palindromic and in range", () => {
    for (const line of lines) {
      const msg = parseServerMessage(line);
      if (isErrorReply(msg)) continue;
      const amps = msg.record.feedback.vibe_amplitudes;
      expect(amps).toEqual([...amps].reverse());
      for (const a of amps) {
        expect(a).toBeGreaterThanOrEqual(0);
        expect(a).toBeLessThanOrEqual(1);
      }
    }
  });
});
