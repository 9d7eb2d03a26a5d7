// DOM rendering: every displayed number is verbatim from the latest record.

import { ViewModel, enabledCommands, forceInputActive, isPenaltyLit } from "./viewmodel.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const PHASE_LABELS: Record<string, string> = {
  idle: "Idle",
  calib_baseline: "Calibrating: baseline (relax)",
  calib_concentration: "Calibrating: concentration",
  pull: "Pull!",
  success: "Success — the sword is out",
  failure: "Failed",
};

export function render(vm: ViewModel, travelM: number): void {
  const banner = el("status-banner");
  banner.textContent =
    vm.status === "connected" ? "" : vm.status === "connecting" ? "connecting…" : "DISCONNECTED — retrying";
  banner.className = `status ${vm.status}`;

  const record = vm.record;
  el("phase").textContent = record ? PHASE_LABELS[record.phase] ?? record.phase : "—";
  el("phase").dataset.phase = record?.phase ?? "none";

  if (record) {
    el("score-value").textContent = record.score.toFixed(3);
    el<HTMLElement>("score-fill").style.width = `${(record.score * 100).toFixed(1)}%`;
    el("alpha-value").textContent = record.relative_alpha.toFixed(3);
    el("gate-value").textContent = record.gate.toFixed(2);

    const pct = Math.min(100, (record.pull.displacement_m / travelM) * 100);
    el<HTMLElement>("displacement-fill").style.width = `${pct.toFixed(1)}%`;
    el("displacement-value").textContent = `${(record.pull.displacement_m * 100).toFixed(1)} cm`;
    el("force-value").textContent = `${record.pull.applied_force_n.toFixed(0)} N`;

    const fb = record.feedback;
    el("fov-value").textContent = fb.fov_scale.toFixed(2);
    el("time-value").textContent = fb.time_scale.toFixed(2);
    el("audio-value").textContent = `${fb.audio_gain.toFixed(2)} / ${fb.audio_rate.toFixed(2)}`;
    el("traction-value").textContent = `${fb.traction_n.toFixed(1)} N`;
    const dots = el("vibe-dots").children;
    for (let i = 0; i < dots.length; i += 1) {
      const amp = fb.vibe_amplitudes[i] ?? 0;
      (dots[i] as HTMLElement).style.opacity = `${0.15 + 0.85 * amp}`;
      (dots[i] as HTMLElement).classList.toggle("on", amp > 0);
    }
    el("wind-flag").classList.toggle("on", fb.wind_on);
  }

  el("penalty-indicator").classList.toggle("lit", isPenaltyLit(vm));
  el("drops-value").textContent = String(vm.droppedRecords);
  el("error-value").textContent = vm.lastError ?? "";

  const enabled = new Set(enabledCommands(vm));
  for (const kind of [
    "start_calibration",
    "finish_phase",
    "start_pull",
    "abort",
    "inject_distraction",
  ]) {
    el<HTMLButtonElement>(`btn-${kind}`).disabled = !enabled.has(kind);
  }
  el<HTMLElement>("force-help").classList.toggle("active", forceInputActive(vm));

  const log = el("event-log");
  const lines = vm.eventLog
    .slice(-30)
    .map((e) => `<div>[${(e.t_us / 1e6).toFixed(1)}s] ${e.text}</div>`)
    .reverse();
  log.innerHTML = lines.join("");
}
