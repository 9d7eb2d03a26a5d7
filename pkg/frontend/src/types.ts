// Telemetry wire types, mirroring the engine's JSON exactly.

export type Phase =
  | "idle"
  | "calib_baseline"
  | "calib_concentration"
  | "pull"
  | "success"
  | "failure";

export const TERMINAL_PHASES: Phase[] = ["success", "failure"];

export interface FeedbackCommand {
  fov_scale: number;
  time_scale: number;
  audio_gain: number;
  audio_rate: number;
  vibe_amplitudes: number[];
  traction_n: number;
  wind_on: boolean;
}

export interface PullSnapshot {
  displacement_m: number;
  applied_force_n: number;
  velocity_mps: number;
}

export interface TelemetryRecord {
  t_us: number;
  phase: Phase;
  score: number;
  relative_alpha: number;
  gate: number;
  feedback: FeedbackCommand;
  pull: PullSnapshot;
  events: string[];
}

export interface Envelope {
  seq: number;
  record: TelemetryRecord;
}

export interface ErrorReply {
  error: string;
}

export type ServerMessage = Envelope | ErrorReply;

const PHASES: Phase[] = [
  "idle",
  "calib_baseline",
  "calib_concentration",
  "pull",
  "success",
  "failure",
];

function isNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function checkRecord(obj: unknown): TelemetryRecord {
  if (typeof obj !== "object" || obj === null) throw new Error("record is not an object");
  const r = obj as Record<string, unknown>;
  if (!isNumber(r.t_us)) throw new Error("record.t_us missing");
  if (!PHASES.includes(r.phase as Phase)) throw new Error(`unknown phase ${String(r.phase)}`);
  for (const key of ["score", "relative_alpha", "gate"]) {
    if (!isNumber(r[key])) throw new Error(`record.${key} missing`);
  }
  const fb = r.feedback as Record<string, unknown> | null;
  if (typeof fb !== "object" || fb === null) throw new Error("record.feedback missing");
  for (const key of ["fov_scale", "time_scale", "audio_gain", "audio_rate", "traction_n"]) {
    if (!isNumber(fb[key])) throw new Error(`feedback.${key} missing`);
  }
  if (!Array.isArray(fb.vibe_amplitudes)) throw new Error("feedback.vibe_amplitudes missing");
  if (typeof fb.wind_on !== "boolean") throw new Error("feedback.wind_on missing");
  const pull = r.pull as Record<string, unknown> | null;
  if (typeof pull !== "object" || pull === null) throw new Error("record.pull missing");
  for (const key of ["displacement_m", "applied_force_n", "velocity_mps"]) {
    if (!isNumber(pull[key])) throw new Error(`pull.${key} missing`);
  }
  if (!Array.isArray(r.events)) throw new Error("record.events missing");
  return obj as TelemetryRecord;
}

export function parseServerMessage(text: string): ServerMessage {
  const obj: unknown = JSON.parse(text);
  if (typeof obj !== "object" || obj === null) throw new Error("message is not an object");
  const m = obj as Record<string, unknown>;
  if (typeof m.error === "string") return { error: m.error };
  if (!isNumber(m.seq)) throw new Error("message.seq missing");
  return { seq: m.seq, record: checkRecord(m.record) };
}

export function isErrorReply(msg: ServerMessage): msg is ErrorReply {
  return "error" in msg;
}

// Operator command constructors (the engine's command channel).

export type OperatorCommand =
  | { kind: "start_calibration" }
  | { kind: "finish_phase" }
  | { kind: "start_pull" }
  | { kind: "abort" }
  | { kind: "inject_distraction" }
  | { kind: "set_force"; newtons: number }
  | { kind: "set_mode"; mode: "linear" | "time_avg" };

export function setForce(newtons: number): OperatorCommand {
  return { kind: "set_force", newtons };
}
