// View state is a pure fold over received messages: the dashboard renders
// only what the engine said, never a client-side simulation of it.

import {
  Envelope,
  Phase,
  ServerMessage,
  TelemetryRecord,
  isErrorReply,
} from "./types.js";

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export interface LoggedEvent {
  t_us: number;
  text: string;
}

export interface ViewModel {
  status: ConnectionStatus;
  seq: number | null;
  record: TelemetryRecord | null;
  droppedRecords: number;
  eventLog: LoggedEvent[];
  lastError: string | null;
  penaltyLitUntilSeq: number;
  commandInFlight: boolean;
}

export const EVENT_LOG_LIMIT = 200;
// how many records the penalty lamp stays lit after a penalty_hold event
export const PENALTY_LIT_RECORDS = 10;

export function initialViewModel(): ViewModel {
  return {
    status: "connecting",
    seq: null,
    record: null,
    droppedRecords: 0,
    eventLog: [],
    lastError: null,
    penaltyLitUntilSeq: -1,
    commandInFlight: false,
  };
}

export function applyMessage(vm: ViewModel, msg: ServerMessage): ViewModel {
  if (isErrorReply(msg)) {
    return { ...vm, lastError: msg.error };
  }
  return applyEnvelope(vm, msg);
}

function applyEnvelope(vm: ViewModel, msg: Envelope): ViewModel {
  const dropped =
    vm.seq !== null && msg.seq > vm.seq + 1 ? vm.droppedRecords + (msg.seq - vm.seq - 1) : vm.droppedRecords;
  const events = msg.record.events.map((text) => ({ t_us: msg.record.t_us, text }));
  const eventLog = [...vm.eventLog, ...events].slice(-EVENT_LOG_LIMIT);
  const penaltyLitUntilSeq = msg.record.events.includes("penalty_hold")
    ? msg.seq + PENALTY_LIT_RECORDS
    : vm.penaltyLitUntilSeq;
  return {
    ...vm,
    status: "connected",
    seq: msg.seq,
    record: msg.record,
    droppedRecords: dropped,
    eventLog,
    penaltyLitUntilSeq,
    commandInFlight: false,
  };
}

export function noteConnecting(vm: ViewModel): ViewModel {
  return { ...vm, status: "connecting" };
}

export function noteDisconnected(vm: ViewModel): ViewModel {
  return { ...vm, status: "disconnected" };
}

export function noteCommandSent(vm: ViewModel): ViewModel {
  return { ...vm, commandInFlight: true };
}

export function isPenaltyLit(vm: ViewModel): boolean {
  return vm.seq !== null && vm.seq <= vm.penaltyLitUntilSeq;
}

export function phase(vm: ViewModel): Phase | null {
  return vm.record ? vm.record.phase : null;
}

// Which operator buttons are live in each phase; everything else is disabled.
export function enabledCommands(vm: ViewModel): string[] {
  if (vm.status !== "connected" || !vm.record) return [];
  switch (vm.record.phase) {
    case "idle":
      return ["start_calibration"];
    case "calib_baseline":
      return ["finish_phase", "abort"];
    case "calib_concentration":
      return ["finish_phase", "start_pull", "abort"];
    case "pull":
      return ["abort", "inject_distraction"];
    default:
      return [];
  }
}

export function forceInputActive(vm: ViewModel): boolean {
  return vm.status === "connected" && vm.record !== null && vm.record.phase === "pull";
}
