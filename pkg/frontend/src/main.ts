import { ForceInput } from "./force.js";
import { TelemetrySocket } from "./socket.js";
import { OperatorCommand, parseServerMessage } from "./types.js";
import {
  ViewModel,
  applyMessage,
  initialViewModel,
  noteCommandSent,
  noteConnecting,
  noteDisconnected,
  phase,
} from "./viewmodel.js";
import { render } from "./ui.js";

const params = new URLSearchParams(location.search);
const url = params.get("engine") ?? "ws://127.0.0.1:8765";
const TRAVEL_M = Number(params.get("travel") ?? "0.30");

let vm: ViewModel = initialViewModel();

function update(next: ViewModel): void {
  vm = next;
  render(vm, TRAVEL_M);
}

const socket = new TelemetrySocket(url, {
  onOpen: () => update({ ...vm, status: "connected" }),
  onMessage: (text) => {
    try {
      update(applyMessage(vm, parseServerMessage(text)));
    } catch (err) {
      console.warn("bad message", err);
    }
    force.setPhase(phase(vm));
  },
  onClose: () => update(noteDisconnected(vm)),
});

function sendCommand(cmd: OperatorCommand): void {
  if (socket.send(cmd)) update(noteCommandSent(vm));
}

const force = new ForceInput(sendCommand);

for (const kind of [
  "start_calibration",
  "finish_phase",
  "start_pull",
  "abort",
  "inject_distraction",
] as const) {
  document.getElementById(`btn-${kind}`)?.addEventListener("click", () => sendCommand({ kind }));
}

document.getElementById("mode-select")?.addEventListener("change", (ev) => {
  const mode = (ev.target as HTMLSelectElement).value as "linear" | "time_avg";
  sendCommand({ kind: "set_mode", mode });
});

// Space: hold in-band force. Y: hold deliberate over-force (governor demo).
window.addEventListener("keydown", (ev) => {
  if (ev.code === "Space") {
    ev.preventDefault();
    force.keyDown(false);
  } else if (ev.code === "KeyY") {
    force.keyDown(true);
  }
});
window.addEventListener("keyup", (ev) => {
  if (ev.code === "Space" || ev.code === "KeyY") force.keyUp();
});

update(noteConnecting(vm));
socket.connect();
