// Key-hold force input: hold to apply upward force, release to let go.
// Key auto-repeat must not spam the engine, so identical consecutive
// set_force values are suppressed.

import { OperatorCommand, setForce } from "./types.js";

export interface ForceBindings {
  holdNewtons: number; // inside the force band
  yankNewtons: number; // deliberately above force_hi to demo the governor
}

export const DEFAULT_BINDINGS: ForceBindings = { holdNewtons: 30, yankNewtons: 120 };

export class ForceInput {
  private lastSent: number | null = null;
  private inPull = false;

  constructor(
    private readonly send: (cmd: OperatorCommand) => void,
    readonly bindings: ForceBindings = DEFAULT_BINDINGS,
  ) {}

  setPhase(phaseName: string | null): void {
    const pull = phaseName === "pull";
    if (!pull) {
      this.lastSent = null; // no trailing commands outside Pull
    }
    this.inPull = pull;
  }

  keyDown(yank: boolean): void {
    if (!this.inPull) return;
    const newtons = yank ? this.bindings.yankNewtons : this.bindings.holdNewtons;
    this.sendOnce(newtons);
  }

  keyUp(): void {
    if (!this.inPull) return;
    this.sendOnce(0);
  }

  private sendOnce(newtons: number): void {
    if (this.lastSent === newtons) return;
    this.lastSent = newtons;
    this.send(setForce(newtons));
  }
}
