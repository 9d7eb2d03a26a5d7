// Auto-reconnecting WebSocket wrapper. The factory is injectable so the
// logic is testable without a browser.

export interface SocketCallbacks {
  onOpen(): void;
  onMessage(text: string): void;
  onClose(): void;
}

export type WebSocketLike = {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
};

export type SocketFactory = (url: string) => WebSocketLike;

const RETRY_BASE_MS = 250;
const RETRY_MAX_MS = 5000;

export class TelemetrySocket {
  private ws: WebSocketLike | null = null;
  private attempts = 0;
  private stopped = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly url: string,
    private readonly callbacks: SocketCallbacks,
    private readonly factory: SocketFactory = (u) => new WebSocket(u) as WebSocketLike,
  ) {}

  connect(): void {
    if (this.stopped) return;
    const ws = this.factory(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.attempts = 0;
      this.callbacks.onOpen();
    };
    ws.onmessage = (ev) => this.callbacks.onMessage(String(ev.data));
    ws.onclose = () => {
      this.ws = null;
      this.callbacks.onClose();
      this.scheduleReconnect();
    };
  }

  send(obj: unknown): boolean {
    if (!this.ws) return false;
    try {
      this.ws.send(JSON.stringify(obj));
      return true;
    } catch {
      return false;
    }
  }

  close(): void {
    this.stopped = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.ws?.close();
  }

  private scheduleReconnect(): void {
    if (this.stopped) return;
    const delay = Math.min(RETRY_BASE_MS * 2 ** this.attempts, RETRY_MAX_MS);
    this.attempts += 1;
    this.timer = setTimeout(() => this.connect(), delay);
  }
}
