/** HTTP and update-stream client for the engine service. */
import type {
  DiffDoc,
  FilterDoc,
  SceneDoc,
  SnapshotDoc,
} from "./protocol.js";

export class ServiceClient {
  private ws: WebSocket | null = null;

  constructor(readonly baseUrl: string) {}

  async fetchScene(): Promise<SceneDoc> {
    const resp = await fetch(`${this.baseUrl}/scene`);
    if (!resp.ok) throw new Error(`GET /scene failed: ${resp.status}`);
    return (await resp.json()) as SceneDoc;
  }

  async postSnapshot(snapshot: SnapshotDoc): Promise<DiffDoc | { staged: true }> {
    return this.post("/snapshot", snapshot);
  }

  async postFilter(filter: FilterDoc): Promise<DiffDoc> {
    return this.post("/filter", filter);
  }

  async postRefresh(): Promise<DiffDoc> {
    return this.post("/refresh", {});
  }

  screenshotUrl(ref: string): string {
    return `${this.baseUrl}/screenshot/${ref}`;
  }

  /** Open the bidirectional /updates stream; diffs flow to `onDiff`. */
  connect(onDiff: (diff: DiffDoc) => void): void {
    const url = this.baseUrl.replace(/^http/, "ws") + "/updates";
    this.ws = new WebSocket(url);
    this.ws.onmessage = (event) => {
      const frame = JSON.parse(event.data as string);
      if (frame.type === "diff") onDiff(frame as DiffDoc);
    };
  }

  /** Push a frame over the stream when connected, else fall back to HTTP. */
  send(frame: SnapshotDoc | FilterDoc | { type: "refresh" }): void {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(frame));
      return;
    }
    if (frame.type === "snapshot") void this.postSnapshot(frame as SnapshotDoc);
    else if (frame.type === "filter") void this.postFilter(frame as FilterDoc);
    else void this.postRefresh();
  }

  close(): void {
    this.ws?.close();
    this.ws = null;
  }

  private async post<T>(endpoint: string, body: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + endpoint, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      throw new Error(`POST ${endpoint} failed: ${resp.status}`);
    }
    return (await resp.json()) as T;
  }
}
