/** Append-only per-session typing log, downloadable as JSON. */

export interface LogEntry {
  ch: string;
  setSize: number;
  hit: boolean;
  feedbackSent: boolean;
}

export class SessionLog {
  private entries: LogEntry[] = [];

  record(entry: LogEntry): void {
    this.entries.push(entry);
  }

  get length(): number {
    return this.entries.length;
  }

  snapshot(): readonly LogEntry[] {
    return [...this.entries];
  }

  toJSON(): string {
    return JSON.stringify(this.entries, null, 2);
  }

  /** Trigger a browser download; returns the serialized payload either way. */
  download(doc: Document, filename = "keytrie-session.json"): string {
    const payload = this.toJSON();
    const w = doc.defaultView as (Window & typeof globalThis) | null;
    if (w && typeof w.Blob === "function" && typeof w.URL?.createObjectURL === "function") {
      const url = w.URL.createObjectURL(new w.Blob([payload], { type: "application/json" }));
      const anchor = doc.createElement("a");
      anchor.href = url;
      anchor.download = filename;
      anchor.click();
      w.URL.revokeObjectURL(url);
    }
    return payload;
  }
}
