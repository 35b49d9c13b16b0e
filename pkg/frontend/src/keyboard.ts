/**
 * On-screen keyboard wired to the prediction service.
 *
 * Every key press is sent to the engine; the returned character set decides
 * the layout: keys in the set stay full-size, the rest shrink. Bad
 * predictions are reported with a diagonal drag anywhere on the keyboard or
 * the dedicated feedback button; a downward drag hides the panel. If the
 * service is unreachable the keyboard degrades to a uniform layout and shows
 * a banner.
 */

import { PredictionClient, PredictionResponse } from "./api.js";
import { computeLayout } from "./layout.js";
import { SessionLog } from "./log.js";

export interface KeyboardConfig {
  serviceUrl: string;
  shrinkFactor: number;
  rows: string[];
  spaceChar?: string;
}

export const DEFAULT_CONFIG: KeyboardConfig = {
  serviceUrl: "http://127.0.0.1:8750",
  shrinkFactor: 0.55,
  rows: ["qwertyuiop", "asdfghjkl", "zxcvbnm"],
  spaceChar: " ",
};

export type Gesture = "feedback" | "hide" | null;

/** Classify a pointer drag: diagonal reports feedback, straight-down hides. */
export function decideGesture(dx: number, dy: number): Gesture {
  const absX = Math.abs(dx);
  if (dy > 50 && absX < 25) return "hide";
  if (dy > 40 && absX > 40) return "feedback";
  return null;
}

export class Keyboard {
  readonly log = new SessionLog();
  private last: PredictionResponse = { predictions: [], n: 0, idle: false };
  private shift = false;
  private typed = "";
  private ops: Promise<void> = Promise.resolve();
  private keyButtons = new Map<string, HTMLButtonElement>();
  private banner!: HTMLElement;
  private preview!: HTMLElement;
  private panel!: HTMLElement;
  private drag: { x: number; y: number } | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly config: KeyboardConfig,
    private readonly client: PredictionClient,
  ) {
    this.build();
    this.render();
  }

  /** Resolves when every queued keystroke/feedback has been processed. */
  settled(): Promise<void> {
    return this.ops;
  }

  get lastResponse(): PredictionResponse {
    return this.last;
  }

  get hidden(): boolean {
    return this.panel.classList.contains("hidden");
  }

  get text(): string {
    return this.typed;
  }

  private get doc(): Document {
    return this.root.ownerDocument;
  }

  private build(): void {
    const doc = this.doc;
    this.root.classList.add("keytrie-keyboard");

    this.banner = doc.createElement("div");
    this.banner.className = "banner hidden";
    this.banner.textContent = "prediction service unreachable — keys stay full size";
    this.root.appendChild(this.banner);

    this.preview = doc.createElement("div");
    this.preview.className = "preview";
    this.root.appendChild(this.preview);

    this.panel = doc.createElement("div");
    this.panel.className = "panel";
    this.root.appendChild(this.panel);

    for (const row of this.config.rows) {
      const rowEl = doc.createElement("div");
      rowEl.className = "row";
      for (const ch of row) {
        rowEl.appendChild(this.makeKey(ch));
      }
      this.panel.appendChild(rowEl);
    }

    const controls = doc.createElement("div");
    controls.className = "row controls";
    controls.appendChild(this.makeControl("shift", "⇧", () => this.toggleShift()));
    const space = this.makeKey(this.config.spaceChar ?? " ");
    space.classList.add("space");
    space.textContent = "space";
    controls.appendChild(space);
    controls.appendChild(
      this.makeControl("feedback", "✕ wrong", () => void this.sendFeedback()),
    );
    controls.appendChild(this.makeControl("hide", "▾ hide", () => this.hide()));
    controls.appendChild(
      this.makeControl("download-log", "⤓ log", () => this.log.download(doc)),
    );
    this.panel.appendChild(controls);

    this.panel.addEventListener("pointerdown", (ev) => {
      const e = ev as PointerEvent;
      this.drag = { x: e.clientX, y: e.clientY };
    });
    this.panel.addEventListener("pointerup", (ev) => {
      if (!this.drag) return;
      const e = ev as PointerEvent;
      const gesture = decideGesture(e.clientX - this.drag.x, e.clientY - this.drag.y);
      this.drag = null;
      if (gesture === "feedback") void this.sendFeedback();
      else if (gesture === "hide") this.hide();
    });
  }

  private makeKey(ch: string): HTMLButtonElement {
    const btn = this.doc.createElement("button");
    btn.className = "key";
    btn.dataset.key = ch;
    btn.textContent = ch;
    btn.addEventListener("click", () => void this.press(ch));
    this.keyButtons.set(ch, btn);
    return btn;
  }

  private makeControl(name: string, label: string, onClick: () => void): HTMLButtonElement {
    const btn = this.doc.createElement("button");
    btn.className = `control ${name}`;
    btn.dataset.control = name;
    btn.textContent = label;
    btn.addEventListener("click", onClick);
    return btn;
  }

  private toggleShift(): void {
    this.shift = !this.shift;
    this.render();
  }

  show(): void {
    this.panel.classList.remove("hidden");
  }

  hide(): void {
    this.panel.classList.add("hidden");
  }

  /** Queue one keystroke; shift applies to a single following letter. */
  press(ch: string): Promise<void> {
    const emitted = this.shift ? ch.toUpperCase() : ch;
    this.shift = false;
    this.ops = this.ops.then(() => this.sendKeystroke(emitted));
    return this.ops;
  }

  private async sendKeystroke(ch: string): Promise<void> {
    const shown = this.last;
    const hit = shown.predictions.some((e) => e.ch === ch);
    try {
      this.last = await this.client.keystroke(ch);
      this.banner.classList.add("hidden");
      this.log.record({ ch, setSize: shown.predictions.length, hit, feedbackSent: false });
      this.typed += ch;
    } catch {
      this.last = { predictions: [], n: this.last.n, idle: false };
      this.banner.classList.remove("hidden");
    }
    this.render();
  }

  sendFeedback(): Promise<void> {
    this.ops = this.ops.then(async () => {
      try {
        await this.client.feedback();
        this.last = { predictions: [], n: this.last.n, idle: true };
        this.log.record({ ch: "", setSize: 0, hit: false, feedbackSent: true });
        this.banner.classList.add("hidden");
      } catch {
        this.banner.classList.remove("hidden");
      }
      this.render();
    });
    return this.ops;
  }

  private render(): void {
    const views = computeLayout(
      [...this.keyButtons.keys()],
      this.last.predictions,
      this.last.idle,
      this.config.shrinkFactor,
    );
    for (const view of views) {
      const btn = this.keyButtons.get(view.ch);
      if (!btn) continue;
      btn.style.transform = `scale(${view.scale})`;
      btn.classList.toggle("predicted", view.predicted);
    }
    this.root.classList.toggle("idle", this.last.idle);
    this.root.classList.toggle("shift", this.shift);
    this.preview.textContent = this.typed;
  }
}

export async function loadConfig(url: string): Promise<KeyboardConfig> {
  try {
    const resp = await fetch(url);
    if (!resp.ok) return DEFAULT_CONFIG;
    return { ...DEFAULT_CONFIG, ...(await resp.json()) };
  } catch {
    return DEFAULT_CONFIG;
  }
}
