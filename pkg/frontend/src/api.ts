/**
 * Client for the keytrie prediction service.
 *
 * Requests that mutate engine state are funneled through a single promise
 * chain, so at most one is in flight and keystroke order is preserved even
 * when the user types faster than the network round trip.
 */

import type { Prediction } from "./layout.js";

export interface PredictionResponse {
  predictions: Prediction[];
  n: number;
  idle: boolean;
}

export class ServiceError extends Error {
  constructor(readonly status: number, readonly code: string) {
    super(`service error ${status}: ${code}`);
  }
}

export class PredictionClient {
  private queue: Promise<unknown> = Promise.resolve();

  constructor(readonly baseUrl: string) {}

  /** Serialize a mutating call behind every previously enqueued one. */
  private enqueue<T>(task: () => Promise<T>): Promise<T> {
    const next = this.queue.then(task, task);
    this.queue = next.catch(() => undefined);
    return next;
  }

  /** Resolves once every enqueued request has settled. */
  settled(): Promise<void> {
    return this.queue.then(() => undefined);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      throw new ServiceError(resp.status, payload?.error?.code ?? "unknown");
    }
    return payload as T;
  }

  keystroke(ch: string, ts?: number): Promise<PredictionResponse> {
    const body: { ch: string; ts?: number } = { ch };
    if (ts !== undefined) body.ts = ts;
    return this.enqueue(() => this.request<PredictionResponse>("POST", "/v1/keystroke", body));
  }

  feedback(): Promise<{ idle: boolean }> {
    return this.enqueue(() => this.request("POST", "/v1/feedback", {}));
  }

  reset(): Promise<{ idle: boolean }> {
    return this.enqueue(() => this.request("POST", "/v1/reset", {}));
  }

  predictions(): Promise<PredictionResponse> {
    return this.request("GET", "/v1/predictions");
  }

  stats(): Promise<Record<string, unknown>> {
    return this.request("GET", "/v1/stats");
  }
}
