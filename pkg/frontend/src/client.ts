/**
 * HTTP client for the gridpe bank service.
 *
 * A bank is created from a JSON config and referenced afterwards by an
 * opaque integer handle; handles stay valid until released and are safe
 * to share between concurrent callers.  All numeric traffic moves as
 * flat float64 buffers (see buffers.ts), so values survive the boundary
 * bit for bit.
 */

import { fromPayload, toPayload } from "./buffers.js";
import type { ArrayPayload, Matrix } from "./buffers.js";

export interface BankConfig {
  n: number;
  head_dim: number;
  num_heads?: number;
  scales_per_head?: number | null;
  base?: number | null;
  direction_mode?: "fixed" | "random";
  seed?: number;
}

export interface BankInfo {
  handle: number;
  config: Required<BankConfig>;
  num_vectors: number;
  head_dim: number;
}

export interface RegistryStats {
  active_banks: number;
  created_total: number;
  released_total: number;
}

/** Service-reported failure: machine code plus human message. */
export class ServiceError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

async function failFrom(response: Response): Promise<never> {
  let code = "unknown";
  let message = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    if (typeof body.code === "string") code = body.code;
    if (typeof body.message === "string") message = body.message;
  } catch {
    // non-JSON error body; keep the status-line message
  }
  throw new ServiceError(code, message, response.status);
}

export class GridBankClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) await failFrom(response);
    return (await response.json()) as T;
  }

  async health(): Promise<void> {
    await this.request<{ status: string }>("GET", "/v1/health");
  }

  async stats(): Promise<RegistryStats> {
    return this.request<RegistryStats>("GET", "/v1/stats");
  }

  /** Build an immutable wave-vector bank; returns its handle. */
  async createBank(config: BankConfig): Promise<number> {
    const created = await this.request<{ handle: number }>("POST", "/v1/banks", config);
    return created.handle;
  }

  async bankInfo(handle: number): Promise<BankInfo> {
    return this.request<BankInfo>("GET", `/v1/banks/${handle}`);
  }

  /** Release a handle; releasing twice is an unknown_handle error. */
  async releaseBank(handle: number): Promise<void> {
    await this.request<{ released: boolean }>("DELETE", `/v1/banks/${handle}`);
  }

  /**
   * Rotate a batch of content rows in place at their positions.
   * contents is B x head_dim, positions is B x n; the result has the
   * shape of contents and equals the single-row path bit for bit.
   */
  async rotateBatch(handle: number, contents: Matrix, positions: Matrix): Promise<Matrix> {
    const body = { contents: toPayload(contents), positions: toPayload(positions) };
    const reply = await this.request<{ contents: ArrayPayload }>(
      "POST", `/v1/banks/${handle}/rotate`, body);
    return fromPayload(reply.contents);
  }

  /** Interleaved cosine/sine features, one row per position. */
  async featureMap(handle: number, positions: Matrix): Promise<Matrix> {
    const body = { positions: toPayload(positions) };
    const reply = await this.request<{ features: ArrayPayload }>(
      "POST", `/v1/banks/${handle}/features`, body);
    return fromPayload(reply.features);
  }
}
