/**
 * End-to-end contract tests against a live service instance (started by
 * test/setup.ts).  The heart of the suite is exact equivalence: feature
 * rows fetched over the wire must match the offline CLI byte for byte,
 * and batched rotation must match the single-row path byte for byte.
 */

import { execFileSync } from "node:child_process";
import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { beforeAll, describe, expect, inject, it } from "vitest";

import { matrix, type Matrix } from "../src/buffers.js";
import { GridBankClient, ServiceError, type BankConfig } from "../src/client.js";

const REPO_ROOT = path.resolve(path.dirname(fileURLToPath(import.meta.url)), "..", "..");

let client: GridBankClient;

beforeAll(() => {
  client = new GridBankClient(inject("baseUrl"));
});

// Deterministic 32-bit PRNG; good enough to generate test cases.
function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function randomMatrix(rows: number, cols: number, rand: () => number, span: number): Matrix {
  const values = new Float64Array(rows * cols);
  for (let i = 0; i < values.length; i++) values[i] = span * (2 * rand() - 1);
  return matrix(rows, cols, values);
}

function bitsOf(values: Float64Array): bigint[] {
  const view = new DataView(values.buffer, values.byteOffset, values.byteLength);
  return Array.from({ length: values.length }, (_, i) => view.getBigUint64(i * 8, true));
}

function ulpExact(a: Float64Array, b: Float64Array): boolean {
  if (a.length !== b.length) return false;
  const aBits = bitsOf(a);
  const bBits = bitsOf(b);
  return aBits.every((bit, i) => bit === bBits[i]);
}

function expectServiceError(error: unknown, code: string, status: number): void {
  expect(error).toBeInstanceOf(ServiceError);
  const failure = error as ServiceError;
  expect(failure.code).toBe(code);
  expect(failure.status).toBe(status);
}

/** Run the offline CLI encoder and parse its CSV feature rows. */
function cliFeatureRows(config: BankConfig, positions: Matrix): Float64Array {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "gridpe-cli-"));
  try {
    const configPath = path.join(dir, "config.json");
    fs.writeFileSync(configPath, JSON.stringify(config));
    const header = Array.from({ length: positions.cols }, (_, j) => `x${j}`).join(",");
    const lines = [header];
    for (let r = 0; r < positions.rows; r++) {
      const row: string[] = [];
      for (let c = 0; c < positions.cols; c++) {
        row.push(positions.values[r * positions.cols + c]!.toExponential(16));
      }
      lines.push(row.join(","));
    }
    const positionsPath = path.join(dir, "positions.csv");
    fs.writeFileSync(positionsPath, lines.join("\n") + "\n");
    const outPath = path.join(dir, "features.csv");
    execFileSync(
      "python3",
      ["-m", "gridpe", "embed", "--config", configPath, "--positions", positionsPath,
       "--method", "gridpe", "--out", outPath],
      { cwd: REPO_ROOT },
    );
    const rows = fs.readFileSync(outPath, "utf8").trim().split("\n").slice(1);
    const values = rows.flatMap((line) => line.split(",").map(Number));
    expect(values.length % positions.rows).toBe(0);
    return Float64Array.from(values);
  } finally {
    fs.rmSync(dir, { recursive: true, force: true });
  }
}

describe("bank lifecycle", () => {
  it("creates a 2-D bank with a nonzero handle and sane info", async () => {
    const handle = await client.createBank({ n: 2, head_dim: 24 });
    expect(handle).toBeGreaterThan(0);
    const info = await client.bankInfo(handle);
    expect(info.handle).toBe(handle);
    expect(info.head_dim).toBe(24);
    expect(info.num_vectors).toBeGreaterThan(0);
    await client.releaseBank(handle);
  });

  it("rejects n=0 with a validation code, not a crash", async () => {
    await expect(client.createBank({ n: 0, head_dim: 16 })).rejects.toSatisfy((error) => {
      expectServiceError(error, "validation_error", 400);
      return true;
    });
  });

  it("treats double release as an unknown handle", async () => {
    const handle = await client.createBank({ n: 1, head_dim: 4 });
    await client.releaseBank(handle);
    await expect(client.releaseBank(handle)).rejects.toSatisfy((error) => {
      expectServiceError(error, "unknown_handle", 404);
      return true;
    });
  });

  it("rejects position rows of the wrong width", async () => {
    const handle = await client.createBank({ n: 2, head_dim: 12 });
    const contents = randomMatrix(3, 12, mulberry32(1), 1);
    const positions = randomMatrix(3, 3, mulberry32(2), 5);
    await expect(client.rotateBatch(handle, contents, positions)).rejects.toSatisfy((error) => {
      expectServiceError(error, "validation_error", 400);
      return true;
    });
    await client.releaseBank(handle);
  });

  it("gives identical rotations for identical configs under distinct handles", async () => {
    const config: BankConfig = { n: 2, head_dim: 16, direction_mode: "random", seed: 9 };
    const first = await client.createBank(config);
    const second = await client.createBank(config);
    expect(second).not.toBe(first);
    const contents = randomMatrix(5, 16, mulberry32(3), 1);
    const positions = randomMatrix(5, 2, mulberry32(4), 8);
    const a = await client.rotateBatch(first, contents, positions);
    const b = await client.rotateBatch(second, contents, positions);
    expect(ulpExact(a.values, b.values)).toBe(true);
    await client.releaseBank(first);
    await client.releaseBank(second);
  });
});

describe("exact numerical equivalence", () => {
  it("returns contents unchanged, bit for bit, at the origin", async () => {
    const handle = await client.createBank({ n: 3, head_dim: 32 });
    const contents = randomMatrix(7, 32, mulberry32(5), 2);
    const positions = matrix(7, 3, new Float64Array(7 * 3));
    const rotated = await client.rotateBatch(handle, contents, positions);
    expect(ulpExact(rotated.values, contents.values)).toBe(true);
    await client.releaseBank(handle);
  });

  it("matches the offline CLI encoder to 0 ulps on 100 random cases", async () => {
    const configs: BankConfig[] = [
      { n: 1, head_dim: 8 },
      { n: 1, head_dim: 64, base: 10000 },
      { n: 1, head_dim: 16, direction_mode: "random", seed: 11 },
      { n: 2, head_dim: 12 },
      { n: 2, head_dim: 24, base: 50 },
      { n: 2, head_dim: 64, direction_mode: "random", seed: 3 },
      { n: 2, head_dim: 30, seed: 8 },
      { n: 3, head_dim: 16 },
      { n: 3, head_dim: 64, direction_mode: "random", seed: 21 },
      { n: 3, head_dim: 40, base: 2000 },
    ];
    let cases = 0;
    for (const [index, config] of configs.entries()) {
      const positions = randomMatrix(10, config.n, mulberry32(100 + index), 10);
      const handle = await client.createBank(config);
      const wire = await client.featureMap(handle, positions);
      await client.releaseBank(handle);
      const offline = cliFeatureRows(config, positions);
      expect(ulpExact(wire.values, offline)).toBe(true);
      cases += positions.rows;
    }
    expect(cases).toBe(100);
  });

  it("matches the single-row rotation path bit for bit over a 100-row batch", async () => {
    const handle = await client.createBank({ n: 2, head_dim: 32, direction_mode: "random", seed: 6 });
    const rand = mulberry32(7);
    const contents = randomMatrix(100, 32, rand, 3);
    const positions = randomMatrix(100, 2, rand, 20);
    const batched = await client.rotateBatch(handle, contents, positions);
    for (let r = 0; r < 100; r++) {
      const oneContent = matrix(1, 32, contents.values.slice(r * 32, r * 32 + 32));
      const onePosition = matrix(1, 2, positions.values.slice(r * 2, r * 2 + 2));
      const single = await client.rotateBatch(handle, oneContent, onePosition);
      expect(ulpExact(single.values, batched.values.slice(r * 32, r * 32 + 32))).toBe(true);
    }
    await client.releaseBank(handle);
  });

  it("preserves row norms within 1e-12 across a 10^4-row batch", async () => {
    const handle = await client.createBank({ n: 2, head_dim: 64 });
    const rand = mulberry32(8);
    const contents = randomMatrix(10_000, 64, rand, 1);
    const positions = randomMatrix(10_000, 2, rand, 50);
    const rotated = await client.rotateBatch(handle, contents, positions);
    for (let r = 0; r < 10_000; r++) {
      let before = 0;
      let after = 0;
      for (let c = 0; c < 64; c++) {
        before += contents.values[r * 64 + c]! ** 2;
        after += rotated.values[r * 64 + c]! ** 2;
      }
      expect(Math.abs(Math.sqrt(after) - Math.sqrt(before))).toBeLessThanOrEqual(
        1e-12 * Math.max(1, Math.sqrt(before)));
    }
    await client.releaseBank(handle);
  });
});

describe("resource stability", () => {
  it("returns the registry to its baseline after 2000 create/release cycles", async () => {
    const cycles = 2000;
    const baseline = await client.stats();
    for (let i = 0; i < cycles; i++) {
      const handle = await client.createBank({ n: 1, head_dim: 2 });
      await client.releaseBank(handle);
    }
    const after = await client.stats();
    expect(after.active_banks).toBe(baseline.active_banks);
    expect(after.created_total).toBe(baseline.created_total + cycles);
    expect(after.released_total).toBe(baseline.released_total + cycles);
  });
});
