/**
 * Flat float64 buffers as they cross the service boundary: row-major
 * values, little-endian bytes, base64 text.  Encoding is explicit about
 * byte order so the wire format does not depend on host endianness.
 */

import { Buffer } from "node:buffer";

export function floatsToBase64(values: Float64Array): string {
  const bytes = new Uint8Array(values.length * 8);
  const view = new DataView(bytes.buffer);
  for (let i = 0; i < values.length; i++) {
    view.setFloat64(i * 8, values[i]!, true);
  }
  return Buffer.from(bytes).toString("base64");
}

export function base64ToFloats(data: string): Float64Array {
  const bytes = Buffer.from(data, "base64");
  if (bytes.length % 8 !== 0) {
    throw new Error(`payload is ${bytes.length} bytes, not a whole number of float64s`);
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.length);
  const values = new Float64Array(bytes.length / 8);
  for (let i = 0; i < values.length; i++) {
    values[i] = view.getFloat64(i * 8, true);
  }
  return values;
}

/** Row-major matrix view over a flat buffer. */
export interface Matrix {
  readonly rows: number;
  readonly cols: number;
  readonly values: Float64Array;
}

export function matrix(rows: number, cols: number, values: Float64Array): Matrix {
  if (!Number.isInteger(rows) || !Number.isInteger(cols) || rows < 0 || cols < 0) {
    throw new Error(`bad matrix shape ${rows} x ${cols}`);
  }
  if (values.length !== rows * cols) {
    throw new Error(`matrix ${rows} x ${cols} needs ${rows * cols} values, got ${values.length}`);
  }
  return { rows, cols, values };
}

/** Wire form of a matrix: shape plus base64 of the little-endian bytes. */
export interface ArrayPayload {
  shape: number[];
  data_b64: string;
}

export function toPayload(m: Matrix): ArrayPayload {
  return { shape: [m.rows, m.cols], data_b64: floatsToBase64(m.values) };
}

export function fromPayload(payload: ArrayPayload): Matrix {
  if (payload.shape.length !== 2) {
    throw new Error(`expected a 2-D shape, got [${payload.shape.join(", ")}]`);
  }
  const [rows, cols] = payload.shape as [number, number];
  return matrix(rows, cols, base64ToFloats(payload.data_b64));
}
