/** Little-endian encoding helpers for the core's length-prefixed frames. */

import { ProtocolError } from "./errors.js";

export class BodyWriter {
  private chunks: Uint8Array[] = [];

  u8(value: number): this {
    this.chunks.push(Uint8Array.of(value));
    return this;
  }

  u32(value: number): this {
    const buf = new Uint8Array(4);
    new DataView(buf.buffer).setUint32(0, value, true);
    this.chunks.push(buf);
    return this;
  }

  f64(value: number): this {
    const buf = new Uint8Array(8);
    new DataView(buf.buffer).setFloat64(0, value, true);
    this.chunks.push(buf);
    return this;
  }

  /** u32 element count followed by the raw f64 payload; copies the input. */
  f64Array(values: Float64Array): this {
    this.u32(values.length);
    const buf = new Uint8Array(values.length * 8);
    const view = new DataView(buf.buffer);
    for (let i = 0; i < values.length; i++) {
      view.setFloat64(i * 8, values[i]!, true);
    }
    this.chunks.push(buf);
    return this;
  }

  finish(): Uint8Array {
    let total = 0;
    for (const c of this.chunks) total += c.length;
    const out = new Uint8Array(total);
    let pos = 0;
    for (const c of this.chunks) {
      out.set(c, pos);
      pos += c.length;
    }
    return out;
  }
}

export class BodyReader {
  private readonly view: DataView;
  private pos = 0;

  constructor(private readonly body: Uint8Array) {
    this.view = new DataView(body.buffer, body.byteOffset, body.byteLength);
  }

  private need(n: number): number {
    if (this.pos + n > this.body.length) {
      throw new ProtocolError("sigdice: truncated response body");
    }
    const at = this.pos;
    this.pos += n;
    return at;
  }

  u8(): number {
    return this.view.getUint8(this.need(1));
  }

  u32(): number {
    return this.view.getUint32(this.need(4), true);
  }

  f64(): number {
    return this.view.getFloat64(this.need(8), true);
  }

  f64Array(): Float64Array {
    const n = this.u32();
    const at = this.need(n * 8);
    const out = new Float64Array(n);
    for (let i = 0; i < n; i++) {
      out[i] = this.view.getFloat64(at + i * 8, true);
    }
    return out;
  }

  utf8(n: number): string {
    const at = this.need(n);
    return new TextDecoder().decode(this.body.subarray(at, at + n));
  }

  done(): void {
    if (this.pos !== this.body.length) {
      throw new ProtocolError("sigdice: trailing bytes in response body");
    }
  }
}

/** Splits a byte stream into length-prefixed frame bodies. */
export class FrameDecoder {
  private buffer = new Uint8Array(0);

  push(chunk: Uint8Array): Uint8Array[] {
    const merged = new Uint8Array(this.buffer.length + chunk.length);
    merged.set(this.buffer, 0);
    merged.set(chunk, this.buffer.length);
    this.buffer = merged;

    const frames: Uint8Array[] = [];
    while (this.buffer.length >= 4) {
      const length = new DataView(this.buffer.buffer, this.buffer.byteOffset, 4).getUint32(0, true);
      if (this.buffer.length < 4 + length) break;
      frames.push(this.buffer.slice(4, 4 + length));
      this.buffer = this.buffer.slice(4 + length);
    }
    return frames;
  }
}

export function frame(body: Uint8Array): Uint8Array {
  const out = new Uint8Array(4 + body.length);
  new DataView(out.buffer).setUint32(0, body.length, true);
  out.set(body, 4);
  return out;
}
