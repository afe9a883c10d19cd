/** Client for the sigdice core's stdio frame protocol.
 *
 * One core process serves all calls; requests are answered strictly in
 * order, so a FIFO queue of pending promises is enough to multiplex
 * concurrent callers. All numeric work happens in the core - these
 * bindings only marshal f64 buffers, so results are bit-identical to
 * in-process evaluation.
 */

import { spawn, type ChildProcessByStdio } from "node:child_process";
import type { Readable, Writable } from "node:stream";

import { errorFromStatus, InvalidConfigError, LengthMismatchError, ProtocolError } from "./errors.js";
import { BodyReader, BodyWriter, frame, FrameDecoder } from "./frames.js";

export const PROTOCOL_VERSION = 1;

const OP_PING = 1;
const OP_SDSC = 2;
const OP_LOSS_GRAD = 3;

const MODE_EXACT = 0;
const MODE_SIGMOID = 1;

export interface CoreOptions {
  /** Interpreter for the core; default $SIGDICE_PYTHON, then "python3". */
  python?: string;
}

interface Pending {
  resolve: (body: Uint8Array) => void;
  reject: (err: Error) => void;
}

export class CoreProcess {
  private child: ChildProcessByStdio<Writable, Readable, null> | null = null;
  private readonly pending: Pending[] = [];
  private readonly python: string;
  private verified = false;
  private closed = false;

  constructor(options: CoreOptions = {}) {
    this.python = options.python ?? process.env.SIGDICE_PYTHON ?? "python3";
  }

  private start(): ChildProcessByStdio<Writable, Readable, null> {
    if (this.closed) throw new ProtocolError("sigdice: core process is closed");
    if (this.child) return this.child;
    const child = spawn(this.python, ["-m", "sigdice.ffi"], {
      stdio: ["pipe", "pipe", "inherit"],
    });
    // a write racing process death must not surface as a stream crash;
    // the child's own close event already rejects every waiter
    child.stdin.on("error", () => {});
    const decoder = new FrameDecoder();
    child.stdout.on("data", (chunk: Buffer) => {
      for (const body of decoder.push(new Uint8Array(chunk))) {
        const waiter = this.pending.shift();
        if (waiter) waiter.resolve(body);
      }
    });
    const drop = (err: Error) => {
      if (this.child === child) this.child = null;
      while (this.pending.length > 0) this.pending.shift()!.reject(err);
    };
    child.on("error", (err) => drop(new ProtocolError(`sigdice: core process failed: ${err.message}`)));
    child.on("close", () => drop(new ProtocolError("sigdice: core process exited")));
    this.child = child;
    return child;
  }

  async request(body: Uint8Array): Promise<Uint8Array> {
    const child = this.start();
    const response = new Promise<Uint8Array>((resolve, reject) => {
      this.pending.push({ resolve, reject });
    });
    child.stdin.write(frame(body));
    return response;
  }

  /** Pings the core and rejects on protocol-version skew; runs once. */
  async verify(): Promise<void> {
    if (this.verified) return;
    const reader = new BodyReader(await this.request(new BodyWriter().u8(OP_PING).finish()));
    const status = reader.u8();
    const version = reader.u8();
    reader.done();
    if (status !== 0 || version !== PROTOCOL_VERSION) {
      throw new ProtocolError(`sigdice: core speaks protocol ${version}, expected ${PROTOCOL_VERSION}`);
    }
    this.verified = true;
  }

  /** Ends the core's stdin and waits for it to exit; idempotent. */
  async close(): Promise<void> {
    this.closed = true;
    const child = this.child;
    if (!child) return;
    await new Promise<void>((resolve) => {
      child.once("close", () => resolve());
      child.stdin.end();
    });
  }
}

let shared: CoreProcess | null = null;

/** Lazily created process shared by calls that do not pass their own. */
export function sharedCore(): CoreProcess {
  if (!shared) shared = new CoreProcess();
  return shared;
}

export async function closeSharedCore(): Promise<void> {
  if (shared) {
    await shared.close();
    shared = null;
  }
}

export type FloatArray = Float64Array | readonly number[];

function asF64(values: FloatArray, name: string): Float64Array {
  if (values instanceof Float64Array) return values;
  if (Array.isArray(values)) return Float64Array.from(values);
  throw new InvalidConfigError(`sigdice: ${name} must be a Float64Array or number[]`);
}

async function call(core: CoreProcess | undefined, body: Uint8Array): Promise<BodyReader> {
  const proc = core ?? sharedCore();
  await proc.verify();
  const reader = new BodyReader(await proc.request(body));
  const status = reader.u8();
  if (status !== 0) {
    const message = reader.utf8(reader.u32());
    reader.done();
    throw errorFromStatus(status, message);
  }
  return reader;
}

export interface SdscOptions {
  /** Sigmoid gate sharpness; omit for the exact Heaviside gate. */
  alpha?: number;
  /** Denominator stabilizer; default 1e-8. */
  eps?: number;
  core?: CoreProcess;
}

function modeFields(alpha: number | undefined): { mode: number; alpha: number } {
  return alpha === undefined ? { mode: MODE_EXACT, alpha: 0 } : { mode: MODE_SIGMOID, alpha };
}

/** Signal Dice similarity of two equal-length signals, evaluated in the core. */
export async function boundSdsc(e: FloatArray, r: FloatArray, options: SdscOptions = {}): Promise<number> {
  const { mode, alpha } = modeFields(options.alpha);
  const body = new BodyWriter()
    .u8(OP_SDSC)
    .u8(mode)
    .f64(alpha)
    .f64(options.eps ?? 1e-8)
    .f64Array(asF64(e, "e"))
    .f64Array(asF64(r, "r"))
    .finish();
  const reader = await call(options.core, body);
  const value = reader.f64();
  reader.done();
  return value;
}

export type Weighting =
  | { kind: "fixed"; lambdaSdsc: number; lambdaMse: number }
  | { kind: "adaptive"; sigmaSdsc: number; sigmaMse: number };

export interface LossHandleConfig {
  /** Sigmoid gate sharpness; omit for the exact Heaviside gate. */
  alpha?: number;
  /** Denominator stabilizer; default 1e-8. */
  eps?: number;
  /** Default: fixed weights (0.5, 0.5). */
  weighting?: Weighting;
}

export interface LossAndGrad {
  loss: number;
  grad: Float64Array;
  /** d(total)/d(sigma) pair, present only for adaptive weighting. */
  dSigma?: { sdsc: number; mse: number };
}

/** Immutable loss configuration with an explicit create/free lifetime.
 *
 * Safe to share across concurrent callers; every call re-sends the
 * config, so freeing only guards against use-after-intent bugs.
 */
export class BoundLossHandle {
  private freed = false;
  private readonly mode: number;
  private readonly alpha: number;
  private readonly eps: number;
  private readonly weighting: Weighting;

  constructor(config: LossHandleConfig = {}, private readonly core?: CoreProcess) {
    const { mode, alpha } = modeFields(config.alpha);
    this.mode = mode;
    this.alpha = alpha;
    this.eps = config.eps ?? 1e-8;
    this.weighting = config.weighting ?? { kind: "fixed", lambdaSdsc: 0.5, lambdaMse: 0.5 };
    for (const v of [this.alpha, this.eps, ...weightValues(this.weighting)]) {
      if (!Number.isFinite(v)) throw new InvalidConfigError("sigdice: config values must be finite");
    }
  }

  free(): void {
    this.freed = true;
  }

  /** Hybrid loss and its gradient w.r.t. r in one round trip.
   *
   * `out`, when given, receives the gradient and must have exactly r's
   * length; it is written only after the core reports success, so a
   * failed call leaves it untouched.
   */
  async lossAndGrad(e: FloatArray, r: FloatArray, out?: Float64Array): Promise<LossAndGrad> {
    if (this.freed) throw new InvalidConfigError("sigdice: handle already freed");
    const eArr = asF64(e, "e");
    const rArr = asF64(r, "r");
    if (out !== undefined && out.length !== rArr.length) {
      throw new LengthMismatchError(
        `sigdice: out has length ${out.length}, expected ${rArr.length}`,
      );
    }
    const w = this.weighting;
    const body = new BodyWriter()
      .u8(OP_LOSS_GRAD)
      .u8(this.mode)
      .f64(this.alpha)
      .f64(this.eps)
      .u8(w.kind === "fixed" ? 0 : 1)
      .f64(w.kind === "fixed" ? w.lambdaSdsc : w.sigmaSdsc)
      .f64(w.kind === "fixed" ? w.lambdaMse : w.sigmaMse)
      .f64Array(eArr)
      .f64Array(rArr)
      .finish();
    const reader = await call(this.core, body);
    const loss = reader.f64();
    const grad = reader.f64Array();
    const hasDSigma = reader.u8();
    const result: LossAndGrad = { loss, grad };
    if (hasDSigma === 1) {
      result.dSigma = { sdsc: reader.f64(), mse: reader.f64() };
    }
    reader.done();
    if (out !== undefined) {
      out.set(grad);
      result.grad = out;
    }
    return result;
  }
}

function weightValues(w: Weighting): number[] {
  return w.kind === "fixed" ? [w.lambdaSdsc, w.lambdaMse] : [w.sigmaSdsc, w.sigmaMse];
}

export function createLossHandle(config: LossHandleConfig = {}, core?: CoreProcess): BoundLossHandle {
  return new BoundLossHandle(config, core);
}

export async function boundLossAndGrad(
  handle: BoundLossHandle,
  e: FloatArray,
  r: FloatArray,
  out?: Float64Array,
): Promise<LossAndGrad> {
  return handle.lossAndGrad(e, r, out);
}
