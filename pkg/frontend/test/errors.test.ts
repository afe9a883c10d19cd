import { afterAll, describe, expect, test } from "vitest";

import {
  BindingError,
  BoundLossHandle,
  boundSdsc,
  closeSharedCore,
  CoreProcess,
  InvalidConfigError,
  LengthMismatchError,
  NonFiniteInputError,
  ProtocolError,
} from "../src/index.js";

afterAll(async () => {
  await closeSharedCore();
});

async function rejection(promise: Promise<unknown>): Promise<Error> {
  try {
    await promise;
  } catch (err) {
    return err as Error;
  }
  throw new Error("expected a rejection");
}

describe("error mapping", () => {
  test("unequal lengths raise LengthMismatchError with the core's text", async () => {
    const err = await rejection(boundSdsc([1, 2, 3], [1, 2]));
    expect(err).toBeInstanceOf(LengthMismatchError);
    expect(err).toBeInstanceOf(BindingError);
    expect(err.name).toBe("LengthMismatchError");
    expect(err.message).toContain("signal lengths differ: 3 != 2");
  });

  test("non-finite samples raise NonFiniteInputError", async () => {
    const nan = await rejection(boundSdsc([Number.NaN, 1], [1, 1]));
    expect(nan).toBeInstanceOf(NonFiniteInputError);
    expect(nan.message).toContain("non-finite");
    const inf = await rejection(boundSdsc([1, 1], [Number.POSITIVE_INFINITY, 1]));
    expect(inf).toBeInstanceOf(NonFiniteInputError);
  });

  test("core-rejected configs raise InvalidConfigError with the core's text", async () => {
    const badAlpha = await rejection(boundSdsc([1], [1], { alpha: -1 }));
    expect(badAlpha).toBeInstanceOf(InvalidConfigError);
    expect(badAlpha.message).toContain("alpha");
    const badEps = await rejection(boundSdsc([1], [1], { eps: -1 }));
    expect(badEps).toBeInstanceOf(InvalidConfigError);
    expect(badEps.message).toContain("eps must be finite");
    const empty = await rejection(boundSdsc([], []));
    expect(empty).toBeInstanceOf(InvalidConfigError);
    expect(empty.message).toContain("non-empty");
  });

  test("loss-path config errors carry the core's text too", async () => {
    const handle = new BoundLossHandle({
      weighting: { kind: "fixed", lambdaSdsc: 0, lambdaMse: 0 },
    });
    const err = await rejection(handle.lossAndGrad([1, 2], [1, 2]));
    expect(err).toBeInstanceOf(InvalidConfigError);
    expect(err.message).toContain("both be zero");
  });

  test("non-finite config values are rejected before any call", () => {
    expect(() => new BoundLossHandle({ alpha: Number.NaN })).toThrow(InvalidConfigError);
    expect(
      () => new BoundLossHandle({ weighting: { kind: "adaptive", sigmaSdsc: Number.POSITIVE_INFINITY, sigmaMse: 1 } }),
    ).toThrow(InvalidConfigError);
  });

  test("a freed handle refuses further calls", async () => {
    const handle = new BoundLossHandle();
    handle.free();
    handle.free();
    const err = await rejection(handle.lossAndGrad([1], [1]));
    expect(err).toBeInstanceOf(InvalidConfigError);
    expect(err.message).toContain("freed");
  });

  test("inputs that are not number arrays are rejected", async () => {
    const err = await rejection(boundSdsc("nope" as unknown as number[], [1]));
    expect(err).toBeInstanceOf(InvalidConfigError);
  });

  test("an error leaves the session usable", async () => {
    await expect(boundSdsc([1], [1, 2])).rejects.toBeInstanceOf(LengthMismatchError);
    expect(await boundSdsc([1, 2], [1, 2], { eps: 0 })).toBe(1.0);
  });

  test("a closed core rejects new work with ProtocolError", async () => {
    const core = new CoreProcess();
    expect(await boundSdsc([3], [3], { core, eps: 0 })).toBe(1.0);
    await core.close();
    await core.close();
    const err = await rejection(boundSdsc([3], [3], { core }));
    expect(err).toBeInstanceOf(ProtocolError);
    expect(err.message).toContain("closed");
  });

  test("a missing interpreter surfaces as ProtocolError", async () => {
    const core = new CoreProcess({ python: "/nonexistent/python3" });
    const err = await rejection(boundSdsc([1], [1], { core }));
    expect(err).toBeInstanceOf(ProtocolError);
    await core.close();
  });
});
