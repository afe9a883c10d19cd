"""Foreign-function call surface over stdio.

Serves sdsc and hybrid loss+gradient evaluation to out-of-process
callers through a tiny length-prefixed binary protocol, so dynamic
languages can drive the exact library code with no logic duplication.

Framing: every message is a little-endian u32 body length followed by
the body. Request bodies start with a u8 opcode:

  1 PING       -> status 0, payload u8 protocol version
  2 SDSC       u8 mode (0 exact, 1 sigmoid), f64 alpha, f64 eps,
                u32 n_e, f64*n_e, u32 n_r, f64*n_r
             -> status 0, payload f64 value
  3 LOSS_GRAD  u8 mode, f64 alpha, f64 eps,
                u8 weighting (0 fixed, 1 adaptive), f64 w_sdsc, f64 w_mse,
                u32 n_e, f64*n_e, u32 n_r, f64*n_r
             -> status 0, payload f64 loss, u32 n, f64*n grad,
                u8 has_d_sigma, (f64 d_sigma_sdsc, f64 d_sigma_mse)?

LOSS_GRAD evaluates the hybrid loss under the given weighting; fixed
weights (1, 0) degenerate to the plain sdsc loss and (0, 1) to mse.
Response bodies are u8 status + payload. Non-zero statuses carry
u32 length + utf-8 message text taken verbatim from the core error:

  0 OK   1 LENGTH_MISMATCH   2 NON_FINITE   3 INVALID_CONFIG   4 MALFORMED
"""

from __future__ import annotations

import struct
import sys

import numpy as np

from .errors import ConfigError, LengthMismatchError, NonFiniteError, SigdiceError
from .gradients import grad_hybrid
from .metrics import AdaptiveWeights, FixedWeights, HeavisideMode, LossConfig, hybrid_loss, sdsc

PROTOCOL_VERSION = 1

OP_PING = 1
OP_SDSC = 2
OP_LOSS_GRAD = 3

STATUS_OK = 0
STATUS_LENGTH_MISMATCH = 1
STATUS_NON_FINITE = 2
STATUS_INVALID_CONFIG = 3
STATUS_MALFORMED = 4

_MAX_FRAME = 1 << 26  # 64 MiB guards against corrupt length prefixes


class _Malformed(Exception):
    pass


class _Cursor:
    """Sequential reader over one request body."""

    def __init__(self, body: bytes):
        self.body = body
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.body):
            raise _Malformed("truncated request body")
        out = self.body[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self.take(8))[0]

    def f64_array(self) -> np.ndarray:
        n = self.u32()
        raw = self.take(8 * n)
        return np.frombuffer(raw, dtype="<f8").copy()

    def done(self) -> None:
        if self.pos != len(self.body):
            raise _Malformed("trailing bytes in request body")


def _heaviside(mode_byte: int, alpha: float) -> HeavisideMode:
    if mode_byte == 0:
        return HeavisideMode.exact()
    if mode_byte == 1:
        return HeavisideMode.sigmoid(alpha)
    raise _Malformed(f"unknown heaviside mode byte {mode_byte}")


def _handle_sdsc(cur: _Cursor) -> bytes:
    mode = _heaviside(cur.u8(), cur.f64())
    # read eps before validating so malformed frames fail as malformed
    eps = cur.f64()
    e = cur.f64_array()
    r = cur.f64_array()
    cur.done()
    value = sdsc(e, r, mode, eps)
    return struct.pack("<Bd", STATUS_OK, value)


def _handle_loss_grad(cur: _Cursor) -> bytes:
    mode_byte = cur.u8()
    alpha = cur.f64()
    eps = cur.f64()
    weighting_byte = cur.u8()
    w_sdsc = cur.f64()
    w_mse = cur.f64()
    e = cur.f64_array()
    r = cur.f64_array()
    cur.done()
    mode = _heaviside(mode_byte, alpha)
    if weighting_byte == 0:
        weighting = FixedWeights(w_sdsc, w_mse)
    elif weighting_byte == 1:
        weighting = AdaptiveWeights(w_sdsc, w_mse)
    else:
        raise _Malformed(f"unknown weighting byte {weighting_byte}")
    cfg = LossConfig(heaviside=mode, denom_epsilon=eps, weighting=weighting)
    total, _parts = hybrid_loss(e, r, cfg)
    report = grad_hybrid(e, r, cfg)
    out = bytearray()
    out += struct.pack("<BdI", STATUS_OK, total, report.grad.size)
    out += report.grad.astype("<f8").tobytes()
    if report.d_sigma is None:
        out += struct.pack("<B", 0)
    else:
        out += struct.pack("<Bdd", 1, report.d_sigma[0], report.d_sigma[1])
    return bytes(out)


def _error_response(status: int, message: str) -> bytes:
    raw = message.encode("utf-8")
    return struct.pack("<BI", status, len(raw)) + raw


def handle_request(body: bytes) -> bytes:
    """Dispatch one request body to a response body."""
    try:
        cur = _Cursor(body)
        opcode = cur.u8()
        if opcode == OP_PING:
            cur.done()
            return struct.pack("<BB", STATUS_OK, PROTOCOL_VERSION)
        if opcode == OP_SDSC:
            return _handle_sdsc(cur)
        if opcode == OP_LOSS_GRAD:
            return _handle_loss_grad(cur)
        raise _Malformed(f"unknown opcode {opcode}")
    except LengthMismatchError as exc:
        return _error_response(STATUS_LENGTH_MISMATCH, str(exc))
    except NonFiniteError as exc:
        return _error_response(STATUS_NON_FINITE, str(exc))
    except (ConfigError, SigdiceError) as exc:
        return _error_response(STATUS_INVALID_CONFIG, str(exc))
    except (_Malformed, struct.error) as exc:
        return _error_response(STATUS_MALFORMED, str(exc))


def _read_exact(stream, n: int) -> bytes | None:
    chunks = []
    remaining = n
    while remaining > 0:
        chunk = stream.read(remaining)
        if not chunk:
            return None
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def serve(stdin=None, stdout=None) -> None:
    """Answer length-prefixed requests until EOF on stdin."""
    stdin = stdin if stdin is not None else sys.stdin.buffer
    stdout = stdout if stdout is not None else sys.stdout.buffer
    while True:
        header = _read_exact(stdin, 4)
        if header is None:
            return
        (length,) = struct.unpack("<I", header)
        if length > _MAX_FRAME:
            response = _error_response(STATUS_MALFORMED, f"frame length {length} exceeds limit")
            stdout.write(struct.pack("<I", len(response)) + response)
            stdout.flush()
            return
        body = _read_exact(stdin, length)
        if body is None:
            return
        response = handle_request(body)
        stdout.write(struct.pack("<I", len(response)) + response)
        stdout.flush()


if __name__ == "__main__":
    serve()
