/** Error taxonomy mirroring the core's status codes. */

export class BindingError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** Arrays of unequal length where equal lengths are required (status 1). */
export class LengthMismatchError extends BindingError {}

/** NaN or infinity in an input array (status 2). */
export class NonFiniteInputError extends BindingError {}

/** Rejected configuration: bad alpha, eps, weights, or a freed handle (status 3). */
export class InvalidConfigError extends BindingError {}

/** Transport-level failure: malformed frames, version skew, dead process. */
export class ProtocolError extends BindingError {}

export function errorFromStatus(status: number, message: string): BindingError {
  switch (status) {
    case 1:
      return new LengthMismatchError(message);
    case 2:
      return new NonFiniteInputError(message);
    case 3:
      return new InvalidConfigError(message);
    default:
      return new ProtocolError(`status ${status}: ${message}`);
  }
}
