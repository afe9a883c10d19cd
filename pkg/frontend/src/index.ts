export {
  BindingError,
  InvalidConfigError,
  LengthMismatchError,
  NonFiniteInputError,
  ProtocolError,
} from "./errors.js";
export {
  BoundLossHandle,
  boundLossAndGrad,
  boundSdsc,
  closeSharedCore,
  CoreProcess,
  createLossHandle,
  PROTOCOL_VERSION,
  sharedCore,
  type CoreOptions,
  type FloatArray,
  type LossAndGrad,
  type LossHandleConfig,
  type SdscOptions,
  type Weighting,
} from "./client.js";
