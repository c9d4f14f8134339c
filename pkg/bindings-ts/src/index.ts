export {
  applyCorruption,
  applyCorruptionBatch,
  corruptFile,
  UnsupportedKindError,
  type CorruptionRequest,
} from "./apply.js";
export { CliError, cliCommand, runCli } from "./cli.js";
export {
  accuracyTable,
  evaluateRecords,
  recordFromJson,
  recordToJson,
  MissingCellError,
  CLEAN_KIND,
  type PredictionRecord,
  type RobustnessReport,
} from "./metrics.js";
export { decodePpmStream, encodePpmStream, type FrameStream } from "./ppm.js";
export { sampleIndices, type Level, type SamplingPlan, type Strategy } from "./sampler.js";
export {
  ALL_KINDS,
  BENCHMARK_KINDS,
  CODEC_KINDS,
  GAUSSIAN_NOISE_STD,
  SEVERITY_TABLE,
  SPATIAL_KINDS,
  TEMPORAL_KINDS,
  isCodecKind,
  isTemporal,
  lookupParams,
  type BenchmarkKind,
  type CorruptionKind,
  type Profile,
  type SeverityTable,
} from "./severity.js";
export { TensorClipView, rintByte, type ValueRange } from "./tensor.js";
