#pragma once

#include <stdexcept>
#include <string>

namespace relgen {

// Process exit codes used by the CLI. Every library error type maps onto one
// of these so scripted callers can dispatch on the failure class.
enum class ExitCode : int {
  ok = 0,
  usage = 1,
  io = 2,
  generation_exhausted = 3,
  placement_exhausted = 4,
  degenerate_shape = 5,
  corrupt_dataset = 6,
  segmentation_ambiguous = 7,
  inconsistent_scene = 8,
  bad_prediction = 9,
  insufficient_seeds = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

struct UsageError : Error {
  explicit UsageError(const std::string& w) : Error(ExitCode::usage, w) {}
};

struct IoFailure : Error {
  explicit IoFailure(const std::string& w) : Error(ExitCode::io, w) {}
};

// A rejection-sampling loop (shape or pair generation) ran out of attempts.
struct GenerationExhausted : Error {
  explicit GenerationExhausted(const std::string& w)
      : Error(ExitCode::generation_exhausted, w) {}
};

// No admissible position for an object was found within the attempt bound.
struct PlacementExhausted : Error {
  explicit PlacementExhausted(const std::string& w)
      : Error(ExitCode::placement_exhausted, w) {}
};

struct DegenerateShape : Error {
  explicit DegenerateShape(const std::string& w)
      : Error(ExitCode::degenerate_shape, w) {}
};

// Empty or otherwise unusable numeric input (e.g. an all-background image
// handed to the cosine discriminator).
struct DegenerateInput : Error {
  explicit DegenerateInput(const std::string& w)
      : Error(ExitCode::degenerate_shape, w) {}
};

struct CorruptDataset : Error {
  explicit CorruptDataset(const std::string& w)
      : Error(ExitCode::corrupt_dataset, w) {}
};

// The oracle could not resolve the expected number of objects in an image.
struct SegmentationAmbiguous : Error {
  explicit SegmentationAmbiguous(const std::string& w)
      : Error(ExitCode::segmentation_ambiguous, w) {}
};

// A scene violates its task contract (e.g. both candidates match the base).
struct InconsistentScene : Error {
  explicit InconsistentScene(const std::string& w)
      : Error(ExitCode::inconsistent_scene, w) {}
};

struct MissingPrediction : Error {
  explicit MissingPrediction(const std::string& w)
      : Error(ExitCode::bad_prediction, w) {}
};

struct DuplicatePrediction : Error {
  explicit DuplicatePrediction(const std::string& w)
      : Error(ExitCode::bad_prediction, w) {}
};

struct InsufficientSeeds : Error {
  explicit InsufficientSeeds(const std::string& w)
      : Error(ExitCode::insufficient_seeds, w) {}
};

}  // namespace relgen
