#pragma once

#include <stdexcept>
#include <string>

namespace evoprune {

/// Broad failure class of an error; maps onto the CLI exit codes.
enum class ErrorKind {
  Config,        // bad configuration or arguments (exit 2)
  Data,          // malformed input data, shapes, files (exit 3)
  Optimization,  // failures inside the search stages (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidSpecError : Error {
  explicit InvalidSpecError(const std::string& w) : Error(ErrorKind::Config, "invalid spec: " + w) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& w) : Error(ErrorKind::Data, "shape error: " + w) {}
};

struct EmptyDataError : Error {
  explicit EmptyDataError(const std::string& w) : Error(ErrorKind::Data, "empty data: " + w) {}
};

struct InvalidIntervalError : Error {
  explicit InvalidIntervalError(const std::string& w)
      : Error(ErrorKind::Optimization, "invalid interval: " + w) {}
};

struct ContractViolation : Error {
  explicit ContractViolation(const std::string& w)
      : Error(ErrorKind::Optimization, "contract violation: " + w) {}
};

struct DegenerateLayerError : Error {
  explicit DegenerateLayerError(const std::string& layer)
      : Error(ErrorKind::Optimization, "degenerate layer (all weights zero): " + layer), layer_name(layer) {}
  std::string layer_name;
};

struct AnchorSelectionError : Error {
  explicit AnchorSelectionError(const std::string& w)
      : Error(ErrorKind::Optimization, "anchor selection failed: " + w) {}
};

struct CorridorError : Error {
  explicit CorridorError(const std::string& w) : Error(ErrorKind::Optimization, "corridor error: " + w) {}
};

struct NormalizationMismatch : Error {
  explicit NormalizationMismatch(const std::string& w)
      : Error(ErrorKind::Data, "normalization mismatch: " + w) {}
};

struct FormatError : Error {
  explicit FormatError(const std::string& w) : Error(ErrorKind::Data, "format error: " + w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::Data, "I/O error: " + w) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, "config error: " + w) {}
};

/// Process exit code for an error kind: 2 config, 3 data/format, 4 optimization.
int exit_code(ErrorKind kind) noexcept;

}  // namespace evoprune
