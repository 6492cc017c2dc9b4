#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mls {

enum class Errc {
  ResolutionMismatch,
  InvalidInterval,
  ClosureViolation,
  OutOfStudyInterval,
  UnknownAspectCoordinate,
  UnknownNode,
  UnknownNodeLayer,
  UnknownLayer,
  InterlayerLinkRejected,
  InvalidArgument,
  ZeroStudyInterval,
  NotConverged,
  NonSymmetric,
  NegativeEntry,
  ZeroMatrix,
  InsufficientRows,
  MalformedLine,
  UnknownStudentId,
  MissingColumn,
  MalformedTime,
  FormatVersionMismatch,
  ChecksumMismatch,
  SchemaError,
  MissingAspect,
  FewerThanTwoLayers,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// message holds the human-readable detail (offending line, link, path...).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mls
