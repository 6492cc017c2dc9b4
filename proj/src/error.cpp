#include "mlstream/error.hpp"

namespace mls {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ResolutionMismatch: return "ResolutionMismatch";
    case Errc::InvalidInterval: return "InvalidInterval";
    case Errc::ClosureViolation: return "ClosureViolation";
    case Errc::OutOfStudyInterval: return "OutOfStudyInterval";
    case Errc::UnknownAspectCoordinate: return "UnknownAspectCoordinate";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::UnknownNodeLayer: return "UnknownNodeLayer";
    case Errc::UnknownLayer: return "UnknownLayer";
    case Errc::InterlayerLinkRejected: return "InterlayerLinkRejected";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ZeroStudyInterval: return "ZeroStudyInterval";
    case Errc::NotConverged: return "NotConverged";
    case Errc::NonSymmetric: return "NonSymmetric";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::ZeroMatrix: return "ZeroMatrix";
    case Errc::InsufficientRows: return "InsufficientRows";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::UnknownStudentId: return "UnknownStudentId";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::MalformedTime: return "MalformedTime";
    case Errc::FormatVersionMismatch: return "FormatVersionMismatch";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::SchemaError: return "SchemaError";
    case Errc::MissingAspect: return "MissingAspect";
    case Errc::FewerThanTwoLayers: return "FewerThanTwoLayers";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace mls
