#pragma once

#include <stdexcept>
#include <string>

namespace cosparse {

// Every failure the library reports, tagged so callers (and the CLI exit-code
// mapping) can tell configuration/input problems from numeric breakdowns.
enum class Errc {
  // tensor + image files
  BadMagic,
  UnsupportedVersion,
  TruncatedPayload,
  IoFailure,
  BadHeader,
  UnsupportedMaxVal,
  // patch machinery
  PositionOutOfBounds,
  ChannelMismatch,
  DimMismatch,
  GridTooSmall,
  LengthMismatch,
  // manifold / solvers
  BadDims,
  ZeroRow,
  ObjectiveNonFinite,
  LineSearchStall,
  // learning priors
  RankDeficient,
  CoherentRows,
  EmptySet,
  // reconstruction
  NoObservations,
  // simulation
  BadSpec,
  FactorTooLarge,
  BadRate,
  NotGridObservations,
  // metrics
  EmptyMask,
  ZeroBaseline,
  // config / misc preconditions
  BadConfig,
  InvalidArgument,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::IoFailure: return "IoFailure";
    case Errc::BadHeader: return "BadHeader";
    case Errc::UnsupportedMaxVal: return "UnsupportedMaxVal";
    case Errc::PositionOutOfBounds: return "PositionOutOfBounds";
    case Errc::ChannelMismatch: return "ChannelMismatch";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::GridTooSmall: return "GridTooSmall";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::BadDims: return "BadDims";
    case Errc::ZeroRow: return "ZeroRow";
    case Errc::ObjectiveNonFinite: return "ObjectiveNonFinite";
    case Errc::LineSearchStall: return "LineSearchStall";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::CoherentRows: return "CoherentRows";
    case Errc::EmptySet: return "EmptySet";
    case Errc::NoObservations: return "NoObservations";
    case Errc::BadSpec: return "BadSpec";
    case Errc::FactorTooLarge: return "FactorTooLarge";
    case Errc::BadRate: return "BadRate";
    case Errc::NotGridObservations: return "NotGridObservations";
    case Errc::EmptyMask: return "EmptyMask";
    case Errc::ZeroBaseline: return "ZeroBaseline";
    case Errc::BadConfig: return "BadConfig";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

// True for conditions that arise from the numerics of an optimization run
// rather than from bad inputs; the CLI maps these to exit code 3.
inline bool errc_is_numeric(Errc code) {
  switch (code) {
    case Errc::ObjectiveNonFinite:
    case Errc::LineSearchStall:
    case Errc::RankDeficient:
    case Errc::CoherentRows:
    case Errc::ZeroRow:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, Errc code, const std::string& message) {
  if (!condition) raise(code, message);
}

}  // namespace cosparse
