#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace collab {

enum class ErrorCode {
  DimensionMismatch,
  DuplicateNode,
  EmptyCollection,
  EmptyInput,
  BinCountMismatch,
  InvalidLabel,
  UnsupportedDimensions,
  MissingEmbedding,
  NoAvailableNodes,
  InvalidCounts,
  MissingFile,
  MalformedRaster,
  MalformedManifest,
  SidecarShapeMismatch,
  NotEnoughViews,
  InvalidConfig,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so
// callers (tests, the CLI) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace collab
