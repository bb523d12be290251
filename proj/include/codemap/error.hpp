#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace codemap {

enum class ErrorKind {
  kInvalidRange,
  kOutOfBounds,
  kRepoError,
  kNotFound,
  kBinaryFile,
  kDiffToolFailure,
  kMalformedDiff,
  kFileMismatch,
  kDatasetError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace codemap
