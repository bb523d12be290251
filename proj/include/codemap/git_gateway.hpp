#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codemap/process.hpp"

namespace codemap {

enum class DiffAlgorithm { kMyers, kMinimal, kPatience, kHistogram };
enum class DiffGranularity { kLine, kWord };

struct DiffConfig {
  DiffAlgorithm algorithm = DiffAlgorithm::kMyers;
  DiffGranularity granularity = DiffGranularity::kLine;

  bool operator==(const DiffConfig&) const = default;
};

/// The eight configurations in report order: algorithm-major, line before
/// word.
const std::array<DiffConfig, 8>& all_diff_configs();

std::string_view to_string(DiffAlgorithm algorithm);
std::string_view to_string(DiffGranularity granularity);
std::string to_string(const DiffConfig& config);

struct RawDiffReport {
  DiffConfig config;
  /// Normalized git output; empty when the two sides are identical.
  std::string text;
  std::string source_file;
  std::string target_file;
  /// Later configurations whose output was byte-identical to this one.
  std::vector<DiffConfig> duplicates;
};

/// Read-only access to one on-disk repository through the git executable.
///
/// The binary is taken from CODEMAPPER_GIT when set, otherwise "git" on PATH.
/// Instances hold no mutable state beyond configuration.
class GitGateway {
 public:
  explicit GitGateway(std::filesystem::path repo);
  GitGateway(std::filesystem::path repo, std::string git_binary);

  const std::filesystem::path& repo() const { return repo_; }

  /// Full hash of a commit-ish. Throws kRepoError.
  std::string resolve_commit(std::string_view rev) const;

  bool file_exists(std::string_view commit, std::string_view path) const;

  /// Path of `source_file` at `target_commit`, following renames through the
  /// commits in between in either direction; nullopt when the file has no
  /// counterpart there.
  std::optional<std::string> resolve_target_file(
      std::string_view source_commit, std::string_view source_file,
      std::string_view target_commit) const;

  /// Newline-normalized content. Throws kNotFound, kBinaryFile, kRepoError.
  std::string file_content(std::string_view commit,
                           std::string_view path) const;

  /// Diff reports for every configuration, deduplicated by identical text.
  /// Reports with empty text (identical sides) are dropped.
  std::vector<RawDiffReport> compute_diff_reports(
      std::string_view source_commit, std::string_view target_commit,
      std::string_view source_file, std::string_view target_file,
      int context_lines = 0) const;

  /// One report between two object specs ("<commit>:<path>" or blob ids).
  std::string diff_objects(std::string_view source_object,
                           std::string_view target_object,
                           const DiffConfig& config,
                           int context_lines = 0) const;

 private:
  ProcessResult git(const std::vector<std::string>& args) const;
  ProcessResult git_checked(const std::vector<std::string>& args,
                            std::string_view what) const;
  bool is_ancestor(std::string_view ancestor, std::string_view descendant) const;
  std::optional<std::string> follow_forward(std::string_view from,
                                            std::string_view to,
                                            std::string path) const;
  std::optional<std::string> follow_backward(std::string_view from,
                                             std::string_view to,
                                             std::string path) const;

  std::filesystem::path repo_;
  std::string git_binary_;
};

std::string default_git_binary();

/// git's heuristic: a NUL byte within the first 8000 bytes.
bool looks_binary(std::string_view content);

}  // namespace codemap
