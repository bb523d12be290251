#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "codemap/eval.hpp"
#include "codemap/git_gateway.hpp"
#include "codemap/mapper.hpp"
#include "codemap/region.hpp"

namespace codemap::fixtures {

/// Creates a scratch repository with fixed identities and dates so hashes
/// are reproducible.
class RepoBuilder {
 public:
  explicit RepoBuilder(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  void write(const std::string& path, std::string_view content);
  void remove(const std::string& path);
  void rename(const std::string& from, const std::string& to);
  /// Stages everything and commits; returns the commit hash.
  std::string commit(const std::string& message);
  /// Stores a blob and returns its id.
  std::string hash_object(std::string_view content);

 private:
  std::string git(const std::vector<std::string>& args,
                  std::string_view input = {});

  std::filesystem::path dir_;
  int commits_ = 0;
};

/// Diffs two texts stored as loose blobs, without any commits. Safe to use
/// from several threads.
class BlobDiffer {
 public:
  explicit BlobDiffer(std::filesystem::path dir);

  /// Reports for every configuration, deduplicated like GitGateway does.
  std::vector<RawDiffReport> reports(std::string_view source,
                                     std::string_view target);
  /// Inputs for map_region with both sides named "file.txt".
  MapInputs inputs(std::string_view source, std::string_view target,
                   const CharacterRange& range);

 private:
  RepoBuilder repo_;
  GitGateway git_;
};

/// Range of the `occurrence`-th match of `needle` in `content`.
CharacterRange locate(std::string_view content, std::string_view needle,
                      int occurrence = 0);
/// Whole lines first..last, excluding leading indentation on the first.
CharacterRange lines_range(std::string_view content, int first, int last);

struct Fixture {
  EvalRecord record;
  /// "exact" or "correct_deletion".
  std::string expected_outcome;
};

/// Builds every fixture repository under `root` (created if needed).
std::vector<Fixture> build_fixtures(const std::filesystem::path& root);

/// A single-file repository whose file has about `lines` lines, with edits
/// scattered through it; the record maps a function in the middle.
Fixture build_large_fixture(const std::filesystem::path& root, int lines);

/// Writes dataset.jsonl (repo paths relative to `root`) and manifest.json.
void write_corpus(const std::filesystem::path& root,
                  const std::vector<Fixture>& fixtures);

}  // namespace codemap::fixtures
