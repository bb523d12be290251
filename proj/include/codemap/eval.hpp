#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codemap/region.hpp"
#include "codemap/selector.hpp"

namespace codemap {

/// One ground-truth mapping task.
struct EvalRecord {
  std::string id;
  /// Local path (resolved against the dataset directory) or a clone URL.
  std::string repo;
  Region source = Region::deleted();
  std::string target_commit;
  Region expected = Region::deleted();
  std::vector<std::string> tags;
  /// 1-based line in the dataset file; 0 when built in code.
  int line_no = 0;
};

/// Parses JSON Lines text. Blank lines are skipped. Throws kDatasetError
/// naming the offending line.
std::vector<EvalRecord> parse_dataset(std::string_view text,
                                      const std::filesystem::path& base_dir);
std::vector<EvalRecord> load_dataset(const std::filesystem::path& file);

/// One JSON Lines entry for the record.
std::string dataset_line(const EvalRecord& record);

enum class OutcomeKind {
  kExact,
  kPartialOverlap,
  kNoOverlap,
  kCorrectDeletion,
  kWrongDeletion,
  kMissedDeletion,
  kError,
};

std::string_view to_string(OutcomeKind kind);

struct OverlapMetrics {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

OverlapMetrics overlap_metrics(AbsInterval predicted, AbsInterval expected);
/// Throws kFileMismatch when the regions name different files.
OverlapMetrics overlap_metrics(const Region& predicted, const Region& expected,
                               const Document& target);

/// |start - start'| + |end - end'|.
long long char_distance(AbsInterval predicted, AbsInterval expected);

struct EvalOutcome {
  std::string id;
  OutcomeKind kind = OutcomeKind::kError;
  std::optional<long long> char_distance;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::optional<Region> predicted;
  std::string error;
  double candidates_ms = 0.0;
  double selection_ms = 0.0;

  bool exact() const {
    return kind == OutcomeKind::kExact || kind == OutcomeKind::kCorrectDeletion;
  }
  bool overlapping() const {
    return exact() || kind == OutcomeKind::kPartialOverlap;
  }
};

/// Compares a prediction with the expectation. `target` is the content of
/// the expected region's file.
EvalOutcome score_outcome(const Region& predicted, const Region& expected,
                          const Document& target);

struct Aggregate {
  std::size_t total = 0;
  std::size_t errored = 0;
  std::size_t evaluated = 0;
  std::size_t exact = 0;
  std::size_t overlapping = 0;
  std::size_t partial = 0;
  double exact_rate = 0.0;
  double overlap_rate = 0.0;
  /// Over partial overlaps only; nullopt when there are none.
  std::optional<double> mean_char_distance;
  double mean_recall = 0.0;
  double mean_precision = 0.0;
  double mean_f1 = 0.0;
};

Aggregate aggregate(const std::vector<EvalOutcome>& outcomes);

struct EvalOptions {
  SelectionConfig config;
  int diff_context = 0;
  bool ablation = false;
  std::vector<int> context_sweep;
  int jobs = 1;
  /// Where URL repositories are cloned.
  std::filesystem::path clone_dir;
};

struct EvalReport {
  Aggregate overall;
  std::vector<EvalOutcome> outcomes;
  std::map<std::string, Aggregate> by_tag;
  /// Named configuration runs: full, no_diff, no_refine, no_move, no_search,
  /// no_context.
  std::vector<std::pair<std::string, Aggregate>> ablation;
  std::vector<std::pair<int, Aggregate>> context_sweep;
};

/// The ablation variants of a base configuration, in report order.
std::vector<std::pair<std::string, SelectionConfig>> ablation_configs(
    const SelectionConfig& base);

EvalReport evaluate(const std::vector<EvalRecord>& records,
                    const EvalOptions& options);

std::string report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

}  // namespace codemap
