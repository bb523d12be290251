#include "codemap/mapper.hpp"

#include <chrono>

#include "codemap/diff_candidates.hpp"
#include "codemap/error.hpp"
#include "codemap/movement.hpp"
#include "codemap/text_search.hpp"

namespace codemap {

MapInputs load_inputs(const GitGateway& git, const MapRequest& request,
                      int diff_context) {
  MapInputs in;
  in.source_commit = git.resolve_commit(request.source_commit);
  in.target_commit = git.resolve_commit(request.target_commit);
  in.source_file = request.file;
  in.range = request.range;
  in.source = Document(git.file_content(in.source_commit, request.file));
  if (!in.source.contains(request.range)) {
    throw Error(ErrorKind::kOutOfBounds,
                "range " + to_string(request.range) + " is outside " +
                    request.file);
  }
  in.target_file =
      git.resolve_target_file(in.source_commit, request.file, in.target_commit);
  if (!in.target_file) return in;
  in.target = Document(git.file_content(in.target_commit, *in.target_file));
  in.reports = git.compute_diff_reports(in.source_commit, in.target_commit,
                                        in.source_file, *in.target_file,
                                        diff_context);
  for (const RawDiffReport& report : in.reports) {
    in.hunks.push_back(parse_report(report));
  }
  return in;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - since)
      .count();
}

bool is_line_report(const RawDiffReport& report) {
  return report.config.granularity == DiffGranularity::kLine;
}

}  // namespace

MapResult map_region(const MapInputs& in, const SelectionConfig& config) {
  MapResult result;
  if (!in.target_file) {
    result.reason = "file_deleted";
    return result;
  }
  const auto started = std::chrono::steady_clock::now();

  std::vector<Hunk> word_pool;
  for (std::size_t i = 0; i < in.reports.size(); ++i) {
    if (is_line_report(in.reports[i])) continue;
    word_pool.insert(word_pool.end(), in.hunks[i].begin(), in.hunks[i].end());
  }
  std::vector<std::vector<Hunk>> hunks = in.hunks;
  for (std::size_t i = 0; i < in.reports.size(); ++i) {
    if (is_line_report(in.reports[i])) attach_word_data(hunks[i], word_pool);
  }

  std::vector<Candidate> candidates;
  if (config.diff) {
    DiffExtractionInput input;
    input.source = &in.source;
    input.target = &in.target;
    input.range = in.range;
    input.target_commit = in.target_commit;
    input.target_file = *in.target_file;
    input.refine = config.refinement;
    candidates = extract_diff_candidates(hunks, input);
  }
  if (config.movement) {
    for (std::size_t i = 0; i < in.reports.size(); ++i) {
      if (!is_line_report(in.reports[i])) continue;
      for (Candidate& c : detect_movements(in.range, in.source, hunks[i],
                                           in.target, in.target_commit,
                                           *in.target_file)) {
        add_unique(candidates, std::move(c));
      }
    }
  }
  if (config.search) {
    for (Candidate& c : search_text(in.source.extract(in.range), in.target,
                                    in.target_commit, *in.target_file)) {
      add_unique(candidates, std::move(c));
    }
  }
  result.candidates_ms = elapsed_ms(started);

  const auto selecting = std::chrono::steady_clock::now();
  static const std::vector<Hunk> kNoHunks;
  const std::vector<Hunk>* context_hunks = &kNoHunks;
  for (std::size_t i = 0; i < in.reports.size(); ++i) {
    if (is_line_report(in.reports[i]) && !hunks[i].empty()) {
      context_hunks = &hunks[i];
      break;
    }
  }
  Selection selection = select_target(in.range, in.source, in.target,
                                      *context_hunks, std::move(candidates),
                                      config);
  result.target = std::move(selection.region);
  result.ranked = std::move(selection.ranked);
  result.selection_ms = elapsed_ms(selecting);
  return result;
}

MapResult map_region(const GitGateway& git, const MapRequest& request,
                     const SelectionConfig& config, int diff_context) {
  return map_region(load_inputs(git, request, diff_context), config);
}

}  // namespace codemap
