#include "codemap/cli.hpp"

#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "codemap/error.hpp"
#include "codemap/eval.hpp"
#include "codemap/mapper.hpp"
#include "json.hpp"

namespace codemap::cli {

namespace {

using json = nlohmann::ordered_json;

struct MapArgs {
  std::string repo = ".";
  std::string source_commit;
  std::string file;
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;
  std::string target_commit;
  int context = 15;
  int diff_context = 0;
  bool no_refine = false;
  bool no_move = false;
  bool no_search = false;
  bool no_context = false;
  bool no_diff = false;
  std::string format = "json";
  bool verbose = false;
  bool timing = false;
};

struct EvalArgs {
  std::string dataset;
  bool ablation = false;
  std::vector<int> context_sweep;
  std::string format = "json";
  std::string out;
  int jobs = 1;
  int context = 15;
  int diff_context = 0;
  std::string clone_dir;
};

json region_json(const Region& region) {
  if (region.is_deleted()) return "deleted";
  json j;
  j["commit"] = region.commit();
  j["file"] = region.file();
  const CharacterRange& r = region.range();
  j["l1"] = r.l1();
  j["c1"] = r.c1();
  j["l2"] = r.l2();
  j["c2"] = r.c2();
  return j;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidRange:
    case ErrorKind::kOutOfBounds:
    case ErrorKind::kNotFound:
    case ErrorKind::kBinaryFile:
    case ErrorKind::kFileMismatch:
      return kExitRegion;
    default:
      return kExitRepo;
  }
}

int cmd_map(const MapArgs& a, std::ostream& out, std::ostream& err) {
  SelectionConfig config;
  config.context_lines = a.context;
  config.refinement = !a.no_refine;
  config.movement = !a.no_move;
  config.search = !a.no_search;
  config.context = !a.no_context;
  config.diff = !a.no_diff;

  MapRequest request;
  request.source_commit = a.source_commit;
  request.file = a.file;
  request.target_commit = a.target_commit;
  MapInputs inputs;
  MapResult result;
  try {
    request.range = make_range(a.start_line, a.start_col, a.end_line, a.end_col);
    const GitGateway git(a.repo);
    inputs = load_inputs(git, request, a.diff_context);
    result = map_region(inputs, config);
  } catch (const Error& e) {
    err << "codemapper: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }

  std::optional<Candidate> chosen;
  if (!result.ranked.empty()) chosen = result.ranked.front();

  if (a.format == "text") {
    if (result.target.is_deleted()) {
      out << "deleted";
      if (!result.reason.empty()) out << " (" << result.reason << ")";
      out << "\n";
    } else {
      out << result.target.file() << ":" << to_string(result.target.range())
          << "\n";
    }
    if (a.verbose) {
      for (const Candidate& c : result.ranked) {
        out << "  " << to_string(c.origin) << "  "
            << (c.region.is_deleted() ? "deleted"
                                      : to_string(c.region.range()))
            << "  " << c.similarity.value_or(0.0) << "\n";
      }
    }
    if (a.timing) {
      out << "candidates_ms " << result.candidates_ms << "\nselection_ms "
          << result.selection_ms << "\n";
    }
    return kExitOk;
  }

  json j;
  j["source"] = region_json(
      Region::at(inputs.source_commit, inputs.source_file, inputs.range));
  j["target"] = region_json(result.target);
  if (!result.reason.empty()) j["reason"] = result.reason;
  if (chosen) {
    j["origin"] = to_string(chosen->origin);
    j["similarity"] = chosen->similarity.value_or(0.0);
  }
  if (!result.target.is_deleted()) {
    j["text"] = inputs.target.extract(result.target.range());
  }
  if (a.verbose) {
    json list = json::array();
    for (const Candidate& c : result.ranked) {
      json item;
      item["origin"] = to_string(c.origin);
      item["similarity"] = c.similarity.value_or(0.0);
      item["region"] = region_json(c.region);
      list.push_back(std::move(item));
    }
    j["candidates"] = std::move(list);
  }
  if (a.timing) {
    j["timing_ms"] = {{"candidates", result.candidates_ms},
                      {"selection", result.selection_ms}};
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<EvalRecord> records;
  try {
    records = load_dataset(a.dataset);
  } catch (const Error& e) {
    err << "codemapper: " << e.what() << "\n";
    return kExitDataset;
  }
  EvalOptions options;
  options.config.context_lines = a.context;
  options.diff_context = a.diff_context;
  options.ablation = a.ablation;
  options.context_sweep = a.context_sweep;
  options.jobs = a.jobs;
  options.clone_dir = a.clone_dir;
  const EvalReport report = evaluate(records, options);
  const std::string text =
      a.format == "text" ? report_to_text(report) : report_to_json(report);
  if (a.out.empty()) {
    out << text;
  } else {
    std::ofstream file(a.out, std::ios::binary);
    if (!file) {
      err << "codemapper: cannot write " << a.out << "\n";
      return kExitUsage;
    }
    file << text;
  }
  return report.overall.errored > 0 ? kExitRecordErrors : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Map a code region between two git commits"};
  app.name("codemapper");
  app.require_subcommand(1);

  MapArgs m;
  CLI::App* map = app.add_subcommand("map", "Map one region to a target commit");
  map->add_option("--repo", m.repo, "Repository path")->capture_default_str();
  map->add_option("--source-commit", m.source_commit)->required();
  map->add_option("--file", m.file, "Path of the file at the source commit")
      ->required();
  map->add_option("--start-line", m.start_line)->required();
  map->add_option("--start-col", m.start_col)->required();
  map->add_option("--end-line", m.end_line)->required();
  map->add_option("--end-col", m.end_col, "Last included column")->required();
  map->add_option("--target-commit", m.target_commit)->required();
  map->add_option("--context", m.context, "Context lines for scoring")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  map->add_option("--diff-context", m.diff_context, "Context lines of git diff")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  map->add_flag("--no-refine", m.no_refine);
  map->add_flag("--no-move", m.no_move);
  map->add_flag("--no-search", m.no_search);
  map->add_flag("--no-context", m.no_context);
  map->add_flag("--no-diff", m.no_diff);
  map->add_option("--format", m.format)
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "text"}));
  map->add_flag("--verbose", m.verbose, "List all ranked candidates");
  map->add_flag("--timing", m.timing, "Report time per phase");

  EvalArgs e;
  CLI::App* eval = app.add_subcommand("eval", "Score mappings against a dataset");
  eval->add_option("--dataset", e.dataset, "JSON Lines dataset")->required();
  eval->add_flag("--ablation", e.ablation, "Run with each component disabled");
  eval->add_option("--context-sweep", e.context_sweep,
                   "Comma-separated context sizes")
      ->delimiter(',');
  eval->add_option("--format", e.format)
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "text"}));
  eval->add_option("--out", e.out, "Write the report to a file");
  eval->add_option("--jobs", e.jobs)->capture_default_str()->check(
      CLI::PositiveNumber);
  eval->add_option("--context", e.context)
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  eval->add_option("--diff-context", e.diff_context)
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  eval->add_option("--clone-dir", e.clone_dir,
                   "Where repositories given by URL are cloned");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("codemapper");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err) == 0 ? kExitOk : kExitUsage;
  }

  if (map->parsed()) return cmd_map(m, out, err);
  return cmd_eval(e, out, err);
}

}  // namespace codemap::cli
