#include "codemap/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "codemap/error.hpp"
#include "codemap/git_gateway.hpp"
#include "codemap/mapper.hpp"
#include "json.hpp"

namespace codemap {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void dataset_error(int line_no, const std::string& what) {
  throw Error(ErrorKind::kDatasetError,
              "dataset line " + std::to_string(line_no) + ": " + what);
}

bool is_url(std::string_view repo) {
  return repo.find("://") != std::string_view::npos ||
         repo.rfind("git@", 0) == 0;
}

CharacterRange range_from(const json& j, int line_no) {
  for (const char* key : {"l1", "c1", "l2", "c2"}) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
      dataset_error(line_no, std::string("missing integer field '") + key + "'");
    }
  }
  try {
    return make_range(j["l1"].get<int>(), j["c1"].get<int>(),
                      j["l2"].get<int>(), j["c2"].get<int>());
  } catch (const Error& e) {
    dataset_error(line_no, e.what());
  }
}

std::string string_field(const json& j, const char* key, int line_no) {
  if (!j.contains(key) || !j[key].is_string() ||
      j[key].get<std::string>().empty()) {
    dataset_error(line_no, std::string("missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

EvalRecord parse_record(const json& j, const std::filesystem::path& base_dir,
                        int line_no) {
  if (!j.is_object()) dataset_error(line_no, "record is not an object");
  if (j.contains("schema_version") && j["schema_version"] != 1) {
    dataset_error(line_no, "unsupported schema_version");
  }
  EvalRecord record;
  record.line_no = line_no;
  record.id = j.contains("id") && j["id"].is_string()
                  ? j["id"].get<std::string>()
                  : "line-" + std::to_string(line_no);
  record.repo = string_field(j, "repo", line_no);
  if (!is_url(record.repo)) {
    std::filesystem::path repo(record.repo);
    if (repo.is_relative()) repo = base_dir / repo;
    record.repo = repo.lexically_normal().string();
  }
  if (!j.contains("source") || !j["source"].is_object()) {
    dataset_error(line_no, "missing object field 'source'");
  }
  const json& src = j["source"];
  record.source = Region::at(string_field(src, "commit", line_no),
                             string_field(src, "file", line_no),
                             range_from(src, line_no));
  record.target_commit = string_field(j, "target_commit", line_no);
  if (!j.contains("expected")) dataset_error(line_no, "missing 'expected'");
  const json& expected = j["expected"];
  if (expected.is_string() && expected.get<std::string>() == "deleted") {
    record.expected = Region::deleted();
  } else if (expected.is_object()) {
    const std::string commit = expected.contains("commit")
                                   ? string_field(expected, "commit", line_no)
                                   : record.target_commit;
    record.expected = Region::at(commit, string_field(expected, "file", line_no),
                                 range_from(expected, line_no));
  } else {
    dataset_error(line_no, "'expected' must be an object or \"deleted\"");
  }
  if (j.contains("tags")) {
    if (!j["tags"].is_array()) dataset_error(line_no, "'tags' must be a list");
    for (const json& tag : j["tags"]) {
      if (!tag.is_string()) dataset_error(line_no, "tags must be strings");
      record.tags.push_back(tag.get<std::string>());
    }
  }
  return record;
}

json range_json(const Region& region) {
  const CharacterRange& r = region.range();
  json j;
  j["file"] = region.file();
  j["l1"] = r.l1();
  j["c1"] = r.c1();
  j["l2"] = r.l2();
  j["c2"] = r.c2();
  return j;
}

}  // namespace

std::vector<EvalRecord> parse_dataset(std::string_view text,
                                      const std::filesystem::path& base_dir) {
  std::vector<EvalRecord> records;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t stop = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, stop - pos);
    pos = stop + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      dataset_error(line_no, e.what());
    }
    records.push_back(parse_record(j, base_dir, line_no));
  }
  return records;
}

std::vector<EvalRecord> load_dataset(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kDatasetError, "cannot read " + file.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str(), file.parent_path());
}

std::string dataset_line(const EvalRecord& record) {
  json j;
  j["schema_version"] = 1;
  j["id"] = record.id;
  j["repo"] = record.repo;
  j["source"] = {{"commit", record.source.commit()},
                 {"file", record.source.file()},
                 {"l1", record.source.range().l1()},
                 {"c1", record.source.range().c1()},
                 {"l2", record.source.range().l2()},
                 {"c2", record.source.range().c2()}};
  j["target_commit"] = record.target_commit;
  if (record.expected.is_deleted()) {
    j["expected"] = "deleted";
  } else {
    j["expected"] = range_json(record.expected);
  }
  j["tags"] = record.tags;
  return j.dump();
}

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::kExact:
      return "exact";
    case OutcomeKind::kPartialOverlap:
      return "partial_overlap";
    case OutcomeKind::kNoOverlap:
      return "no_overlap";
    case OutcomeKind::kCorrectDeletion:
      return "correct_deletion";
    case OutcomeKind::kWrongDeletion:
      return "wrong_deletion";
    case OutcomeKind::kMissedDeletion:
      return "missed_deletion";
    case OutcomeKind::kError:
      return "error";
  }
  return "error";
}

OverlapMetrics overlap_metrics(AbsInterval predicted, AbsInterval expected) {
  const std::size_t lo = std::max(predicted.start, expected.start);
  const std::size_t hi = std::min(predicted.end, expected.end);
  const std::size_t common = hi > lo ? hi - lo : 0;
  OverlapMetrics m;
  if (common == 0) return m;
  m.recall = static_cast<double>(common) / static_cast<double>(expected.size());
  m.precision =
      static_cast<double>(common) / static_cast<double>(predicted.size());
  m.f1 = 2.0 * m.recall * m.precision / (m.recall + m.precision);
  return m;
}

OverlapMetrics overlap_metrics(const Region& predicted, const Region& expected,
                               const Document& target) {
  if (predicted.is_deleted() || expected.is_deleted()) return {};
  if (predicted.file() != expected.file()) {
    throw Error(ErrorKind::kFileMismatch,
                "predicted " + predicted.file() + " but expected " +
                    expected.file());
  }
  return overlap_metrics(target.to_abs_interval(predicted.range()),
                         target.to_abs_interval(expected.range()));
}

long long char_distance(AbsInterval predicted, AbsInterval expected) {
  const auto diff = [](std::size_t a, std::size_t b) {
    return static_cast<long long>(a > b ? a - b : b - a);
  };
  return diff(predicted.start, expected.start) + diff(predicted.end, expected.end);
}

EvalOutcome score_outcome(const Region& predicted, const Region& expected,
                          const Document& target) {
  EvalOutcome out;
  out.predicted = predicted;
  if (predicted.is_deleted() && expected.is_deleted()) {
    out.kind = OutcomeKind::kCorrectDeletion;
    out.recall = out.precision = out.f1 = 1.0;
    return out;
  }
  if (predicted.is_deleted()) {
    out.kind = OutcomeKind::kWrongDeletion;
    return out;
  }
  if (expected.is_deleted()) {
    out.kind = OutcomeKind::kMissedDeletion;
    return out;
  }
  if (predicted.file() != expected.file()) {
    out.kind = OutcomeKind::kNoOverlap;
    return out;
  }
  const AbsInterval p = target.to_abs_interval(predicted.range());
  const AbsInterval e = target.to_abs_interval(expected.range());
  const OverlapMetrics m = overlap_metrics(p, e);
  out.recall = m.recall;
  out.precision = m.precision;
  out.f1 = m.f1;
  if (p == e) {
    out.kind = OutcomeKind::kExact;
  } else if (m.f1 > 0.0) {
    out.kind = OutcomeKind::kPartialOverlap;
    out.char_distance = char_distance(p, e);
  } else {
    out.kind = OutcomeKind::kNoOverlap;
  }
  return out;
}

Aggregate aggregate(const std::vector<EvalOutcome>& outcomes) {
  Aggregate a;
  a.total = outcomes.size();
  long long distance_sum = 0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  for (const EvalOutcome& o : outcomes) {
    if (o.kind == OutcomeKind::kError) {
      ++a.errored;
      continue;
    }
    ++a.evaluated;
    if (o.exact()) ++a.exact;
    if (o.overlapping()) ++a.overlapping;
    if (o.kind == OutcomeKind::kPartialOverlap) {
      ++a.partial;
      distance_sum += o.char_distance.value_or(0);
    }
    recall += o.recall;
    precision += o.precision;
    f1 += o.f1;
  }
  if (a.evaluated > 0) {
    const auto n = static_cast<double>(a.evaluated);
    a.exact_rate = static_cast<double>(a.exact) / n;
    a.overlap_rate = static_cast<double>(a.overlapping) / n;
    a.mean_recall = recall / n;
    a.mean_precision = precision / n;
    a.mean_f1 = f1 / n;
  }
  if (a.partial > 0) {
    a.mean_char_distance =
        static_cast<double>(distance_sum) / static_cast<double>(a.partial);
  }
  return a;
}

std::vector<std::pair<std::string, SelectionConfig>> ablation_configs(
    const SelectionConfig& base) {
  std::vector<std::pair<std::string, SelectionConfig>> out;
  out.emplace_back("full", base);
  SelectionConfig c = base;
  c.diff = false;
  out.emplace_back("no_diff", c);
  c = base;
  c.refinement = false;
  out.emplace_back("no_refine", c);
  c = base;
  c.movement = false;
  out.emplace_back("no_move", c);
  c = base;
  c.search = false;
  out.emplace_back("no_search", c);
  c = base;
  c.context = false;
  out.emplace_back("no_context", c);
  return out;
}

namespace {

std::filesystem::path clone_path(const std::filesystem::path& dir,
                                 const std::string& url) {
  std::string name;
  for (char c : url) {
    name += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  }
  return dir / name;
}

// Clones every URL repository once; returns url -> local path.
std::map<std::string, std::string> clone_remotes(
    const std::vector<EvalRecord>& records, const EvalOptions& options) {
  std::map<std::string, std::string> local;
  std::filesystem::path dir = options.clone_dir;
  if (dir.empty()) dir = std::filesystem::temp_directory_path() / "codemapper-repos";
  for (const EvalRecord& r : records) {
    if (!is_url(r.repo) || local.count(r.repo) > 0) continue;
    const std::filesystem::path target = clone_path(dir, r.repo);
    if (!std::filesystem::exists(target / ".git") &&
        !std::filesystem::exists(target / "HEAD")) {
      std::filesystem::create_directories(dir);
      const ProcessResult result = run_process(
          {default_git_binary(), "clone", "--quiet", r.repo, target.string()});
      // A failed clone surfaces as a repository error for its records.
      (void)result;
    }
    local[r.repo] = target.string();
  }
  return local;
}

EvalOutcome error_outcome(const std::string& id, const std::string& message) {
  EvalOutcome o;
  o.id = id;
  o.kind = OutcomeKind::kError;
  o.error = message;
  return o;
}

std::vector<EvalOutcome> run_record(
    const EvalRecord& record, const std::string& repo,
    const std::vector<SelectionConfig>& configs, int diff_context) {
  std::vector<EvalOutcome> outcomes;
  try {
    const GitGateway git(repo);
    MapRequest request;
    request.source_commit = record.source.commit();
    request.file = record.source.file();
    request.range = record.source.range();
    request.target_commit = record.target_commit;
    const MapInputs inputs = load_inputs(git, request, diff_context);

    Document expected_doc;
    const Document* expected_text = &inputs.target;
    if (!record.expected.is_deleted() &&
        (!inputs.target_file || *inputs.target_file != record.expected.file())) {
      expected_doc = Document(
          git.file_content(record.target_commit, record.expected.file()));
      expected_text = &expected_doc;
    }
    if (!record.expected.is_deleted() &&
        !expected_text->contains(record.expected.range())) {
      throw Error(ErrorKind::kOutOfBounds,
                  "expected range " + to_string(record.expected.range()) +
                      " is outside " + record.expected.file());
    }
    for (const SelectionConfig& config : configs) {
      try {
        const MapResult result = map_region(inputs, config);
        EvalOutcome o = score_outcome(result.target, record.expected,
                                      *expected_text);
        o.id = record.id;
        o.candidates_ms = result.candidates_ms;
        o.selection_ms = result.selection_ms;
        outcomes.push_back(std::move(o));
      } catch (const Error& e) {
        outcomes.push_back(error_outcome(record.id, e.what()));
      }
    }
  } catch (const std::exception& e) {
    outcomes.assign(configs.size(), error_outcome(record.id, e.what()));
  }
  return outcomes;
}

}  // namespace

EvalReport evaluate(const std::vector<EvalRecord>& records,
                    const EvalOptions& options) {
  std::vector<SelectionConfig> configs{options.config};
  std::vector<std::string> ablation_names;
  if (options.ablation) {
    for (auto& [name, config] : ablation_configs(options.config)) {
      ablation_names.push_back(name);
      configs.push_back(config);
    }
  }
  for (int n : options.context_sweep) {
    SelectionConfig config = options.config;
    config.context = true;
    config.context_lines = n;
    configs.push_back(config);
  }

  const auto remotes = clone_remotes(records, options);
  std::vector<std::vector<EvalOutcome>> runs(records.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      const EvalRecord& r = records[i];
      const auto remote = remotes.find(r.repo);
      const std::string repo = remote == remotes.end() ? r.repo : remote->second;
      runs[i] = run_record(r, repo, configs, options.diff_context);
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs,
                                             static_cast<int>(records.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  const auto column = [&](std::size_t k) {
    std::vector<EvalOutcome> out;
    out.reserve(runs.size());
    for (const auto& run : runs) out.push_back(run[k]);
    return out;
  };

  EvalReport report;
  report.outcomes = column(0);
  report.overall = aggregate(report.outcomes);
  std::set<std::string> tags;
  for (const EvalRecord& r : records) tags.insert(r.tags.begin(), r.tags.end());
  for (const std::string& tag : tags) {
    std::vector<EvalOutcome> subset;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& t = records[i].tags;
      if (std::find(t.begin(), t.end(), tag) != t.end()) {
        subset.push_back(report.outcomes[i]);
      }
    }
    report.by_tag[tag] = aggregate(subset);
  }
  std::size_t k = 1;
  for (const std::string& name : ablation_names) {
    report.ablation.emplace_back(name, aggregate(column(k++)));
  }
  for (int n : options.context_sweep) {
    report.context_sweep.emplace_back(n, aggregate(column(k++)));
  }
  return report;
}

namespace {

json aggregate_json(const Aggregate& a) {
  json j;
  j["total"] = a.total;
  j["errored"] = a.errored;
  j["evaluated"] = a.evaluated;
  j["exact"] = a.exact;
  j["overlapping"] = a.overlapping;
  j["partial_overlap"] = a.partial;
  j["exact_rate"] = a.exact_rate;
  j["overlap_rate"] = a.overlap_rate;
  j["mean_char_distance"] =
      a.mean_char_distance ? json(*a.mean_char_distance) : json(nullptr);
  j["mean_recall"] = a.mean_recall;
  j["mean_precision"] = a.mean_precision;
  j["mean_f1"] = a.mean_f1;
  return j;
}

std::string fixed(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string aggregate_row(const std::string& label, const Aggregate& a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-18s %6zu %6zu %7zu %7zu %9s %7s %7s %7s\n",
                label.c_str(), a.evaluated, a.errored, a.exact, a.overlapping,
                a.mean_char_distance ? fixed(*a.mean_char_distance, 1).c_str()
                                     : "-",
                fixed(a.mean_recall).c_str(), fixed(a.mean_precision).c_str(),
                fixed(a.mean_f1).c_str());
  return buf;
}

std::string table_header(const std::string& label) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-18s %6s %6s %7s %7s %9s %7s %7s %7s\n",
                label.c_str(), "eval", "error", "exact", "overlap", "chardist",
                "recall", "prec", "f1");
  return buf;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  json j;
  j["summary"] = aggregate_json(report.overall);
  json records = json::array();
  for (const EvalOutcome& o : report.outcomes) {
    json r;
    r["id"] = o.id;
    r["outcome"] = to_string(o.kind);
    r["char_distance"] = o.char_distance ? json(*o.char_distance) : json(nullptr);
    r["recall"] = o.recall;
    r["precision"] = o.precision;
    r["f1"] = o.f1;
    if (!o.predicted) {
      r["predicted"] = nullptr;
    } else if (o.predicted->is_deleted()) {
      r["predicted"] = "deleted";
    } else {
      r["predicted"] = range_json(*o.predicted);
    }
    if (!o.error.empty()) r["error"] = o.error;
    r["timing_ms"] = {{"candidates", o.candidates_ms},
                      {"selection", o.selection_ms}};
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  json by_tag = json::object();
  for (const auto& [tag, a] : report.by_tag) by_tag[tag] = aggregate_json(a);
  j["by_tag"] = std::move(by_tag);
  if (!report.ablation.empty()) {
    json rows = json::array();
    for (const auto& [name, a] : report.ablation) {
      json row;
      row["config"] = name;
      row.update(aggregate_json(a));
      rows.push_back(std::move(row));
    }
    j["ablation"] = std::move(rows);
  }
  if (!report.context_sweep.empty()) {
    json rows = json::array();
    for (const auto& [n, a] : report.context_sweep) {
      json row;
      row["context"] = n;
      row.update(aggregate_json(a));
      rows.push_back(std::move(row));
    }
    j["context_sweep"] = std::move(rows);
  }
  return j.dump(2) + "\n";
}

std::string report_to_text(const EvalReport& report) {
  std::string out;
  for (const EvalOutcome& o : report.outcomes) {
    out += o.id + "  " + std::string(to_string(o.kind));
    if (o.char_distance) out += "  dist=" + std::to_string(*o.char_distance);
    if (!o.error.empty()) out += "  " + o.error;
    out += "\n";
  }
  out += "\n" + table_header("");
  out += aggregate_row("all", report.overall);
  for (const auto& [tag, a] : report.by_tag) out += aggregate_row(tag, a);
  if (!report.ablation.empty()) {
    out += "\n" + table_header("ablation");
    for (const auto& [name, a] : report.ablation) out += aggregate_row(name, a);
  }
  if (!report.context_sweep.empty()) {
    out += "\n" + table_header("context");
    for (const auto& [n, a] : report.context_sweep) {
      out += aggregate_row(std::to_string(n), a);
    }
  }
  return out;
}

}  // namespace codemap
