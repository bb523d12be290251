#include "fixtures.hpp"

#include <fstream>
#include <stdexcept>

#include "codemap/diff_parser.hpp"
#include "codemap/process.hpp"
#include "codemap/text_search.hpp"
#include "json.hpp"

namespace codemap::fixtures {

namespace fs = std::filesystem;

RepoBuilder::RepoBuilder(fs::path dir) : dir_(std::move(dir)) {
  fs::remove_all(dir_);
  fs::create_directories(dir_);
  git({"init", "--quiet"});
}

std::string RepoBuilder::git(const std::vector<std::string>& args,
                             std::string_view input) {
  std::vector<std::string> argv{"git", "-C", dir_.string(),
                                "-c", "init.defaultBranch=main",
                                "-c", "user.name=Fixture",
                                "-c", "user.email=fixture@example.com",
                                "-c", "commit.gpgsign=false",
                                "-c", "core.autocrlf=false"};
  argv.insert(argv.end(), args.begin(), args.end());
  ProcessOptions options;
  const std::string date =
      "@" + std::to_string(1577836800 + 60 * commits_) + " +0000";
  options.env = {{"GIT_CONFIG_NOSYSTEM", "1"},
                 {"GIT_CONFIG_GLOBAL", "/dev/null"},
                 {"GIT_AUTHOR_NAME", "Fixture"},
                 {"GIT_AUTHOR_EMAIL", "fixture@example.com"},
                 {"GIT_COMMITTER_NAME", "Fixture"},
                 {"GIT_COMMITTER_EMAIL", "fixture@example.com"},
                 {"GIT_AUTHOR_DATE", date},
                 {"GIT_COMMITTER_DATE", date}};
  options.stdin_data = std::string(input);
  const ProcessResult result = run_process(argv, options);
  if (result.exit_code != 0) {
    throw std::runtime_error("git " + args.front() + " failed: " + result.err);
  }
  return result.out;
}

void RepoBuilder::write(const std::string& path, std::string_view content) {
  const fs::path file = dir_ / path;
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << content;
}

void RepoBuilder::remove(const std::string& path) { git({"rm", "--quiet", path}); }

void RepoBuilder::rename(const std::string& from, const std::string& to) {
  git({"mv", from, to});
}

std::string RepoBuilder::commit(const std::string& message) {
  git({"add", "-A"});
  git({"commit", "--quiet", "--allow-empty", "-m", message});
  ++commits_;
  std::string hash = git({"rev-parse", "HEAD"});
  while (!hash.empty() && hash.back() == '\n') hash.pop_back();
  return hash;
}

std::string RepoBuilder::hash_object(std::string_view content) {
  std::string id = git({"hash-object", "-w", "--stdin"}, content);
  while (!id.empty() && id.back() == '\n') id.pop_back();
  return id;
}

BlobDiffer::BlobDiffer(fs::path dir) : repo_(dir), git_(std::move(dir)) {}

std::vector<RawDiffReport> BlobDiffer::reports(std::string_view source,
                                               std::string_view target) {
  const std::string a = repo_.hash_object(source);
  const std::string b = repo_.hash_object(target);
  std::vector<RawDiffReport> out;
  for (const DiffConfig& config : all_diff_configs()) {
    std::string text = git_.diff_objects(a, b, config);
    if (text.empty()) continue;
    bool seen = false;
    for (RawDiffReport& r : out) {
      if (r.text == text) {
        r.duplicates.push_back(config);
        seen = true;
        break;
      }
    }
    if (seen) continue;
    RawDiffReport report;
    report.config = config;
    report.text = std::move(text);
    report.source_file = "file.txt";
    report.target_file = "file.txt";
    out.push_back(std::move(report));
  }
  return out;
}

MapInputs BlobDiffer::inputs(std::string_view source, std::string_view target,
                             const CharacterRange& range) {
  MapInputs in;
  in.source_commit = "source";
  in.target_commit = "target";
  in.source_file = "file.txt";
  in.target_file = "file.txt";
  in.range = range;
  in.source = Document(source);
  in.target = Document(target);
  in.reports = reports(in.source.text(), in.target.text());
  for (const RawDiffReport& report : in.reports) {
    in.hunks.push_back(parse_report(report));
  }
  return in;
}

CharacterRange locate(std::string_view content, std::string_view needle,
                      int occurrence) {
  const Document doc(content);
  const auto hits = search_text(needle, doc, "x", "x");
  if (occurrence >= static_cast<int>(hits.size())) {
    throw std::runtime_error("fixture text not found: " + std::string(needle));
  }
  return hits[occurrence].region.range();
}

CharacterRange lines_range(std::string_view content, int first, int last) {
  const Document doc(content);
  const std::string_view line = doc.line(first);
  const int indent = static_cast<int>(line.find_first_not_of(" \t"));
  return make_range(first, indent + 1, last, doc.line_length(last));
}

namespace {

Fixture make(const std::string& id, const RepoBuilder& repo,
             const std::string& source_commit, const std::string& file,
             CharacterRange source, const std::string& target_commit,
             const std::string& target_file, CharacterRange expected,
             std::vector<std::string> tags) {
  Fixture f;
  f.record.id = id;
  f.record.repo = repo.dir().string();
  f.record.source = Region::at(source_commit, file, source);
  f.record.target_commit = target_commit;
  f.record.expected = Region::at(target_commit, target_file, expected);
  f.record.tags = std::move(tags);
  f.expected_outcome = "exact";
  return f;
}

Fixture make_deleted(const std::string& id, const RepoBuilder& repo,
                     const std::string& source_commit, const std::string& file,
                     CharacterRange source, const std::string& target_commit,
                     std::vector<std::string> tags) {
  Fixture f;
  f.record.id = id;
  f.record.repo = repo.dir().string();
  f.record.source = Region::at(source_commit, file, source);
  f.record.target_commit = target_commit;
  f.record.expected = Region::deleted();
  f.record.tags = std::move(tags);
  f.expected_outcome = "correct_deletion";
  return f;
}

const char* kVectorOld = R"py(import math


class Vector:
    def __init__(self, x, y):
        self.x = x
        self.y = y

    def print(self):
        print("Vector(" + str(self.x) + ", " + str(self.y) + ")")

    def compute(self, other):
        # euclidean distance between two points
        dx = self.x - other.x
        dy = self.y - other.y
        total = dx * dx + dy * dy
        result = math.sqrt(total)
        return result

    def scale(self, factor):
        return Vector(self.x * factor, self.y * factor)
)py";

const char* kVectorNew = R"py(import math


class Vector:
    def __init__(self, x, y):
        self.x = x
        self.y = y

    def compute(self, other, weight=1.0):
        # euclidean distance between two points
        dx = (self.x - other.x) * weight
        dy = (self.y - other.y) * weight
        total = dx * dx + dy * dy
        result = math.sqrt(total)
        if result == 0:
            return 0.0
        return result

    def print(self):
        print("Vector(" + str(self.x) + ", " + str(self.y) + ")")

    def scale(self, factor):
        return Vector(self.x * factor, self.y * factor)
)py";

void vector_fixtures(const fs::path& root, std::vector<Fixture>& out) {
  RepoBuilder repo(root / "vector");
  repo.write("vector.py", kVectorOld);
  const std::string c1 = repo.commit("Add vector class");
  repo.write("vector.py", kVectorNew);
  const std::string c2 = repo.commit("Weight the distance");

  out.push_back(make("fig1-moved-method", repo, c1, "vector.py",
                     lines_range(kVectorOld, 9, 10), c2, "vector.py",
                     lines_range(kVectorNew, 19, 20), {"fig1", "movement"}));
  // The occurrence on the dy line of compute.
  out.push_back(make("fig1-modified-line", repo, c1, "vector.py",
                     locate(kVectorOld, "self.y", 2), c2, "vector.py",
                     locate(kVectorNew, "self.y", 1), {"fig1", "refinement"}));
}

const char* kValuesOld = R"py(def pick(values):
    if not values:
        return None
    x = values.old
    return x
)py";

const char* kValuesNew = R"py(def pick(values):
    if not values:
        return None
    x = values.updated
    return x
)py";

void values_fixtures(const fs::path& root, std::vector<Fixture>& out) {
  RepoBuilder repo(root / "values");
  repo.write("pick.py", kValuesOld);
  const std::string c1 = repo.commit("Pick values");
  repo.write("pick.py", kValuesNew);
  const std::string c2 = repo.commit("Use updated values");

  out.push_back(make("fig4-refined-token", repo, c1, "pick.py",
                     locate(kValuesOld, "old"), c2, "pick.py",
                     locate(kValuesNew, "updated"), {"fig4", "refinement"}));
  out.push_back(make("backward-refined-token", repo, c2, "pick.py",
                     locate(kValuesNew, "updated"), c1, "pick.py",
                     locate(kValuesOld, "old"), {"backward", "refinement"}));
}

const char* kCombineOld = R"py(from ops import combine


def merge(alpha, beta, gamma):
    result = combine(alpha, beta, gamma)
    return result
)py";

const char* kCombineNew = R"py(from ops import combine


def merge(alpha, beta, gamma):
    result = combine(gamma, alpha, beta)
    return result
)py";

void combine_fixture(const fs::path& root, std::vector<Fixture>& out) {
  RepoBuilder repo(root / "combine");
  repo.write("merge.py", kCombineOld);
  const std::string c1 = repo.commit("Merge inputs");
  repo.write("merge.py", kCombineNew);
  const std::string c2 = repo.commit("Reorder arguments");

  // Second "beta": the call argument, not the parameter.
  out.push_back(make("fig5-reordered-argument", repo, c1, "merge.py",
                     locate(kCombineOld, "beta", 1), c2, "merge.py",
                     locate(kCombineNew, "beta", 1), {"fig5", "search"}));
}

const char* kSwapOld = R"py(def configure(app):
    app.name = "demo"
    app.retries = 3
    app.timeout = compute_timeout(app)
    app.verbose = False
    app.workers = 4
    app.queue = "default"
    return app
)py";

const char* kSwapNew = R"py(def configure(app):
    app.name = "demo"
    app.retries = 3
    app.verbose = False
    app.workers = 4
    app.queue = "default"
    app.timeout = compute_timeout(app)
    return app
)py";

void swap_fixture(const fs::path& root, std::vector<Fixture>& out) {
  RepoBuilder repo(root / "swap");
  repo.write("config.py", kSwapOld);
  const std::string c1 = repo.commit("Configure app");
  repo.write("config.py", kSwapNew);
  const std::string c2 = repo.commit("Set timeout last");

  out.push_back(make("fig6-moved-line", repo, c1, "config.py",
                     lines_range(kSwapOld, 4, 4), c2, "config.py",
                     lines_range(kSwapNew, 7, 7), {"fig6", "movement"}));
}

const char* kSuppressOld = R"py(import client


def fetch(session):
    # pylint: disable=no-member
    return session.fetch()


def parse(payload):
    fields = payload.split(",")
    cleaned = [f.strip() for f in fields]
    return [f for f in cleaned if f]


def summarize(rows):
    total = 0
    for row in rows:
        total += len(row)
    return total


def store(db, rows):
    with db.transaction() as tx:
        for row in rows:
            tx.insert(row)
    return len(rows)


def notify(channel):
    # pylint: disable=no-member
    return channel.publish()
)py";

const char* kSuppressNew = R"py(import client


def fetch(session):
    return session.fetch()


def parse(payload):
    fields = payload.split(",")
    cleaned = [f.strip() for f in fields]
    return [f for f in cleaned if f]


def summarize(rows):
    total = 0
    for row in rows:
        total += len(row)
    return total


def store(db, rows):
    with db.transaction() as tx:
        for row in rows:
            tx.insert(row)
    return len(rows)


def notify(channel):
    # pylint: disable=no-member
    return channel.publish()
)py";

void suppression_fixture(const fs::path& root, std::vector<Fixture>& out) {
  RepoBuilder repo(root / "suppression");
  repo.write("client_ops.py", kSuppressOld);
  const std::string c1 = repo.commit("Add client operations");
  repo.write("client_ops.py", kSuppressNew);
  const std::string c2 = repo.commit("Drop stale suppression");

  out.push_back(make_deleted("fig7-deleted-suppression", repo, c1,
                             "client_ops.py", lines_range(kSuppressOld, 5, 5),
                             c2, {"fig7", "deletion"}));
}

const char* kTopOld = R"py(def report(items):
    total = compute_sum(items)
    print(total)
    return total
)py";

const char* kTopNew = R"py(def report(items):
    total = compute_sum(items, start=0)
    print(total)
    return total
)py";

const char* kBothOld = R"py(def persist(path):
    value = load(path)
    check(value)
    save(value, path)
)py";

const char* kBothNew = R"py(def persist(path):
    value = load_file(path)
    check(value)
    save_file(value, path)
)py";

void overlap_fixtures(const fs::path& root, std::vector<Fixture>& out) {
  {
    RepoBuilder repo(root / "top");
    repo.write("report.py", kTopOld);
    const std::string c1 = repo.commit("Report totals");
    repo.write("report.py", kTopNew);
    const std::string c2 = repo.commit("Start sums at zero");
    const CharacterRange src = make_range(locate(kTopOld, "compute_sum").start(),
                                          lines_range(kTopOld, 4, 4).end());
    const CharacterRange dst = make_range(locate(kTopNew, "compute_sum").start(),
                                          lines_range(kTopNew, 4, 4).end());
    out.push_back(make("top-overlap", repo, c1, "report.py", src, c2,
                       "report.py", dst, {"overlap", "refinement"}));
  }
  {
    RepoBuilder repo(root / "both");
    repo.write("persist.py", kBothOld);
    const std::string c1 = repo.commit("Persist values");
    repo.write("persist.py", kBothNew);
    const std::string c2 = repo.commit("Use file helpers");
    const CharacterRange src = make_range(locate(kBothOld, "load").start(),
                                          lines_range(kBothOld, 4, 4).end());
    const CharacterRange dst = make_range(locate(kBothNew, "load_file").start(),
                                          lines_range(kBothNew, 4, 4).end());
    out.push_back(make("top-bottom-overlap", repo, c1, "persist.py", src, c2,
                       "persist.py", dst, {"overlap", "refinement"}));
  }
}

const char* kShiftOld = R"py(LIMIT = 10


def clamp(value):
    return min(value, LIMIT)


def scale(value):
    return value * 2
)py";

const char* kShiftNew = R"py(LIMIT = 10
FLOOR = 0


def lower(value):
    return max(value, FLOOR)


def clamp(value):
    return min(value, LIMIT)


def scale(value):
    return value * 2


def clamp_all(values):
    return [min(v, LIMIT) for v in values]
)py";

const char* kCounterOld = R"py(def tally(events):
    counter = 0
    for event in events:
        counter = counter + 1
    return counter
)py";

const char* kCounterNew = R"py(def tally(events):
    count = 0
    for event in events:
        count = count + 1
    return count
)py";

void shift_and_rename_fixtures(const fs::path& root, std::vector<Fixture>& out) {
  {
    RepoBuilder repo(root / "shift");
    repo.write("limits.py", kShiftOld);
    const std::string c1 = repo.commit("Clamp values");
    repo.write("limits.py", kShiftNew);
    const std::string c2 = repo.commit("Add lower bound");
    out.push_back(make("shifted-unchanged", repo, c1, "limits.py",
                       locate(kShiftOld, "min(value, LIMIT)"), c2, "limits.py",
                       locate(kShiftNew, "min(value, LIMIT)"),
                       {"offset", "search"}));
  }
  {
    RepoBuilder repo(root / "counter");
    repo.write("tally.py", kCounterOld);
    const std::string c1 = repo.commit("Count events");
    repo.write("tally.py", kCounterNew);
    const std::string c2 = repo.commit("Rename counter");
    out.push_back(make("identifier-renamed-line", repo, c1, "tally.py",
                       lines_range(kCounterOld, 4, 4), c2, "tally.py",
                       lines_range(kCounterNew, 4, 4),
                       {"rename", "refinement"}));
  }
}

const char* kHelpersOld = R"py(def slugify(text):
    return text.lower().replace(" ", "-")


def title(text):
    return text.title()
)py";

const char* kHelpersNew = R"py(import re


def slugify(text):
    return text.lower().replace(" ", "-")


def title(text):
    return text.title()
)py";

void file_fixtures(const fs::path& root, std::vector<Fixture>& out) {
  {
    RepoBuilder repo(root / "renamed");
    repo.write("helpers.py", kHelpersOld);
    repo.write("main.py", "from helpers import slugify\n");
    const std::string c1 = repo.commit("Add helpers");
    repo.rename("helpers.py", "text_utils.py");
    repo.write("main.py", "from text_utils import slugify\n");
    repo.commit("Rename helpers module");
    repo.write("text_utils.py", kHelpersNew);
    const std::string c3 = repo.commit("Import re");
    out.push_back(make("renamed-file", repo, c1, "helpers.py",
                       lines_range(kHelpersOld, 5, 6), c3, "text_utils.py",
                       lines_range(kHelpersNew, 8, 9), {"file-rename"}));
  }
  {
    RepoBuilder repo(root / "removed");
    repo.write("legacy.py", kHelpersOld);
    repo.write("main.py", "print('hi')\n");
    const std::string c1 = repo.commit("Add legacy helpers");
    repo.remove("legacy.py");
    const std::string c2 = repo.commit("Remove legacy helpers");
    out.push_back(make_deleted("deleted-file", repo, c1, "legacy.py",
                               lines_range(kHelpersOld, 1, 2), c2,
                               {"deletion", "file-delete"}));
  }
}

const char* kIndentOld = R"py(def main(verbose):
    prepare()
    compute_totals()
    write_report()
    cleanup()
    log("done")
    notify()
)py";

const char* kIndentNew = R"py(def main(verbose):
    prepare()
    cleanup()
    log("done")
    notify()
    if verbose:
        compute_totals()
        write_report()
)py";

void indent_fixture(const fs::path& root, std::vector<Fixture>& out) {
  RepoBuilder repo(root / "indent");
  repo.write("main.py", kIndentOld);
  const std::string c1 = repo.commit("Main flow");
  repo.write("main.py", kIndentNew);
  const std::string c2 = repo.commit("Report only when verbose");
  out.push_back(make("horizontal-move", repo, c1, "main.py",
                     lines_range(kIndentOld, 3, 4), c2, "main.py",
                     lines_range(kIndentNew, 7, 8), {"movement"}));
}

}  // namespace

std::vector<Fixture> build_fixtures(const fs::path& root) {
  fs::create_directories(root);
  std::vector<Fixture> out;
  vector_fixtures(root, out);
  values_fixtures(root, out);
  combine_fixture(root, out);
  swap_fixture(root, out);
  suppression_fixture(root, out);
  overlap_fixtures(root, out);
  shift_and_rename_fixtures(root, out);
  file_fixtures(root, out);
  indent_fixture(root, out);
  return out;
}

namespace {

std::string large_file(int lines, bool edited) {
  std::string out;
  int line = 0;
  for (int fn = 0; line < lines; ++fn) {
    const std::string name = "handler_" + std::to_string(fn);
    out += "def " + name + "(request, context):\n";
    if (edited && fn % 7 == 3) out += "    context.trace(\"" + name + "\")\n";
    out += "    value = request.get(\"" + name + "\")\n";
    if (edited && fn % 11 == 5) {
      out += "    if value is None or value == \"\":\n";
    } else {
      out += "    if value is None:\n";
    }
    out += "        return context.default(" + std::to_string(fn) + ")\n";
    out += "    return context.render(value, " + std::to_string(fn % 13) + ")\n";
    out += "\n\n";
    line += 7;
  }
  return out;
}

}  // namespace

Fixture build_large_fixture(const fs::path& root, int lines) {
  RepoBuilder repo(root / "large");
  const std::string before = large_file(lines, false);
  const std::string after = large_file(lines, true);
  repo.write("handlers.py", before);
  const std::string c1 = repo.commit("Add handlers");
  repo.write("handlers.py", after);
  const std::string c2 = repo.commit("Trace and validate handlers");
  const int fn = lines / 14;
  const std::string head = "def handler_" + std::to_string(fn) + "(";
  const auto span = [&](const std::string& text) {
    const Document doc(text);
    const CharacterRange a = locate(text, head);
    int last = a.l1();
    while (doc.line(last).find("return context.render") == std::string_view::npos) {
      ++last;
    }
    return make_range(a.start(), Position{last, doc.line_length(last)});
  };
  return make("large-file", repo, c1, "handlers.py", span(before), c2,
              "handlers.py", span(after), {"performance"});
}

void write_corpus(const fs::path& root, const std::vector<Fixture>& fixtures) {
  std::ofstream dataset(root / "dataset.jsonl", std::ios::binary);
  nlohmann::ordered_json manifest = nlohmann::ordered_json::object();
  for (const Fixture& f : fixtures) {
    EvalRecord record = f.record;
    record.repo = fs::relative(record.repo, root).string();
    dataset << dataset_line(record) << "\n";
    manifest[record.id] = f.expected_outcome;
  }
  std::ofstream(root / "manifest.json", std::ios::binary)
      << manifest.dump(2) << "\n";
}

}  // namespace codemap::fixtures
