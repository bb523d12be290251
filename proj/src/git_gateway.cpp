#include "codemap/git_gateway.hpp"

#include <algorithm>
#include <cstdlib>
#include <system_error>

#include "codemap/error.hpp"
#include "codemap/region.hpp"

namespace codemap {

const std::array<DiffConfig, 8>& all_diff_configs() {
  static const std::array<DiffConfig, 8> configs = {{
      {DiffAlgorithm::kMyers, DiffGranularity::kLine},
      {DiffAlgorithm::kMyers, DiffGranularity::kWord},
      {DiffAlgorithm::kMinimal, DiffGranularity::kLine},
      {DiffAlgorithm::kMinimal, DiffGranularity::kWord},
      {DiffAlgorithm::kPatience, DiffGranularity::kLine},
      {DiffAlgorithm::kPatience, DiffGranularity::kWord},
      {DiffAlgorithm::kHistogram, DiffGranularity::kLine},
      {DiffAlgorithm::kHistogram, DiffGranularity::kWord},
  }};
  return configs;
}

std::string_view to_string(DiffAlgorithm algorithm) {
  switch (algorithm) {
    case DiffAlgorithm::kMyers:
      return "myers";
    case DiffAlgorithm::kMinimal:
      return "minimal";
    case DiffAlgorithm::kPatience:
      return "patience";
    case DiffAlgorithm::kHistogram:
      return "histogram";
  }
  return "myers";
}

std::string_view to_string(DiffGranularity granularity) {
  return granularity == DiffGranularity::kLine ? "line" : "word";
}

std::string to_string(const DiffConfig& config) {
  return std::string(to_string(config.algorithm)) + "/" +
         std::string(to_string(config.granularity));
}

std::string default_git_binary() {
  const char* env = std::getenv("CODEMAPPER_GIT");
  return env != nullptr && *env != '\0' ? std::string(env) : "git";
}

bool looks_binary(std::string_view content) {
  return content.substr(0, 8000).find('\0') != std::string_view::npos;
}

GitGateway::GitGateway(std::filesystem::path repo)
    : GitGateway(std::move(repo), default_git_binary()) {}

GitGateway::GitGateway(std::filesystem::path repo, std::string git_binary)
    : repo_(std::move(repo)), git_binary_(std::move(git_binary)) {}

ProcessResult GitGateway::git(const std::vector<std::string>& args) const {
  std::vector<std::string> argv{git_binary_, "-C", repo_.string(),
                                "-c", "core.quotepath=off"};
  argv.insert(argv.end(), args.begin(), args.end());
  try {
    // Keep user configuration from changing the output format.
    ProcessOptions options;
    options.env = {{"GIT_CONFIG_NOSYSTEM", "1"}, {"LC_ALL", "C"},
                   {"GIT_PAGER", "cat"}};
    return run_process(argv, options);
  } catch (const std::system_error& e) {
    throw Error(ErrorKind::kRepoError,
                "cannot run " + git_binary_ + ": " + e.what());
  }
}

ProcessResult GitGateway::git_checked(const std::vector<std::string>& args,
                                      std::string_view what) const {
  ProcessResult result = git(args);
  if (result.exit_code != 0) {
    throw Error(ErrorKind::kRepoError,
                std::string(what) + " failed in " + repo_.string() + ": " +
                    result.err);
  }
  return result;
}

std::string GitGateway::resolve_commit(std::string_view rev) const {
  ProcessResult result = git(
      {"rev-parse", "--verify", "--quiet", std::string(rev) + "^{commit}"});
  if (result.exit_code != 0) {
    throw Error(ErrorKind::kRepoError,
                "unknown commit '" + std::string(rev) + "' in " +
                    repo_.string());
  }
  std::string hash = result.out;
  while (!hash.empty() && (hash.back() == '\n' || hash.back() == '\r')) {
    hash.pop_back();
  }
  return hash;
}

bool GitGateway::file_exists(std::string_view commit,
                             std::string_view path) const {
  ProcessResult result = git(
      {"cat-file", "-e", std::string(commit) + ":" + std::string(path)});
  return result.exit_code == 0;
}

std::string GitGateway::file_content(std::string_view commit,
                                     std::string_view path) const {
  const std::string object = std::string(commit) + ":" + std::string(path);
  ProcessResult type = git({"cat-file", "-t", object});
  if (type.exit_code != 0) {
    resolve_commit(commit);  // distinguishes a bad commit from a bad path
    throw Error(ErrorKind::kNotFound,
                std::string(path) + " does not exist at " +
                    std::string(commit));
  }
  if (type.out.rfind("blob", 0) != 0) {
    throw Error(ErrorKind::kNotFound,
                object + " is not a file");
  }
  ProcessResult blob = git_checked({"cat-file", "blob", object}, "cat-file");
  if (looks_binary(blob.out)) {
    throw Error(ErrorKind::kBinaryFile, object + " is a binary file");
  }
  return normalize_newlines(blob.out);
}

bool GitGateway::is_ancestor(std::string_view ancestor,
                             std::string_view descendant) const {
  ProcessResult result = git({"merge-base", "--is-ancestor",
                              std::string(ancestor), std::string(descendant)});
  if (result.exit_code > 1) {
    throw Error(ErrorKind::kRepoError, "merge-base failed: " + result.err);
  }
  return result.exit_code == 0;
}

namespace {

struct NameStatus {
  char status = 'M';
  std::string path;
  std::string new_path;  // renames and copies only
};

struct LoggedCommit {
  std::string hash;
  std::vector<NameStatus> changes;
};

// Parses `git log -z --name-status --format=%x01%H` output.
std::vector<LoggedCommit> parse_name_status_log(const std::string& out) {
  std::vector<LoggedCommit> commits;
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < out.size()) {
    std::size_t nul = out.find('\0', start);
    if (nul == std::string::npos) nul = out.size();
    std::string token = out.substr(start, nul - start);
    while (!token.empty() && token.front() == '\n') token.erase(0, 1);
    if (!token.empty()) tokens.push_back(std::move(token));
    start = nul + 1;
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& token = tokens[i];
    if (token.front() == '\x01') {
      commits.push_back({token.substr(1), {}});
      continue;
    }
    if (commits.empty()) continue;
    NameStatus change;
    change.status = token.front();
    if ((change.status == 'R' || change.status == 'C') &&
        i + 2 < tokens.size()) {
      change.path = tokens[++i];
      change.new_path = tokens[++i];
    } else if (i + 1 < tokens.size()) {
      change.path = tokens[++i];
    }
    commits.back().changes.push_back(std::move(change));
  }
  return commits;
}

}  // namespace

std::optional<std::string> GitGateway::follow_forward(
    std::string_view from, std::string_view to, std::string path) const {
  ProcessResult log = git_checked(
      {"log", "--reverse", "--topo-order", "--ancestry-path", "-z", "-M",
       "--name-status", "--format=%x01%H",
       std::string(from) + ".." + std::string(to)},
      "git log");
  bool present = true;
  for (const LoggedCommit& commit : parse_name_status_log(log.out)) {
    for (const NameStatus& change : commit.changes) {
      if (change.status == 'R' && present && change.path == path) {
        path = change.new_path;
        break;
      }
      if (change.status == 'D' && change.path == path) {
        present = false;
      } else if (change.status == 'A' && change.path == path) {
        present = true;
      }
    }
  }
  if (!present) return std::nullopt;
  return path;
}

std::optional<std::string> GitGateway::follow_backward(
    std::string_view from, std::string_view to, std::string path) const {
  // Newest first: walk from `from` back towards the older `to`.
  ProcessResult log = git_checked(
      {"log", "--topo-order", "--ancestry-path", "-z", "-M", "--name-status",
       "--format=%x01%H", std::string(to) + ".." + std::string(from)},
      "git log");
  bool present = true;
  for (const LoggedCommit& commit : parse_name_status_log(log.out)) {
    for (const NameStatus& change : commit.changes) {
      if (change.status == 'R' && present && change.new_path == path) {
        path = change.path;
        break;
      }
      if (change.status == 'A' && change.path == path) {
        present = false;
      } else if (change.status == 'D' && change.path == path) {
        present = true;
      }
    }
  }
  if (!present) return std::nullopt;
  return path;
}

std::optional<std::string> GitGateway::resolve_target_file(
    std::string_view source_commit, std::string_view source_file,
    std::string_view target_commit) const {
  const std::string source = resolve_commit(source_commit);
  const std::string target = resolve_commit(target_commit);
  if (file_exists(target, source_file)) return std::string(source_file);

  std::optional<std::string> path;
  if (is_ancestor(source, target)) {
    path = follow_forward(source, target, std::string(source_file));
  } else if (is_ancestor(target, source)) {
    path = follow_backward(source, target, std::string(source_file));
  } else {
    ProcessResult base = git({"merge-base", source, target});
    if (base.exit_code != 0) return std::nullopt;
    std::string base_hash = base.out.substr(0, base.out.find('\n'));
    path = follow_backward(source, base_hash, std::string(source_file));
    if (path) path = follow_forward(base_hash, target, *path);
  }
  if (!path || !file_exists(target, *path)) return std::nullopt;
  return path;
}

std::string GitGateway::diff_objects(std::string_view source_object,
                                     std::string_view target_object,
                                     const DiffConfig& config,
                                     int context_lines) const {
  std::vector<std::string> args{
      "diff",
      "--no-color",
      "--no-ext-diff",
      "--no-textconv",
      "--no-renames",
      "-U" + std::to_string(std::max(0, context_lines)),
      "--diff-algorithm=" + std::string(to_string(config.algorithm))};
  if (config.granularity == DiffGranularity::kWord) {
    args.push_back("--word-diff=porcelain");
  }
  args.emplace_back(source_object);
  args.emplace_back(target_object);
  ProcessResult result = git(args);
  if (result.exit_code != 0) {
    throw Error(ErrorKind::kDiffToolFailure,
                "git diff (" + to_string(config) + ") exited with " +
                    std::to_string(result.exit_code) + ": " + result.err);
  }
  return normalize_newlines(result.out);
}

std::vector<RawDiffReport> GitGateway::compute_diff_reports(
    std::string_view source_commit, std::string_view target_commit,
    std::string_view source_file, std::string_view target_file,
    int context_lines) const {
  const std::string source_object =
      std::string(source_commit) + ":" + std::string(source_file);
  const std::string target_object =
      std::string(target_commit) + ":" + std::string(target_file);
  std::vector<RawDiffReport> reports;
  for (const DiffConfig& config : all_diff_configs()) {
    std::string text =
        diff_objects(source_object, target_object, config, context_lines);
    if (text.empty()) continue;
    auto same = std::find_if(reports.begin(), reports.end(),
                             [&](const RawDiffReport& r) { return r.text == text; });
    if (same != reports.end()) {
      same->duplicates.push_back(config);
      continue;
    }
    reports.push_back({config, std::move(text), std::string(source_file),
                       std::string(target_file), {}});
  }
  return reports;
}

}  // namespace codemap
