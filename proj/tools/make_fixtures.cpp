#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "fixtures.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Build the fixture repositories and their dataset"};
  std::string out = "fixtures";
  int large = 0;
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--large", large, "Also build a file with this many lines");
  CLI11_PARSE(app, argc, argv);

  const std::filesystem::path root = std::filesystem::absolute(out);
  auto fixtures = codemap::fixtures::build_fixtures(root);
  if (large > 0) {
    fixtures.push_back(codemap::fixtures::build_large_fixture(root, large));
  }
  codemap::fixtures::write_corpus(root, fixtures);
  std::cout << fixtures.size() << " records in " << (root / "dataset.jsonl").string()
            << "\n";
  return EXIT_SUCCESS;
}
