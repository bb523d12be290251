#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace codemap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRecordErrors = 1;
inline constexpr int kExitRegion = 2;
inline constexpr int kExitDataset = 2;
inline constexpr int kExitRepo = 3;
inline constexpr int kExitUsage = 64;

/// Entry point of the codemapper tool. `args` includes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace codemap::cli
