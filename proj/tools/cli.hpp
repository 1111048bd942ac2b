#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace topicmine::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point for the `topicmine` tool. Subcommands: ingest, plsa, embed,
// cluster, coherence, map, compare. Returns 0 on success, 1 on usage errors,
// 2 on data/format errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace topicmine::cli
