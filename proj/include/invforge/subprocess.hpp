#ifndef INVFORGE_SUBPROCESS_HPP
#define INVFORGE_SUBPROCESS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace invforge::proc {

struct limits {
  double wall_seconds = 0;         // 0: unlimited
  std::uint64_t memory_bytes = 0;  // address-space cap, 0: unlimited
};

struct result {
  bool started = false;
  bool timed_out = false;
  int exit_code = -1;  // negative signal number when killed by a signal
  double wall_seconds = 0;
  std::string output;  // stdout and stderr, interleaved
  std::string error;   // populated when the launch itself failed
};

/// Runs argv[0] with the given arguments in its own process group,
/// capturing combined output. On timeout the whole group is killed.
result run(const std::vector<std::string>& argv, const limits& lim,
           const std::string& workdir = "");

/// Resolves a command name against PATH; empty when not installed.
/// Absolute and relative paths are returned as-is when executable.
std::string find_on_path(const std::string& name);

}  // namespace invforge::proc

#endif
