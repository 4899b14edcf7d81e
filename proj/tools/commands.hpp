#pragma once

// Subcommands of the pmgame tool. Each writes its report to `out` and returns
// the process exit code (0 all checks pass, 1 some check fails).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmgame::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

struct RunConfig {
  std::string command;
  std::optional<double> alpha0;
  double grid_start = 0.0;
  double grid_stop = 1.0;
  double grid_step = 0.01;
  int restarts = 50;
  std::uint64_t seed = 20240601;
  double tol = 1e-10;
  std::string output_path;
  std::optional<Format> format;
  int polygon_k = 64;
  int n = 5;
  bool with_classical = false;
};

/// Decimal or a ratio "p/q".
double parse_number(const std::string& text);

/// "start:stop:step"; step > 0 and both ends in [0, 1]. start > stop gives an empty grid.
void parse_grid(const std::string& text, RunConfig& config);

/// start, start + step, ... up to stop (inclusive within 1e-9), or {alpha0} when set.
std::vector<double> grid_points(const RunConfig& config);

int cmd_curve(const RunConfig& config, std::ostream& out);
int cmd_bounds(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_incompat(const RunConfig& config, std::ostream& out);
int cmd_coherence(const RunConfig& config, std::ostream& out);

/// Dispatches on config.command.
int run(const RunConfig& config, std::ostream& out);

}  // namespace pmgame::cli
