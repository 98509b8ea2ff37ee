#ifndef RADWAVE_RUNS_HPP
#define RADWAVE_RUNS_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radwave/analysis.hpp"

namespace radwave::runs {

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kConfigError = 2,
  kNumericalFailure = 3,
};

/// Everything a subcommand needs. Built by parse_config, which has already
/// checked admissibility, band and domain guard for every J.
struct RunConfig {
  ParameterSet params;        // J is the first entry of js
  std::vector<int> js{5};
  double length = 40.0;
  Index nodes = 8192;
  double dt = 2e-3;
  std::optional<double> horizon;  // empty: t_window per J
  DataSpec data;
  Index stride = 1;
  std::filesystem::path out = "runs/default";
  double boundary_tolerance = 1e-6;
  double guard_margin = 1.0;
  Index checkpoint_every = 0;  // steps between checkpoints, 0 disables
  unsigned workers = 1;
  Index trials = 200;                 // inequalities
  std::uint64_t seed = 0;             // inequalities
  std::vector<double> decay_times;    // decay; empty gives 4..30
  nlohmann::json echo;                // the document as given

  ParameterSet params_for(int J) const;
  double horizon_for(int J) const;
  StepperConfig<double> stepper() const;
  GridPtr<double> grid() const;
};

/// Parse and validate. Throws ConfigError naming the key path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& file);

/// Config with the defaults above and nothing on disk; used by selftest.
RunConfig default_config();

// ---- Checkpoints ----------------------------------------------------------

/// Parameters stored alongside the state so a resume can refuse a mismatch.
struct CheckpointTag {
  double p = 0, s = 0;
  int J = 0;
  double horizon = 0, dt = 0;
};

void write_checkpoint(const std::filesystem::path& file,
                      const CoupledCheckpoint<double>& ck,
                      const CheckpointTag& tag);
CoupledCheckpoint<double> read_checkpoint(const std::filesystem::path& file,
                                          CheckpointTag* tag = nullptr);

// ---- Outputs --------------------------------------------------------------

std::string format_number(double x);  // %.17g, nan/inf spelled out

/// CSV body with a header row. Rows are written with format_number.
std::string csv_text(const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

const std::vector<std::string>& timeseries_columns();
const std::vector<std::string>& truncation_columns();

std::string timeseries_csv(const std::vector<CoupledSample<double>>& samples);
std::string truncation_csv(const TruncationTable& table);

std::string sha256_hex(const std::string& bytes);

/// Output directory plus the manifest that tracks it. The manifest is
/// written when the directory is opened and rewritten once by finish().
class RunDirectory {
 public:
  RunDirectory(std::filesystem::path dir, std::string command,
               const RunConfig& cfg, bool force, bool resume = false);

  const std::filesystem::path& path() const { return dir_; }

  /// Write a file inside the directory and record its checksum.
  void write(const std::string& name, const std::string& body);
  /// Record a file that was written by other means.
  void record(const std::string& name);
  std::filesystem::path file(const std::string& name) const {
    return dir_ / name;
  }

  void finish();
  /// Staged run stopped early on request; outputs so far are partial.
  void stop();
  void fail(const std::string& kind, const std::string& message,
            std::optional<double> time = {});

 private:
  void write_manifest();

  std::filesystem::path dir_;
  nlohmann::json manifest_;
  std::chrono::steady_clock::time_point start_;
  bool finished_ = false;
};

// ---- Commands -------------------------------------------------------------

struct RunOptions {
  bool force = false;
  bool resume = false;
  /// Truncation runs: checkpoint and stop after this many steps per J.
  Index stop_after = 0;
};

/// Exit code; diagnostics go to stderr.
int run_command(const std::string& command, const RunConfig& cfg,
                const RunOptions& opts);

const std::vector<std::string>& command_names();

std::string version();

}  // namespace radwave::runs

#endif  // RADWAVE_RUNS_HPP
