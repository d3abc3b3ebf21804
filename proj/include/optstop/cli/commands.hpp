#pragma once

// The command implementations behind the `optstop` tool. Each returns its
// table plus the parameters recorded in the run manifest; argument parsing
// and file output live in run.cpp.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "optstop/asymptotics.hpp"
#include "optstop/cli/output_table.hpp"
#include "optstop/sequential_test.hpp"

namespace optstop::cli {

/// Invalid command-line input (exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInvariant = 4;

struct CommandResult {
  explicit CommandResult(OutputTable t) : table(std::move(t)) {}

  OutputTable table;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> master_seed;
  int exit_code = kExitSuccess;
};

/// Levels used by the h table when none are given.
std::vector<double> default_h_table_alphas();

CommandResult cmd_h_table(const std::vector<double>& alphas);

struct PredictOptions {
  TestFamily family = TestFamily::GaussKnownVariance;
  std::int64_t n = 100;
  std::int64_t k = 1;
  double alpha = 0.05;
  PredictionMode mode = PredictionMode::SumFormula;
  /// closed | closed-gauss | closed-exp | mc
  std::string esl_source = "closed";
  std::uint64_t reps = 1'000'000;  // mc source only
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

CommandResult cmd_predict(const PredictOptions& options);

struct SimulateOptions {
  TestFamily family = TestFamily::GaussKnownVariance;
  std::int64_t n = 100;
  std::int64_t k = 1;
  double alpha = 0.05;
  std::uint64_t reps = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

CommandResult cmd_simulate(const SimulateOptions& options);

struct CompareOptions {
  TestFamily family = TestFamily::GaussKnownVariance;
  std::vector<std::int64_t> n_grid;
  std::vector<std::int64_t> k_grid;
  double alpha = 0.05;
  std::uint64_t reps = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double tol = 1e-12;
};

inline constexpr std::size_t kMaxCompareCells = 10'000;

CommandResult cmd_compare(const CompareOptions& options);

/// Exit code kExitInvariant when any row has lhs != rhs.
CommandResult cmd_kac_check(int k_max, const std::string& preset);

struct EslOptions {
  TestFamily family = TestFamily::GaussKnownVariance;
  std::int64_t ell_max = 20;
  std::uint64_t reps = 0;  // 0: closed forms only
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

CommandResult cmd_esl(const EslOptions& options);

struct VbeOptions {
  TestFamily family = TestFamily::GaussKnownVariance;  // gauss or exp kernel
  int n = 10;
  double p = 1.5;
  std::uint64_t reps = 100'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

CommandResult cmd_vbe_check(const VbeOptions& options);

/// "8.23 per cent"
std::string render_percent(double rho);

}  // namespace optstop::cli
