#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fuzzy_spectra/analysis.hpp"
#include "fuzzy_spectra/core.hpp"

namespace fuzzy::cli {

enum class Command { Spectrum, Eigvec, Verify, Sweep, Localize, MadoreCompare, AlgebraCheck };
enum class Format { Csv, Json };

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

/// Invalid flag combination or value; reported with exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Command command = Command::Spectrum;
  SpaceKind space = SpaceKind::Circle;
  bool space_given = false;
  int lambda_min = 1;
  int lambda_max = 1;
  std::optional<int> m;
  std::optional<double> k;       // explicit stiffness
  std::optional<KRule> k_rule;   // unset means the command's own default
  double tol = 1e-14;
  int h = 1;                     // eigvec --index: 1-based, descending order
  std::optional<std::string> theorem;
  bool all = false;
  std::optional<Format> format;  // unset means the command's own default
  std::optional<std::string> output;
};

/// Throws UsageError. Invariants: nonempty lambda range, tol > 0, m only
/// with the sphere, k and a non-default k rule are exclusive.
void validate(const RunConfig& config);

/// Executes one command, writing to `output` (atomically) or to `out`.
/// Returns the exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and runs. Usage errors print to `err` and return 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fuzzy::cli
