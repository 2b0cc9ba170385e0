#pragma once

// Batch front-end: one command per invocation, report written as CSV or JSON.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hardylab {

enum class Command { Eval, Orthocheck, KernelCheck, BoundCheck, HardySum, Sharpness, ParityCheck };
enum class OutputFormat { Csv, Json };

const char* command_name(Command c);

struct RunConfig {
  Command command = Command::Eval;
  std::vector<double> alpha = {0.0};
  std::vector<double> lambda = {0.0};
  int dim = 1;
  double epsilon = 0.25;
  std::vector<double> r = {0.3, 0.6, 0.9};
  double tol = 1e-8;
  int kmax = 128;
  std::string k_grid = "16:4096:x2";

  // eval
  int k = 0;
  double u = 1.0;

  // hardy-sum, sharpness, parity-check
  std::string basis = "laguerre";     // laguerre | hermite
  std::string function = "gaussian";  // see README for the catalogue
  double E = 0.75;
  int nmax = 256;
  double converge = 0.0;  // > 0: double N until tail <= converge * sum
  int K = 256;
  std::optional<double> delta;

  // bound-check
  std::string which = "all";  // kernel-difference | basis-difference | kernel-weighted-norm | all

  OutputFormat format = OutputFormat::Json;
  std::string output;  // empty: standard output

  /// Throws ContractError or DomainError for out-of-domain parameters.
  void validate() const;
};

/// Runs one command. Exit status: 0 success, 1 numerical failure or failed
/// check (error record on err), 2 invalid configuration.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses flags (and an optional --config file, overridden by flags) and runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hardylab
