#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smtquery/store.hpp"

namespace smtquery {

struct SpawnError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ModelParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  std::string name;
  std::string binary;
  // argv tail; "{file}" is replaced by the instance path (appended when absent)
  std::vector<std::string> argTemplate;
  double timeout = 20.0;
};

struct SolverOutcome {
  SolverResult result = SolverResult::Unknown;
  double time = 0.0;
  std::optional<std::string> model;
  std::string stdoutText;
  std::string stderrText;
};

enum class Consensus { SatValidated, UnsatMajority, Disagreement, Inconclusive };

struct Verdict {
  Consensus consensus = Consensus::Inconclusive;
  std::optional<std::pair<std::string, std::string>> witness;  // (solver, model)
  // per-solver consistency with the verdict
  std::map<std::string, ValidationResult> perSolver;
};

// Parses solvers.conf: one solver per line, `name binary timeout args...`,
// '#' comments. Missing binaries are kept; run attempts raise SolverUnavailable.
std::vector<SolverConfig> loadSolverConfigs(const std::filesystem::path& file);

// Spawns the solver on the file, wall-clocks it and kills it at the timeout.
// Verdict is the first standalone sat/unsat/unknown token on stdout.
SolverOutcome runSolver(const SolverConfig& cfg,
                        const std::filesystem::path& instanceFile);

// Asserts the model's bindings into the instance and re-solves with the
// validator; true iff the validator answers sat.
bool validateModel(const std::filesystem::path& instanceFile,
                   const std::string& modelText, const SolverConfig& validator);

// (define-fun name () Sort value) bindings from a solver model response.
std::vector<std::pair<std::string, std::string>> parseModel(
    const std::string& modelText);

// Hook deciding whether a claimed model actually satisfies the instance;
// production wires this to validateModel, tests may inject a table.
using ModelChecker = std::function<bool(const std::string& solver,
                                        const std::string& model)>;

// Model precedence first, then strict-majority UNSAT over decisive answers.
Verdict crossValidate(const std::map<std::string, SolverOutcome>& outcomes,
                      const ModelChecker& checkModel);

struct ScheduleStats {
  std::size_t executed = 0;
  std::size_t skipped = 0;
};

// Runs every (instance, solver) pair lacking a stored result, bounded by
// `parallelism` workers; persists results and validation rows.
ScheduleStats scheduleRuns(Store& store, const std::vector<InstanceRec>& instances,
                           const std::vector<SolverConfig>& solvers,
                           int parallelism, bool progress = false);

}  // namespace smtquery
