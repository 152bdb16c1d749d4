#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "smtquery/harness.hpp"
#include "smtquery/smtlib.hpp"

namespace fs = std::filesystem;

namespace smtquery {

std::vector<SolverConfig> loadSolverConfigs(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read solver config " + file.string());
  std::vector<SolverConfig> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    SolverConfig cfg;
    if (!(ls >> cfg.name >> cfg.binary >> cfg.timeout)) continue;
    std::string arg;
    while (ls >> arg) cfg.argTemplate.push_back(arg);
    out.push_back(std::move(cfg));
  }
  return out;
}

namespace {

struct RawRun {
  int exitCode = -1;
  bool timedOut = false;
  double seconds = 0.0;
  std::string out;
  std::string err;
};

RawRun spawnWithTimeout(const std::string& binary,
                        const std::vector<std::string>& args, double timeout) {
  int outPipe[2], errPipe[2];
  if (pipe(outPipe) != 0 || pipe(errPipe) != 0)
    throw SpawnError("pipe() failed");

  auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) throw SpawnError("fork() failed");
  if (pid == 0) {
    setpgid(0, 0);  // own process group so the whole tree can be killed
    dup2(outPipe[1], STDOUT_FILENO);
    dup2(errPipe[1], STDERR_FILENO);
    close(outPipe[0]);
    close(outPipe[1]);
    close(errPipe[0]);
    close(errPipe[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(binary.c_str()));
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execvp(binary.c_str(), argv.data());
    _exit(127);
  }
  close(outPipe[1]);
  close(errPipe[1]);
  fcntl(outPipe[0], F_SETFL, O_NONBLOCK);
  fcntl(errPipe[0], F_SETFL, O_NONBLOCK);

  RawRun run;
  auto deadline = start + std::chrono::duration<double>(timeout);
  bool outOpen = true, errOpen = true;
  char buf[4096];
  while (true) {
    struct pollfd fds[2] = {{outPipe[0], POLLIN, 0}, {errPipe[0], POLLIN, 0}};
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      run.timedOut = true;
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      break;
    }
    int waitMs = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count());
    poll(fds, 2, std::min(waitMs, 100));
    for (int i = 0; i < 2; ++i) {
      int fd = i == 0 ? outPipe[0] : errPipe[0];
      bool& open = i == 0 ? outOpen : errOpen;
      if (!open) continue;
      ssize_t n;
      while ((n = read(fd, buf, sizeof(buf))) > 0)
        (i == 0 ? run.out : run.err).append(buf, static_cast<std::size_t>(n));
      if (n == 0) open = false;
    }
    if (!outOpen && !errOpen) break;
  }
  int status = 0;
  waitpid(pid, &status, 0);
  // drain anything written before the kill
  for (int i = 0; i < 2; ++i) {
    int fd = i == 0 ? outPipe[0] : errPipe[0];
    ssize_t n;
    while ((n = read(fd, buf, sizeof(buf))) > 0)
      (i == 0 ? run.out : run.err).append(buf, static_cast<std::size_t>(n));
  }
  close(outPipe[0]);
  close(errPipe[0]);
  run.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (WIFEXITED(status)) run.exitCode = WEXITSTATUS(status);
  return run;
}

// first standalone sat/unsat/unknown token on stdout, plus its end offset
std::optional<std::pair<SolverResult, std::size_t>> findVerdict(
    const std::string& out) {
  std::size_t i = 0;
  while (i < out.size()) {
    while (i < out.size() && std::isspace(static_cast<unsigned char>(out[i])))
      ++i;
    std::size_t start = i;
    while (i < out.size() && !std::isspace(static_cast<unsigned char>(out[i])))
      ++i;
    std::string tok = out.substr(start, i - start);
    if (tok == "sat") return {{SolverResult::Satisfied, i}};
    if (tok == "unsat") return {{SolverResult::Unsatisfied, i}};
    if (tok == "unknown") return {{SolverResult::Unknown, i}};
    if (tok.empty()) break;
  }
  return std::nullopt;
}

}  // namespace

SolverOutcome runSolver(const SolverConfig& cfg, const fs::path& instanceFile) {
  if (access(cfg.binary.c_str(), X_OK) != 0) {
    // also look it up on PATH before giving up
    bool onPath = cfg.binary.find('/') == std::string::npos;
    if (!onPath)
      throw SolverUnavailable("solver binary not executable: " + cfg.binary);
  }
  std::vector<std::string> args;
  bool filePlaced = false;
  for (const auto& a : cfg.argTemplate) {
    std::string arg = a;
    auto pos = arg.find("{file}");
    if (pos != std::string::npos) {
      arg.replace(pos, 6, instanceFile.string());
      filePlaced = true;
    }
    args.push_back(std::move(arg));
  }
  if (!filePlaced) args.push_back(instanceFile.string());

  RawRun run = spawnWithTimeout(cfg.binary, args, cfg.timeout);

  SolverOutcome outcome;
  outcome.time = run.seconds;
  outcome.stdoutText = run.out;
  outcome.stderrText = run.err;
  if (run.timedOut) {
    outcome.result = SolverResult::Timeout;
    return outcome;
  }
  if (run.exitCode == 127) throw SolverUnavailable("cannot execute " + cfg.binary);
  auto verdict = findVerdict(run.out);
  if (!verdict) {
    outcome.result =
        run.exitCode == 0 ? SolverResult::Unknown : SolverResult::Crash;
    return outcome;
  }
  outcome.result = verdict->first;
  if (outcome.result == SolverResult::Satisfied) {
    std::string rest = run.out.substr(verdict->second);
    if (rest.find('(') != std::string::npos) outcome.model = rest;
  }
  return outcome;
}

// ------------------------------------------------------------------- model text

std::vector<std::pair<std::string, std::string>> parseModel(
    const std::string& modelText) {
  // minimal scanner: find every (define-fun name () Sort value)
  std::vector<std::pair<std::string, std::string>> bindings;
  std::size_t i = 0;
  auto skipWs = [&] {
    while (i < modelText.size() &&
           std::isspace(static_cast<unsigned char>(modelText[i])))
      ++i;
  };
  auto readToken = [&]() -> std::string {
    skipWs();
    std::size_t start = i;
    while (i < modelText.size() &&
           !std::isspace(static_cast<unsigned char>(modelText[i])) &&
           modelText[i] != '(' && modelText[i] != ')')
      ++i;
    return modelText.substr(start, i - start);
  };
  auto readBalanced = [&]() -> std::string {
    skipWs();
    if (i >= modelText.size()) throw ModelParseError("unexpected end of model");
    std::size_t start = i;
    if (modelText[i] == '"') {
      ++i;
      while (i < modelText.size()) {
        if (modelText[i] == '"') {
          if (i + 1 < modelText.size() && modelText[i + 1] == '"') {
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        ++i;
      }
      return modelText.substr(start, i - start);
    }
    if (modelText[i] == '(') {
      int depth = 0;
      bool inStr = false;
      while (i < modelText.size()) {
        char c = modelText[i];
        if (inStr) {
          if (c == '"') inStr = false;
        } else if (c == '"') {
          inStr = true;
        } else if (c == '(') {
          ++depth;
        } else if (c == ')') {
          if (--depth == 0) {
            ++i;
            break;
          }
        }
        ++i;
      }
      return modelText.substr(start, i - start);
    }
    return readToken();
  };

  while ((i = modelText.find("(define-fun", i)) != std::string::npos) {
    i += std::strlen("(define-fun");
    std::string name = readToken();
    skipWs();
    if (i + 1 < modelText.size() && modelText[i] == '(') {
      // argument list must be empty for a model binding
      std::size_t close = modelText.find(')', i);
      if (close == std::string::npos) throw ModelParseError("malformed model");
      std::string argList = modelText.substr(i + 1, close - i - 1);
      i = close + 1;
      if (argList.find_first_not_of(" \t\r\n") != std::string::npos) continue;
    }
    readToken();  // sort
    std::string value = readBalanced();
    if (name.empty() || value.empty())
      throw ModelParseError("malformed model binding");
    bindings.emplace_back(std::move(name), std::move(value));
  }
  return bindings;
}

bool validateModel(const fs::path& instanceFile, const std::string& modelText,
                   const SolverConfig& validator) {
  std::ifstream in(instanceFile, std::ios::binary);
  if (!in) throw IoError("cannot read " + instanceFile.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  Script script = parseScript(bytes);
  auto bindings = parseModel(modelText);

  auto trailing = std::move(script.trailing);
  script.trailing.clear();
  std::string text = printScript(script);
  for (const auto& [name, value] : bindings) {
    if (!script.declaredSort(name)) continue;  // solver-internal symbol
    text += "(assert (= " + name + " " + value + "))\n";
  }
  bool hasCheckSat = false;
  for (const auto& t : trailing) {
    if (t.find("check-sat") != std::string::npos) hasCheckSat = true;
    if (t.find("get-model") != std::string::npos) continue;
    text += t + "\n";
  }
  if (!hasCheckSat) text += "(check-sat)\n";

  fs::path tmp = fs::temp_directory_path() /
                 ("smtquery-validate-" + std::to_string(getpid()) + "-" +
                  std::to_string(std::hash<std::string>{}(text) & 0xffffff) +
                  ".smt2");
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << text;
  }
  SolverOutcome outcome = runSolver(validator, tmp);
  std::error_code ec;
  fs::remove(tmp, ec);
  return outcome.result == SolverResult::Satisfied;
}

// -------------------------------------------------------------- cross-validation

Verdict crossValidate(const std::map<std::string, SolverOutcome>& outcomes,
                      const ModelChecker& checkModel) {
  Verdict verdict;

  // 1. model precedence: any validated SAT model decides
  for (const auto& [solver, outcome] : outcomes) {
    if (outcome.result != SolverResult::Satisfied || !outcome.model) continue;
    bool valid = false;
    try {
      valid = checkModel(solver, *outcome.model);
    } catch (const std::exception&) {
      valid = false;  // unparseable model counts as validation failure
    }
    if (valid) {
      verdict.consensus = Consensus::SatValidated;
      verdict.witness = {solver, *outcome.model};
      break;
    }
  }

  std::size_t sat = 0, unsat = 0, decisive = 0;
  for (const auto& [solver, outcome] : outcomes) {
    if (outcome.result == SolverResult::Satisfied) ++sat, ++decisive;
    if (outcome.result == SolverResult::Unsatisfied) ++unsat, ++decisive;
  }

  if (verdict.consensus != Consensus::SatValidated) {
    if (decisive > 0 && unsat * 2 > decisive)
      verdict.consensus = Consensus::UnsatMajority;
    else if (sat > 0 && unsat > 0)
      verdict.consensus = Consensus::Disagreement;
    else
      verdict.consensus = Consensus::Inconclusive;
  }

  for (const auto& [solver, outcome] : outcomes) {
    ValidationResult v = ValidationResult::Inconclusive;
    switch (outcome.result) {
      case SolverResult::Satisfied:
        if (verdict.consensus == Consensus::SatValidated)
          v = (verdict.witness && verdict.witness->first == solver)
                  ? ValidationResult::ModelValid
                  : ValidationResult::MajorityAgree;
        else if (verdict.consensus == Consensus::UnsatMajority)
          v = ValidationResult::MajorityDisagree;
        else if (outcome.model)
          v = ValidationResult::ModelInvalid;
        break;
      case SolverResult::Unsatisfied:
        if (verdict.consensus == Consensus::UnsatMajority)
          v = ValidationResult::MajorityAgree;
        else if (verdict.consensus == Consensus::SatValidated ||
                 verdict.consensus == Consensus::Disagreement)
          v = ValidationResult::MajorityDisagree;
        break;
      default:
        break;
    }
    verdict.perSolver[solver] = v;
  }
  return verdict;
}

// ------------------------------------------------------------------- scheduling

ScheduleStats scheduleRuns(Store& store, const std::vector<InstanceRec>& instances,
                           const std::vector<SolverConfig>& solvers,
                           int parallelism, bool progress) {
  struct Job {
    const InstanceRec* inst;
    const SolverConfig* solver;
  };
  std::vector<Job> jobs;
  ScheduleStats stats;
  for (const auto& inst : instances)
    for (const auto& cfg : solvers) {
      if (store.newestResult(inst.id, cfg.name)) {
        ++stats.skipped;
        continue;
      }
      jobs.push_back({&inst, &cfg});
    }

  if (progress && !jobs.empty()) std::cout << "Waiting for results ...\n";

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) break;
      const Job& job = jobs[idx];
      ResultRec rec;
      rec.instanceId = job.inst->id;
      rec.solver = job.solver->name;
      try {
        SolverOutcome outcome = runSolver(*job.solver, job.inst->path);
        rec.result = outcome.result;
        rec.time = outcome.time;
        rec.model = outcome.model;
      } catch (const std::exception&) {
        rec.result = SolverResult::Crash;  // never abort the batch
        rec.time = 0.0;
      }
      store.putResult(rec);
    }
  };
  std::vector<std::thread> pool;
  int n = std::max(1, parallelism);
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  stats.executed = jobs.size();

  // cross-validate each instance over the newest result per solver
  for (const auto& inst : instances) {
    auto results = store.newestResults(inst.id);
    if (results.empty()) continue;
    std::map<std::string, SolverOutcome> outcomes;
    std::map<std::string, std::int64_t> resultIds;
    for (const auto& r : results) {
      SolverOutcome o;
      o.result = r.result;
      o.time = r.time;
      o.model = r.model;
      outcomes[r.solver] = std::move(o);
      resultIds[r.solver] = r.id;
    }
    auto checkModel = [&](const std::string& claimant,
                          const std::string& model) {
      for (const auto& cfg : solvers) {
        if (cfg.name == claimant) continue;
        try {
          if (validateModel(inst.path, model, cfg)) return true;
        } catch (const std::exception&) {
          // try the next validator
        }
      }
      return false;
    };
    Verdict verdict = crossValidate(outcomes, checkModel);
    for (const auto& [solver, vres] : verdict.perSolver) {
      std::int64_t rid = resultIds.at(solver);
      if (store.validationForResult(rid)) continue;  // already recorded
      ValidationRec v;
      v.resultId = rid;
      v.result = vres;
      store.putValidation(v);
    }
  }
  return stats;
}

}  // namespace smtquery
