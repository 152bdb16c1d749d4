#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smtquery/qlang.hpp"
#include "smtquery/smtlib.hpp"

namespace fs = std::filesystem;
using namespace smtquery;

namespace {

struct Options {
  std::string root = ".";
  std::string db = "smtquery.db";
  std::string solvers = "solvers.conf";
  std::string cacheDir = "astcache";
  std::string outputDir = "output";
  double timeout = 20.0;
  int jobs = 1;
  bool translate25 = false;
};

// optional key/value config: `key = value` lines, '#' comments
void loadConfigFile(const std::string& path, Options& opt) {
  std::ifstream in(path);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r\"");
      auto e = s.find_last_not_of(" \t\r\"");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "root") opt.root = value;
    else if (key == "db") opt.db = value;
    else if (key == "solvers") opt.solvers = value;
    else if (key == "cachedir") opt.cacheDir = value;
    else if (key == "output") opt.outputDir = value;
    else if (key == "timeout") opt.timeout = std::stod(value);
    else if (key == "jobs") opt.jobs = std::stoi(value);
  }
}

std::string catalogFooter() {
  std::ostringstream os;
  os << "Predicates:\n";
  for (const auto& p : predicateCatalog()) {
    os << "  " << p.name;
    if (p.arity == 1) os << "(solver)";
    if (p.arity == 2) os << "(solver1,solver2)";
    os << ": " << p.description << "\n";
  }
  os << "Functions:\n";
  for (const auto& name : transformCatalog()) os << "  " << name << "\n";
  os << "Extractors:\n";
  for (const auto& name : extractorCatalog()) os << "  " << name << "\n";
  return os.str();
}

std::vector<SolverConfig> tryLoadSolvers(const Options& opt) {
  std::vector<SolverConfig> configs;
  if (fs::exists(opt.solvers)) {
    configs = loadSolverConfigs(opt.solvers);
    for (auto& c : configs) c.timeout = std::min(c.timeout, opt.timeout);
  }
  return configs;
}

void writeTranslatedCopies(Store& store) {
  DatasetSelector all;
  all.atoms.push_back({});
  for (const auto& inst : store.selectInstances(all)) {
    std::ifstream in(inst.path, std::ios::binary);
    if (!in) continue;
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    std::string converted = translate25to26(bytes);
    if (converted == bytes) continue;
    std::ofstream out(inst.path + ".26", std::ios::trunc);
    out << converted;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  loadConfigFile("smtquery.conf", opt);

  CLI::App app{"Benchmark database and query tool for SMT-LIB string constraints"};
  app.footer(catalogFooter());
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string configPath;
  app.add_option("--config", configPath, "config file (key = value lines)")
      ->check(CLI::ExistingFile);
  app.add_option("--root", opt.root, "benchmark corpus root directory");
  app.add_option("--db", opt.db, "database file");
  app.add_option("--solvers", opt.solvers, "solver configuration file");
  app.add_option("--cachedir", opt.cacheDir, "AST cache directory");
  app.add_option("--output", opt.outputDir, "extractor output directory");
  app.add_option("--timeout", opt.timeout, "solver timeout in seconds");
  app.add_option("--jobs", opt.jobs, "worker parallelism");
  app.add_flag("--translate25", opt.translate25,
               "translate SMT-LIB 2.5 string syntax on ingestion");

  bool force = false;
  auto* initdb = app.add_subcommand("initdb", "create the schema and register the corpus");
  initdb->add_flag("--force", force, "drop and recreate existing tables");

  auto* alloc = app.add_subcommand("allocateNew", "register instances added since the last scan");

  auto* update = app.add_subcommand("updateResults", "run all configured solvers on all instances");

  std::string queryText;
  auto* qcmd = app.add_subcommand("qlang", "query interface (interactive unless --query)");
  qcmd->add_option("--query", queryText, "evaluate one query and exit");

  std::string argSolver, argSet, argTrack, argFile;
  auto* smtsolver = app.add_subcommand("smtsolver", "run one solver on one instance");
  smtsolver->add_option("solver", argSolver, "solver name")->required();
  smtsolver->add_option("set", argSet, "benchmark set")->required();
  smtsolver->add_option("track", argTrack, "track")->required();
  smtsolver->add_option("file", argFile, "instance filename")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (!configPath.empty()) loadConfigFile(configPath, opt);

  try {
    Store store(opt.db);

    if (*initdb) {
      store.initSchema(force);
      std::size_t added = store.allocateNew(opt.root);
      if (opt.translate25) writeTranslatedCopies(store);
      std::cout << "Registered " << added << " instance(s)\n";
      return 0;
    }
    if (*alloc) {
      std::size_t added = store.allocateNew(opt.root);
      if (opt.translate25) writeTranslatedCopies(store);
      std::cout << "Registered " << added << " instance(s)\n";
      return 0;
    }
    if (*update) {
      auto configs = tryLoadSolvers(opt);
      if (configs.empty()) {
        std::cerr << "no solvers configured (" << opt.solvers << ")\n";
        return 2;
      }
      DatasetSelector all;
      all.atoms.push_back({});
      auto stats = scheduleRuns(store, store.selectInstances(all), configs,
                                opt.jobs, true);
      std::cout << "Executed " << stats.executed << " run(s), skipped "
                << stats.skipped << " cached\n";
      return 0;
    }
    if (*qcmd) {
      AstCache cache(opt.cacheDir);
      QueryEnv env;
      env.store = &store;
      env.cache = &cache;
      env.solvers = tryLoadSolvers(opt);
      env.outputDir = opt.outputDir;
      env.translate25 = opt.translate25;
      env.jobs = opt.jobs;
      if (!queryText.empty()) {
        runQuery(parseQuery(queryText), env);
      } else {
        repl(env, std::cin, std::cout);
      }
      return 0;
    }
    if (*smtsolver) {
      auto inst = store.findInstance(argSet, argTrack, argFile);
      if (!inst) {
        std::cerr << "unknown instance " << argSet << ":" << argTrack << ":"
                  << argFile << "\n";
        return 2;
      }
      auto configs = tryLoadSolvers(opt);
      const SolverConfig* cfg = nullptr;
      for (const auto& c : configs) {
        std::string a = c.name, b = argSolver;
        auto low = [](std::string s) {
          for (auto& ch : s) ch = static_cast<char>(std::tolower(ch));
          return s;
        };
        if (low(a) == low(b)) cfg = &c;
      }
      if (!cfg) {
        std::cerr << "unknown solver " << argSolver << "\n";
        return 2;
      }
      SolverOutcome outcome = runSolver(*cfg, inst->path);
      ResultRec rec;
      rec.instanceId = inst->id;
      rec.solver = cfg->name;
      rec.result = outcome.result;
      rec.time = outcome.time;
      rec.model = outcome.model;
      store.putResult(rec);
      std::cout << solverResultName(outcome.result) << " " << outcome.time
                << "\n";
      return 0;
    }
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
