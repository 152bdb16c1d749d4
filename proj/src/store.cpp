#include <sqlite3.h>

#include <algorithm>
#include <ctime>
#include <fstream>
#include <set>

#include "smtquery/intel.hpp"
#include "smtquery/smtlib.hpp"
#include "smtquery/store.hpp"

namespace fs = std::filesystem;

namespace smtquery {

const char* solverResultName(SolverResult r) {
  switch (r) {
    case SolverResult::Satisfied: return "Satisfied";
    case SolverResult::Unsatisfied: return "Unsatisfied";
    case SolverResult::Unknown: return "Unknown";
    case SolverResult::Timeout: return "Timeout";
    case SolverResult::Crash: return "Crash";
  }
  return "Unknown";
}

SolverResult solverResultByName(const std::string& name) {
  if (name == "Satisfied") return SolverResult::Satisfied;
  if (name == "Unsatisfied") return SolverResult::Unsatisfied;
  if (name == "Timeout") return SolverResult::Timeout;
  if (name == "Crash") return SolverResult::Crash;
  return SolverResult::Unknown;
}

const char* validationResultName(ValidationResult r) {
  switch (r) {
    case ValidationResult::ModelValid: return "ModelValid";
    case ValidationResult::ModelInvalid: return "ModelInvalid";
    case ValidationResult::MajorityAgree: return "MajorityAgree";
    case ValidationResult::MajorityDisagree: return "MajorityDisagree";
    case ValidationResult::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

ValidationResult validationResultByName(const std::string& name) {
  if (name == "ModelValid") return ValidationResult::ModelValid;
  if (name == "ModelInvalid") return ValidationResult::ModelInvalid;
  if (name == "MajorityAgree") return ValidationResult::MajorityAgree;
  if (name == "MajorityDisagree") return ValidationResult::MajorityDisagree;
  return ValidationResult::Inconclusive;
}

std::string nowTimestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", std::localtime(&t));
  return buf;
}

namespace {

// tiny RAII statement wrapper
class Stmt {
 public:
  Stmt(sqlite3* db, const std::string& sql) {
    if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK)
      throw IoError(std::string("sqlite prepare failed: ") + sqlite3_errmsg(db));
  }
  ~Stmt() { sqlite3_finalize(stmt_); }

  Stmt& bind(int idx, const std::string& v) {
    sqlite3_bind_text(stmt_, idx, v.c_str(), -1, SQLITE_TRANSIENT);
    return *this;
  }
  Stmt& bind(int idx, std::int64_t v) {
    sqlite3_bind_int64(stmt_, idx, v);
    return *this;
  }
  Stmt& bind(int idx, double v) {
    sqlite3_bind_double(stmt_, idx, v);
    return *this;
  }
  Stmt& bindNull(int idx) {
    sqlite3_bind_null(stmt_, idx);
    return *this;
  }

  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw IoError(std::string("sqlite step failed: rc=") + std::to_string(rc));
  }

  std::int64_t int64(int col) { return sqlite3_column_int64(stmt_, col); }
  double real(int col) { return sqlite3_column_double(stmt_, col); }
  std::string text(int col) {
    const unsigned char* t = sqlite3_column_text(stmt_, col);
    return t ? reinterpret_cast<const char*>(t) : "";
  }
  bool isNull(int col) {
    return sqlite3_column_type(stmt_, col) == SQLITE_NULL;
  }

 private:
  sqlite3_stmt* stmt_ = nullptr;
};

constexpr const char* kSchema = R"sql(
CREATE TABLE benchmarks (
  id   INTEGER PRIMARY KEY,
  name TEXT NOT NULL UNIQUE
);
CREATE TABLE tracks (
  id           INTEGER PRIMARY KEY,
  name         TEXT NOT NULL,
  benchmark_id INTEGER NOT NULL REFERENCES benchmarks(id),
  UNIQUE(benchmark_id, name)
);
CREATE TABLE instances (
  id       INTEGER PRIMARY KEY,
  name     TEXT NOT NULL,
  path     TEXT NOT NULL,
  track_id INTEGER NOT NULL REFERENCES tracks(id),
  UNIQUE(track_id, name)
);
CREATE TABLE results (
  id          INTEGER PRIMARY KEY,
  instance_id INTEGER NOT NULL REFERENCES instances(id),
  solver      TEXT NOT NULL,
  result      TEXT NOT NULL,
  time        REAL NOT NULL,
  model       TEXT,
  date        TEXT NOT NULL
);
CREATE TABLE validation_results (
  id        INTEGER PRIMARY KEY,
  result_id INTEGER NOT NULL REFERENCES results(id),
  result    TEXT NOT NULL,
  date      TEXT NOT NULL
);
)sql";

InstanceRec readInstanceRow(Stmt& q) {
  InstanceRec r;
  r.id = q.int64(0);
  r.name = q.text(1);
  r.path = q.text(2);
  r.trackId = q.int64(3);
  r.benchmark = q.text(4);
  r.track = q.text(5);
  return r;
}

constexpr const char* kInstanceSelect = R"sql(
SELECT i.id, i.name, i.path, i.track_id, b.name, t.name
FROM instances i
JOIN tracks t ON i.track_id = t.id
JOIN benchmarks b ON t.benchmark_id = b.id
)sql";

ResultRec readResultRow(Stmt& q) {
  ResultRec r;
  r.id = q.int64(0);
  r.instanceId = q.int64(1);
  r.solver = q.text(2);
  r.result = solverResultByName(q.text(3));
  r.time = q.real(4);
  if (!q.isNull(5)) r.model = q.text(5);
  r.date = q.text(6);
  return r;
}

}  // namespace

Store::Store(const fs::path& dbPath) {
  if (dbPath.has_parent_path()) fs::create_directories(dbPath.parent_path());
  if (sqlite3_open(dbPath.string().c_str(), &db_) != SQLITE_OK)
    throw IoError("cannot open database at " + dbPath.string());
  exec("PRAGMA foreign_keys = ON;");
}

Store::~Store() {
  if (db_) sqlite3_close(db_);
}

void Store::exec(const std::string& sql) {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown sqlite error";
    sqlite3_free(err);
    throw IoError("sqlite exec failed: " + msg);
  }
}

bool Store::hasSchema() {
  Stmt q(db_, "SELECT COUNT(*) FROM sqlite_master WHERE type='table' AND "
              "name='benchmarks'");
  q.step();
  return q.int64(0) > 0;
}

void Store::initSchema(bool force) {
  std::lock_guard lock(writeMutex_);
  if (hasSchema()) {
    if (!force) throw SchemaExists("database schema already present");
    exec("DROP TABLE IF EXISTS validation_results; DROP TABLE IF EXISTS "
         "results; DROP TABLE IF EXISTS instances; DROP TABLE IF EXISTS "
         "tracks; DROP TABLE IF EXISTS benchmarks;");
  }
  exec(kSchema);
}

std::size_t Store::allocateNew(const fs::path& root) {
  if (!fs::is_directory(root))
    throw IoError("benchmark root is not a directory: " + root.string());
  std::lock_guard lock(writeMutex_);

  auto isSmtFile = [](const fs::path& p) {
    auto ext = p.extension().string();
    return ext == ".smt2" || ext == ".smt";
  };

  auto sortedDirs = [](const fs::path& p) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(p))
      if (e.is_directory()) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
  };

  std::size_t added = 0;
  exec("BEGIN;");
  try {
    for (const auto& benchDir : sortedDirs(root)) {
      const std::string bench = benchDir.filename().string();

      // (track name, file) pairs; files directly under the benchmark land in
      // the implicit "default" track
      std::vector<std::pair<std::string, fs::path>> files;
      for (const auto& e : fs::directory_iterator(benchDir))
        if (e.is_regular_file() && isSmtFile(e.path()))
          files.emplace_back("default", e.path());
      for (const auto& trackDir : sortedDirs(benchDir))
        for (const auto& e : fs::directory_iterator(trackDir))
          if (e.is_regular_file() && isSmtFile(e.path()))
            files.emplace_back(trackDir.filename().string(), e.path());
      if (files.empty()) continue;
      std::sort(files.begin(), files.end());

      Stmt(db_, "INSERT OR IGNORE INTO benchmarks(name) VALUES (?1)")
          .bind(1, bench)
          .step();
      std::int64_t benchId;
      {
        Stmt q(db_, "SELECT id FROM benchmarks WHERE name = ?1");
        q.bind(1, bench).step();
        benchId = q.int64(0);
      }
      for (const auto& [track, file] : files) {
        Stmt(db_,
             "INSERT OR IGNORE INTO tracks(name, benchmark_id) VALUES (?1, ?2)")
            .bind(1, track)
            .bind(2, benchId)
            .step();
        std::int64_t trackId;
        {
          Stmt q(db_, "SELECT id FROM tracks WHERE benchmark_id = ?1 AND "
                      "name = ?2");
          q.bind(1, benchId).bind(2, track).step();
          trackId = q.int64(0);
        }
        Stmt ins(db_, "INSERT OR IGNORE INTO instances(name, path, track_id) "
                      "VALUES (?1, ?2, ?3)");
        ins.bind(1, file.filename().string())
            .bind(2, fs::absolute(file).string())
            .bind(3, trackId)
            .step();
        added += sqlite3_changes(db_);
      }
    }
    exec("COMMIT;");
  } catch (...) {
    exec("ROLLBACK;");
    throw;
  }
  return added;
}

std::vector<InstanceRec> Store::selectInstances(const DatasetSelector& sel) {
  std::vector<InstanceRec> out;
  std::set<std::int64_t> seen;
  auto push = [&](Stmt& q) {
    while (q.step()) {
      auto rec = readInstanceRow(q);
      if (seen.insert(rec.id).second) out.push_back(std::move(rec));
    }
  };
  for (const auto& atom : sel.atoms) {
    switch (atom.kind) {
      case DatasetSelector::Atom::Kind::All: {
        Stmt q(db_, std::string(kInstanceSelect) +
                        "ORDER BY b.name, t.name, i.name");
        push(q);
        break;
      }
      case DatasetSelector::Atom::Kind::Set: {
        {
          Stmt chk(db_, "SELECT COUNT(*) FROM benchmarks WHERE name = ?1");
          chk.bind(1, atom.set).step();
          if (chk.int64(0) == 0)
            throw UnknownDataset("unknown benchmark set '" + atom.set + "'");
        }
        Stmt q(db_, std::string(kInstanceSelect) +
                        "WHERE b.name = ?1 ORDER BY b.name, t.name, i.name");
        q.bind(1, atom.set);
        push(q);
        break;
      }
      case DatasetSelector::Atom::Kind::SetTrack: {
        {
          Stmt chk(db_, "SELECT COUNT(*) FROM tracks t JOIN benchmarks b ON "
                        "t.benchmark_id = b.id WHERE b.name = ?1 AND t.name = ?2");
          chk.bind(1, atom.set).bind(2, atom.track).step();
          if (chk.int64(0) == 0)
            throw UnknownDataset("unknown dataset '" + atom.set + ":" +
                                 atom.track + "'");
        }
        Stmt q(db_, std::string(kInstanceSelect) +
                        "WHERE b.name = ?1 AND t.name = ?2 "
                        "ORDER BY b.name, t.name, i.name");
        q.bind(1, atom.set).bind(2, atom.track);
        push(q);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const InstanceRec& a, const InstanceRec& b) {
    return std::tie(a.benchmark, a.track, a.name) <
           std::tie(b.benchmark, b.track, b.name);
  });
  return out;
}

std::optional<InstanceRec> Store::findInstance(const std::string& benchmark,
                                               const std::string& track,
                                               const std::string& name) {
  Stmt q(db_, std::string(kInstanceSelect) +
                  "WHERE b.name = ?1 AND t.name = ?2 AND i.name = ?3");
  q.bind(1, benchmark).bind(2, track).bind(3, name);
  if (!q.step()) return std::nullopt;
  return readInstanceRow(q);
}

std::vector<BenchmarkRec> Store::benchmarks() {
  std::vector<BenchmarkRec> out;
  Stmt q(db_, "SELECT id, name FROM benchmarks ORDER BY name");
  while (q.step()) out.push_back({q.int64(0), q.text(1)});
  return out;
}

std::size_t Store::instanceCountOfBenchmark(const std::string& name) {
  Stmt q(db_, "SELECT COUNT(*) FROM instances i JOIN tracks t ON i.track_id = "
              "t.id JOIN benchmarks b ON t.benchmark_id = b.id WHERE b.name = ?1");
  q.bind(1, name).step();
  return static_cast<std::size_t>(q.int64(0));
}

std::int64_t Store::putResult(const ResultRec& r) {
  std::lock_guard lock(writeMutex_);
  {
    Stmt chk(db_, "SELECT COUNT(*) FROM instances WHERE id = ?1");
    chk.bind(1, r.instanceId).step();
    if (chk.int64(0) == 0)
      throw ForeignKeyViolation("result references unknown instance " +
                                std::to_string(r.instanceId));
  }
  Stmt ins(db_, "INSERT INTO results(instance_id, solver, result, time, "
                "model, date) VALUES (?1, ?2, ?3, ?4, ?5, ?6)");
  ins.bind(1, r.instanceId)
      .bind(2, r.solver)
      .bind(3, std::string(solverResultName(r.result)))
      .bind(4, r.time);
  if (r.model)
    ins.bind(5, *r.model);
  else
    ins.bindNull(5);
  ins.bind(6, r.date.empty() ? nowTimestamp() : r.date);
  ins.step();
  return sqlite3_last_insert_rowid(db_);
}

std::vector<ResultRec> Store::getResults(std::int64_t instanceId,
                                         const std::string& solver) {
  std::vector<ResultRec> out;
  Stmt q(db_, "SELECT id, instance_id, solver, result, time, model, date FROM "
              "results WHERE instance_id = ?1 AND lower(solver) = lower(?2) "
              "ORDER BY id DESC");
  q.bind(1, instanceId).bind(2, solver);
  while (q.step()) out.push_back(readResultRow(q));
  return out;
}

std::optional<ResultRec> Store::newestResult(std::int64_t instanceId,
                                             const std::string& solver) {
  auto all = getResults(instanceId, solver);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<ResultRec> Store::newestResults(std::int64_t instanceId) {
  std::vector<ResultRec> out;
  Stmt q(db_, "SELECT id, instance_id, solver, result, time, model, date "
              "FROM results WHERE instance_id = ?1 AND id IN (SELECT MAX(id) "
              "FROM results WHERE instance_id = ?1 GROUP BY lower(solver)) "
              "ORDER BY solver");
  q.bind(1, instanceId);
  while (q.step()) out.push_back(readResultRow(q));
  return out;
}

std::int64_t Store::putValidation(const ValidationRec& v) {
  std::lock_guard lock(writeMutex_);
  {
    Stmt chk(db_, "SELECT COUNT(*) FROM results WHERE id = ?1");
    chk.bind(1, v.resultId).step();
    if (chk.int64(0) == 0)
      throw ForeignKeyViolation("validation references unknown result " +
                                std::to_string(v.resultId));
  }
  Stmt ins(db_, "INSERT INTO validation_results(result_id, result, date) "
                "VALUES (?1, ?2, ?3)");
  ins.bind(1, v.resultId)
      .bind(2, std::string(validationResultName(v.result)))
      .bind(3, v.date.empty() ? nowTimestamp() : v.date);
  ins.step();
  return sqlite3_last_insert_rowid(db_);
}

std::optional<ValidationRec> Store::validationForResult(std::int64_t resultId) {
  Stmt q(db_, "SELECT id, result_id, result, date FROM validation_results "
              "WHERE result_id = ?1 ORDER BY id DESC");
  q.bind(1, resultId);
  if (!q.step()) return std::nullopt;
  ValidationRec v;
  v.id = q.int64(0);
  v.resultId = q.int64(1);
  v.result = validationResultByName(q.text(2));
  v.date = q.text(3);
  return v;
}

std::size_t Store::rowCount(const std::string& table) {
  Stmt q(db_, "SELECT COUNT(*) FROM " + table);
  q.step();
  return static_cast<std::size_t>(q.int64(0));
}

}  // namespace smtquery
