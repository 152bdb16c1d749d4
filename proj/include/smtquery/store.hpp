#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smtquery/ast.hpp"

struct sqlite3;

namespace smtquery {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaExists : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownDataset : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ForeignKeyViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SolverResult { Satisfied, Unsatisfied, Unknown, Timeout, Crash };
enum class ValidationResult {
  ModelValid,
  ModelInvalid,
  MajorityAgree,
  MajorityDisagree,
  Inconclusive
};

const char* solverResultName(SolverResult r);
SolverResult solverResultByName(const std::string& name);
const char* validationResultName(ValidationResult r);
ValidationResult validationResultByName(const std::string& name);

struct BenchmarkRec {
  std::int64_t id;
  std::string name;
};

struct TrackRec {
  std::int64_t id;
  std::string name;
  std::int64_t benchmarkId;
};

struct InstanceRec {
  std::int64_t id = -1;
  std::string name;
  std::string path;
  std::int64_t trackId = -1;
  // denormalized for the set:track:filename display form
  std::string benchmark;
  std::string track;

  std::string qualifiedName() const { return benchmark + ":" + track + ":" + name; }
};

struct ResultRec {
  std::int64_t id = -1;
  std::int64_t instanceId = -1;
  std::string solver;
  SolverResult result = SolverResult::Unknown;
  double time = 0.0;
  std::optional<std::string> model;
  std::string date;
};

struct ValidationRec {
  std::int64_t id = -1;
  std::int64_t resultId = -1;
  ValidationResult result = ValidationResult::Inconclusive;
  std::string date;
};

struct DatasetSelector {
  struct Atom {
    enum class Kind { All, Set, SetTrack } kind = Kind::All;
    std::string set;
    std::string track;
  };
  std::vector<Atom> atoms;
};

std::string nowTimestamp();

// Single-file relational store over the five-table schema. Mutations are
// serialized through an internal mutex; reads may run from several threads.
class Store {
 public:
  explicit Store(const std::filesystem::path& dbPath);
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  bool hasSchema();
  void initSchema(bool force);

  // Scans {root}/<benchmark>/<track>/*.smt* and links everything not yet
  // known. Returns the number of newly linked instances.
  std::size_t allocateNew(const std::filesystem::path& root);

  std::vector<InstanceRec> selectInstances(const DatasetSelector& sel);
  std::optional<InstanceRec> findInstance(const std::string& benchmark,
                                          const std::string& track,
                                          const std::string& name);

  std::vector<BenchmarkRec> benchmarks();
  std::size_t instanceCountOfBenchmark(const std::string& name);

  std::int64_t putResult(const ResultRec& r);
  // newest-first history for one (instance, solver) pair
  std::vector<ResultRec> getResults(std::int64_t instanceId,
                                    const std::string& solver);
  std::optional<ResultRec> newestResult(std::int64_t instanceId,
                                        const std::string& solver);
  // newest result per solver for one instance
  std::vector<ResultRec> newestResults(std::int64_t instanceId);

  std::int64_t putValidation(const ValidationRec& v);
  std::optional<ValidationRec> validationForResult(std::int64_t resultId);

  std::size_t rowCount(const std::string& table);

 private:
  void exec(const std::string& sql);
  sqlite3* db_ = nullptr;
  std::mutex writeMutex_;
};

// Filesystem cache of annotated ASTs, one entry per instance, keyed by the
// source content hash and an intel manifest.
class AstCache {
 public:
  explicit AstCache(const std::filesystem::path& dir);

  std::optional<Script> load(std::int64_t instanceId,
                             const std::string& contentHash);
  void store(std::int64_t instanceId, const std::string& contentHash,
             const Script& script);
  void invalidate(std::int64_t instanceId);

 private:
  std::filesystem::path entryPath(std::int64_t instanceId) const;
  std::filesystem::path dir_;
};

// Returns the instance's annotated AST, via the cache when the entry is valid
// for the current file bytes. Missing built-in intel passes are computed and
// the cache entry rewritten. ParseError propagates.
Script loadAst(const InstanceRec& inst, AstCache& cache, bool translate25 = false,
               bool* cacheHit = nullptr);

}  // namespace smtquery
