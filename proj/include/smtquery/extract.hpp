#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smtquery/store.hpp"

namespace smtquery {

enum class ExtractorId {
  Count,
  InstanceTable,
  ResultsTable,
  SMTLib,
  CactusPlot,
  MatchingPie,
  SMTPlot,
  VarDepPlot
};

std::optional<ExtractorId> extractorByName(const std::string& name);
const char* extractorName(ExtractorId id);
const std::vector<std::string>& extractorCatalog();

struct QueryResult {
  // matched instances with their (possibly transformed) scripts, in
  // benchmark/track/name order
  std::vector<std::pair<InstanceRec, Script>> matched;
  std::size_t universeSize = 0;
  // benchmark name -> (matched, total) within the selected dataset
  std::map<std::string, std::pair<std::size_t, std::size_t>> perBenchmark;
};

// newest stored result of one solver on one instance
using ResultLookup = std::function<std::optional<ResultRec>(
    std::int64_t instanceId, const std::string& solver)>;

std::string extractCount(const QueryResult& r);

std::string extractInstanceTable(const QueryResult& r,
                                 const std::vector<std::string>& solvers,
                                 const ResultLookup& lookup);

std::string extractResultsTable(const QueryResult& r,
                                const std::vector<std::string>& solvers,
                                const ResultLookup& lookup);

std::vector<std::filesystem::path> extractSmtlib(
    const QueryResult& r, const std::filesystem::path& outdir);

std::filesystem::path extractCactus(const QueryResult& r,
                                    const std::vector<std::string>& solvers,
                                    const ResultLookup& lookup,
                                    const std::filesystem::path& outdir);

std::filesystem::path extractMatchingPie(const QueryResult& r,
                                         const std::filesystem::path& outdir);

std::vector<std::filesystem::path> extractSmtPlot(
    const QueryResult& r, const std::filesystem::path& outdir);

std::vector<std::filesystem::path> extractVarDepPlot(
    const QueryResult& r, const std::filesystem::path& outdir);

// Variable/assertion incidence used by the dependency plot: pairs of
// (variable name, assertion index) with assertion indices starting at 1.
std::vector<std::pair<std::string, std::size_t>> varDepEdges(
    const Script& script);

}  // namespace smtquery
