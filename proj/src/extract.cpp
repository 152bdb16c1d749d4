#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "smtquery/extract.hpp"
#include "smtquery/intel.hpp"
#include "smtquery/smtlib.hpp"

namespace fs = std::filesystem;

namespace smtquery {

namespace {

const std::map<std::string, ExtractorId>& extractorMap() {
  static const std::map<std::string, ExtractorId> m = {
      {"Count", ExtractorId::Count},
      {"InstanceTable", ExtractorId::InstanceTable},
      {"ResultsTable", ExtractorId::ResultsTable},
      {"SMTLib", ExtractorId::SMTLib},
      {"CactusPlot", ExtractorId::CactusPlot},
      {"MatchingPie", ExtractorId::MatchingPie},
      {"SMTPlot", ExtractorId::SMTPlot},
      {"VarDepPlot", ExtractorId::VarDepPlot},
  };
  return m;
}

std::string fmtTime(double t) {
  std::ostringstream os;
  os << t;  // default 6 significant digits
  return os.str();
}

// percentage truncated to 2 decimals; 51/94 renders 54.25, not 54.26
std::string fmtPercent(std::size_t m, std::size_t n) {
  double p = n == 0 ? 0.0 : 100.0 * static_cast<double>(m) / static_cast<double>(n);
  double truncated = std::floor(p * 100.0 + 1e-9) / 100.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", truncated);
  return buf;
}

// column-aligned text table: first column left, the rest right
std::string renderTable(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());

  auto pad = [&](const std::string& s, std::size_t c) {
    std::string out;
    if (c == 0) {
      out = s;
      out.append(width[c] - s.size(), ' ');
    } else {
      out.append(width[c] - s.size(), ' ');
      out += s;
    }
    return out;
  };
  std::ostringstream os;
  for (std::size_t c = 0; c < header.size(); ++c)
    os << (c ? "  " : "") << pad(header[c], c);
  os << "\n";
  for (std::size_t c = 0; c < header.size(); ++c)
    os << (c ? "  " : "") << std::string(width[c], '-');
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      os << (c ? "  " : "") << pad(row[c], c);
    os << "\n";
  }
  return os.str();
}

void writeTextFile(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
}

std::string dotEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::optional<ExtractorId> extractorByName(const std::string& name) {
  auto it = extractorMap().find(name);
  if (it == extractorMap().end()) return std::nullopt;
  return it->second;
}

const char* extractorName(ExtractorId id) {
  for (const auto& [name, eid] : extractorMap())
    if (eid == id) return name.c_str();
  return "?";
}

const std::vector<std::string>& extractorCatalog() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, id] : extractorMap()) v.push_back(name);
    return v;
  }();
  return names;
}

std::string extractCount(const QueryResult& r) {
  std::ostringstream os;
  os << "Total matching instances: " << r.matched.size() << " of "
     << r.universeSize << " within the selected set ("
     << fmtPercent(r.matched.size(), r.universeSize) << "%)\n";
  for (const auto& [bench, counts] : r.perBenchmark)
    os << bench << ": " << counts.first << " of " << counts.second << "\n";
  return os.str();
}

std::string extractInstanceTable(const QueryResult& r,
                                 const std::vector<std::string>& solvers,
                                 const ResultLookup& lookup) {
  std::vector<std::string> header = {"Instance"};
  for (const auto& s : solvers) {
    header.push_back("Result " + s);
    header.push_back("Time " + s);
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& [inst, script] : r.matched) {
    std::vector<std::string> row = {inst.qualifiedName()};
    for (const auto& s : solvers) {
      auto res = lookup(inst.id, s);
      row.push_back(res ? solverResultName(res->result) : "-");
      row.push_back(res ? fmtTime(res->time) : "-");
    }
    rows.push_back(std::move(row));
  }
  return renderTable(header, rows);
}

std::string extractResultsTable(const QueryResult& r,
                                const std::vector<std::string>& solvers,
                                const ResultLookup& lookup) {
  struct Tally {
    std::size_t sat = 0, unsat = 0, unknown = 0, timeout = 0, crash = 0;
    double timeNoTimeout = 0.0, totalTime = 0.0;
  };
  std::map<std::string, Tally> tally;
  for (const auto& s : solvers) tally[s];
  for (const auto& [inst, script] : r.matched)
    for (const auto& s : solvers) {
      auto res = lookup(inst.id, s);
      if (!res) continue;
      Tally& t = tally[s];
      switch (res->result) {
        case SolverResult::Satisfied: ++t.sat; break;
        case SolverResult::Unsatisfied: ++t.unsat; break;
        case SolverResult::Unknown: ++t.unknown; break;
        case SolverResult::Timeout: ++t.timeout; break;
        case SolverResult::Crash: ++t.crash; break;
      }
      t.totalTime += res->time;
      if (res->result != SolverResult::Timeout) t.timeNoTimeout += res->time;
    }

  std::vector<std::string> header = {""};
  for (const auto& s : solvers) header.push_back(s);
  std::vector<std::vector<std::string>> rows;
  auto countRow = [&](const std::string& label, auto getter) {
    std::vector<std::string> row = {label};
    for (const auto& s : solvers) row.push_back(getter(tally[s]));
    rows.push_back(std::move(row));
  };
  countRow("SAT", [](const Tally& t) { return std::to_string(t.sat); });
  countRow("UNSAT", [](const Tally& t) { return std::to_string(t.unsat); });
  countRow("Unknown", [](const Tally& t) { return std::to_string(t.unknown); });
  countRow("Timeout", [](const Tally& t) { return std::to_string(t.timeout); });
  countRow("Crash", [](const Tally& t) { return std::to_string(t.crash); });
  countRow("Time w/o Timeout",
           [](const Tally& t) { return fmtTime(t.timeNoTimeout); });
  countRow("Total Time", [](const Tally& t) { return fmtTime(t.totalTime); });
  return renderTable(header, rows);
}

std::vector<fs::path> extractSmtlib(const QueryResult& r,
                                    const fs::path& outdir) {
  std::vector<fs::path> written;
  for (const auto& [inst, script] : r.matched) {
    fs::path dest = outdir / inst.benchmark / inst.track / inst.name;
    writeTextFile(dest, printScript(script));
    written.push_back(dest);
  }
  return written;
}

fs::path extractCactus(const QueryResult& r,
                       const std::vector<std::string>& solvers,
                       const ResultLookup& lookup, const fs::path& outdir) {
  std::ostringstream os;
  os << "# solver\tindex\tcumulative_time\n";
  for (const auto& s : solvers) {
    std::vector<double> times;
    for (const auto& [inst, script] : r.matched) {
      auto res = lookup(inst.id, s);
      if (!res) continue;
      if (res->result == SolverResult::Satisfied ||
          res->result == SolverResult::Unsatisfied)
        times.push_back(res->time);
    }
    std::sort(times.begin(), times.end());
    double cumulative = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      cumulative += times[i];
      os << s << "\t" << i + 1 << "\t" << fmtTime(cumulative) << "\n";
    }
  }
  fs::path dest = outdir / "cactus.dat";
  writeTextFile(dest, os.str());
  return dest;
}

fs::path extractMatchingPie(const QueryResult& r, const fs::path& outdir) {
  std::ostringstream os;
  os << "matched\t" << r.matched.size() << "\n";
  os << "unmatched\t" << r.universeSize - r.matched.size() << "\n";
  fs::path dest = outdir / "pie.dat";
  writeTextFile(dest, os.str());
  return dest;
}

std::vector<fs::path> extractSmtPlot(const QueryResult& r,
                                     const fs::path& outdir) {
  static const char* kPalette[] = {"lightblue",  "lightsalmon", "palegreen",
                                   "plum",       "khaki",       "lightpink",
                                   "aquamarine", "wheat"};
  constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(*kPalette);

  std::vector<fs::path> written;
  for (const auto& [inst, script] : r.matched) {
    // shared subtrees get the same fill color
    std::map<std::uint64_t, int> hashCount;
    for (const auto& a : script.assertions)
      forEachNode(*a, [&](const Expr& n) { ++hashCount[subtreeHash(n)]; });
    std::map<std::uint64_t, std::size_t> colorOf;
    for (const auto& [h, c] : hashCount)
      if (c > 1) colorOf[h] = colorOf.size() % kPaletteSize;

    std::ostringstream os;
    os << "digraph ast {\n  node [shape=box];\n";
    for (const auto& a : script.assertions)
      forEachNode(*a, [&](const Expr& n) {
        std::string label = n.decl;
        if (n.isLiteral() || n.decl == kGeneric) label = n.value;
        for (auto p : n.params) label += " " + std::to_string(p);
        os << "  n" << n.id << " [label=\"" << dotEscape(label) << "\"";
        auto it = colorOf.find(subtreeHash(n));
        if (it != colorOf.end())
          os << ", style=filled, fillcolor=" << kPalette[it->second];
        os << "];\n";
        for (const auto& c : n.children)
          os << "  n" << n.id << " -> n" << c->id << ";\n";
      });
    os << "}\n";
    fs::path dest =
        outdir / inst.benchmark / inst.track / (inst.name + ".ast.dot");
    writeTextFile(dest, os.str());
    written.push_back(dest);
  }
  return written;
}

std::vector<std::pair<std::string, std::size_t>> varDepEdges(
    const Script& script) {
  std::vector<std::pair<std::string, std::size_t>> edges;
  for (std::size_t i = 0; i < script.assertions.size(); ++i) {
    std::set<std::string> vars;
    forEachNode(*script.assertions[i], [&](const Expr& n) {
      if (n.isVariable()) vars.insert(n.decl);
    });
    for (const auto& v : vars) edges.emplace_back(v, i + 1);
  }
  return edges;
}

std::vector<fs::path> extractVarDepPlot(const QueryResult& r,
                                        const fs::path& outdir) {
  std::vector<fs::path> written;
  for (const auto& [inst, script] : r.matched) {
    auto edges = varDepEdges(script);
    std::ostringstream os;
    os << "graph vardep {\n";
    for (const auto& [name, sort] : script.declarations)
      os << "  \"" << dotEscape(name) << "\" [shape=ellipse];\n";
    for (std::size_t i = 1; i <= script.assertions.size(); ++i)
      os << "  a" << i << " [shape=box];\n";
    for (const auto& [var, idx] : edges)
      os << "  \"" << dotEscape(var) << "\" -- a" << idx << ";\n";
    os << "}\n";
    fs::path dest =
        outdir / inst.benchmark / inst.track / (inst.name + ".vardep.dot");
    writeTextFile(dest, os.str());
    written.push_back(dest);
  }
  return written;
}

}  // namespace smtquery
