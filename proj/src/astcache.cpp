#include <fstream>

#include "smtquery/intel.hpp"
#include "smtquery/smtlib.hpp"
#include "smtquery/store.hpp"

namespace fs = std::filesystem;

namespace smtquery {

namespace {

constexpr const char* kMagic = "smtquery-ast";
constexpr int kFormatVersion = 1;

json exprToJson(const Expr& e) {
  json j;
  j["k"] = e.kind == Kind::Variable ? 1 : 0;
  j["d"] = e.decl;
  j["s"] = static_cast<int>(e.sort);
  if (!e.params.empty()) j["p"] = e.params;
  if (!e.value.empty()) j["v"] = e.value;
  if (!e.intel.empty()) {
    json intel = json::object();
    for (const auto& [name, entry] : e.intel)
      intel[name] = json{entry.version, entry.value};
    j["i"] = std::move(intel);
  }
  if (!e.children.empty()) {
    json kids = json::array();
    for (const auto& c : e.children) kids.push_back(exprToJson(*c));
    j["c"] = std::move(kids);
  }
  return j;
}

ExprPtr exprFromJson(const json& j) {
  auto e = std::make_shared<Expr>();
  e->kind = j["k"].get<int>() == 1 ? Kind::Variable : Kind::Other;
  e->decl = j["d"].get<std::string>();
  e->sort = static_cast<Sort>(j["s"].get<int>());
  if (j.contains("p")) e->params = j["p"].get<std::vector<std::int64_t>>();
  if (j.contains("v")) e->value = j["v"].get<std::string>();
  if (j.contains("i"))
    for (const auto& [name, entry] : j["i"].items())
      e->intel[name] = IntelEntry{entry[0].get<int>(), entry[1]};
  if (j.contains("c"))
    for (const auto& c : j["c"]) e->children.push_back(exprFromJson(c));
  return e;
}

json scriptToJson(const Script& s) {
  json j;
  if (s.logic) j["logic"] = *s.logic;
  json decls = json::array();
  for (const auto& [name, sort] : s.declarations)
    decls.push_back(json{name, static_cast<int>(sort)});
  j["decls"] = std::move(decls);
  j["trailing"] = s.trailing;
  json asserts = json::array();
  for (const auto& a : s.assertions) asserts.push_back(exprToJson(*a));
  j["assertions"] = std::move(asserts);
  return j;
}

Script scriptFromJson(const json& j) {
  Script s;
  if (j.contains("logic")) s.logic = j["logic"].get<std::string>();
  for (const auto& d : j["decls"])
    s.declarations.emplace_back(d[0].get<std::string>(),
                                static_cast<Sort>(d[1].get<int>()));
  s.trailing = j["trailing"].get<std::vector<std::string>>();
  for (const auto& a : j["assertions"]) s.assertions.push_back(exprFromJson(a));
  s.renumber();
  return s;
}

}  // namespace

AstCache::AstCache(const fs::path& dir) : dir_(dir) {
  fs::create_directories(dir_);
}

fs::path AstCache::entryPath(std::int64_t instanceId) const {
  return dir_ / (std::to_string(instanceId) + ".astc");
}

std::optional<Script> AstCache::load(std::int64_t instanceId,
                                     const std::string& contentHash) {
  auto path = entryPath(instanceId);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  json j;
  try {
    j = json::from_cbor(bytes);
  } catch (const json::exception&) {
    return std::nullopt;  // corrupted entry: treat as miss
  }
  if (!j.is_object() || j.value("magic", "") != kMagic ||
      j.value("format", -1) != kFormatVersion ||
      j.value("hash", "") != contentHash)
    return std::nullopt;
  try {
    return scriptFromJson(j["script"]);
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void AstCache::store(std::int64_t instanceId, const std::string& contentHash,
                     const Script& script) {
  json j;
  j["magic"] = kMagic;
  j["format"] = kFormatVersion;
  j["hash"] = contentHash;
  // intel manifest: root-level keys and versions, for cheap inspection
  json manifest = json::object();
  for (const auto& a : script.assertions)
    for (const auto& [name, entry] : a->intel) manifest[name] = entry.version;
  j["intels"] = std::move(manifest);
  j["script"] = scriptToJson(script);

  auto bytes = json::to_cbor(j);
  auto path = entryPath(instanceId);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write cache entry " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  fs::rename(tmp, path);  // atomic publish
}

void AstCache::invalidate(std::int64_t instanceId) {
  std::error_code ec;
  fs::remove(entryPath(instanceId), ec);
}

Script loadAst(const InstanceRec& inst, AstCache& cache, bool translate25,
               bool* cacheHit) {
  std::ifstream in(inst.path, std::ios::binary);
  if (!in) throw IoError("cannot read instance file " + inst.path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const std::string hash = contentHash(bytes);

  if (auto cached = cache.load(inst.id, hash)) {
    if (cacheHit) *cacheHit = true;
    // version bumps invalidate only the stale keys
    if (ensureBuiltinIntel(*cached)) cache.store(inst.id, hash, *cached);
    return std::move(*cached);
  }
  if (cacheHit) *cacheHit = false;
  ParseOptions opts;
  opts.translate25 = translate25;
  Script script = parseScript(bytes, opts);
  ensureBuiltinIntel(script);
  cache.store(inst.id, hash, script);
  return script;
}

}  // namespace smtquery
