#include "hypsym/catalog.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hypsym/parser.hpp"

namespace hypsym {

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

Rational parse_rational(const std::string& s) {
  std::string t = trim(s);
  try {
    Rational q(t);
    q.canonicalize();
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    return q;
  } catch (const std::invalid_argument&) {
    throw CatalogError("bad rational value '" + t + "'");
  }
}

}  // namespace

const std::string& CatalogEntry::field(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) throw CatalogError(id + ": missing field '" + key + "'");
  return it->second;
}

std::optional<std::string> CatalogEntry::maybe(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) return std::nullopt;
  return it->second;
}

Role parse_role(const std::string& s) {
  if (s == "evolution") return Role::Evolution;
  if (s == "hyperbolic") return Role::Hyperbolic;
  if (s == "transform") return Role::Transform;
  if (s == "pairing") return Role::Pairing;
  throw CatalogError("unknown role '" + s + "'");
}

const char* role_name(Role r) {
  switch (r) {
    case Role::Evolution: return "evolution";
    case Role::Hyperbolic: return "hyperbolic";
    case Role::Transform: return "transform";
    case Role::Pairing: return "pairing";
  }
  return "?";
}

Bindings parse_bindings(const std::string& text) {
  Bindings b;
  std::string norm = text;
  std::replace(norm.begin(), norm.end(), ',', ' ');
  std::istringstream in(norm);
  std::string tok, pending;
  std::vector<std::string> toks;
  while (in >> tok) toks.push_back(tok);
  // Re-join so that "a = 1", "a= 1" and "a=1" all parse.
  std::string joined;
  for (const auto& t : toks) {
    if (!joined.empty() && joined.back() != '=' && t.front() != '=') joined += ' ';
    joined += t;
  }
  std::istringstream in2(joined);
  while (in2 >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size()) throw CatalogError("bad binding '" + tok + "'");
    std::string name = tok.substr(0, eq);
    if (b.count(name)) throw CatalogError("parameter bound twice: " + name);
    b[name] = parse_rational(tok.substr(eq + 1));
  }
  return b;
}

std::string to_string(const Bindings& b) {
  std::string s;
  for (const auto& [k, v] : b) {
    if (!s.empty()) s += ", ";
    s += k + " = " + v.get_str();
  }
  return s;
}

std::pair<int, long> catalog_order(const std::string& id) {
  static const std::vector<std::pair<std::string, int>> groups = {
      {"ev", 0}, {"hyp", 1}, {"S", 2}, {"final", 3}, {"T", 4}, {"E", 5}, {"P", 6}};
  std::size_t digits = id.size();
  while (digits > 0 && std::isdigit(static_cast<unsigned char>(id[digits - 1]))) --digits;
  std::string prefix = id.substr(0, digits);
  long n = digits < id.size() ? std::stol(id.substr(digits)) : 0;
  for (const auto& [p, g] : groups) {
    if (prefix == p) return {g, n};
  }
  return {9, n};
}

Catalog::Catalog(const std::vector<std::string>& extra) {
  for (const auto& f : embedded_catalog()) add_text(f.name, f.content);
  for (const auto& p : extra) add_path(p);
}

void Catalog::add_path(const std::string& path) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.path().extension() == ".eq") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::exists(path)) {
    files.push_back(path);
  } else {
    throw CatalogError("catalog path not found: " + path);
  }
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    add_text(f.filename().string(), ss.str());
  }
}

void Catalog::add_text(const std::string& source, const std::string& text) {
  CatalogEntry e;
  e.source = source;
  std::istringstream in(text);
  std::string line, last;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    if (std::isspace(static_cast<unsigned char>(line[0]))) {
      if (last.empty()) throw CatalogError(source + ":" + std::to_string(lineno) + ": continuation without a key");
      e.fields[last] += " " + trim(line);
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) throw CatalogError(source + ":" + std::to_string(lineno) + ": expected 'key: value'");
    last = trim(line.substr(0, colon));
    if (e.fields.count(last)) throw CatalogError(source + ":" + std::to_string(lineno) + ": duplicate key '" + last + "'");
    e.fields[last] = trim(line.substr(colon + 1));
  }
  e.id = e.field("id");
  e.role = parse_role(e.field("role"));
  e.provenance = e.maybe("provenance").value_or("");
  for (const auto& p : split(e.maybe("params").value_or(""), ',')) {
    ParamSpec ps;
    auto open = p.find('(');
    ps.name = trim(p.substr(0, open));
    if (open != std::string::npos) {
      std::string cond = p.substr(open + 1, p.rfind(')') - open - 1);
      if (trim(cond) != ps.name + " != 0") throw CatalogError(source + ": unsupported admissibility note '" + cond + "'");
      ps.nonzero = true;
    }
    e.params.push_back(ps);
  }
  if ((e.role == Role::Evolution || e.role == Role::Hyperbolic) && !e.fields.count("expr")) {
    throw CatalogError(source + ": missing expr");
  }
  entries_.insert_or_assign(e.id, std::move(e));
}

const CatalogEntry& Catalog::entry(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw CatalogError("unknown catalog id '" + id + "'");
  return it->second;
}

std::vector<const CatalogEntry*> Catalog::list(std::optional<Role> role) const {
  std::vector<const CatalogEntry*> out;
  for (const auto& [id, e] : entries_) {
    if (!role || e.role == *role) out.push_back(&e);
  }
  std::sort(out.begin(), out.end(), [](const CatalogEntry* a, const CatalogEntry* b) {
    if (a->role != b->role) return a->role < b->role;
    auto ka = catalog_order(a->id), kb = catalog_order(b->id);
    if (ka != kb) return ka < kb;
    return a->id < b->id;
  });
  return out;
}

void Catalog::check_admissible(const CatalogEntry& e, const Bindings& b) const {
  for (const auto& [name, value] : b) {
    auto it = std::find_if(e.params.begin(), e.params.end(), [&](const ParamSpec& p) { return p.name == name; });
    if (it == e.params.end()) throw CatalogError(e.id + ": no parameter named '" + name + "'");
    if (it->nonzero && value == 0) throw CatalogError(e.id + ": binding violates admissibility (" + name + " != 0)");
  }
}

Expr Catalog::instantiate(const CatalogEntry& e, const std::string& text, const Bindings& b, Context& ctx) const {
  check_admissible(e, b);
  for (const auto& p : e.params) ctx.add_parameter(p.name);
  Expr x;
  try {
    x = parse_expr(text, ctx);
  } catch (const ParseError& err) {
    throw CatalogError(e.source + ": " + err.what());
  }
  std::vector<Binding> subs;
  for (const auto& [name, value] : b) subs.push_back({Expr::var(ctx.id(name)), Expr::constant(value)});
  return subs.empty() ? x : substitute(x, subs);
}

HyperbolicEq Catalog::hyperbolic(const std::string& id, const Bindings& b, Context& ctx) const {
  const CatalogEntry& e = entry(id);
  if (e.role != Role::Hyperbolic) throw CatalogError(id + " is not a hyperbolic equation");
  HyperbolicEq h{id, instantiate(e, e.field("expr"), b, ctx), b};
  validate(h, ctx);
  return h;
}

EvolutionEq Catalog::evolution(const std::string& id, const Bindings& b, Context& ctx) const {
  const CatalogEntry& e = entry(id);
  if (e.role != Role::Evolution) throw CatalogError(id + " is not an evolution equation");
  EvolutionEq ev{id, instantiate(e, e.field("expr"), b, ctx), Direction::X, b};
  validate(ev, ctx);
  return ev;
}

}  // namespace hypsym
