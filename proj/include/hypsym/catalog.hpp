#pragma once

// Catalog files: "key: value" header lines, indented continuation lines,
// '#' comments. Every file carries id and role; equations carry expr.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypsym/jet.hpp"

namespace hypsym {

struct EmbeddedFile {
  const char* name;
  const char* content;
};

/// Catalog files compiled into the library.
const std::vector<EmbeddedFile>& embedded_catalog();

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Role { Evolution, Hyperbolic, Transform, Pairing };

struct ParamSpec {
  std::string name;
  bool nonzero = false;
};

struct CatalogEntry {
  std::string id;
  Role role = Role::Evolution;
  std::vector<ParamSpec> params;
  std::string provenance;
  std::string source;  // file name
  std::map<std::string, std::string> fields;

  const std::string& field(const std::string& key) const;
  std::optional<std::string> maybe(const std::string& key) const;
};

using Bindings = std::map<std::string, Rational>;

/// "a = 1, b = 0" or "a=1 b=-1/2".
Bindings parse_bindings(const std::string& text);
std::string to_string(const Bindings& b);
Role parse_role(const std::string& s);
const char* role_name(Role r);

class Catalog {
 public:
  /// Loads the embedded files, then the files in `extra` (files or directories).
  explicit Catalog(const std::vector<std::string>& extra = {});

  void add_text(const std::string& source, const std::string& text);
  void add_path(const std::string& path);

  const CatalogEntry& entry(const std::string& id) const;
  bool contains(const std::string& id) const { return entries_.count(id) > 0; }
  /// Deterministic order: evolution list, equations hyp*, S*, final*, then transforms and pairings.
  std::vector<const CatalogEntry*> list(std::optional<Role> role = std::nullopt) const;

  HyperbolicEq hyperbolic(const std::string& id, const Bindings& b, Context& ctx) const;
  EvolutionEq evolution(const std::string& id, const Bindings& b, Context& ctx) const;
  /// Parses `text` after registering the entry's parameters and substitutes bindings.
  Expr instantiate(const CatalogEntry& e, const std::string& text, const Bindings& b, Context& ctx) const;
  void check_admissible(const CatalogEntry& e, const Bindings& b) const;

 private:
  std::map<std::string, CatalogEntry> entries_;
};

/// Sort key used by Catalog::list.
std::pair<int, long> catalog_order(const std::string& id);

}  // namespace hypsym
