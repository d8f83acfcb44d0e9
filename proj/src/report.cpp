#include "hypsym/report.hpp"

#include <charconv>
#include <cstdio>

namespace hypsym {

namespace {

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw ReportParseError("dangling escape");
    if (s[i] == 'n') {
      out += '\n';
    } else if (s[i] == '\\') {
      out += '\\';
    } else {
      throw ReportParseError(std::string("unknown escape \\") + s[i]);
    }
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ReportParseError("expected true or false, got '" + s + "'");
}

template <class T>
T parse_int(const std::string& s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ReportParseError("expected an integer, got '" + s + "'");
  return v;
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw ReportParseError("trailing characters in '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ReportParseError("expected a number, got '" + s + "'");
  }
}

std::string pair_str(const std::pair<std::string, std::string>& p) { return p.first + " : " + p.second; }

std::pair<std::string, std::string> parse_pair(const std::string& s) {
  auto k = s.find(" : ");
  if (k == std::string::npos) throw ReportParseError("expected 'key : value', got '" + s + "'");
  return {s.substr(0, k), s.substr(k + 3)};
}

}  // namespace

std::optional<std::string> Record::get(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  return std::nullopt;
}

const std::string& Record::require(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  throw ReportParseError("record [" + type + "] lacks field '" + std::string(key) + "'");
}

std::vector<std::string> Record::all(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : fields) {
    if (k == key) out.push_back(v);
  }
  return out;
}

std::string write_records(const std::vector<Record>& records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) out += "\n";
    out += "[" + records[i].type + "]\n";
    for (const auto& [k, v] : records[i].fields) out += k + " = " + escape(v) + "\n";
  }
  return out;
}

std::vector<Record> parse_records(std::string_view text) {
  std::vector<Record> out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ReportParseError("line " + std::to_string(lineno) + ": unterminated record header");
      out.push_back({std::string(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    if (out.empty()) throw ReportParseError("line " + std::to_string(lineno) + ": field before any record header");
    auto eq = line.find(" = ");
    std::string_view key, value;
    if (eq == std::string_view::npos) {
      if (line.size() < 2 || line.substr(line.size() - 2) != " =") {
        throw ReportParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
      }
      key = trim(line.substr(0, line.size() - 2));
    } else {
      key = trim(line.substr(0, eq));
      value = line.substr(eq + 3);
    }
    out.back().add(std::string(key), unescape(value));
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string direction_name(Direction d) { return d == Direction::X ? "x" : "y"; }

Direction parse_direction(std::string_view s) {
  if (s == "x") return Direction::X;
  if (s == "y") return Direction::Y;
  throw ReportParseError("direction must be x or y, got '" + std::string(s) + "'");
}

Record to_record(const VerificationReport& r) {
  Record rec{"verification", {}};
  rec.add("pairing", r.pairing);
  rec.add("hyperbolic", r.hyperbolic);
  rec.add("evolution", r.evolution);
  rec.add("direction", direction_name(r.direction));
  rec.add("bindings", to_string(r.bindings));
  rec.add("expect", r.expect);
  rec.add("residual_is_zero", bool_str(r.residual_is_zero));
  rec.add("residual_term_count", std::to_string(r.residual_term_count));
  rec.add("samples", std::to_string(r.samples));
  rec.add("seed", std::to_string(r.seed));
  rec.add("tolerance", format_double(r.tolerance));
  if (r.numeric_max_residual) rec.add("numeric_max_residual", format_double(*r.numeric_max_residual));
  rec.add("numeric_nonzero_points", std::to_string(r.numeric_nonzero_points));
  rec.add("numeric_agrees", bool_str(r.numeric_agrees));
  if (!r.note.empty()) rec.add("note", r.note);
  rec.add("passed", bool_str(r.passed()));
  for (const auto& f : r.failing_coefficients) rec.add("failing", pair_str(f));
  return rec;
}

VerificationReport verification_from_record(const Record& rec) {
  if (rec.type != "verification") throw ReportParseError("expected a [verification] record, got [" + rec.type + "]");
  VerificationReport r;
  r.pairing = rec.require("pairing");
  r.hyperbolic = rec.require("hyperbolic");
  r.evolution = rec.require("evolution");
  r.direction = parse_direction(rec.require("direction"));
  r.bindings = parse_bindings(rec.require("bindings"));
  r.expect = rec.require("expect");
  r.residual_is_zero = parse_bool(rec.require("residual_is_zero"));
  r.residual_term_count = parse_int<std::size_t>(rec.require("residual_term_count"));
  r.samples = parse_int<int>(rec.require("samples"));
  r.seed = parse_int<std::uint64_t>(rec.require("seed"));
  r.tolerance = parse_double(rec.require("tolerance"));
  if (auto v = rec.get("numeric_max_residual")) r.numeric_max_residual = parse_double(*v);
  r.numeric_nonzero_points = parse_int<int>(rec.require("numeric_nonzero_points"));
  r.numeric_agrees = parse_bool(rec.require("numeric_agrees"));
  r.note = rec.get("note").value_or("");
  for (const auto& f : rec.all("failing")) r.failing_coefficients.push_back(parse_pair(f));
  if (parse_bool(rec.require("passed")) != r.passed()) throw ReportParseError("passed field disagrees with the report");
  return r;
}

Record to_record(const TransformReport& r) {
  Record rec{"transform", {}};
  rec.add("id", r.id);
  rec.add("kind", r.kind);
  rec.add("source", r.source);
  rec.add("investigative", bool_str(r.investigative));
  for (const auto& c : r.consistency) rec.add("consistency", c.name + " : " + bool_str(c.zero));
  for (const auto& c : r.identities) rec.add("identity", c.name + " : " + bool_str(c.zero));
  rec.add("fit_unique", bool_str(r.fit_unique));
  for (const auto& f : r.fitted) rec.add("fitted", pair_str(f));
  for (const auto& c : r.conventions) {
    rec.add("convention", c.name);
    rec.add("convention_bindings", c.bindings);
    rec.add("convention_zero", bool_str(c.zero));
    rec.add("convention_terms", std::to_string(c.residual_term_count));
    for (const auto& f : c.failing) rec.add("convention_failing", pair_str(f));
  }
  rec.add("zero_conventions", std::to_string(r.zero_conventions()));
  rec.add("note", r.note);
  rec.add("passed", bool_str(r.passed()));
  return rec;
}

TransformReport transform_from_record(const Record& rec) {
  if (rec.type != "transform") throw ReportParseError("expected a [transform] record, got [" + rec.type + "]");
  TransformReport r;
  for (const auto& [k, v] : rec.fields) {
    if (k == "id") {
      r.id = v;
    } else if (k == "kind") {
      r.kind = v;
    } else if (k == "source") {
      r.source = v;
    } else if (k == "investigative") {
      r.investigative = parse_bool(v);
    } else if (k == "consistency" || k == "identity") {
      auto [name, z] = parse_pair(v);
      (k == "consistency" ? r.consistency : r.identities).push_back({name, parse_bool(z)});
    } else if (k == "fit_unique") {
      r.fit_unique = parse_bool(v);
    } else if (k == "fitted") {
      r.fitted.push_back(parse_pair(v));
    } else if (k == "convention") {
      r.conventions.push_back({v, "", false, 0, {}});
    } else if (k.rfind("convention_", 0) == 0) {
      if (r.conventions.empty()) throw ReportParseError(k + " before any convention");
      ConventionResult& c = r.conventions.back();
      if (k == "convention_bindings") {
        c.bindings = v;
      } else if (k == "convention_zero") {
        c.zero = parse_bool(v);
      } else if (k == "convention_terms") {
        c.residual_term_count = parse_int<std::size_t>(v);
      } else if (k == "convention_failing") {
        c.failing.push_back(parse_pair(v));
      } else {
        throw ReportParseError("unknown field " + k);
      }
    } else if (k == "note") {
      r.note = v;
    } else if (k != "zero_conventions" && k != "passed") {
      throw ReportParseError("unknown field " + k);
    }
  }
  if (parse_bool(rec.require("passed")) != r.passed()) throw ReportParseError("passed field disagrees with the report");
  return r;
}

}  // namespace hypsym
