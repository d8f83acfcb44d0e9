#pragma once

// Line-oriented structured reports. A document is a sequence of records:
//
//   [verification]
//   key = value
//   failing = monomial : coefficient
//
// Keys may repeat for list fields. Values are single lines; newlines and
// backslashes are escaped as \n and \\.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hypsym/transforms.hpp"
#include "hypsym/verify.hpp"

namespace hypsym {

class ReportParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Record {
  std::string type;
  std::vector<std::pair<std::string, std::string>> fields;

  void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }
  std::optional<std::string> get(std::string_view key) const;
  const std::string& require(std::string_view key) const;
  std::vector<std::string> all(std::string_view key) const;
};

std::string write_records(const std::vector<Record>& records);
std::vector<Record> parse_records(std::string_view text);

std::string format_double(double v);
std::string direction_name(Direction d);
Direction parse_direction(std::string_view s);

Record to_record(const VerificationReport& r);
VerificationReport verification_from_record(const Record& rec);

Record to_record(const TransformReport& r);
TransformReport transform_from_record(const Record& rec);

}  // namespace hypsym
