#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nig/strategy.hpp"

namespace nig {

/// 12 significant digits, trailing zeros kept: 0.5 -> "0.500000000000".
std::string format_number(double value);

/// Node ids joined by commas; "-" for the empty set.
std::string format_set(const SeedSet& s);

/*
  Ordered record of one CLI run. Entries keep insertion order so the output
  field order is stable. Two renderings:

  structured (line-delimited, see docs/report-schema.md):
    nig-report 1 <command>
    param <key> <value>...
    result <key> <value>...
    row <table> <index> <value>...
    meta timing_ms <ms>
    end

  text: the same content aligned for reading.
*/
class Report {
 public:
  explicit Report(std::string command);

  void param(std::string key, std::vector<std::string> values);
  void param(std::string key, std::string value) { param(std::move(key), std::vector{std::move(value)}); }
  void result(std::string key, std::vector<std::string> values);
  void result(std::string key, std::string value) { result(std::move(key), std::vector{std::move(value)}); }
  void row(std::string table, std::size_t index, std::vector<std::string> values);
  void set_timing_ms(double ms) { timing_ms_ = ms; }

  void write(std::ostream& out, bool structured) const;

 private:
  struct Entry {
    std::string section;
    std::string key;
    std::optional<std::size_t> index;
    std::vector<std::string> values;
  };

  std::string command_;
  std::vector<Entry> entries_;
  std::optional<double> timing_ms_;
};

}  // namespace nig
