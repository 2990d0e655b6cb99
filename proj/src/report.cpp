#include "nig/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace nig {

std::string format_number(double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%#.12g", value);
  return buf;
}

std::string format_set(const SeedSet& s) {
  if (s.empty()) return "-";
  std::string out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(s[k]);
  }
  return out;
}

Report::Report(std::string command) : command_(std::move(command)) {}

void Report::param(std::string key, std::vector<std::string> values) {
  entries_.push_back({"param", std::move(key), std::nullopt, std::move(values)});
}

void Report::result(std::string key, std::vector<std::string> values) {
  entries_.push_back({"result", std::move(key), std::nullopt, std::move(values)});
}

void Report::row(std::string table, std::size_t index, std::vector<std::string> values) {
  entries_.push_back({"row", std::move(table), index, std::move(values)});
}

void Report::write(std::ostream& out, bool structured) const {
  auto join = [](const std::vector<std::string>& values) {
    std::string s;
    for (const auto& v : values) s += ' ' + v;
    return s;
  };

  if (structured) {
    out << "nig-report 1 " << command_ << '\n';
    for (const auto& e : entries_) {
      out << e.section << ' ' << e.key;
      if (e.index) out << ' ' << *e.index;
      out << join(e.values) << '\n';
    }
    if (timing_ms_) out << "meta timing_ms " << format_number(*timing_ms_) << '\n';
    out << "end\n";
    return;
  }

  std::size_t width = 0;
  for (const auto& e : entries_) {
    if (e.section != "row") width = std::max(width, e.key.size());
  }
  out << command_ << '\n';
  std::string last_section, last_table;
  for (const auto& e : entries_) {
    if (e.section == "row") {
      if (last_section != "row" || last_table != e.key) out << e.key << ":\n";
      out << "  [" << *e.index << "]" << join(e.values) << '\n';
      last_table = e.key;
    } else {
      if (e.section != last_section) out << (e.section == "param" ? "parameters:\n" : "results:\n");
      out << "  " << e.key << std::string(width - e.key.size(), ' ') << " :" << join(e.values) << '\n';
    }
    last_section = e.section;
  }
  if (timing_ms_) out << "time: " << format_number(*timing_ms_) << " ms\n";
}

}  // namespace nig
