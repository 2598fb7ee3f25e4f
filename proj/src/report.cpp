#include "crprecis/report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace crprecis {

void ErrorReport::append(const ErrorReport& other) {
  notes_.insert(notes_.end(), other.notes_.begin(), other.notes_.end());
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

bool ErrorReport::all_ok() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const ReportRow& r) { return r.ok; });
}

std::string ErrorReport::render() const {
  std::ostringstream out;
  for (const auto& n : notes_) out << "# " << n << '\n';
  out << header << '\n';
  for (const auto& r : rows_) {
    out << r.query << '\t' << r.exact << '\t' << r.estimate << '\t' << r.abs_error << '\t' << r.bound << '\t'
        << (r.ok ? "yes" : "no") << '\n';
  }
  return out.str();
}

ErrorReport ErrorReport::parse(std::string_view text) {
  ErrorReport report;
  std::istringstream in{std::string(text)};
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (!seen_header && line.starts_with("# ")) {
      report.notes_.push_back(line.substr(2));
      continue;
    }
    if (!seen_header) {
      if (line != header) throw std::invalid_argument("report header missing");
      seen_header = true;
      continue;
    }
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 6 || (cols[5] != "yes" && cols[5] != "no")) {
      throw std::invalid_argument("malformed report row: " + line);
    }
    report.rows_.push_back({cols[0], cols[1], cols[2], cols[3], cols[4], cols[5] == "yes"});
  }
  if (!seen_header) throw std::invalid_argument("report header missing");
  return report;
}

}  // namespace crprecis
