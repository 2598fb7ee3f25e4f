#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crprecis {

struct ReportRow {
  std::string query;
  std::string exact;
  std::string estimate;
  std::string abs_error;
  std::string bound;
  bool ok = true;

  bool operator==(const ReportRow&) const = default;
};

/// Tab-separated sketch-vs-oracle table: optional '#' note lines, a fixed
/// header, then one row per query in insertion order.
class ErrorReport {
 public:
  static constexpr std::string_view header = "query\texact\testimate\tabs_error\tbound\tok";

  void note(std::string line) { notes_.push_back(std::move(line)); }
  void add(ReportRow row) { rows_.push_back(std::move(row)); }
  void append(const ErrorReport& other);

  const std::vector<std::string>& notes() const { return notes_; }
  const std::vector<ReportRow>& rows() const { return rows_; }
  bool all_ok() const;

  std::string render() const;
  /// Inverse of render(); throws std::invalid_argument on malformed text.
  static ErrorReport parse(std::string_view text);

 private:
  std::vector<std::string> notes_;
  std::vector<ReportRow> rows_;
};

}  // namespace crprecis
