#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "crprecis/oracle.hpp"
#include "crprecis/sketch.hpp"

namespace crprecis {

/// Text stream format:
///
///   N <domain-size> MODEL <strict|general>
///   <item> <delta>
///   ...
///
/// '#' lines and blank lines are ignored anywhere.
struct StreamFile {
  std::uint64_t n = 0;
  Model model = Model::Strict;
  std::vector<StreamUpdate> updates;
};

class StreamParseError : public std::runtime_error {
 public:
  StreamParseError(const std::string& source, std::size_t line, const std::string& reason);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Ingested {
  StreamFile stream;
  FrequencyOracle oracle;
};

/// Parses and replays into an oracle. Strict files are rejected at the first
/// update that drives an exact frequency negative.
Ingested ingest(std::istream& in, const std::string& source = "<stream>");
Ingested ingest(const std::filesystem::path& path);

void write_stream(std::ostream& out, const StreamFile& stream);

std::string to_string(Model model);

}  // namespace crprecis
