#include "crprecis/stream_file.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace crprecis {

StreamParseError::StreamParseError(const std::string& source, std::size_t line, const std::string& reason)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + reason), line_(line) {}

std::string to_string(Model model) { return model == Model::Strict ? "strict" : "general"; }

namespace {

template <typename T>
bool parse_number(const std::string& token, T& out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> fields;
  std::string f;
  while (in >> f) fields.push_back(f);
  return fields;
}

}  // namespace

Ingested ingest(std::istream& in, const std::string& source) {
  StreamFile stream;
  bool have_header = false;
  std::optional<FrequencyOracle> oracle;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split(line);
    if (fields.empty() || fields.front().front() == '#') continue;

    if (!have_header) {
      if (fields.size() != 4 || fields[0] != "N" || fields[2] != "MODEL") {
        throw StreamParseError(source, lineno, "expected header 'N <domain-size> MODEL <strict|general>'");
      }
      if (!parse_number(fields[1], stream.n) || stream.n < 1) {
        throw StreamParseError(source, lineno, "bad domain size '" + fields[1] + "'");
      }
      if (fields[3] == "strict") stream.model = Model::Strict;
      else if (fields[3] == "general") stream.model = Model::General;
      else throw StreamParseError(source, lineno, "unknown model '" + fields[3] + "'");
      oracle.emplace(stream.n, stream.model);
      have_header = true;
      continue;
    }

    if (fields.size() != 2) throw StreamParseError(source, lineno, "expected '<item> <delta>'");
    StreamUpdate u;
    if (!parse_number(fields[0], u.item)) throw StreamParseError(source, lineno, "bad item '" + fields[0] + "'");
    if (!parse_number(fields[1], u.delta)) throw StreamParseError(source, lineno, "bad delta '" + fields[1] + "'");
    if (u.delta == 0) throw StreamParseError(source, lineno, "delta must be nonzero");
    if (u.item >= stream.n) {
      throw StreamParseError(source, lineno, "item " + fields[0] + " outside domain [0, " + std::to_string(stream.n) + ")");
    }
    try {
      oracle->apply(u);
    } catch (const std::domain_error&) {
      throw StreamParseError(source, lineno, "strict stream drives item " + fields[0] + " negative");
    } catch (const std::overflow_error&) {
      throw StreamParseError(source, lineno, "frequency overflow");
    }
    stream.updates.push_back(u);
  }
  if (!have_header) throw StreamParseError(source, lineno, "missing header");
  return Ingested{std::move(stream), std::move(*oracle)};
}

Ingested ingest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream file " + path.string());
  return ingest(in, path.string());
}

void write_stream(std::ostream& out, const StreamFile& stream) {
  out << "N " << stream.n << " MODEL " << to_string(stream.model) << '\n';
  for (const auto& u : stream.updates) out << u.item << ' ' << u.delta << '\n';
}

}  // namespace crprecis
