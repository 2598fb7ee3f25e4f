#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crprecis/adversarial.hpp"
#include "crprecis/report.hpp"
#include "crprecis/sketch.hpp"
#include "crprecis/stream_file.hpp"

namespace crprecis {

/// Raw (--k/--t) or derived (--s/--epsilon/...) parameters shared by every
/// harness command. Unset derived values fall back to per-command defaults.
struct HarnessOptions {
  std::optional<std::uint64_t> k;
  std::optional<std::uint32_t> t;
  std::optional<std::uint64_t> s;
  std::optional<double> epsilon;
  std::optional<double> phi;
  std::optional<double> alpha;
  std::optional<std::uint64_t> domain;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> hierarchy;
};

/// Point-query sketch parameters: (--k, --t) as given, with t defaulting to
/// k * ceil(log_k N); or k = s, t = s * ceil(log_s N) from --s.
SketchParams resolve_point_params(std::uint64_t n, const HarnessOptions& opts);

CrPrecis build_sketch(const StreamFile& stream, const SketchParams& params);

ErrorReport run_point(const Ingested& in, const HarnessOptions& opts, std::span<const item_t> items);
ErrorReport run_range(const Ingested& in, const HarnessOptions& opts,
                      std::span<const std::pair<item_t, item_t>> ranges);
ErrorReport run_quantiles(const Ingested& in, const HarnessOptions& opts);
ErrorReport run_frequent(const Ingested& in, const HarnessOptions& opts);
ErrorReport run_hhh(const Ingested& in, const HarnessOptions& opts);
ErrorReport run_inner(const Ingested& r, const Ingested& s, const HarnessOptions& opts);
ErrorReport run_entropy(const Ingested& in, const HarnessOptions& opts);
/// Generates a leveled instance (--s, --seed, domain) and reconstructs it.
ErrorReport run_adversarial(const HarnessOptions& opts, LeveledInstance* instance_out = nullptr);
/// Every query family applicable to the stream's model, with defaults.
ErrorReport verify_all(const Ingested& in, const Ingested* second, const HarnessOptions& opts);

struct Query {
  std::string command;
  std::vector<std::string> args;
};

/// Dispatches "point <x>...", "range <l> <r>", "quantiles", "frequent",
/// "hhh", "inner", "entropy", "adversarial" and "verify-all". Throws
/// std::invalid_argument for unknown commands or bad arguments.
ErrorReport run_query(const Query& q, const Ingested* primary, const Ingested* secondary,
                      const HarnessOptions& opts);

}  // namespace crprecis
