#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crprecis/adversarial.hpp"
#include "crprecis/harness.hpp"
#include "crprecis/stream_file.hpp"

namespace {

using namespace crprecis;

struct Args {
  std::string input;
  std::string input2;
  std::string output;
  std::optional<std::uint64_t> k;
  std::optional<std::uint32_t> t;
  std::optional<std::uint64_t> s;
  std::optional<double> epsilon;
  std::optional<double> phi;
  std::optional<double> alpha;
  std::optional<std::uint64_t> domain;
  std::uint64_t seed = 1;
  std::string hierarchy;
  std::vector<std::string> positional;
};

HarnessOptions to_options(const Args& a) {
  HarnessOptions o;
  o.k = a.k;
  o.t = a.t;
  o.s = a.s;
  o.epsilon = a.epsilon;
  o.phi = a.phi;
  o.alpha = a.alpha;
  o.domain = a.domain;
  o.seed = a.seed;
  if (!a.hierarchy.empty()) o.hierarchy = a.hierarchy;
  return o;
}

int emit(const ErrorReport& report) {
  std::cout << report.render();
  return report.all_ok() ? 0 : 1;
}

int run_build(const Args& a) {
  if (a.input.empty() || a.output.empty()) throw std::invalid_argument("build needs --input and --output");
  const Ingested in = ingest(std::filesystem::path(a.input));
  const SketchParams params = resolve_point_params(in.stream.n, to_options(a));
  const CrPrecis sk = build_sketch(in.stream, params);
  const auto bytes = sk.serialize();
  std::ofstream out(a.output, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + a.output);
  std::printf("# k=%llu t=%u N=%llu model=%s counters=%llu\n", static_cast<unsigned long long>(params.k), params.t,
              static_cast<unsigned long long>(params.n), to_string(in.stream.model).c_str(),
              static_cast<unsigned long long>(sk.counter_count()));
  return 0;
}

int run_adversarial_cmd(const Args& a) {
  LeveledInstance inst;
  const ErrorReport report = run_adversarial(to_options(a), &inst);
  if (!a.output.empty()) {
    StreamFile sf{inst.n, Model::Strict, inst.stream()};
    std::ofstream out(a.output);
    write_stream(out, sf);
    if (!out) throw std::runtime_error("cannot write " + a.output);
  }
  return emit(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CR-precis sketches checked against an exact oracle"};
  app.require_subcommand(1);
  app.fallthrough();

  Args a;
  app.add_option("--input", a.input, "Stream file");
  app.add_option("--input2", a.input2, "Second stream file (inner)");
  app.add_option("--output", a.output, "Output path (build, adversarial)");
  app.add_option("--k", a.k, "Table height");
  app.add_option("--t", a.t, "Number of tables");
  app.add_option("--s", a.s, "Derived-parameter s");
  app.add_option("--epsilon", a.epsilon, "Approximation parameter");
  app.add_option("--phi", a.phi, "Quantile fraction");
  app.add_option("--alpha", a.alpha, "Entropy approximation factor");
  app.add_option("--domain,--n", a.domain, "Domain size (adversarial)");
  app.add_option("--seed", a.seed, "Seed");
  app.add_option("--hierarchy", a.hierarchy, "Edge file: one 'child parent' per line");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"build", "Build a sketch and serialize it"},
      {"point", "Point queries: point <x>..."},
      {"range", "Range sums: range <l> <r> [<l> <r>...]"},
      {"quantiles", "Suffix-sum quantiles"},
      {"frequent", "Frequent items"},
      {"hhh", "Hierarchical heavy hitters"},
      {"inner", "Inner product of --input and --input2"},
      {"entropy", "Entropy estimate"},
      {"adversarial", "Leveled instance reconstruction"},
      {"verify-all", "Every applicable query family"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    if (name == "point" || name == "range") sub->add_option("args", a.positional, "Query arguments");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (command == "build") return run_build(a);
    if (command == "adversarial") return run_adversarial_cmd(a);

    std::optional<Ingested> primary;
    std::optional<Ingested> secondary;
    if (!a.input.empty()) primary = ingest(std::filesystem::path(a.input));
    if (!a.input2.empty()) secondary = ingest(std::filesystem::path(a.input2));
    const Query q{command, a.positional};
    return emit(run_query(q, primary ? &*primary : nullptr, secondary ? &*secondary : nullptr, to_options(a)));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "crprecis: %s\n", e.what());
    return 2;
  }
}
