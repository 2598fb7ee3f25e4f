#include "crprecis/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include "crprecis/dyadic.hpp"
#include "crprecis/entropy.hpp"
#include "crprecis/heavy.hpp"
#include "crprecis/oracle.hpp"
#include "crprecis/products.hpp"

namespace crprecis {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt(wide_t v) { return to_string(v); }
std::string fmt(count_t v) { return std::to_string(v); }

std::string describe(const SketchParams& p) {
  return "k=" + std::to_string(p.k) + " t=" + std::to_string(p.t) + " N=" + std::to_string(p.n);
}

void require_strict(const Ingested& in, const char* what) {
  if (in.stream.model != Model::Strict) throw std::invalid_argument(std::string(what) + " needs a strict stream");
}

DyadicLevels raw_levels(std::uint64_t n, std::uint64_t k, std::optional<std::uint32_t> t) {
  return DyadicLevels(n, [k, t](unsigned, std::uint64_t domain) {
    SketchParams p = height_params(k, domain);
    if (t) p.t = std::max(*t, p.log_k_n());
    return p;
  });
}

void feed(DyadicLevels& dl, const StreamFile& stream) {
  for (const auto& u : stream.updates) dl.update(u);
}

}  // namespace

SketchParams resolve_point_params(std::uint64_t n, const HarnessOptions& opts) {
  SketchParams p;
  p.n = std::max<std::uint64_t>(n, 2);
  if (opts.k) {
    p.k = *opts.k;
    if (p.k < 2) throw std::invalid_argument("--k must be >= 2");
    p.t = opts.t ? *opts.t : static_cast<std::uint32_t>(p.k * ceil_log(p.k, p.n));
  } else if (opts.s) {
    if (opts.t) throw std::invalid_argument("--t needs --k");
    p.k = std::max<std::uint64_t>(*opts.s, 2);
    p.t = static_cast<std::uint32_t>(p.k * ceil_log(p.k, p.n));
  } else {
    throw std::invalid_argument("sketch parameters missing: give --k [--t] or --s");
  }
  p.validate();
  return p;
}

CrPrecis build_sketch(const StreamFile& stream, const SketchParams& params) {
  CrPrecis sk(params, stream.model);
  for (const auto& u : stream.updates) sk.update(u);
  return sk;
}

ErrorReport run_point(const Ingested& in, const HarnessOptions& opts, std::span<const item_t> items) {
  const SketchParams params = resolve_point_params(in.stream.n, opts);
  const CrPrecis sk = build_sketch(in.stream, params);
  ErrorReport report;
  report.note("point " + describe(params) + " model=" + to_string(in.stream.model));
  const count_t mass = in.stream.model == Model::Strict ? in.oracle.mass() : in.oracle.l1();
  for (item_t x : items) {
    const count_t f = in.oracle.exact_point(x);
    const Ratio bound = point_error_bound(params, mass, f);
    ReportRow row{"point " + std::to_string(x), fmt(f), "", "", to_string(bound), true};
    if (in.stream.model == Model::Strict) {
      const count_t est = sk.point_estimate_strict(x);
      row.estimate = fmt(est);
      row.abs_error = fmt(est - f);
      row.ok = est >= f && Ratio(est - f) <= bound;
    } else {
      const Ratio est = sk.point_estimate_general(x);
      const Ratio err = abs(est - Ratio(f));
      row.estimate = to_string(est);
      row.abs_error = to_string(err);
      row.ok = err <= bound;
    }
    report.add(std::move(row));
  }
  return report;
}

ErrorReport run_range(const Ingested& in, const HarnessOptions& opts,
                      std::span<const std::pair<item_t, item_t>> ranges) {
  require_strict(in, "range");
  DyadicLevels dl = opts.k ? raw_levels(in.stream.n, *opts.k, opts.t)
                           : DyadicLevels::for_range_sum(in.stream.n, opts.s.value_or(8));
  feed(dl, in.stream);
  ErrorReport report;
  report.note("range levels=" + std::to_string(dl.top_level() + 1) + " level0 " + describe(dl.level(0).params()) +
              " counters=" + std::to_string(dl.counter_count()));
  const count_t m = in.oracle.mass();
  for (const auto& [l, r] : ranges) {
    const count_t exact = in.oracle.exact_range(l, r);
    const count_t est = range_sum(dl, l, r);
    const Ratio bound = range_sum_bound(dl, l, r, m);
    report.add({"range " + std::to_string(l) + " " + std::to_string(r), fmt(exact), fmt(est), fmt(est - exact),
                to_string(bound), est >= exact && Ratio(est - exact) <= bound});
  }
  return report;
}

ErrorReport run_quantiles(const Ingested& in, const HarnessOptions& opts) {
  require_strict(in, "quantiles");
  QuantileQuery q;
  q.phi = opts.phi.value_or(0.25);
  q.epsilon = opts.epsilon.value_or(q.phi / 4);
  q.validate();
  DyadicLevels dl = DyadicLevels::for_quantiles(in.stream.n, q.epsilon);
  feed(dl, in.stream);
  ErrorReport report;
  report.note("quantiles phi=" + fmt(q.phi) + " epsilon=" + fmt(q.epsilon) + " level0 " +
              describe(dl.level(0).params()) + " counters=" + std::to_string(dl.counter_count()));
  const auto est = quantiles(dl, q);
  const auto exact = in.oracle.exact_quantiles(q.phi);
  const double m = static_cast<double>(in.oracle.mass());
  for (std::size_t j = 0; j < est.size(); ++j) {
    const double target = std::min(static_cast<double>(j + 1) * q.phi, 1.0) * m;
    // Distance from the target to the returned item's rank span [S(a+1), S(a)].
    const double upper = static_cast<double>(in.oracle.suffix_sum(est[j]));
    const double lower = est[j] + 1 < in.stream.n ? static_cast<double>(in.oracle.suffix_sum(est[j] + 1)) : 0.0;
    const double err = std::max({0.0, lower - target, target - upper});
    const double bound = q.epsilon * m;
    report.add({"quantile " + std::to_string(j + 1), std::to_string(exact[j]), std::to_string(est[j]), fmt(err),
                fmt(bound), err <= bound + 1e-9 * m});
  }
  return report;
}

ErrorReport run_frequent(const Ingested& in, const HarnessOptions& opts) {
  require_strict(in, "frequent");
  FrequentQuery q{opts.s.value_or(8), opts.epsilon.value_or(0.5)};
  DyadicLevels dl = frequent_levels(in.stream.n, q);
  feed(dl, in.stream);
  const auto result = frequent_items(dl, q);
  ErrorReport report;
  report.note("frequent s=" + std::to_string(q.s) + " epsilon=" + fmt(q.epsilon) + " level0 " +
              describe(dl.level(0).params()) + " examined=" + std::to_string(result.intervals_examined));

  const count_t m = in.oracle.mass();
  const auto s = static_cast<wide_t>(q.s);
  const double floor_mass = (1.0 - q.epsilon) * static_cast<double>(m) / static_cast<double>(q.s);
  std::vector<item_t> rows = result.items;
  for (item_t x = 0; x < in.stream.n; ++x) {
    if (m > 0 && static_cast<wide_t>(in.oracle.exact_point(x)) * s >= m) rows.push_back(x);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  for (item_t x : rows) {
    const count_t f = in.oracle.exact_point(x);
    const bool reported = std::binary_search(result.items.begin(), result.items.end(), x);
    const bool frequent = static_cast<wide_t>(f) * s >= m;
    const count_t est = dl.interval_estimate({0, x});
    const bool ok = reported ? static_cast<double>(f) >= floor_mass - 1e-9 : !frequent;
    report.add({std::string(reported ? "frequent " : "missed ") + std::to_string(x), fmt(f), fmt(est), fmt(est - f),
                fmt(floor_mass), ok});
  }
  std::size_t max_survivors = 0;
  for (auto c : result.survivors) max_survivors = std::max(max_survivors, c);
  report.add({"frequent candidates", std::to_string(q.candidate_bound()), std::to_string(max_survivors), "0",
              std::to_string(q.candidate_bound()), max_survivors <= q.candidate_bound()});
  return report;
}

ErrorReport run_hhh(const Ingested& in, const HarnessOptions& opts) {
  require_strict(in, "hhh");
  FrequentQuery q{opts.s.value_or(4), opts.epsilon.value_or(0.5)};
  Hierarchy tree = [&] {
    if (!opts.hierarchy) return Hierarchy::regular(in.stream.n, 2);
    std::ifstream file(*opts.hierarchy);
    if (!file) throw std::runtime_error("cannot open hierarchy file " + opts.hierarchy->string());
    return Hierarchy::parse(file, in.stream.n);
  }();
  HierarchySketch sketch = HierarchySketch::for_hhh(std::move(tree), q);
  for (const auto& u : in.stream.updates) sketch.update(u);
  const HhhReport found = hhh(sketch, q);
  const Hierarchy& h = sketch.hierarchy();

  ErrorReport report;
  report.note("hhh s=" + std::to_string(q.s) + " epsilon=" + fmt(q.epsilon) + " height=" + std::to_string(h.height()) +
              " s'=" + std::to_string(sketch.s_prime()));

  // Exact node masses, and exact discounted masses relative to the declared set.
  std::vector<count_t> exact(h.node_count(), 0);
  for (item_t x = 0; x < h.domain_size(); ++x) {
    node_id v = h.leaf(x);
    const count_t f = in.oracle.exact_point(x);
    exact[v] += f;
    for (auto p = h.parent(v); p; p = h.parent(*p)) exact[*p] += f;
  }
  std::vector<bool> declared(h.node_count(), false);
  for (const auto& e : found.nodes) declared[e.node] = true;

  const count_t m = in.oracle.mass();
  const auto s = static_cast<wide_t>(q.s);
  std::vector<count_t> covered(h.node_count(), 0);
  std::vector<Ratio> slack(h.node_count());
  for (unsigned d = h.height() + 1; d-- > 0;) {
    for (node_id v : h.nodes_at_depth(d)) {
      count_t below = 0;
      Ratio below_slack(0);
      for (node_id c : h.children(v)) {
        below += covered[c];
        below_slack = below_slack + slack[c];
      }
      const count_t disc = exact[v] - below;
      const Ratio own = point_error_bound(sketch.level(d).params(), m, exact[v]);
      if (declared[v]) {
        const Ratio floor_mass = Ratio(m, s) - own;
        report.add({"hhh " + h.name(v), fmt(disc), fmt(sketch.node_estimate(v)),
                    fmt(sketch.node_estimate(v) - exact[v]), to_string(floor_mass),
                    Ratio(disc) >= floor_mass});
        covered[v] = exact[v];
        slack[v] = own;
      } else {
        covered[v] = below;
        slack[v] = below_slack;
        if (static_cast<wide_t>(disc) * s >= m) {
          const Ratio ceiling = Ratio(m, s) + below_slack;
          report.add({"unreported " + h.name(v), fmt(disc), fmt(sketch.node_estimate(v)),
                    fmt(sketch.node_estimate(v) - exact[v]), to_string(ceiling),
                      Ratio(disc) < ceiling});
        }
      }
    }
  }
  return report;
}

ErrorReport run_inner(const Ingested& r, const Ingested& s, const HarnessOptions& opts) {
  if (r.stream.n != s.stream.n) throw std::invalid_argument("inner: streams have different domain sizes");
  const SketchParams params = resolve_point_params(r.stream.n, opts);
  const bool strict = r.stream.model == Model::Strict && s.stream.model == Model::Strict;
  const Model model = strict ? Model::Strict : Model::General;
  CrPrecis a(params, model);
  CrPrecis b(params, model);
  for (const auto& u : r.stream.updates) a.update(u);
  for (const auto& u : s.stream.updates) b.update(u);
  const wide_t exact = exact_inner(r.oracle, s.oracle);

  ErrorReport report;
  report.note("inner " + describe(params) + " model=" + to_string(model));
  if (strict) {
    const wide_t est = inner_product_strict(a, b);
    const Ratio bound = inner_strict_bound(params, r.oracle.mass(), s.oracle.mass());
    report.add({"inner", fmt(exact), fmt(est), fmt(est - exact), to_string(bound),
                est >= exact && Ratio(est - exact) <= bound});
  } else {
    const Ratio est = inner_product_general(a, b);
    const Ratio err = abs(est - Ratio(exact));
    const Ratio bound = inner_general_bound(params, r.oracle.l1(), s.oracle.l1());
    report.add({"inner", fmt(exact), to_string(est), to_string(err), to_string(bound), err <= bound});
  }
  return report;
}

ErrorReport run_entropy(const Ingested& in, const HarnessOptions& opts) {
  require_strict(in, "entropy");
  EntropyParams p;
  p.alpha = opts.alpha.value_or(2.0);
  p.eps = opts.epsilon.value_or(0.1);
  const count_t m = in.oracle.mass();
  ErrorReport report;
  if (m <= 0) throw std::invalid_argument("entropy needs a non-empty stream");
  const SketchParams params = entropy_sketch_params(std::max<std::uint64_t>(in.stream.n, 2), opts.k.value_or(2), m, p);
  const CrPrecis sk = build_sketch(in.stream, params);
  const EntropyEstimate est = estimate_entropy(sk, p, m);
  const double exact = in.oracle.exact_entropy();
  const double factor = p.effective_factor();
  report.note("entropy " + describe(params) + " alpha=" + fmt(p.alpha) + " eps=" + fmt(p.eps) +
              " c=" + std::to_string(p.c) + " discovered=" + std::to_string(est.discovered.size()));
  const bool ok = exact == 0.0 ? est.total == 0.0
                               : est.total >= exact / factor - 1e-12 && est.total <= exact * factor + 1e-12;
  report.add({"entropy", fmt(exact), fmt(est.total), fmt(std::abs(est.total - exact)), fmt(factor), ok});
  return report;
}

ErrorReport run_adversarial(const HarnessOptions& opts, LeveledInstance* instance_out) {
  const LeveledInstance inst = generate(opts.s.value_or(4), opts.domain.value_or(65536), opts.seed);
  const Reconstruction rec = reconstruct(inst);
  ErrorReport report;
  report.note("adversarial s=" + std::to_string(inst.s) + " N=" + std::to_string(inst.n) + " seed=" +
              std::to_string(inst.seed) + " " + describe(reconstruction_params(inst)) +
              " separation_level=" + std::to_string(inst.separation_level()));
  for (auto l = static_cast<unsigned>(inst.s); l >= 1; --l) {
    const auto& expected = inst.levels[l - 1];
    if (expected.empty()) continue;
    const bool failed_here = rec.failure && rec.failure->level == l;
    const bool reached = !rec.failure || rec.failure->level <= l;
    const bool ok = reached && !failed_here;
    std::size_t recovered = 0;
    for (item_t x : rec.levels[l - 1]) recovered += std::binary_search(expected.begin(), expected.end(), x);
    report.add({"level " + std::to_string(l), std::to_string(expected.size()), std::to_string(recovered),
                std::to_string(expected.size() - recovered), "0", ok});
    if (failed_here) report.note("failure " + rec.failure->describe());
  }
  if (instance_out) *instance_out = inst;
  return report;
}

ErrorReport verify_all(const Ingested& in, const Ingested* second, const HarnessOptions& opts) {
  const std::uint64_t n = in.stream.n;
  HarnessOptions point_opts = opts;
  if (!point_opts.k && !point_opts.s) point_opts.s = 8;

  std::vector<item_t> items;
  std::mt19937_64 rng(opts.seed);
  if (n <= 4096) {
    for (item_t x = 0; x < n; ++x) items.push_back(x);
  } else {
    for (int i = 0; i < 1000; ++i) items.push_back(rng() % n);
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
  }
  ErrorReport report = run_point(in, point_opts, items);

  if (second) report.append(run_inner(in, *second, point_opts));
  if (in.stream.model != Model::Strict) return report;

  std::vector<std::pair<item_t, item_t>> ranges{{0, n - 1}};
  for (int i = 0; i < 64; ++i) {
    item_t a = rng() % n;
    item_t b = rng() % n;
    ranges.emplace_back(std::min(a, b), std::max(a, b));
  }
  HarnessOptions derived = opts;
  derived.k.reset();
  derived.t.reset();
  report.append(run_range(in, derived, ranges));
  if (in.oracle.mass() > 0) {
    report.append(run_quantiles(in, derived));
    report.append(run_frequent(in, derived));
    report.append(run_hhh(in, derived));
    report.append(run_entropy(in, derived));
  }
  return report;
}

namespace {

item_t parse_item_arg(const std::string& s) {
  item_t v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("bad item argument '" + s + "'");
  return v;
}

const Ingested& need(const Ingested* in, const std::string& command) {
  if (!in) throw std::invalid_argument(command + " needs --input");
  return *in;
}

}  // namespace

ErrorReport run_query(const Query& q, const Ingested* primary, const Ingested* secondary,
                      const HarnessOptions& opts) {
  const auto& c = q.command;
  if (c == "point") {
    std::vector<item_t> items;
    for (const auto& a : q.args) items.push_back(parse_item_arg(a));
    return run_point(need(primary, c), opts, items);
  }
  if (c == "range") {
    if (q.args.size() % 2 != 0 || q.args.empty()) throw std::invalid_argument("range needs <l> <r> pairs");
    std::vector<std::pair<item_t, item_t>> ranges;
    for (std::size_t i = 0; i < q.args.size(); i += 2) {
      ranges.emplace_back(parse_item_arg(q.args[i]), parse_item_arg(q.args[i + 1]));
    }
    return run_range(need(primary, c), opts, ranges);
  }
  if (!q.args.empty()) throw std::invalid_argument(c + " takes no positional arguments");
  if (c == "quantiles") return run_quantiles(need(primary, c), opts);
  if (c == "frequent") return run_frequent(need(primary, c), opts);
  if (c == "hhh") return run_hhh(need(primary, c), opts);
  if (c == "inner") {
    if (!secondary) throw std::invalid_argument("inner needs --input2");
    return run_inner(need(primary, c), *secondary, opts);
  }
  if (c == "entropy") return run_entropy(need(primary, c), opts);
  if (c == "adversarial") return run_adversarial(opts);
  if (c == "verify-all") return verify_all(need(primary, c), secondary, opts);
  throw std::invalid_argument("unknown command '" + c + "'");
}

}  // namespace crprecis
