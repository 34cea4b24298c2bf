#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "permcycles/bounds_tv.hpp"
#include "permcycles/config.hpp"
#include "permcycles/count_table.hpp"
#include "permcycles/dickman.hpp"
#include "permcycles/errors.hpp"
#include "permcycles/exact_counts.hpp"
#include "permcycles/export.hpp"
#include "permcycles/parallel.hpp"
#include "permcycles/sampler.hpp"
#include "permcycles/stein.hpp"

namespace permcycles::cli {

namespace {

using nlohmann::json;
using detail::require;

enum class Format { json, csv };

struct Common {
  std::string out = "-";
  std::string format = "json";
  Format fmt() const {
    if (format == "json") return Format::json;
    if (format == "csv") return Format::csv;
    throw DomainError("--format must be json or csv, got '" + format + "'");
  }
};

json header(const std::string& command) {
  return json{{"schema_version", kSchemaVersion}, {"command", command}};
}

std::string high_string(const HighFloat& x) { return x.str(25, std::ios_base::scientific); }

TableMode pick_mode(bool exact, std::size_t n) {
  if (exact) return TableMode::exact;
  return n <= 200 ? TableMode::exact : TableMode::log_double;
}

void emit(const Common& c, std::ostream& out, const std::string& text) {
  if (c.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw DomainError("cannot open output file '" + c.out + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
  c.format = default_format;
  sub->add_option("--out", c.out, "output file ('-' for stdout)");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

std::string cycle_type_string(const Permutation& p) {
  auto lengths = cycle_structure(p).lengths;
  std::ostringstream s;
  for (auto it = lengths.rbegin(); it != lengths.rend(); ++it)
    s << (it == lengths.rbegin() ? "" : " ") << *it;
  return s.str();
}

std::string one_line(const Permutation& p) {
  std::ostringstream s;
  for (std::size_t i = 0; i < p.size(); ++i) s << (i ? " " : "") << p[i];
  return s.str();
}

// ---- count ----

struct CountArgs {
  Common io;
  std::size_t n = 0, r = 0;
  bool exact = false;
  bool table = false;
  std::optional<std::size_t> ratio_k;
  bool dickman = false;
};

int do_count(const CountArgs& a, std::ostream& out, std::ostream& err) {
  require(a.r >= 1 && a.r <= a.n, "need 1 <= r <= n");
  const CountTable table(a.n, a.r, pick_mode(a.exact, a.n));
  if (a.table) {
    if (a.io.fmt() == Format::csv) {
      std::ostringstream s;
      write_table_csv(s, table);
      emit(a.io, out, s.str());
    } else {
      json j = header("count");
      j["n"] = a.n;
      j["r"] = a.r;
      j["mode"] = table.is_exact() ? "exact" : "log_double";
      json rows = json::array();
      for (std::size_t m = 0; m <= a.n; ++m) {
        json row{{"m", m}, {"nu_double", table.value(m)}};
        if (table.is_exact()) row["nu"] = to_string(table.exact(m));
        rows.push_back(row);
      }
      j["table"] = rows;
      emit(a.io, out, dump(j));
    }
    return kOk;
  }

  json j = header("count");
  j["n"] = a.n;
  j["r"] = a.r;
  j["u"] = static_cast<double>(a.n) / static_cast<double>(a.r);
  j["mode"] = table.is_exact() ? "exact" : "log_double";
  if (table.is_exact()) {
    j["count"] = table.count(a.n).str();
    j["nu"] = to_string(table.exact(a.n));
  }
  j["nu_double"] = table.value(a.n);
  j["log_nu"] = static_cast<double>(table.log_value(a.n));
  j["in_regime"] = in_long_cycle_regime(a.n, a.r);
  if (a.ratio_k) {
    const auto rep = nu_ratio_check(a.n, a.r, *a.ratio_k, table);
    if (!rep.in_regime)
      err << "warning: r outside sqrt(n log n) <= r <= n; the xi prediction is not expected to hold\n";
    j["nu_ratio"] = {{"k", rep.k},
                     {"exact_ratio", rep.exact_ratio},
                     {"xi", rep.xi},
                     {"predicted", rep.predicted},
                     {"relative_gap", rep.relative_gap},
                     {"envelope", rep.envelope},
                     {"in_regime", rep.in_regime}};
  }
  if (a.dickman) {
    const auto rep = dickman_tracking(a.n, a.r, table);
    j["dickman"] = {{"rho", rep.rho},
                    {"relative_error", rep.relative_error},
                    {"envelope", rep.envelope}};
  }
  if (a.io.fmt() == Format::csv) {
    std::ostringstream s;
    s << std::setprecision(17) << "n,r,count,nu,nu_double\n"
      << a.n << ',' << a.r << ',' << (table.is_exact() ? table.count(a.n).str() : "") << ','
      << (table.is_exact() ? to_string(table.exact(a.n)) : "") << ',' << table.value(a.n) << '\n';
    emit(a.io, out, s.str());
  } else {
    emit(a.io, out, dump(j));
  }
  return kOk;
}

// ---- pmf ----

struct PmfArgs {
  Common io;
  std::size_t n = 0, r = 0, d = 1;
  bool exact = false;
};

template <class P>
int emit_pmf(const PmfArgs& a, const SparsePmf<P>& pmf, std::ostream& out) {
  if (a.io.fmt() == Format::csv) {
    std::ostringstream s;
    write_pmf_csv(s, pmf);
    emit(a.io, out, s.str());
    return kOk;
  }
  json j = header("pmf");
  j["n"] = a.n;
  j["r"] = a.r;
  j["d"] = a.d;
  j["mode"] = std::is_same_v<P, Rational> ? "exact" : "double";
  json entries = json::array();
  for (const auto& [c, p] : pmf.entries) {
    json e{{"counts", c.counts}};
    if constexpr (std::is_same_v<P, Rational>) {
      e["probability"] = to_string(p);
      e["probability_double"] = to_double(p);
    } else {
      e["probability"] = p;
    }
    entries.push_back(e);
  }
  j["support"] = pmf.support_size();
  j["entries"] = entries;
  emit(a.io, out, dump(j));
  return kOk;
}

int do_pmf(const PmfArgs& a, std::ostream& out) {
  require(a.r >= 1 && a.r <= a.n, "need 1 <= r <= n");
  require(a.d >= 1, "need d >= 1");
  if (a.exact || a.n <= 200) return emit_pmf(a, joint_pmf<Rational>(a.n, a.r, a.d), out);
  return emit_pmf(a, joint_pmf<double>(a.n, a.r, a.d), out);
}

// ---- sample ----

struct SampleArgs {
  Common io;
  std::size_t n = 0, r = 0, count = 1;
  std::string method = "sequential";
  std::uint64_t seed = 0;
  bool full = false;
  std::size_t d = 0;
  std::optional<std::size_t> burn_in, thinning;
};

SamplerConfig sampler_config(std::size_t n, std::size_t r, const std::string& method,
                             std::uint64_t seed, std::optional<std::size_t> burn_in,
                             std::optional<std::size_t> thinning, std::ostream& err) {
  SamplerConfig cfg;
  cfg.n = n;
  cfg.r = r;
  cfg.method = parse_sampler_method(method);
  cfg.seed = seed;
  cfg.retry_cap = retry_cap();
  cfg.mcmc_burn_in = burn_in.value_or(20 * n);
  cfg.mcmc_thinning = thinning.value_or(n);
  cfg.validate();
  if (cfg.method == SamplerMethod::rejection) {
    const CountTable t(n, r, TableMode::log_double);
    const double nu = t.value(n);
    if (nu < 1e-6)
      err << "warning: rejection acceptance probability nu(n, r) = " << nu
          << " is below 1e-6; expect about " << 1.0 / nu << " draws per sample\n";
  }
  return cfg;
}

int do_sample(const SampleArgs& a, std::size_t threads, std::ostream& out, std::ostream& err) {
  const auto cfg = sampler_config(a.n, a.r, a.method, a.seed, a.burn_in, a.thinning, err);
  require(a.count >= 1, "need --count >= 1");
  require(a.d <= a.n, "need d <= n");
  const auto samples = draw_samples(cfg, a.count, threads);

  auto row = [&](const Permutation& p) {
    if (a.full) return one_line(p);
    if (a.d > 0) {
      std::ostringstream s;
      const auto c = cycle_counts(p, a.d);
      for (std::size_t k = 0; k < a.d; ++k) s << (k ? "," : "") << c.counts[k];
      return s.str();
    }
    return cycle_type_string(p);
  };

  if (a.io.fmt() == Format::csv) {
    std::ostringstream s;
    s << "sample,";
    if (a.full) {
      s << "permutation\n";
    } else if (a.d > 0) {
      for (std::size_t k = 1; k <= a.d; ++k) s << "c_" << k << (k < a.d ? "," : "\n");
    } else {
      s << "cycle_type\n";
    }
    for (std::size_t i = 0; i < samples.size(); ++i) s << i << ',' << row(samples[i]) << '\n';
    emit(a.io, out, s.str());
    return kOk;
  }
  json j = header("sample");
  j["n"] = a.n;
  j["r"] = a.r;
  j["method"] = a.method;
  j["seed"] = a.seed;
  j["count"] = a.count;
  j["layout"] = a.full ? "permutation" : (a.d > 0 ? "counts" : "cycle_type");
  json rows = json::array();
  for (const auto& p : samples) rows.push_back(row(p));
  j["samples"] = rows;
  emit(a.io, out, dump(j));
  return kOk;
}

// ---- dickman ----

struct DickmanArgs {
  Common io;
  std::string quantity;
  std::vector<double> t;
  std::string grid;
  double v = 1.0;
  double tol = 1e-12;
};

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream s(spec);
  std::string item;
  while (std::getline(s, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      require(used == item.size(), "");
    } catch (const std::exception&) {
      throw DomainError("--grid expects lo:hi:step, got '" + spec + "'");
    }
  }
  require(parts.size() == 3, "--grid expects lo:hi:step");
  require(parts[2] > 0 && parts[1] >= parts[0], "--grid needs lo <= hi and step > 0");
  std::vector<double> out;
  const auto steps = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  require(steps < 10'000'000, "--grid has too many points");
  for (std::size_t i = 0; i <= steps; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return out;
}

int do_dickman(const DickmanArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<double> ts = a.t;
  if (!a.grid.empty()) {
    const auto g = parse_grid(a.grid);
    ts.insert(ts.end(), g.begin(), g.end());
  }
  require(!ts.empty(), "give --t or --grid");
  double t_hi = 0;
  for (double t : ts) t_hi = std::max(t_hi, t);
  const DickmanEvaluator rho(a.tol, std::max(200.0, std::ceil(t_hi) + 1));
  const XiEvaluator xi_eval(std::min(1e-13, a.tol));

  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  if (a.quantity == "rho") {
    columns = {"t", "rho", "log_rho"};
    for (double t : ts) rows.push_back({t, rho.rho(t), rho.log_rho(t)});
  } else if (a.quantity == "xi") {
    columns = {"t", "xi", "residual"};
    for (double t : ts) {
      require(t >= 1, "xi needs t >= 1");
      const double x = t == 1.0 ? xi_or_limit(t) : xi_eval(t);
      rows.push_back({t, x, std::expm1(x) - t * x});
    }
  } else if (a.quantity == "ratio") {
    columns = {"t", "v", "ratio", "predicted", "relative_gap", "large_shift"};
    for (double t : ts) {
      const auto rep = rho_ratio_check(rho, t, a.v);
      if (rep.large_shift)
        err << "warning: shift v = " << a.v << " > 3 is outside the bounded-shift regime\n";
      rows.push_back({t, a.v, rep.ratio, rep.predicted, rep.relative_gap, rep.large_shift});
    }
  } else if (a.quantity == "gamma-check") {
    columns = {"t", "log_rho", "log_inverse_gamma", "holds"};
    for (double t : ts) {
      const auto rep = gamma_bound_check(rho, t);
      rows.push_back({t, rep.log_rho, rep.log_inverse_gamma, rep.holds});
    }
  } else {
    throw DomainError("dickman quantity must be rho, xi, ratio or gamma-check");
  }

  if (a.io.fmt() == Format::csv) {
    std::ostringstream s;
    s << std::setprecision(17);
    for (std::size_t i = 0; i < columns.size(); ++i) s << (i ? "," : "") << columns[i];
    s << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        s << (i ? "," : "");
        if (row[i].is_boolean())
          s << (row[i].get<bool>() ? "true" : "false");
        else
          s << row[i].get<double>();
      }
      s << '\n';
    }
    emit(a.io, out, s.str());
    return kOk;
  }
  json j = header("dickman");
  j["quantity"] = a.quantity;
  j["tolerance"] = a.tol;
  json values = json::array();
  for (const auto& row : rows) {
    json v;
    for (std::size_t i = 0; i < columns.size(); ++i) v[columns[i]] = row[i];
    values.push_back(v);
  }
  j["values"] = values;
  emit(a.io, out, dump(j));
  return kOk;
}

// ---- stein-verify ----

struct SteinArgs {
  Common io;
  std::size_t n = 0, r = 0, d = 1;
  bool exhaustive = false;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
  std::string method = "sequential";
  std::size_t witness_limit = 20;
  std::optional<std::size_t> sweep_n;
};

json lemma_json(const LemmaSweepReport& rep) {
  json mismatches = json::array();
  for (const auto& m : rep.catalogue)
    mismatches.push_back({{"form", m.form},
                          {"witness", m.witness.to_string()},
                          {"cycle_type", cycle_type_string(m.witness)},
                          {"n", m.witness.size()},
                          {"r", m.r},
                          {"d", m.d},
                          {"k", m.k},
                          {"enumerated", to_string(m.enumerated)},
                          {"formula", to_string(m.formula)}});
  return {{"checks", rep.checks},
          {"closed_form_mismatches", rep.closed_form_mismatches},
          {"lemma9_mismatches", rep.lemma9_mismatches},
          {"lemma9_simplified_mismatches", rep.lemma9_simplified_mismatches},
          {"lemma10_mismatches", rep.lemma10_mismatches},
          {"lemma10_capacity_mismatches", rep.lemma10_capacity_mismatches},
          {"lemma10_simplified_as_printed_mismatches", rep.lemma10_simplified_mismatches},
          {"lemma10_mismatches_by_n", rep.lemma10_mismatches_by_n},
          {"mismatches", mismatches}};
}

int do_stein(const SteinArgs& a, std::size_t threads, std::ostream& out, std::ostream& err) {
  json j = header("stein-verify");
  if (a.sweep_n) {
    require(a.d >= 1, "need d >= 1");
    j["mode"] = "sweep";
    j["n_max"] = *a.sweep_n;
    j["d_max"] = a.d;
    j["lemma_comparison"] = lemma_json(lemma_sweep(*a.sweep_n, a.d, a.witness_limit));
    emit(a.io, out, dump(j));
    return kOk;
  }
  require(a.d >= 1 && a.d < a.r && a.r <= a.n, "need 1 <= d < r <= n");
  j["n"] = a.n;
  j["r"] = a.r;
  j["d"] = a.d;
  j["C"] = 1.0;
  const bool exhaustive = a.exhaustive || !a.samples;
  if (exhaustive) {
    j["mode"] = "exhaustive";
    const auto rep = stein_terms_exact(a.n, a.r, a.d);
    j["states"] = rep.states;
    json terms = json::array();
    for (const auto& t : rep.terms)
      terms.push_back({{"k", t.k},
                       {"term_a", to_string(t.term_a)},
                       {"term_a_double", to_double(t.term_a)},
                       {"term_b", to_string(t.term_b)},
                       {"term_b_double", to_double(t.term_b)},
                       {"mean_scaled_a", to_string(t.mean_scaled_a)},
                       {"lemma9_leading_bound", lemma9_leading_bound(a.n, t.k, a.d)},
                       {"lemma10_leading_bound", lemma10_leading_bound(a.n, t.k, a.d)}});
    j["terms"] = terms;
    j["bound"] = to_string(rep.total);
    j["bound_double"] = to_double(rep.total);
    const HighFloat tv = tv_exact(joint_pmf<Rational>(a.n, a.r, a.d), PoissonSpec(a.d));
    j["tv_exact"] = high_string(tv);
    j["bound_dominates_tv"] = to_high(rep.total) >= tv;
    j["lemma_comparison"] = lemma_json(lemma_check(a.n, a.r, a.d, a.witness_limit));
  } else {
    j["mode"] = "monte_carlo";
    const auto method = parse_sampler_method(a.method);
    if (!in_long_cycle_regime(a.n, a.r))
      err << "warning: r outside sqrt(n log n) <= r <= n\n";
    const auto rep = stein_terms_mc(a.n, a.r, a.d, *a.samples, a.seed, threads, method);
    j["samples"] = rep.samples;
    j["seed"] = rep.seed;
    j["method"] = a.method;
    json terms = json::array();
    for (const auto& t : rep.terms)
      terms.push_back({{"k", t.k},
                       {"term_a", t.term_a.mean},
                       {"term_a_se", t.term_a.standard_error},
                       {"term_b", t.term_b.mean},
                       {"term_b_se", t.term_b.standard_error},
                       {"mean_scaled_a", t.scaled_a.mean},
                       {"mean_scaled_a_se", t.scaled_a.standard_error},
                       {"lemma9_leading_bound", lemma9_leading_bound(a.n, t.k, a.d)},
                       {"lemma10_leading_bound", lemma10_leading_bound(a.n, t.k, a.d)}});
    j["terms"] = terms;
    j["bound"] = rep.total.mean;
    j["bound_se"] = rep.total.standard_error;
  }
  emit(a.io, out, dump(j));
  return kOk;
}

// ---- tv / bound / sweep ----

HighFloat exact_tv(std::size_t n, std::size_t r, std::size_t d, std::size_t* support) {
  const PoissonSpec spec(d);
  if (n <= 200) {
    const auto pmf = joint_pmf<Rational>(n, r, d);
    if (support) *support = pmf.support_size();
    return tv_exact(pmf, spec);
  }
  const auto pmf = joint_pmf<double>(n, r, d);
  if (support) *support = pmf.support_size();
  return tv_exact(pmf, spec);
}

struct TvArgs {
  Common io;
  std::size_t n = 0, r = 0, d = 1;
  std::string mode = "exact";
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::string method = "sequential";
  std::size_t bootstrap = kDefaultBootstrap;
};

int do_tv(const TvArgs& a, std::size_t threads, std::ostream& out, std::ostream& err) {
  require(a.r >= 1 && a.r <= a.n, "need 1 <= r <= n");
  require(a.d >= 1 && a.d <= a.n, "need 1 <= d <= n");
  if (!in_long_cycle_regime(a.n, a.r)) err << "warning: r outside sqrt(n log n) <= r <= n\n";
  json j = header("tv");
  j["n"] = a.n;
  j["r"] = a.r;
  j["d"] = a.d;
  j["mode"] = a.mode;
  if (a.mode == "exact") {
    std::size_t support = 0;
    const HighFloat tv = exact_tv(a.n, a.r, a.d, &support);
    j["tv"] = high_string(tv);
    j["tv_double"] = static_cast<double>(tv);
    j["support"] = support;
  } else if (a.mode == "mc") {
    const auto cfg = sampler_config(a.n, a.r, a.method, a.seed, std::nullopt, std::nullopt, err);
    const auto perms = draw_samples(cfg, a.samples, threads);
    std::vector<CountsVector> counts;
    counts.reserve(perms.size());
    for (const auto& p : perms) counts.push_back(cycle_counts(p, a.d));
    const auto est = tv_empirical(counts, PoissonSpec(a.d), a.bootstrap, a.seed);
    j["seed"] = a.seed;
    j["method"] = a.method;
    j["samples"] = est.samples;
    j["tv"] = est.estimate;
    j["standard_error"] = est.standard_error;
    j["bootstrap_resamples"] = est.resamples;
    j["support"] = est.support;
    j["bias_scale"] = est.bias_scale;
  } else {
    throw DomainError("--mode must be exact or mc");
  }
  if (a.n >= 2) j["thm1_C1"] = thm1_bound(a.n, a.r, a.d, 1.0).total;
  j["macroscopic_C1"] = macroscopic_bound(a.n, a.r, a.d, 1.0);
  emit(a.io, out, dump(j));
  return kOk;
}

struct BoundArgs {
  Common io;
  std::size_t n = 0, r = 0, d = 1;
  double C = 1.0;
  std::string which = "both";
};

int do_bound(const BoundArgs& a, std::ostream& out, std::ostream& err) {
  require(a.which == "thm1" || a.which == "macroscopic" || a.which == "both",
          "--which must be thm1, macroscopic or both");
  if (a.r >= 1 && a.r <= a.n && !in_long_cycle_regime(a.n, a.r))
    err << "warning: r outside sqrt(n log n) <= r <= n\n";
  json j = header("bound");
  j["n"] = a.n;
  j["r"] = a.r;
  j["d"] = a.d;
  j["C"] = a.C;
  if (a.which != "macroscopic") {
    const auto b = thm1_bound(a.n, a.r, a.d, a.C);
    j["thm1"] = {{"u", b.u},
                 {"H_d", b.harmonic_number},
                 {"harmonic_term", b.harmonic_term},
                 {"fixed_term", b.fixed_term},
                 {"asymptotic_term", b.asymptotic_term},
                 {"total", b.total},
                 {"assembled_leading", b.assembled_leading}};
  }
  if (a.which != "thm1") j["macroscopic"] = {{"total", macroscopic_bound(a.n, a.r, a.d, a.C)}};
  if (a.io.fmt() == Format::csv) {
    std::ostringstream s;
    s << std::setprecision(17) << "n,r,d,C,thm1,macroscopic\n"
      << a.n << ',' << a.r << ',' << a.d << ',' << a.C << ',';
    if (j.contains("thm1")) s << j["thm1"]["total"].get<double>();
    s << ',';
    if (j.contains("macroscopic")) s << j["macroscopic"]["total"].get<double>();
    s << '\n';
    emit(a.io, out, s.str());
    return kOk;
  }
  emit(a.io, out, dump(j));
  return kOk;
}

struct SweepArgs {
  Common io;
  std::vector<std::size_t> n, r, d;
  std::vector<double> u;
  bool r_equals_n = false;
  bool no_tv = false;
};

int do_sweep(const SweepArgs& a, std::size_t threads, std::ostream& out) {
  require(!a.n.empty() && !a.d.empty(), "sweep needs --n and --d lists");
  struct Point {
    std::size_t n, r, d;
  };
  std::vector<Point> grid;
  for (auto n : a.n) {
    std::vector<std::size_t> rs = a.r;
    for (double u : a.u) {
      require(u >= 1, "--u values must be >= 1");
      rs.push_back(static_cast<std::size_t>(std::llround(static_cast<double>(n) / u)));
    }
    if (a.r_equals_n) rs.push_back(n);
    for (auto r : rs)
      for (auto d : a.d) {
        if (r < 1 || r > n) continue;
        require(d >= 1, "--d values must be >= 1");
        grid.push_back({n, r, d});
      }
  }
  require(!grid.empty(), "sweep grid is empty (need 1 <= r <= n)");
  require(a.n.size() == 0 || *std::min_element(a.n.begin(), a.n.end()) >= 2, "sweep needs n >= 2");

  std::vector<std::string> rows(grid.size());
  parallel_chunks(grid.size(), threads, [&](std::size_t i) {
    const auto [n, r, d] = grid[i];
    std::ostringstream s;
    s << std::setprecision(17) << n << ',' << r << ',' << d << ','
      << static_cast<double>(n) / static_cast<double>(r) << ',';
    if (!a.no_tv) s << static_cast<double>(exact_tv(n, r, d, nullptr));
    s << ',' << thm1_bound(n, r, d, 1.0).total << ',' << macroscopic_bound(n, r, d, 1.0) << '\n';
    rows[i] = s.str();
  });

  if (a.io.fmt() == Format::json) {
    json j = header("sweep");
    json points = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::stringstream s(rows[i]);
      std::string field;
      std::vector<std::string> f;
      while (std::getline(s, field, ',')) f.push_back(field);
      json p{{"n", grid[i].n}, {"r", grid[i].r}, {"d", grid[i].d}, {"u", std::stod(f[3])},
             {"thm1_C1", std::stod(f[5])}, {"macroscopic_C1", std::stod(f[6])}};
      p["tv"] = f[4].empty() ? json(nullptr) : json(std::stod(f[4]));
      points.push_back(p);
    }
    j["points"] = points;
    emit(a.io, out, dump(j));
    return kOk;
  }
  std::string text = "n,r,d,u,tv,thm1_C1,macroscopic_C1\n";
  for (const auto& row : rows) text += row;
  emit(a.io, out, text);
  return kOk;
}

// ---- --check ----

int do_check(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot open '" << path << "'\n";
    return kValidationError;
  }
  std::stringstream buffer;
  buffer << f.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    err << "error: '" << path << "' is empty\n";
    return kValidationError;
  }
  if (text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      err << "error: invalid JSON: " << e.what() << '\n';
      return kValidationError;
    }
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
      err << "error: missing integer schema_version\n";
      return kValidationError;
    }
    if (j["schema_version"].get<int>() != kSchemaVersion) {
      err << "error: schema_version " << j["schema_version"] << " is not supported\n";
      return kValidationError;
    }
    if (!j.contains("command") || !j["command"].is_string()) {
      err << "error: missing command field\n";
      return kValidationError;
    }
    out << "ok: json, command " << j["command"].get<std::string>() << '\n';
    return kOk;
  }

  std::stringstream s(text);
  std::string line;
  std::getline(s, line);
  auto fields = [](const std::string& l) {
    return static_cast<std::size_t>(std::count(l.begin(), l.end(), ',')) + 1;
  };
  const std::size_t columns = fields(line);
  if (line.empty()) {
    err << "error: empty CSV header\n";
    return kValidationError;
  }
  std::size_t rows = 0, lineno = 1;
  while (std::getline(s, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (fields(line) != columns) {
      err << "error: line " << lineno << " has " << fields(line) << " fields, header has "
          << columns << '\n';
      return kValidationError;
    }
    ++rows;
  }
  out << "ok: csv, " << rows << " rows, " << columns << " columns\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cycle counts of permutations with bounded cycle lengths", "permcycles"};
  app.require_subcommand(0, 1);
  std::size_t threads = 1;
  std::string check_path;
  app.add_option("--threads", threads, "worker threads (results do not depend on it)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  app.add_option("--check", check_path, "re-parse a CSV/JSON file written by this tool");

  CountArgs count;
  auto* c = app.add_subcommand("count", "|S_n^r| and nu(n, r)");
  c->add_option("--n", count.n)->required();
  c->add_option("--r", count.r)->required();
  c->add_flag("--exact", count.exact, "rational arithmetic (capped by PERMCYCLES_EXACT_CAP)");
  c->add_flag("--table", count.table, "dump nu(m, r) for m = 0..n");
  c->add_option("--ratio-k", count.ratio_k, "compare nu(n-k, r)/nu(n, r) with exp((k/r) xi(u))");
  c->add_flag("--dickman", count.dickman, "compare nu(n, r) with rho(n/r)");
  add_common(c, count.io, "json");

  PmfArgs pmf;
  auto* p = app.add_subcommand("pmf", "exact law of (W_1, ..., W_d) on S_n^r");
  p->add_option("--n", pmf.n)->required();
  p->add_option("--r", pmf.r)->required();
  p->add_option("--d", pmf.d)->required();
  p->add_flag("--exact", pmf.exact, "force rational masses");
  add_common(p, pmf.io, "json");

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "uniform draws from S_n^r");
  s->add_option("--n", sample.n)->required();
  s->add_option("--r", sample.r)->required();
  s->add_option("--count", sample.count);
  s->add_option("--method", sample.method)
      ->check(CLI::IsMember({"rejection", "sequential", "mcmc"}));
  s->add_option("--seed", sample.seed);
  s->add_flag("--full", sample.full, "one-line permutations instead of cycle types");
  s->add_option("--d", sample.d, "emit (W_1, ..., W_d) per row");
  s->add_option("--burn-in", sample.burn_in, "mcmc burn-in steps (default 20 n)");
  s->add_option("--thinning", sample.thinning, "mcmc steps skipped between draws (default n)");
  add_common(s, sample.io, "csv");

  DickmanArgs dick;
  auto* dk = app.add_subcommand("dickman", "Dickman rho and xi numerics");
  dk->add_option("quantity", dick.quantity, "rho | xi | ratio | gamma-check")
      ->required()
      ->check(CLI::IsMember({"rho", "xi", "ratio", "gamma-check"}));
  dk->add_option("--t", dick.t, "evaluation points")->delimiter(',');
  dk->add_option("--grid", dick.grid, "lo:hi:step");
  dk->add_option("--v", dick.v, "shift for ratio");
  dk->add_option("--tol", dick.tol, "panel tolerance");
  add_common(dk, dick.io, "json");

  SteinArgs stein;
  auto* sv = app.add_subcommand("stein-verify", "Stein terms and event-probability displays");
  sv->add_option("--n", stein.n);
  sv->add_option("--r", stein.r);
  sv->add_option("--d", stein.d);
  sv->add_flag("--exhaustive", stein.exhaustive, "exact expectations over S_n^r (n <= 8)");
  sv->add_option("--samples", stein.samples, "Monte Carlo over sampled sigma");
  sv->add_option("--seed", stein.seed);
  sv->add_option("--method", stein.method)
      ->check(CLI::IsMember({"rejection", "sequential", "mcmc"}));
  sv->add_option("--witness-limit", stein.witness_limit,
                 "witnesses kept for the simplified P[B_k] display");
  sv->add_option("--sweep", stein.sweep_n,
                 "exhaustive display comparison for all n <= N, d <= --d");
  add_common(sv, stein.io, "json");

  TvArgs tv;
  auto* t = app.add_subcommand("tv", "total variation to the Poisson reference");
  t->add_option("--n", tv.n)->required();
  t->add_option("--r", tv.r)->required();
  t->add_option("--d", tv.d)->required();
  t->add_option("--mode", tv.mode)->check(CLI::IsMember({"exact", "mc"}));
  t->add_option("--samples", tv.samples);
  t->add_option("--seed", tv.seed);
  t->add_option("--method", tv.method)->check(CLI::IsMember({"rejection", "sequential", "mcmc"}));
  t->add_option("--bootstrap", tv.bootstrap);
  add_common(t, tv.io, "json");

  BoundArgs bound;
  auto* b = app.add_subcommand("bound", "evaluate the TV bounds");
  b->add_option("--n", bound.n)->required();
  b->add_option("--r", bound.r)->required();
  b->add_option("--d", bound.d)->required();
  b->add_option("--C", bound.C);
  b->add_option("--which", bound.which)->check(CLI::IsMember({"thm1", "macroscopic", "both"}));
  add_common(b, bound.io, "json");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "TV and bounds over a grid");
  sw->add_option("--n", sweep.n)->delimiter(',')->required();
  sw->add_option("--r", sweep.r)->delimiter(',');
  sw->add_option("--u", sweep.u, "r = round(n / u)")->delimiter(',');
  sw->add_flag("--r-equals-n", sweep.r_equals_n);
  sw->add_option("--d", sweep.d)->delimiter(',')->required();
  sw->add_flag("--no-tv", sweep.no_tv, "bounds only");
  add_common(sw, sweep.io, "csv");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  try {
    if (!check_path.empty()) return do_check(check_path, out, err);
    if (c->parsed()) return do_count(count, out, err);
    if (p->parsed()) return do_pmf(pmf, out);
    if (s->parsed()) return do_sample(sample, threads, out, err);
    if (dk->parsed()) return do_dickman(dick, out, err);
    if (sv->parsed()) return do_stein(stein, threads, out, err);
    if (t->parsed()) return do_tv(tv, threads, out, err);
    if (b->parsed()) return do_bound(bound, out, err);
    if (sw->parsed()) return do_sweep(sweep, threads, out);
    err << "error: no subcommand given (see --help)\n";
    return kValidationError;
  } catch (const ResourceError& e) {
    err << "error: resource cap: " << e.what() << '\n';
    return kResourceError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace permcycles::cli
