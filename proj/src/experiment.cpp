#include "affwalk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "affwalk/combinatorics.hpp"
#include "affwalk/criteria.hpp"
#include "affwalk/estimators.hpp"
#include "affwalk/heat_kernel.hpp"
#include "affwalk/report.hpp"
#include "affwalk/toy_model.hpp"
#include "affwalk/walk.hpp"

namespace affwalk {

using nlohmann::json;

namespace {

bool is_nonnegative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

}  // namespace

void to_json(json& j, const ExperimentConfig& cfg) {
  j = json{{"experiment", cfg.experiment},
           {"seed", cfg.seed},
           {"workers", cfg.workers},
           {"output_dir", cfg.output_dir},
           {"params", cfg.params}};
}

void from_json(const json& j, ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  if (!j.is_object()) {
    throw ConfigError({"config: top level must be an object"});
  }
  static const std::set<std::string> known{"experiment", "seed", "workers", "output_dir",
                                           "params"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      errors.push_back("config." + key + ": unknown key");
    }
  }
  if (j.contains("experiment") && j["experiment"].is_string()) {
    cfg.experiment = j["experiment"].get<std::string>();
  } else {
    errors.emplace_back("config.experiment: required string");
  }
  if (j.contains("seed")) {
    if (is_nonnegative_integer(j["seed"])) {
      cfg.seed = j["seed"].get<std::uint64_t>();
    } else {
      errors.emplace_back("config.seed: must be a nonnegative integer");
    }
  }
  if (j.contains("workers")) {
    if (is_nonnegative_integer(j["workers"]) && j["workers"].get<std::uint64_t>() >= 1) {
      cfg.workers = j["workers"].get<unsigned>();
    } else {
      errors.emplace_back("config.workers: must be a positive integer");
    }
  }
  if (j.contains("output_dir")) {
    if (j["output_dir"].is_string()) {
      cfg.output_dir = j["output_dir"].get<std::string>();
    } else {
      errors.emplace_back("config.output_dir: must be a string");
    }
  }
  if (j.contains("params")) {
    if (j["params"].is_object()) {
      cfg.params = j["params"];
    } else {
      errors.emplace_back("config.params: must be an object");
    }
  }
  if (!errors.empty()) {
    throw ConfigError(errors);
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError({"cannot open config file " + path});
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  return j.get<ExperimentConfig>();
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text =
      json{{"experiment", cfg.experiment}, {"seed", cfg.seed}, {"params", cfg.params}}.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out = "invalid configuration:";
  for (const auto& s : items) {
    out += "\n  - " + s;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

namespace {

// Reads experiment parameters with defaults, collecting every violation
// before anything runs.
class Params {
public:
  explicit Params(const json& j) : j_(j) {}

  double real(const std::string& key, double def) {
    used_.insert(key);
    if (!j_.contains(key)) {
      return def;
    }
    if (!j_[key].is_number()) {
      fail(key, "must be a number");
      return def;
    }
    return j_[key].get<double>();
  }

  double positive(const std::string& key, double def) {
    const double v = real(key, def);
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(key, "must be positive and finite (got " + format_double(v) + ")");
    }
    return v;
  }

  std::uint64_t count(const std::string& key, std::uint64_t def, std::uint64_t min = 1) {
    used_.insert(key);
    if (!j_.contains(key)) {
      return def;
    }
    if (!is_nonnegative_integer(j_[key]) || j_[key].get<std::uint64_t>() < min) {
      fail(key, "must be an integer >= " + std::to_string(min));
      return def;
    }
    return j_[key].get<std::uint64_t>();
  }

  std::uint64_t even(const std::string& key, std::uint64_t def) {
    const auto v = count(key, def, 2);
    if (v % 2 != 0) {
      fail(key, "must be even (got " + std::to_string(v) + ")");
    }
    return v;
  }

  std::vector<double> reals(const std::string& key, std::vector<double> def, bool positive_only) {
    used_.insert(key);
    if (!j_.contains(key)) {
      return def;
    }
    std::vector<double> out;
    if (!j_[key].is_array() || j_[key].empty()) {
      fail(key, "must be a nonempty array of numbers");
      return def;
    }
    for (const auto& v : j_[key]) {
      if (!v.is_number() || (positive_only && !(v.get<double>() > 0.0))) {
        fail(key, positive_only ? "entries must be positive numbers" : "entries must be numbers");
        return def;
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

  std::vector<std::uint64_t> counts(const std::string& key, std::vector<std::uint64_t> def,
                                    bool even_only, std::uint64_t min = 1) {
    used_.insert(key);
    if (!j_.contains(key)) {
      return def;
    }
    std::vector<std::uint64_t> out;
    if (!j_[key].is_array() || j_[key].empty()) {
      fail(key, "must be a nonempty array of integers");
      return def;
    }
    for (const auto& v : j_[key]) {
      if (!is_nonnegative_integer(v) || v.get<std::uint64_t>() < min ||
          (even_only && v.get<std::uint64_t>() % 2 != 0)) {
        fail(key, std::string("entries must be ") + (even_only ? "even " : "") + "integers >= " +
                      std::to_string(min));
        return def;
      }
      out.push_back(v.get<std::uint64_t>());
    }
    return out;
  }

  std::vector<long> integers(const std::string& key, std::vector<long> def) {
    used_.insert(key);
    if (!j_.contains(key)) {
      return def;
    }
    std::vector<long> out;
    if (!j_[key].is_array()) {
      fail(key, "must be an array of integers");
      return def;
    }
    for (const auto& v : j_[key]) {
      if (!v.is_number_integer()) {
        fail(key, "entries must be integers");
        return def;
      }
      out.push_back(v.get<long>());
    }
    return out;
  }

  std::string choice(const std::string& key, const std::string& def,
                     const std::vector<std::string>& allowed) {
    used_.insert(key);
    if (!j_.contains(key)) {
      return def;
    }
    if (!j_[key].is_string()) {
      fail(key, "must be a string");
      return def;
    }
    const auto v = j_[key].get<std::string>();
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) {
        list += (list.empty() ? "" : "|") + a;
      }
      fail(key, "must be one of " + list + " (got " + v + ")");
    }
    return v;
  }

  std::vector<Rational> rationals(const std::string& key, const std::vector<std::string>& def) {
    used_.insert(key);
    std::vector<Rational> out;
    auto parse = [&](const json& v) {
      if (v.is_string()) {
        return parse_rational(v.get<std::string>());
      }
      if (v.is_number_integer()) {
        return Rational(v.get<long>());
      }
      if (v.is_number()) {
        std::ostringstream s;
        s << v.get<double>();
        return parse_rational(s.str());
      }
      throw std::invalid_argument("not a rational");
    };
    try {
      if (!j_.contains(key)) {
        for (const auto& s : def) {
          out.push_back(parse_rational(s));
        }
        return out;
      }
      if (!j_[key].is_array()) {
        throw std::invalid_argument("not an array");
      }
      for (const auto& v : j_[key]) {
        out.push_back(parse(v));
      }
    } catch (const std::invalid_argument&) {
      fail(key, "must be an array of rationals (\"p/q\", decimals or integers)");
    }
    return out;
  }

  void fail(const std::string& key, const std::string& why) {
    errors_.push_back("params." + key + ": " + why);
  }

  void check(bool ok, const std::string& key, const std::string& why) {
    if (!ok) {
      fail(key, why);
    }
  }

  void finish() {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) {
        errors_.push_back("params." + key + ": unknown parameter");
      }
    }
    if (!errors_.empty()) {
      throw ConfigError(errors_);
    }
  }

private:
  const json& j_;
  std::set<std::string> used_;
  std::vector<std::string> errors_;
};

std::string fd(double x) { return format_double(x); }
std::string fu(std::uint64_t x) { return std::to_string(x); }

json estimate_json(const EstimateWithError& e) {
  return json{{"estimate", e.estimate},
              {"stderr", e.std_error},
              {"samples", e.samples},
              {"seed", e.seed}};
}

struct Context {
  const ExperimentConfig& cfg;
  std::string hash;
  ParallelOptions par;

  [[nodiscard]] CsvTable table(std::vector<std::string> columns) const {
    return CsvTable(std::move(columns), cfg.seed, hash);
  }

  [[nodiscard]] json provenance() const {
    return json{{"config_hash", hash},
                {"seed", cfg.seed},
                {"version", kToolVersion},
                {"config", {{"experiment", cfg.experiment}, {"params", cfg.params}}}};
  }

  [[nodiscard]] OutputFile csv(const CsvTable& t) const {
    return {cfg.experiment + ".csv", t.str()};
  }

  [[nodiscard]] OutputFile summary(json body) const {
    body["provenance"] = provenance();
    return {cfg.experiment + ".json", body.dump(2) + "\n"};
  }
};

ToyModel read_model(Params& p) {
  const auto alpha = p.reals("alpha", {1.0, std::sqrt(2.0)}, true);
  const auto probs = p.rationals("p", {"1/5", "2/5", "2/5"});
  try {
    return ToyModel(alpha, probs);
  } catch (const std::invalid_argument& e) {
    p.fail("p", e.what());
    return ToyModel({1.0}, {Rational(0), Rational(1)});
  }
}

InnovationKind read_kind(Params& p, const std::string& key) {
  return p.choice(key, "bernoulli", {"bernoulli", "gaussian"}) == "gaussian"
             ? InnovationKind::gaussian
             : InnovationKind::bernoulli;
}

ExperimentOutput kernel(const Context& ctx, Params& p) {
  const auto ts = p.reals("t_grid", {0.5, 1.0, 4.0}, true);
  const auto rs = p.reals("r_grid", {0.0, 0.5, 1.0, 2.0}, false);
  for (double r : rs) {
    p.check(r >= 0.0, "r_grid", "distances must be nonnegative");
  }
  p.finish();
  auto t = ctx.table(
      {"t", "r", "p_h2", "p_aff_diag", "ratio_to_asymptote", "quadrature_error_estimate"});
  const GroupElement e;
  for (double time : ts) {
    const auto diag = p_aff(time, e, e);
    const double ratio = std::pow(time, 1.5) * diag.value / kStatedDiagonalConstant;
    for (double r : rs) {
      const auto k = p_h2({time, r});
      t.row({fd(time), fd(r), fd(k.value), fd(diag.value), fd(ratio), fd(k.error_estimate)});
    }
  }
  return {{ctx.csv(t)}};
}

ExperimentOutput diag_asymptote(const Context& ctx, Params& p) {
  const auto ts = p.reals("t_grid", {10.0, 50.0, 100.0, 200.0}, true);
  p.finish();
  auto t = ctx.table({"t", "p_aff_diag", "t32_p_aff_diag", "ratio_to_asymptote",
                      "ratio_to_quadrature_limit", "quadrature_error_estimate"});
  const GroupElement e;
  const double limit = diagonal_limit_integral() / std::pow(2.0 * std::numbers::pi, 1.5);
  for (double time : ts) {
    const auto k = p_aff(time, e, e);
    const double scaled = std::pow(time, 1.5) * k.value;
    t.row({fd(time), fd(k.value), fd(scaled), fd(scaled / kStatedDiagonalConstant),
           fd(scaled / limit), fd(k.error_estimate)});
  }
  return {{ctx.csv(t)}};
}

ExperimentOutput walk_path(const Context& ctx, Params& p) {
  const auto n = p.count("n", 100);
  const double eps = p.positive("epsilon", 0.1);
  const InnovationSpec spec{read_kind(p, "x_innovation"), read_kind(p, "y_innovation")};
  p.finish();
  const auto path = simulate_walk(n, eps, spec, ctx.cfg.seed);
  auto t = ctx.table({"step", "S", "a", "b"});
  for (std::size_t k = 0; k <= path.n; ++k) {
    t.row({fu(k), fd(path.s[k]), fd(path.a(k)), fd(path.b(k))});
  }
  return {{ctx.csv(t)}};
}

ExperimentOutput walk_stats(const Context& ctx, Params& p) {
  const auto n = p.count("n", 10000);
  const double eps = p.positive("epsilon", 0.01);
  const auto samples = p.count("samples", 100000);
  const InnovationSpec spec{read_kind(p, "x_innovation"), read_kind(p, "y_innovation")};
  p.finish();
  auto draw = [](InnovationKind k, Philox4x64& rng) {
    return k == InnovationKind::bernoulli ? static_cast<double>(rng.sign()) : rng.normal();
  };
  auto sampler = [&](Philox4x64& rng, double* out) {
    double s = 0.0;
    CompensatedSum b;
    for (std::uint64_t k = 0; k < n; ++k) {
      const double x = draw(spec.x, rng);
      const double y = draw(spec.y, rng);
      b.add(y * std::exp(eps * s));
      s += x;
    }
    out[0] = s / std::sqrt(static_cast<double>(n));
    out[1] = eps * b.value();
  };
  const auto m = monte_carlo_multi(samples, ctx.cfg.seed, 2, sampler, ctx.par);
  json body{{"S_n_over_sqrt_n",
             {{"mean", m.means[0].estimate},
              {"stderr", m.means[0].std_error},
              {"n_samples", m.means[0].samples},
              {"seed", m.means[0].seed}}},
            {"b_n",
             {{"mean", m.means[1].estimate},
              {"stderr", m.means[1].std_error},
              {"n_samples", m.means[1].samples},
              {"seed", m.means[1].seed}}}};
  return {{ctx.summary(body)}};
}

std::pair<Rational, ReturnMethod> exact_pi(unsigned n2, unsigned cap, unsigned workers) {
  if (n2 <= cap) {
    return {exact_return_prob(n2, cap, workers), ReturnMethod::enumeration};
  }
  return {exact_return_prob_dp(n2), ReturnMethod::edge_dp};
}

ExperimentOutput exact_return(const Context& ctx, Params& p) {
  const auto grid = p.counts("n2_grid", {2, 4, 8, 12, 16, 20, 24}, true, 2);
  const auto method = p.choice("method", "enumeration", {"enumeration", "edge_dp", "auto"});
  const auto cap = p.count("cap", kEnumerationCap, 2);
  p.finish();
  auto t = ctx.table({"n", "value_num", "value_den", "value", "method"});
  for (auto n2 : grid) {
    Rational q;
    ReturnMethod m = ReturnMethod::enumeration;
    if (method == "enumeration") {
      q = exact_return_prob(static_cast<unsigned>(n2), static_cast<unsigned>(cap),
                            ctx.par.workers);
    } else if (method == "edge_dp") {
      q = exact_return_prob_dp(static_cast<unsigned>(n2));
      m = ReturnMethod::edge_dp;
    } else {
      std::tie(q, m) = exact_pi(static_cast<unsigned>(n2), static_cast<unsigned>(cap),
                                ctx.par.workers);
    }
    t.row({fu(n2), q.get_num().get_str(), q.get_den().get_str(), fd(to_double(q)),
           to_string(m)});
  }
  return {{ctx.csv(t)}};
}

ExperimentOutput rb_return(const Context& ctx, Params& p) {
  const auto grid = p.counts("n2_grid", {4, 8, 12, 16}, true, 2);
  const auto samples = p.count("samples", 1000000);
  p.finish();
  auto t = ctx.table({"n", "estimate", "stderr", "samples"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto e = rb_return_estimator(static_cast<unsigned>(grid[i]), samples,
                                       ctx.cfg.seed + i, ctx.par);
    t.row({fu(grid[i]), fd(e.estimate), fd(e.std_error), fu(e.samples)});
  }
  return {{ctx.csv(t)}};
}

ExperimentOutput local_time(const Context& ctx, Params& p) {
  const auto n = p.count("n", 4);
  const auto levels = p.integers("levels", {0, 1, 2, 3});
  p.finish();
  auto t = ctx.table({"n", "a", "k", "prob_num", "prob_den", "prob"});
  for (long a : levels) {
    for (long k = 0; k <= static_cast<long>(2 * n); ++k) {
      const auto q = local_time_pmf(static_cast<unsigned>(n), a, k);
      t.row({fu(2 * n), std::to_string(a), std::to_string(k), q.get_num().get_str(),
             q.get_den().get_str(), fd(to_double(q))});
    }
  }
  return {{ctx.csv(t)}};
}

ExperimentOutput tube(const Context& ctx, Params& p) {
  const auto grid = p.counts("n_grid", {16, 32, 64}, false, 2);
  const auto halfwidth = p.count("halfwidth", 0, 0);
  const auto samples = p.count("samples", 0, 0);
  p.finish();
  auto t = ctx.table({"n", "steps", "halfwidth", "exact", "exact_num", "exact_den", "estimate",
                      "stderr", "samples"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto n = static_cast<unsigned>(grid[i]);
    const long h = halfwidth > 0 ? static_cast<long>(halfwidth) : tube_halfwidth(n);
    if (h < 1) {
      throw ConfigError({"params.n_grid: halfwidth rule gives 0 at n = " + std::to_string(n)});
    }
    const auto r = tube_probability(n, h, ctx.cfg.seed + i, samples, ctx.par);
    t.row({fu(n), fu(2 * n), std::to_string(h), fd(r.exact),
           r.exact_rational ? r.exact_rational->get_num().get_str() : "",
           r.exact_rational ? r.exact_rational->get_den().get_str() : "",
           r.estimate ? fd(r.estimate->estimate) : "", r.estimate ? fd(r.estimate->std_error) : "",
           r.estimate ? fu(r.estimate->samples) : "0"});
  }
  return {{ctx.csv(t)}};
}

std::vector<std::uint64_t> default_decay_grid() {
  std::vector<std::uint64_t> g;
  for (std::uint64_t n2 = 8; n2 <= 200; n2 += 4) {
    g.push_back(n2);
  }
  return g;
}

DecayFit decay_series(const std::vector<std::uint64_t>& grid, unsigned workers,
                      std::vector<std::pair<Rational, ReturnMethod>>* values = nullptr) {
  std::vector<std::pair<double, double>> logs;
  for (auto n2 : grid) {
    const auto v = exact_pi(static_cast<unsigned>(n2), kEnumerationCap, workers);
    logs.emplace_back(static_cast<double>(n2) / 2.0, -log_of(v.first));
    if (values != nullptr) {
      values->push_back(v);
    }
  }
  return fit_decay_log(logs);
}

ExperimentOutput decay_fit(const Context& ctx, Params& p) {
  const auto grid = p.counts("n2_grid", default_decay_grid(), true, 4);
  const auto rb_samples = p.count("rb_samples", 0, 0);
  const auto rb_max = p.count("rb_max_n2", 48, 0);
  for (auto n2 : grid) {
    p.check(n2 % 4 == 0, "n2_grid", "pi_2n vanishes for 2n = 2 mod 4; use multiples of 4");
  }
  p.finish();
  std::vector<std::pair<Rational, ReturnMethod>> values;
  const auto fit = decay_series(grid, ctx.par.workers, &values);
  auto t = ctx.table({"n", "neg_log_pi", "normalized", "method", "rb_estimate", "rb_stderr"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::string est;
    std::string se;
    if (rb_samples > 0 && grid[i] <= rb_max) {
      const auto e = rb_return_estimator(static_cast<unsigned>(grid[i]), rb_samples,
                                         ctx.cfg.seed + i, ctx.par);
      est = fd(e.estimate);
      se = fd(e.std_error);
    }
    t.row({fu(grid[i]), fd(fit.neg_log_pi[i]), fd(fit.normalized[i]),
           to_string(values[i].second), est, se});
  }
  json body{{"c", fit.c},
            {"band_min", fit.band_min},
            {"band_max", fit.band_max},
            {"band_ratio", fit.band_ratio},
            {"tail_slope", fit.tail_slope}};
  return {{ctx.csv(t), ctx.summary(body)}};
}

ExperimentOutput quasi_local(const Context& ctx, Params& p) {
  QuasiLocalConfig q;
  q.t = p.positive("t", 4.0);
  q.n = p.even("n", 16384);
  q.gamma = p.real("gamma", 0.25);
  const auto samples = p.count("samples", 100000);
  ComparatorBudget budget;
  budget.samples = p.count("comparator_samples", 100000);
  budget.m = p.count("m", 4096, 2);
  try {
    q.validate();
  } catch (const std::invalid_argument& e) {
    p.fail("gamma", e.what());
  }
  p.finish();
  const auto r = quasi_local_estimator(q, samples, ctx.cfg.seed, budget, ctx.par);
  json body{{"estimate", r.estimate.estimate},
            {"stderr", r.estimate.std_error},
            {"samples", r.estimate.samples},
            {"comparator", r.comparator},
            {"comparator_stderr", r.comparator_se},
            {"ratio", r.ratio.ratio},
            {"ratio_stderr", r.ratio.std_error},
            {"return_probability", r.return_probability},
            {"epsilon_n", q.epsilon()},
            {"delta_n", q.delta()},
            {"p2_zero", estimate_json(r.p2.estimate)},
            {"seed", ctx.cfg.seed}};
  return {{ctx.summary(body)}};
}

ExperimentOutput p2_zero_exp(const Context& ctx, Params& p) {
  const auto ts = p.reals("t_grid", {1.0, 4.0, 16.0}, true);
  const auto samples = p.count("samples", 100000);
  const auto m = p.count("m", 4096, 2);
  p.finish();
  auto t = ctx.table({"t", "estimate", "stderr", "samples", "t_times_estimate",
                      "estimate_half_grid", "p_aff_diag_quadrature", "ratio_to_quadrature",
                      "min_a_tilde"});
  const GroupElement e;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto r = p2_zero(ts[i], samples, m, ctx.cfg.seed + i, ctx.par);
    const double pa = p_aff(ts[i], e, e).value;
    const double scaled = r.estimate.estimate / std::sqrt(2.0 * std::numbers::pi * ts[i]);
    t.row({fd(ts[i]), fd(r.estimate.estimate), fd(r.estimate.std_error), fu(r.estimate.samples),
           fd(r.t_times), fd(r.estimate_half.estimate), fd(pa), fd(scaled / pa),
           fd(r.min_a_tilde)});
  }
  return {{ctx.csv(t)}};
}

ExperimentOutput mixed_llt(const Context& ctx, Params& p) {
  const double t = p.positive("t", 4.0);
  const auto n = p.even("n", 16384);
  const auto samples = p.count("samples", 100000);
  p.finish();
  const auto r = mixed_llt_density(t, n, samples, ctx.cfg.seed, ctx.par);
  json body{{"estimate", r.estimate.estimate},
            {"stderr", r.estimate.std_error},
            {"samples", r.estimate.samples},
            {"comparator", r.comparator},
            {"ratio", r.ratio},
            {"ratio_stderr", r.ratio_se},
            {"stirling_ratio", r.stirling_ratio},
            {"seed", ctx.cfg.seed}};
  return {{ctx.summary(body)}};
}

ExperimentOutput neg_moment(const Context& ctx, Params& p) {
  const auto alphas = p.reals("alphas", {1.0, 2.0, 4.0}, false);
  const double theta = p.real("theta", 1.0);
  p.check(theta == 0.5 || theta == 1.0, "theta", "must be 1/2 or 1");
  const auto samples = p.count("samples", 100000);
  const auto m = p.count("m", 4096, 2);
  p.finish();
  auto t = ctx.table({"alpha", "theta", "estimate", "stderr", "samples"});
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto e = neg_moment_bridge(alphas[i], theta, samples, m, ctx.cfg.seed + i, ctx.par);
    t.row({fd(alphas[i]), fd(theta), fd(e.estimate), fd(e.std_error), fu(e.samples)});
  }
  return {{ctx.csv(t)}};
}

ExperimentOutput cond_max(const Context& ctx, Params& p) {
  const auto grid = p.counts("n_grid", {64, 256, 1024}, true, 2);
  const auto thetas = p.reals("thetas", {0.5, 1.0, 2.0}, false);
  const auto samples = p.count("samples", 100000);
  p.finish();
  auto t = ctx.table({"n", "theta", "estimate", "stderr", "samples"});
  std::uint64_t offset = 0;
  for (auto n : grid) {
    for (double theta : thetas) {
      const auto e = conditioned_max_moment(n, theta, samples, ctx.cfg.seed + offset++, ctx.par);
      t.row({fu(n), fd(theta), fd(e.estimate), fd(e.std_error), fu(e.samples)});
    }
  }
  return {{ctx.csv(t)}};
}

ExperimentOutput toy_return(const Context& ctx, Params& p) {
  const auto model = read_model(p);
  const auto grid = p.counts("n_grid", {16, 32, 64}, false, 1);
  const auto exact_max = p.count("exact_max_n", 64, 0);
  p.finish();
  auto t = ctx.table({"n", "exact_num", "exact_den", "float_value", "comparator", "ratio"});
  const double half_dim = 0.5 * static_cast<double>(model.dimension());
  const double parity = model.p()[0] == 0 ? 2.0 : 1.0;
  for (auto n : grid) {
    const double comparator =
        n % 2 == 1 && parity == 2.0
            ? 0.0
            : parity * model.return_constant() / std::pow(static_cast<double>(n), half_dim);
    std::string num;
    std::string den;
    double value = 0.0;
    if (n <= exact_max) {
      const auto q = toy_exact_return(n, model);
      num = q.get_num().get_str();
      den = q.get_den().get_str();
      value = to_double(q);
    } else {
      value = toy_fourier_return(n, model).value;
    }
    t.row({fu(n), num, den, fd(value), fd(comparator),
           comparator > 0.0 ? fd(value / comparator) : ""});
  }
  return {{ctx.csv(t)}};
}

ExperimentOutput toy_point(const Context& ctx, Params& p) {
  const auto model = read_model(p);
  const auto n = p.count("n", 400);
  const auto d = p.integers("d", {4, -2});
  p.check(d.size() == model.dimension(), "d", "must have one entry per generator");
  p.finish();
  const auto r = toy_point_prob(n, d, model);
  auto t = ctx.table({"n", "exact_num", "exact_den", "float_value", "comparator", "ratio"});
  t.row({fu(n), r.exact.get_num().get_str(), r.exact.get_den().get_str(), fd(r.exact_double),
         fd(r.comparator), fd(r.ratio)});
  return {{ctx.csv(t)}};
}

ExperimentOutput toy_window(const Context& ctx, Params& p) {
  const auto model = read_model(p);
  const auto n = p.count("n", 200);
  const double exponent = p.real("delta_exponent", 0.3);
  const double deltainv = p.real("deltainv", std::pow(static_cast<double>(n), exponent));
  p.check(deltainv > 0.0, "deltainv", "must be positive");
  p.finish();
  const auto r = toy_window_prob(n, deltainv, model);
  auto t = ctx.table({"n", "deltainv", "exact_num", "exact_den", "float_value", "comparator",
                      "ratio", "comparator_specified"});
  t.row({fu(n), fd(deltainv), r.exact.get_num().get_str(), r.exact.get_den().get_str(),
         fd(r.exact_double), fd(r.comparator), fd(r.ratio),
         r.comparator_specified ? "true" : "false"});
  return {{ctx.csv(t)}};
}

ExperimentOutput weyl(const Context& ctx, Params& p) {
  const auto alpha = p.reals("alpha", {1.0, std::sqrt(2.0)}, true);
  const double period = p.positive("period", 1.0);
  const auto radius = p.count("radius", 60, 0);
  const auto harmonics = p.count("harmonics", 8, 1);
  p.finish();
  const auto avg = weyl_average(
      alpha, period, [period](double x) { return std::cos(2.0 * std::numbers::pi * x / period); },
      static_cast<long>(radius));
  const auto diag = weyl_diagnostic(alpha, period, static_cast<long>(radius),
                                    static_cast<int>(harmonics));
  json body{{"cos_average", avg.average},
            {"cos_integral", avg.comparator},
            {"points", avg.points},
            {"max_harmonic", diag.max_harmonic},
            {"worst_harmonic", diag.worst_harmonic},
            {"equidistributed", diag.equidistributed}};
  return {{ctx.summary(body)}};
}

ExperimentOutput contrast(const Context& ctx, Params& p) {
  const auto grid = p.counts("n2_grid", default_decay_grid(), true, 4);
  const auto ts = p.reals("t_grid", {10.0, 50.0, 100.0, 200.0}, true);
  p.finish();
  const auto fit = decay_series(grid, ctx.par.workers);
  std::vector<std::pair<double, double>> series;
  for (double t : ts) {
    series.emplace_back(t, diag_asymptotic_ratio(t));
  }
  std::string text = contrast_report(fit, series);
  text += "\nconfig_hash " + ctx.hash + ", seed " + std::to_string(ctx.cfg.seed) + "\n";
  return {{{"contrast.txt", text}}};
}

ExperimentOutput acceptance(const Context& ctx, Params& p) {
  std::vector<std::uint64_t> all;
  for (int i = 1; i <= kCriterionCount; ++i) {
    all.push_back(static_cast<std::uint64_t>(i));
  }
  const auto ids = p.counts("criteria", all, false, 1);
  for (auto id : ids) {
    p.check(id <= static_cast<std::uint64_t>(kCriterionCount), "criteria",
            "criterion ids run from 1 to 12");
  }
  p.finish();
  std::vector<int> list(ids.begin(), ids.end());
  const auto results = run_acceptance(list, {ctx.cfg.seed, ctx.cfg.workers});
  ExperimentOutput out;
  out.files.push_back({"acceptance.txt", format_acceptance(results)});
  for (const auto& r : results) {
    out.success = out.success && r.pass;
  }
  return out;
}

using Runner = std::function<ExperimentOutput(const Context&, Params&)>;

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> r{
      {"kernel", kernel},         {"diag-asymptote", diag_asymptote},
      {"walk-path", walk_path},   {"walk-stats", walk_stats},
      {"exact-return", exact_return}, {"rb-return", rb_return},
      {"local-time", local_time}, {"tube", tube},
      {"decay-fit", decay_fit},   {"quasi-local", quasi_local},
      {"p2-zero", p2_zero_exp},   {"mixed-llt", mixed_llt},
      {"neg-moment", neg_moment}, {"cond-max", cond_max},
      {"toy-return", toy_return}, {"toy-point", toy_point},
      {"toy-window", toy_window}, {"weyl", weyl},
      {"contrast", contrast},     {"acceptance", acceptance}};
  return r;
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) {
    names.push_back(name);
  }
  return names;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, std::stop_token stop) {
  const auto& r = registry();
  const auto it = r.find(cfg.experiment);
  if (it == r.end()) {
    throw ConfigError({"config.experiment: unknown experiment '" + cfg.experiment + "'"});
  }
  const Context ctx{cfg, config_hash(cfg), ParallelOptions{cfg.workers, stop}};
  Params params(cfg.params);
  return it->second(ctx, params);
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out) {
  std::filesystem::create_directories(cfg.output_dir);
  for (const auto& f : out.files) {
    std::ofstream file(std::filesystem::path(cfg.output_dir) / f.name, std::ios::binary);
    if (!file) {
      throw std::runtime_error("cannot write " + f.name + " in " + cfg.output_dir);
    }
    file << f.content;
  }
}

}  // namespace affwalk
