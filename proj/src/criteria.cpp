#include "affwalk/criteria.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>

#include "affwalk/combinatorics.hpp"
#include "affwalk/estimators.hpp"
#include "affwalk/experiment.hpp"
#include "affwalk/heat_kernel.hpp"
#include "affwalk/report.hpp"
#include "affwalk/toy_model.hpp"

namespace affwalk {

namespace {

// Collects named checks; the criterion passes when all of them hold.
class Checks {
public:
  void add(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    out_ << (first_ ? "" : "; ") << (ok ? "" : "FAILED ") << what;
    first_ = false;
  }
  void note(const std::string& what) {
    out_ << (first_ ? "" : "; ") << what;
    first_ = false;
  }
  [[nodiscard]] bool pass() const { return pass_; }
  [[nodiscard]] std::string str() const { return out_.str(); }

private:
  bool pass_ = true;
  bool first_ = true;
  std::ostringstream out_;
};

std::string num(double x, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

std::string zscore(double est, double target, double se) {
  return num((est - target) / se, 3) + " se";
}

void diagonal_asymptote(Checks& c, const CriteriaOptions&) {
  const double r200 = diag_asymptotic_ratio(200.0);
  const double r50 = diag_asymptotic_ratio(50.0);
  c.add(std::abs(r200 - 1.0) <= 0.05, "t=200 ratio " + num(r200) + " (need within 5%)");
  c.add(std::abs(r50 - 1.0) <= 0.10, "t=50 ratio " + num(r50) + " (need within 10%)");
  const double limit = diagonal_limit_integral() / std::pow(2.0 * std::numbers::pi, 1.5);
  c.note("quadrature limit of t^(3/2) p_aff is " + num(limit) + " = " +
         num(limit / kStatedDiagonalConstant) + " x sqrt(pi/2)");
}

void self_consistency(Checks& c, const CriteriaOptions&) {
  for (double t : {0.5, 1.0, 4.0}) {
    const double h2 = h2_normalization(t);
    const auto aff = aff_normalization(t);
    c.add(std::abs(h2 - 1.0) <= 1e-6, "H2 mass t=" + num(t) + " off by " + num(h2 - 1.0, 3));
    c.add(std::abs(aff.integral - 1.0) <= 1e-6,
          "Aff mass t=" + num(t) + " off by " + num(aff.integral - 1.0, 3));
  }
  double worst = 0.0;
  for (double r : {0.0, 0.5, 1.0, 2.0}) {
    const double lhs = chapman_kolmogorov(0.5, 0.5, r);
    const double rhs = p_h2({1.0, r}).value;
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  c.add(worst <= 1e-4, "Chapman-Kolmogorov s=t=0.5 worst relative residual " + num(worst, 3));
}

void exact_returns(Checks& c, const CriteriaOptions& o) {
  const auto pi2 = exact_return_prob(2);
  const auto pi4 = exact_return_prob(4);
  c.add(pi2 == 0, "pi_2 = " + pi2.get_str());
  c.add(pi4 == Rational(1, 32), "pi_4 = " + pi4.get_str());
  const ParallelOptions par{o.workers, {}};
  for (unsigned n2 : {4u, 8u, 12u, 16u}) {
    const double exact = to_double(exact_return_prob(n2, kEnumerationCap, o.workers));
    const auto e = rb_return_estimator(n2, 1'000'000, o.seed + n2, par);
    c.add(std::abs(e.estimate - exact) <= 3.0 * e.std_error,
          "RB 2n=" + std::to_string(n2) + " at " + zscore(e.estimate, exact, e.std_error));
  }
}

void decay_band(Checks& c, const CriteriaOptions& o) {
  std::vector<std::pair<double, double>> logs;
  std::size_t enumerated = 0;
  for (unsigned n2 = 8; n2 <= 200; n2 += 4) {
    const Rational pi = n2 <= kEnumerationCap ? exact_return_prob(n2, kEnumerationCap, o.workers)
                                              : exact_return_prob_dp(n2);
    enumerated += n2 <= kEnumerationCap ? 1 : 0;
    logs.emplace_back(n2 / 2.0, -log_of(pi));
  }
  const auto fit = fit_decay_log(logs);
  c.note("2n = 8..200 step 4, " + std::to_string(enumerated) +
         " points by enumeration, the rest by the exact edge recursion");
  c.add(fit.band_ratio <= 3.0, "band [" + num(fit.band_min) + ", " + num(fit.band_max) +
                                   "] ratio " + num(fit.band_ratio, 4));
  c.add(std::abs(fit.tail_slope) <= 0.15, "top-half log-log slope " + num(fit.tail_slope, 4));
  const auto rb = rb_return_estimator(48, 200'000, o.seed, {o.workers, {}});
  const double exact48 = to_double(exact_return_prob_dp(48));
  c.add(std::abs(rb.estimate - exact48) <= 3.0 * rb.std_error,
        "RB 2n=48 vs exact at " + zscore(rb.estimate, exact48, rb.std_error));
}

void local_times(Checks& c, const CriteriaOptions&) {
  std::size_t compared = 0;
  std::size_t mismatches = 0;
  for (unsigned n = 1; n <= 8; ++n) {
    const auto counts = local_time_enumeration(n);
    const Integer total = pow2(2 * n);
    for (long a = -2 * static_cast<long>(n); a <= 2 * static_cast<long>(n); ++a) {
      for (long k = 0; k <= 2 * static_cast<long>(n); ++k) {
        const auto it = counts.find({a, k});
        const std::uint64_t count = it == counts.end() ? 0 : it->second;
        const Rational expected = make_rational(Integer(static_cast<unsigned long>(count)), total);
        mismatches += local_time_pmf(n, a, k) == expected ? 0 : 1;
        ++compared;
      }
    }
  }
  c.add(mismatches == 0, std::to_string(compared) + " (2n, a, k) cells for 2n <= 16, " +
                             std::to_string(mismatches) + " mismatches");
}

void tube_decay(Checks& c, const CriteriaOptions&) {
  std::vector<TubeResult> r;
  for (unsigned n : {16u, 32u, 64u}) {
    r.push_back(tube_probability(n, tube_halfwidth(n)));
  }
  std::string hw;
  for (const auto& t : r) {
    hw += " " + std::to_string(t.n) + ":" + std::to_string(t.halfwidth) + ":" + num(t.exact, 4);
    c.add(t.exact > 0.0 && t.exact < 1.0, "n=" + std::to_string(t.n) + " tube probability in (0,1)");
  }
  c.note("n:halfwidth:P" + hw);
  std::vector<double> slopes;
  for (std::size_t i = 1; i < r.size(); ++i) {
    slopes.push_back((std::log(r[i].exact) - std::log(r[i - 1].exact)) /
                     std::log(static_cast<double>(r[i].n) / r[i - 1].n));
  }
  for (std::size_t i = 1; i < slopes.size(); ++i) {
    c.add(slopes[i] < slopes[i - 1],
          "log-log slopes " + num(slopes[i - 1], 4) + " then " + num(slopes[i], 4));
  }
  std::string arith;
  for (unsigned n = 16; n <= 64; n += 8) {
    arith += " " + std::to_string(tube_halfwidth(n));
  }
  c.note("halfwidths on n=16,24,...,64:" + arith);
}

void negative_moments(Checks& c, const CriteriaOptions& o) {
  const ParallelOptions par{o.workers, {}};
  std::uint64_t s = o.seed;
  for (double alpha : {1.0, 2.0, 4.0}) {
    const auto e = neg_moment_bridge(alpha, 1.0, 100'000, 4096, s++, par);
    c.add(std::abs(e.estimate - 1.0) <= 3.0 * e.std_error,
          "alpha=" + num(alpha) + " mean " + num(e.estimate) + " at " +
              zscore(e.estimate, 1.0, e.std_error));
  }
  for (double t : {1.0, 9.0}) {
    const auto e = inverse_bridge_functional(t, 100'000, 4096, s++, par);
    c.add(std::abs(e.estimate - 1.0 / t) <= 3.0 * e.std_error,
          "t=" + num(t) + " E[1/A] " + num(e.estimate) + " at " +
              zscore(e.estimate, 1.0 / t, e.std_error));
  }
}

void return_density(Checks& c, const CriteriaOptions& o) {
  const ParallelOptions par{o.workers, {}};
  const auto big = p2_zero(100.0, 100'000, 4096, o.seed, par);
  c.add(std::abs(big.t_times / std::numbers::pi - 1.0) <= 0.15,
        "t p2(100,0) = " + num(big.t_times) + " +- " + num(big.t_times_se, 3) + " vs pi (ratio " +
            num(big.t_times / std::numbers::pi, 4) + ")");
  const GroupElement e;
  std::uint64_t s = o.seed + 1;
  for (double t : {1.0, 4.0, 16.0}) {
    const auto r = p2_zero(t, 100'000, 4096, s++, par);
    const double scale = 1.0 / std::sqrt(2.0 * std::numbers::pi * t);
    const double pa = p_aff(t, e, e).value;
    const double est = scale * r.estimate.estimate;
    const double se = scale * r.estimate.std_error;
    c.add(std::abs(est - pa) <= 2.0 * se, "t=" + num(t) + " chain vs p_aff at " +
                                              zscore(est, pa, se));
  }
}

void quasi_local(Checks& c, const CriteriaOptions& o) {
  const ParallelOptions par{o.workers, {}};
  const QuasiLocalConfig base{4.0, std::size_t{1} << 14, 0.25};
  const auto r = quasi_local_estimator(base, 100'000, o.seed, {}, par);
  c.add(r.ratio.ratio >= 0.8 && r.ratio.ratio <= 1.25,
        "ratio " + num(r.ratio.ratio, 4) + " +- " + num(r.ratio.std_error, 2) + " in [0.8, 1.25]");

  const QuasiLocalConfig big{4.0, std::size_t{1} << 16, 0.25};
  const auto hi = quasi_local_value(big, 100'000, o.seed + 2, par);
  const auto scaling = ratio_of(hi.estimate, hi.std_error, r.estimate.estimate,
                                r.estimate.std_error);
  c.add(std::abs(scaling.ratio - 0.5) <= 3.0 * scaling.std_error,
        "n -> 4n scaling " + num(scaling.ratio, 4) + " +- " + num(scaling.std_error, 2) +
            " vs 1/2 at " + zscore(scaling.ratio, 0.5, scaling.std_error));

  // Same delta at 4n: isolates the epsilon factor from the mollifier width.
  const double n0 = static_cast<double>(base.n);
  const double gamma_fixed = 0.5 + (base.gamma - 0.5) * std::log(n0) / std::log(4.0 * n0);
  const QuasiLocalConfig fixed{4.0, big.n, gamma_fixed};
  const auto hf = quasi_local_value(fixed, 100'000, o.seed + 3, par);
  const auto sf = ratio_of(hf.estimate, hf.std_error, r.estimate.estimate, r.estimate.std_error);
  c.note("diagnostic at fixed delta " + num(base.delta(), 4) + ": scaling " + num(sf.ratio, 4) +
         " +- " + num(sf.std_error, 2));
}

void mixed_llt(Checks& c, const CriteriaOptions& o) {
  const auto r = mixed_llt_density(4.0, std::size_t{1} << 14, 100'000, o.seed, {o.workers, {}});
  c.add(r.ratio >= 0.8 && r.ratio <= 1.25,
        "ratio " + num(r.ratio, 4) + " +- " + num(r.ratio_se, 2) + " in [0.8, 1.25]");
}

void toy_model(Checks& c, const CriteriaOptions&) {
  const ToyModel m1({1.0}, {Rational(0), Rational(1)});
  const ToyModel m2({1.0, std::sqrt(2.0)}, {Rational(0), Rational(1, 2), Rational(1, 2)});
  const ToyModel m3({1.0, std::sqrt(2.0)},
                    {Rational(1, 5), Rational(2, 5), Rational(2, 5)});
  const ToyModel m4({1.0, std::sqrt(2.0), std::sqrt(3.0)},
                    {Rational(1, 10), Rational(3, 10), Rational(3, 10), Rational(3, 10)});
  const ToyModel m5({1.0, std::sqrt(2.0), std::sqrt(3.0)},
                    {Rational(0), Rational(1, 4), Rational(1, 4), Rational(1, 2)});
  double worst = 0.0;
  for (const ToyModel* m : {&m1, &m2, &m3, &m4, &m5}) {
    for (std::size_t n : {1, 2, 7, 16, 33, 64}) {
      const double f = toy_fourier_return(n, *m).value;
      worst = std::max(worst, std::abs(f - to_double(toy_exact_return(n, *m))));
    }
  }
  c.add(worst <= 1e-10, "Fourier vs exact worst gap " + num(worst, 3) + " (N <= 3, n <= 64)");

  const double n = 1e4;
  const auto a = toy_fourier_return(10'000, m2);
  const double ra = a.value * n / (2.0 * m2.return_constant());
  c.add(std::abs(ra - 1.0) <= 0.05, "p0=0: r_n n/(2C) = " + num(ra));
  const auto b = toy_fourier_return(10'000, m3);
  const double rb = b.value * n / m3.return_constant();
  c.add(std::abs(rb - 1.0) <= 0.05, "p0=0.2: r_n n/C = " + num(rb));

  const auto point = toy_point_prob(400, {4, -2}, m3);
  c.add(point.ratio >= 0.9 && point.ratio <= 1.1,
        "point n=400 d=(4,-2) ratio " + num(point.ratio));
  const auto window = toy_window_prob(200, std::pow(200.0, 0.3), m3);
  c.add(std::abs(window.ratio - 1.0) <= 0.10, "window n=200 ratio " + num(window.ratio));
}

void determinism(Checks& c, const CriteriaOptions& o) {
  auto run = [](const ExperimentConfig& cfg) {
    std::string bytes;
    for (const auto& f : run_experiment(cfg).files) {
      bytes += f.name + '\n' + f.content;
    }
    return bytes;
  };
  const std::vector<ExperimentConfig> configs{
      {"walk-stats", o.seed, 1, "", {{"n", 256}, {"samples", 20000}, {"epsilon", 0.05}}},
      {"rb-return", o.seed, 1, "", {{"n2_grid", {8, 12}}, {"samples", 50000}}},
      {"p2-zero", o.seed, 1, "", {{"t_grid", {1.0}}, {"samples", 5000}, {"m", 256}}},
      {"exact-return", o.seed, 1, "", {{"n2_grid", {4, 8, 12}}}},
      {"kernel", o.seed, 1, "", {{"t_grid", {1.0}}, {"r_grid", {0.0, 1.0}}}}};
  for (auto cfg : configs) {
    const std::string first = run(cfg);
    const std::string second = run(cfg);
    cfg.workers = 3;
    const std::string threaded = run(cfg);
    c.add(first == second, cfg.experiment + " rerun identical (" +
                               std::to_string(first.size()) + " bytes)");
    c.add(first == threaded, cfg.experiment + " identical with 3 workers");
  }
}

struct Definition {
  const char* name;
  double budget;
  std::function<void(Checks&, const CriteriaOptions&)> run;
};

const std::vector<Definition>& definitions() {
  static const std::vector<Definition> d{
      {"diagonal heat-kernel asymptote", 1.0, diagonal_asymptote},
      {"heat-kernel self-consistency", 30.0, self_consistency},
      {"exact return probabilities", 120.0, exact_returns},
      {"subgroup decay band", 600.0, decay_band},
      {"local-time laws", 60.0, local_times},
      {"tube estimates", 60.0, tube_decay},
      {"negative-moment identities", 300.0, negative_moments},
      {"return density chain", 300.0, return_density},
      {"quasi-local theorem", 600.0, quasi_local},
      {"mixed-case LLT", 300.0, mixed_llt},
      {"toy model", 300.0, toy_model},
      {"determinism", 60.0, determinism}};
  return d;
}

}  // namespace

CriterionResult run_criterion(int id, const CriteriaOptions& opts) {
  if (id < 1 || id > kCriterionCount) {
    throw std::invalid_argument("criterion id must be in 1..12");
  }
  const auto& def = definitions()[static_cast<std::size_t>(id - 1)];
  CriterionResult result{id, def.name, false, "", 0.0, def.budget};
  Checks checks;
  const auto start = std::chrono::steady_clock::now();
  try {
    def.run(checks, opts);
  } catch (const std::exception& e) {
    checks.add(false, std::string("error: ") + e.what());
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  checks.add(result.seconds <= def.budget,
             "runtime " + num(result.seconds, 3) + " s (budget " + num(def.budget) + " s)");
  result.pass = checks.pass();
  result.detail = checks.str();
  return result;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            const CriteriaOptions& opts) {
  std::vector<CriterionResult> out;
  for (int id : ids) {
    out.push_back(run_criterion(id, opts));
  }
  return out;
}

std::string format_criterion(const CriterionResult& r) {
  return "criterion " + std::to_string(r.id) + ": " + (r.pass ? "PASS" : "FAIL") + " [" + r.name +
         "] " + r.detail;
}

std::string format_acceptance(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  int passed = 0;
  for (const auto& r : results) {
    out << format_criterion(r) << '\n';
    passed += r.pass ? 1 : 0;
  }
  out << passed << " of " << results.size() << " criteria passed\n";
  return out.str();
}

}  // namespace affwalk
