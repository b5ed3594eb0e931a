#pragma once

// The acceptance suite: fifteen criteria, each a list of numeric checks with
// a declared tolerance, evaluated at a named scale profile.

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "lls/deterministic.hpp"
#include "lls/experiments.hpp"
#include "lls/fredholm.hpp"
#include "lls/io.hpp"
#include "lls/spacing.hpp"
#include "lls/syk.hpp"
#include "lls/theory.hpp"

namespace lls {

enum class Verdict { pass, fail, skipped };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    default: return "SKIPPED";
  }
}

/// One comparison. kind "abs": |measured - target| <= tolerance;
/// "below": measured < target; "above": measured > target.
struct Check {
  std::string what;
  std::string kind;
  double measured = 0.0, target = 0.0, tolerance = 0.0;
  bool ok = false;
};

inline Check within(std::string what, double measured, double target, double tol) {
  return {std::move(what), "abs", measured, target, tol, std::fabs(measured - target) <= tol};
}
inline Check below(std::string what, double measured, double bound) {
  return {std::move(what), "below", measured, bound, 0.0, measured < bound};
}
inline Check above(std::string what, double measured, double bound) {
  return {std::move(what), "above", measured, bound, 0.0, measured > bound};
}
/// Two estimates agreeing within their joint 99% interval.
inline Check agree(std::string what, const Estimate& a, const Estimate& b) {
  return within(std::move(what), a.value, b.value, z99 * std::hypot(a.se, b.se));
}

struct CriterionResult {
  int id = 0;
  std::string title;
  Verdict verdict = Verdict::fail;
  std::vector<Check> checks;
  std::string note;
  double seconds = 0.0;
  nlohmann::json details = nlohmann::json::object();
};

/// Sample sizes of one scale profile. Statistical tolerances are multiplied
/// by tolerance_scale, which is sqrt(desk size / profile size) for profiles
/// smaller than desk and 1 otherwise.
struct Profile {
  std::string name = "desk";
  std::size_t cbe_n = 64, cbe_m = 100000;
  std::size_t poisson_n = 1024, poisson_m = 200000;
  std::size_t hist_m = 1000000;
  std::size_t syk16_m = 20000, syk18_m = 10000, syk20_m = 5000;
  std::size_t billiard_q = 10000;
  std::size_t poisson_r_m = 1000000;
  std::size_t identity_cases = 1000;
  double tolerance_scale = 1.0;
};

inline Profile make_profile(const std::string& name) {
  Profile p;
  p.name = name;
  if (name == "desk") return p;
  if (name == "full-desk") {
    p.cbe_m = 400000;
    p.poisson_m = 800000;
    p.hist_m = 4000000;
    p.syk16_m = 80000;
    p.syk18_m = 40000;
    p.syk20_m = 20000;
    p.billiard_q = 40000;
    p.poisson_r_m = 4000000;
    return p;
  }
  if (name == "smoke") {
    p.cbe_m = 2000;
    p.poisson_m = 4000;
    p.hist_m = 20000;
    p.syk16_m = 400;
    p.syk18_m = 200;
    p.syk20_m = 100;
    p.billiard_q = 200;
    p.poisson_r_m = 20000;
    p.tolerance_scale = std::sqrt(50.0);
    return p;
  }
  throw ArgumentError("unknown profile '" + name + "' (smoke, desk, full-desk)");
}

struct AcceptanceOptions {
  std::size_t workers = 1;
  std::uint64_t seed = 20240601;
  std::optional<std::string> zeros_path;     // high-height dataset, enables criterion 14
  std::optional<std::string> zeros_base;     // base override for that dataset
  std::optional<std::string> bundled_zeros;  // low zeros used for the round trip
};

class AcceptanceSuite {
 public:
  static constexpr int count = 15;

  AcceptanceSuite(Profile profile, AcceptanceOptions options) : p_(std::move(profile)), o_(std::move(options)) {}

  const Profile& profile() const noexcept { return p_; }

  CriterionResult run(int id) {
    CriterionResult r;
    r.id = id;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      switch (id) {
        case 1: theory_means(r); break;
        case 2: duality(r); break;
        case 3: table1_beta2(r); break;
        case 4: table1_beta14(r); break;
        case 5: poisson(r); break;
        case 6: inequalities(r); break;
        case 7: identity(r); break;
        case 8: estimator_duality(r); break;
        case 9: covariance(r); break;
        case 10: shapes(r); break;
        case 11: syk_ratios(r); break;
        case 12: billiard(r); break;
        case 13: r_ratios(r); break;
        case 14: riemann(r); break;
        case 15: syk_structure(r); break;
        default: throw ArgumentError("no criterion " + std::to_string(id));
      }
      if (r.verdict != Verdict::skipped) {
        bool ok = !r.checks.empty();
        for (const auto& c : r.checks) ok = ok && c.ok;
        r.verdict = ok ? Verdict::pass : Verdict::fail;
      }
    } catch (const ArgumentError&) {
      throw;
    } catch (const std::exception& e) {
      r.verdict = Verdict::fail;
      r.note = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }

  std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result = {}) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= count; ++id) {
      out.push_back(run(id));
      if (on_result) on_result(out.back());
    }
    return out;
  }

 private:
  double tol(double t) const { return t * p_.tolerance_scale; }
  std::uint64_t seed(std::uint64_t k) const { return derive_seed(o_.seed, k); }

  // Circular runs shared between criteria, keyed by beta (0 = Poisson).
  const CircleRun& circle(int beta) {
    auto it = runs_.find(beta);
    if (it != runs_.end()) return it->second;
    CircleRunConfig c;
    c.beta = beta;
    c.n_levels = beta == 0 ? p_.poisson_n : p_.cbe_n;
    c.samples = beta == 0 ? p_.poisson_m : p_.cbe_m;
    c.phi = beta == 0 ? 0.0 : std::numbers::pi;
    c.max_order = 9;
    c.seed = seed(100 + static_cast<std::uint64_t>(beta));
    c.workers = o_.workers;
    return runs_.emplace(beta, run_circle(c)).first->second;
  }

  static const char* ensemble_name(int beta) {
    switch (beta) {
      case 0: return "Poisson";
      case 1: return "COE";
      case 2: return "CUE";
      default: return "CSE";
    }
  }

  static nlohmann::json means_json(const SpacingStats& st) { return to_json(st); }

  void theory_means(CriterionResult& r) {
    r.title = "theory means, beta = 2";
    const auto t0 = std::chrono::steady_clock::now();
    const auto& ref = reference_constants().means.at(2);
    for (std::size_t l = 0; l < 5; ++l)
      r.checks.push_back(within("<s_" + std::to_string(l) + ">", mean_lls_theory(2, l), ref[l], 1e-4));
    r.checks.push_back(below("seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 60.0));
  }

  void duality(CriterionResult& r) {
    r.title = "Painleve vs Fredholm E2(0;s)";
    for (double s : {0.25, 0.5, 1.0, 2.0, 3.0}) {
      const double d = std::fabs(gap_probability(2, s) - fredholm_counts(s, 0)[0]);
      r.checks.push_back(below("|dE| at s=" + format_shortest(s), d, 1e-6));
    }
  }

  void table_rows(CriterionResult& r, int beta, double t) {
    const auto& st = circle(beta).local;
    const auto& ref = reference_constants().means.at(beta);
    for (std::size_t l = 0; l < 5; ++l)
      r.checks.push_back(within(std::string(ensemble_name(beta)) + " <s_" + std::to_string(l) + ">", st.mean(l), ref[l], tol(t)));
    r.details[ensemble_name(beta)] = means_json(st);
  }

  void table1_beta2(CriterionResult& r) {
    r.title = "Monte Carlo Table 1, CUE N=" + std::to_string(p_.cbe_n);
    table_rows(r, 2, 0.01);
  }

  void table1_beta14(CriterionResult& r) {
    r.title = "Monte Carlo Table 1, COE and CSE N=" + std::to_string(p_.cbe_n);
    table_rows(r, 1, 0.015);
    table_rows(r, 4, 0.015);
  }

  void poisson(CriterionResult& r) {
    r.title = "Poisson circle N=" + std::to_string(p_.poisson_n);
    const auto& st = circle(0).local;
    r.checks.push_back(within("<s_0>", st.mean(0), 2.0, tol(0.01)));
    for (std::size_t l = 1; l < 5; ++l) r.checks.push_back(within("<s_" + std::to_string(l) + ">", st.mean(l), 1.0, tol(0.005)));
    const auto rho = ratios(st);
    for (std::size_t l = 0; l < 3; ++l)
      r.checks.push_back(within("rho_" + std::to_string(l + 1), rho[l].value, reference_constants().ratios.at(0)[l], tol(0.005)));
    r.details["Poisson"] = means_json(st);
  }

  void inequalities(CriterionResult& r) {
    r.title = "inequalities <s_0> > 1 and <s_0> > <s_l> by 5 standard errors";
    for (int beta : {2, 1, 4, 0}) {
      const auto& st = circle(beta).local;
      const std::string name = ensemble_name(beta);
      r.checks.push_back(above(name + " (<s_0>-1)/se", (st.mean(0) - 1.0) / st.std_error(0), 5.0));
      const double n = static_cast<double>(st.count());
      for (std::size_t l = 1; l < 5; ++l) {
        const double se = std::sqrt((st.variance(0) + st.variance(l) - 2.0 * st.covariance0(l)) / n);
        r.checks.push_back(above(name + " (<s_0>-<s_" + std::to_string(l) + ">)/se", (st.mean(0) - st.mean(l)) / se, 5.0));
      }
    }
  }

  void identity(CriterionResult& r) {
    r.title = "generating-function identity";
    const auto t0 = std::chrono::steady_clock::now();
    auto eng = make_engine(seed(7));
    double worst = 0.0;
    for (std::size_t c = 0; c < p_.identity_cases; ++c) {
      const std::size_t n = 2 + static_cast<std::size_t>(uniform_open(eng) * 127.0);
      CircularSpectrum s;
      if (c % 2) {
        s = sample_cbe({2, n, derive_seed(seed(8), c), Method::cmv});
      } else {
        std::vector<double> a(n);
        for (auto& x : a) x = two_pi * uniform_open(eng);
        s = CircularSpectrum::from_unordered(std::move(a));
      }
      const double rad = std::sqrt(uniform_open(eng)), arg = two_pi * uniform_open(eng);
      const double res = generating_identity_residual(s, std::polar(rad, arg));
      worst = std::max(worst, res / (1e-10 * static_cast<double>(n)));
    }
    r.checks.push_back(below("max residual / (1e-10 N)", worst, 1.0));
    r.checks.push_back(below("seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0));
  }

  void estimator_duality(CriterionResult& r) {
    r.title = "phi-sampled vs size-biased means, CUE";
    const auto& run = circle(2);
    for (std::size_t l = 0; l < 5; ++l)
      r.checks.push_back(agree("<s_" + std::to_string(l) + ">", run.local.estimate(l), run.size_biased.estimate(l)));
  }

  void covariance(CriterionResult& r) {
    r.title = "lag-1 covariance from <s_1> vs direct, CUE";
    const auto& run = circle(2);
    const auto cov = covariance_from_means(run.local, 1.0);
    r.checks.push_back(agree("cov_1", cov[1], run.lag1.estimate()));
  }

  void shapes(CriterionResult& r) {
    r.title = "p0 histogram and origin slopes, CUE N=" + std::to_string(p_.cbe_n);
    CircleRunConfig c;
    c.beta = 2;
    c.n_levels = p_.cbe_n;
    c.samples = p_.hist_m;
    c.phi = std::numbers::pi;
    c.max_order = 1;
    c.biased_order = 0;
    c.seed = seed(10);
    c.workers = o_.workers;
    c.histograms = true;
    const auto run = run_circle(c);
    const auto p = spacing_pdf(2);
    const auto p0 = p0_pdf(2);
    const auto d0 = run.p0->density();
    r.checks.push_back(below("sup |p0_hist - s p(s)|", sup_norm(*run.p0, d0, std::cref(p0)), tol(0.02)));
    const auto f0 = origin_slope(*run.p0_log, 10);
    const auto f = origin_slope(*run.spacing_log, 10);
    r.checks.push_back(within("p0 origin slope", f0.slope, 3.0, 0.3));
    r.checks.push_back(within("p origin slope", f.slope, 2.0, 0.3));
    r.details["p0_fit_range"] = {f0.lo, f0.hi};
    r.details["p_fit_range"] = {f.lo, f.hi};
    r.details["spacing_sup_norm"] = sup_norm(*run.spacing, run.spacing->density(), std::cref(p));
  }

  void syk_ratios(CriterionResult& r) {
    r.title = "SYK ratios of local means";
    const std::pair<std::size_t, std::size_t> sizes[] = {{16, p_.syk16_m}, {18, p_.syk18_m}, {20, p_.syk20_m}};
    for (auto [n, m] : sizes) {
      SykRunConfig c;
      c.n_majorana = n;
      c.samples = m;
      c.seed = seed(200 + n);
      c.workers = o_.workers;
      const auto st = run_syk(c);
      const auto rho = ratios(st);
      const auto& ref = reference_constants().ratios.at(syk_beta(n));
      for (std::size_t l = 0; l < 3; ++l)
        r.checks.push_back(within("N=" + std::to_string(n) + " rho_" + std::to_string(l + 1), rho[l].value, ref[l], tol(0.02)));
      r.details["N=" + std::to_string(n)] = {{"stats", means_json(st)}, {"ratios", to_json(std::span<const Estimate>(rho))}};
    }
  }

  void billiard(CriterionResult& r) {
    r.title = "billiard family, protocol 2.2";
    BilliardRunConfig c;
    c.samples = p_.billiard_q;
    c.seed = seed(12);
    c.workers = o_.workers;
    const auto st = run_billiard(c);
    r.checks.push_back(within("<s_0>", st.mean(0), 2.0, tol(0.03)));
    for (std::size_t l = 1; l < 5; ++l) r.checks.push_back(within("<s_" + std::to_string(l) + ">", st.mean(l), 1.0, tol(0.02)));
    r.details["billiard"] = means_json(st);
  }

  void r_ratios(CriterionResult& r) {
    r.title = "local r-ratios";
    for (int beta : {1, 2, 4, 0}) {
      const auto e = circle(beta).r.mean(0).estimate();
      r.checks.push_back(within(std::string(ensemble_name(beta)) + " <r_0>", e.value, 1.0, e.ci99()));
    }
    // Poisson line: exact Poisson process seen from phi = 20.
    LocalRStats st(1, 4000);
    st = parallel_reduce(p_.poisson_r_m, o_.workers, st, [&](LocalRStats& acc, std::size_t i) {
      const auto line = sample_poisson_line(1.0, 64, derive_seed(seed(13), i));
      const auto rec = extract(line, 20.0, 2);
      if (!rec) throw Error("Poisson line window underflow");
      acc.add(rec->spacings);
    });
    r.checks.push_back(below("Poisson KS r_0", ks_upper_bound(st.histogram(0), poisson_r0_cdf_u), tol(0.01)));
    r.checks.push_back(below("Poisson KS r_1", ks_upper_bound(st.histogram(1), poisson_r1_cdf_u), tol(0.01)));
    for (int beta : {1, 2, 4}) {
      const auto e = circle(beta).r.mean(8).estimate();
      r.checks.push_back(within(std::string(ensemble_name(beta)) + " <r_8>", e.value, reference_constants().mean_r.at(beta), tol(0.02)));
      r.details[ensemble_name(beta)] = {{"r8", to_json(e)}};
    }
  }

  void riemann(CriterionResult& r) {
    r.title = "Riemann zeros pipeline";
    ZerosDataset ds;
    if (o_.bundled_zeros) {
      ds = parse_zeros_file(*o_.bundled_zeros);
    } else {
      std::istringstream sample("# base 1e22\n0.0\n0.1234567890123\n0.5\n");
      ds = parse_zeros(sample);
    }
    std::ostringstream out;
    write_zeros(out, ds);
    std::istringstream back(out.str());
    const auto again = parse_zeros(back);
    const bool same = again.offsets == ds.offsets && again.base_text == ds.base_text && again.source_offset == ds.source_offset;
    r.checks.push_back({"round trip", "below", same ? 0.0 : 1.0, 0.5, 0.0, same});
    if (!o_.zeros_path) {
      r.verdict = same ? Verdict::skipped : Verdict::fail;
      r.note = "no high-height zeros file given; statistics skipped";
      return;
    }
    const auto high = parse_zeros_file(*o_.zeros_path, o_.zeros_base);
    const std::size_t q = std::min<std::size_t>(1000000, high.size() / 14);
    const auto st = run_zeros(high, q, 4, seed(14));
    const auto& ref = reference_constants().riemann_zeros;
    for (std::size_t l = 0; l < 5; ++l) r.checks.push_back(within("<s_" + std::to_string(l) + ">", st.mean(l), ref[l], 0.02));
    r.details["zeros"] = means_json(st);
  }

  void syk_structure(CriterionResult& r) {
    r.title = "SYK structure";
    double clifford = 0.0;
    for (std::size_t n : {2, 8, 12}) {
      const auto ops = majorana_ops(n);
      const auto dim = ops[0].rows();
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
          const Eigen::MatrixXcd ac = ops[a] * ops[b] + ops[b] * ops[a];
          const Eigen::MatrixXcd want = a == b ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(dim, dim)) : Eigen::MatrixXcd::Zero(dim, dim);
          clifford = std::max(clifford, (ac - want).cwiseAbs().maxCoeff());
        }
    }
    r.checks.push_back(below("max Clifford residual", clifford, 1e-15));

    SykConfig c12{12, 4.0, seed(15)};
    const auto ops = majorana_ops(12);
    const auto h = build_hamiltonian(ops, sample_couplings(c12));
    const auto par = parity_operator(12);
    r.checks.push_back(below("max |[H, P]|", (h * par - par * h).cwiseAbs().maxCoeff(), 1e-12));

    double pairing = 0.0;
    for (std::size_t n : {12, 20}) {
      SykConfig c{n, 4.0, seed(16 + n)};
      const auto ev = linalg::hermitian_eigenvalues(even_block_hamiltonian(c, sample_couplings(c)));
      const double width = ev(ev.size() - 1) - ev(0);
      for (Eigen::Index k = 0; k + 1 < ev.size(); k += 2) pairing = std::max(pairing, (ev(k + 1) - ev(k)) / width);
    }
    r.checks.push_back(below("max Kramers gap / width", pairing, 1e-10));

    SykRunConfig base;
    base.n_majorana = 16;
    base.samples = 200;
    base.seed = seed(17);
    base.workers = o_.workers;
    SykRunConfig scaled = base;
    scaled.coupling = base.coupling * 3.7;
    const auto ra = ratios(run_syk(base)), rb = ratios(run_syk(scaled));
    double worst = 0.0;
    for (std::size_t l = 0; l < ra.size(); ++l) worst = std::max(worst, std::fabs(rb[l].value / ra[l].value - 1.0));
    r.checks.push_back(below("ratio change under J -> 3.7 J", worst, 1e-12));
  }

  Profile p_;
  AcceptanceOptions o_;
  std::map<int, CircleRun> runs_;
};

inline nlohmann::json to_json(const Check& c) {
  return {{"what", c.what}, {"kind", c.kind}, {"measured", c.measured}, {"target", c.target}, {"tolerance", c.tolerance}, {"ok", c.ok}};
}

inline nlohmann::json to_json(const CriterionResult& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  nlohmann::json j{{"id", r.id}, {"title", r.title}, {"verdict", to_string(r.verdict)}, {"seconds", r.seconds},
                   {"checks", checks}, {"details", r.details}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

/// One line per criterion, then its failing checks indented below it.
inline std::string format_result(const CriterionResult& r, bool all_checks = false) {
  std::ostringstream out;
  char head[64];
  std::snprintf(head, sizeof head, "%-7s [%2d] ", to_string(r.verdict), r.id);
  out << head << r.title;
  char secs[32];
  std::snprintf(secs, sizeof secs, " (%.1f s)", r.seconds);
  out << secs << '\n';
  if (!r.note.empty()) out << "          " << r.note << '\n';
  for (const auto& c : r.checks) {
    if (c.ok && !all_checks) continue;
    char line[256];
    if (c.kind == "abs")
      std::snprintf(line, sizeof line, "          %s %-34s %.6g vs %.6g +- %.3g\n", c.ok ? "ok  " : "FAIL", c.what.c_str(),
                    c.measured, c.target, c.tolerance);
    else
      std::snprintf(line, sizeof line, "          %s %-34s %.6g %s %.6g\n", c.ok ? "ok  " : "FAIL", c.what.c_str(), c.measured,
                    c.kind == "below" ? "<" : ">", c.target);
    out << line;
  }
  return out.str();
}

inline int exit_code(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (r.verdict == Verdict::fail) return 1;
  return 0;
}

}  // namespace lls
