// lls_lab: sampling, local spacing runs, theory tables and the acceptance report.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lls/acceptance.hpp"
#include "lls/lls.hpp"

using nlohmann::json;

namespace {

constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

// "key = value" lines, '#' comments. Each pair becomes "--key value" placed
// right after the subcommand, so flags given on the command line win.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lls::ArgumentError("cannot open config file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = lls::detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw lls::ParseError("expected key = value", no);
    std::string key(lls::detail::trim(body.substr(0, eq)));
    std::string value(lls::detail::trim(body.substr(eq + 1)));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw lls::ParseError("empty key", no);
    if (value == "false") continue;
    out.push_back("--" + key);
    if (value != "true") out.push_back(value);
  }
  return out;
}

std::vector<std::string> expand_config(int argc, char** argv, const std::vector<std::string>& subcommands) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      path = args[k + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k), args.begin() + static_cast<std::ptrdiff_t>(k + 2));
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  if (!path) return args;
  const auto sub = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
    return std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
  });
  if (sub == args.end()) throw lls::ArgumentError("--config needs a subcommand");
  const auto extra = config_tokens(*path);
  args.insert(sub + 1, extra.begin(), extra.end());
  return args;
}

json header(const std::string& command, const json& config) {
  return {{"code_version", lls::code_version}, {"command", command}, {"config", config}};
}

// CSV outputs carry the same header as comment lines.
std::string csv_header(const std::string& command, const json& config) {
  return "# " + std::string(lls::code_version) + "\n# command " + command + "\n# config " + config.dump() + "\n";
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else lls::write_file(path, text);
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  int beta = 2;
  std::size_t n = 64, m = 1;
  std::uint64_t seed = 1;
  std::string method = "cmv";
  std::string out;
};

lls::Method parse_method(const std::string& s) {
  if (s == "cmv") return lls::Method::cmv;
  if (s == "haar_qr" || s == "haar-qr") return lls::Method::haar_qr;
  throw lls::ArgumentError("unknown method '" + s + "' (cmv, haar_qr)");
}

int cmd_sample(const SampleArgs& a) {
  lls::EnsembleConfig ec{a.beta, a.n, 0, parse_method(a.method)};
  ec.validate();
  if (a.m == 0) throw lls::ArgumentError("--m must be positive");
  const json config{{"beta", a.beta}, {"n", a.n}, {"m", a.m}, {"seed", a.seed}, {"method", a.method}};
  std::vector<lls::CircularSpectrum> spectra;
  spectra.reserve(a.m);
  for (std::size_t i = 0; i < a.m; ++i) {
    const auto s = lls::derive_seed(a.seed, i);
    if (a.beta == 0) {
      spectra.push_back(lls::sample_poisson_circle(a.n, s));
    } else {
      auto c = ec;
      c.seed = s;
      spectra.push_back(lls::sample_cbe(c));
    }
  }
  std::ostringstream text;
  text << csv_header("sample", config);
  lls::write_spectra_csv(text, spectra);
  emit(a.out, text.str());
  return 0;
}

// ---------------------------------------------------------------- lls

struct LlsArgs {
  std::string source = "cue";
  std::string protocol;
  std::size_t n = 64, m = 10000;
  double phi = std::numbers::pi;
  std::size_t lmax = 4;
  std::uint64_t seed = 1;
  std::string method = "cmv";
  std::size_t n_majorana = 16;
  double coupling = 4.0;
  double edge_fraction = 0.05;
  double area = 4.0 * std::numbers::pi;
  double aspect_lo = 1.2, aspect_hi = 3.0;
  double center = 1e8, halfwidth = 600.0;
  std::string zeros, zeros_base;
  std::size_t q = 10000;
  double tolerance = 0.0;
  std::size_t workers = 0;
  std::string csv, out;
};

int circle_beta(const std::string& source) {
  static const std::map<std::string, int> betas{{"coe", 1}, {"cue", 2}, {"cse", 4}, {"poisson", 0}};
  const auto it = betas.find(source);
  return it == betas.end() ? -1 : it->second;
}

// Reference rows and the tolerances used to flag them.
struct Comparison {
  std::string table;
  std::vector<double> means;  // l = 0.., empty if not compared
  std::vector<double> ratios; // l = 1..
  double mean_tol0 = 0.01, mean_tol = 0.01, ratio_tol = 0.02;
};

Comparison comparison_for(const LlsArgs& a) {
  const auto& ref = lls::reference_constants();
  Comparison c;
  const int beta = circle_beta(a.source);
  if (beta >= 0) {
    const auto& row = ref.means.at(beta);
    c.table = beta == 0 ? "Poisson" : "circular beta=" + std::to_string(beta);
    c.means.assign(row.begin(), row.end());
    const auto& rr = ref.ratios.at(beta);
    c.ratios.assign(rr.begin(), rr.end());
    if (beta == 0) c.mean_tol = c.ratio_tol = 0.005;
    if (beta == 1 || beta == 4) c.mean_tol0 = c.mean_tol = 0.015;
  } else if (a.source == "syk") {
    const int b = lls::syk_beta(a.n_majorana);
    c.table = "SYK ratios, beta=" + std::to_string(b);
    const auto& rr = ref.ratios.at(b);
    c.ratios.assign(rr.begin(), rr.end());
  } else if (a.source == "billiard") {
    c.table = "billiard family";
    c.means = {2.0, 1.0, 1.0, 1.0, 1.0};
    c.mean_tol0 = 0.03;
    c.mean_tol = 0.02;
  } else if (a.source == "zeros") {
    c.table = "zeta zeros";
    c.means.assign(ref.riemann_zeros.begin(), ref.riemann_zeros.end());
    c.mean_tol0 = c.mean_tol = 0.02;
  }
  if (a.tolerance > 0.0) c.mean_tol0 = c.mean_tol = c.ratio_tol = a.tolerance;
  return c;
}

std::string default_protocol(const std::string& source) {
  if (source == "billiard") return "2.2";
  if (source == "zeros") return "2.1";
  return "1";
}

int cmd_lls(LlsArgs a) {
  if (a.protocol.empty()) a.protocol = default_protocol(a.source);
  if (a.protocol != default_protocol(a.source))
    throw lls::ArgumentError("source '" + a.source + "' runs protocol " + default_protocol(a.source) + ", not " +
                             a.protocol);
  if (a.lmax < 1) throw lls::ArgumentError("--lmax must be at least 1");
  const std::size_t workers = a.workers ? a.workers : lls::default_workers();
  lls::RunOptions opt{a.seed, workers, 0.0};

  json config{{"source", a.source}, {"protocol", a.protocol}, {"lmax", a.lmax}, {"seed", a.seed}};
  lls::SpacingStats st;
  const int beta = circle_beta(a.source);
  if (beta >= 0) {
    lls::EnsembleConfig ec{beta, a.n, 0, parse_method(a.method)};
    ec.validate();
    if (a.m == 0) throw lls::ArgumentError("--m must be positive");
    config.update({{"n", a.n}, {"m", a.m}, {"phi", a.phi}, {"method", a.method}});
    st = lls::protocol1(
        [&](std::uint64_t s) {
          if (beta == 0) return lls::sample_poisson_circle(a.n, s);
          auto c = ec;
          c.seed = s;
          return lls::sample_cbe(c);
        },
        a.phi, a.lmax, a.m, opt);
  } else if (a.source == "syk") {
    lls::SykConfig probe{a.n_majorana, a.coupling, 0};
    probe.validate();
    config.update({{"n_majorana", a.n_majorana}, {"coupling", a.coupling}, {"m", a.m}, {"phi", a.phi},
                   {"edge_fraction", a.edge_fraction}});
    lls::SykRunConfig c{a.n_majorana, a.coupling, a.m, a.phi, a.lmax, a.edge_fraction, a.seed, workers};
    st = lls::run_syk(c);
  } else if (a.source == "billiard") {
    config.update({{"area", a.area}, {"aspect_lo", a.aspect_lo}, {"aspect_hi", a.aspect_hi}, {"center", a.center},
                   {"halfwidth", a.halfwidth}, {"q", a.q}});
    lls::BilliardRunConfig c{a.area, a.aspect_lo, a.aspect_hi, a.center, a.halfwidth, a.q, a.lmax, a.seed, workers};
    st = lls::run_billiard(c);
  } else if (a.source == "zeros") {
    if (a.zeros.empty()) throw lls::ArgumentError("--source zeros needs --zeros FILE");
    config.update({{"zeros", a.zeros}, {"q", a.q}});
    if (!a.zeros_base.empty()) config["zeros_base"] = a.zeros_base;
    const auto ds = lls::parse_zeros_file(a.zeros, a.zeros_base.empty() ? std::nullopt
                                                                       : std::optional<std::string>(a.zeros_base));
    st = lls::run_zeros(ds, a.q, a.lmax, a.seed);
  } else {
    throw lls::ArgumentError("unknown source '" + a.source + "' (cue, coe, cse, poisson, syk, billiard, zeros)");
  }
  config["workers"] = workers;

  const auto cmp = comparison_for(a);
  const auto rho = lls::ratios(st);
  bool all_ok = true;
  json means = json::array();
  for (std::size_t l = 0; l <= st.max_order(); ++l) {
    json row{{"ell", l}, {"mean", st.mean(l)}, {"stderr", st.std_error(l)}, {"ci99", st.ci99(l)}};
    if (l < cmp.means.size()) {
      const double tol = l == 0 ? cmp.mean_tol0 : cmp.mean_tol;
      const bool ok = std::fabs(st.mean(l) - cmp.means[l]) <= tol;
      all_ok = all_ok && ok;
      row.update({{"reference", cmp.means[l]}, {"deviation", st.mean(l) - cmp.means[l]}, {"tolerance", tol},
                  {"verdict", ok ? "PASS" : "FAIL"}});
    }
    means.push_back(row);
  }
  json ratio_rows = json::array();
  for (std::size_t l = 0; l < rho.size(); ++l) {
    json row{{"ell", l + 1}, {"ratio", rho[l].value}, {"stderr", rho[l].se}, {"ci99", rho[l].ci99()}};
    if (l < cmp.ratios.size()) {
      const bool ok = std::fabs(rho[l].value - cmp.ratios[l]) <= cmp.ratio_tol;
      all_ok = all_ok && ok;
      row.update({{"reference", cmp.ratios[l]}, {"deviation", rho[l].value - cmp.ratios[l]},
                  {"tolerance", cmp.ratio_tol}, {"verdict", ok ? "PASS" : "FAIL"}});
    }
    ratio_rows.push_back(row);
  }
  json report = header("lls", config);
  report.update({{"reference_table", cmp.table},
                 {"count", st.count()},
                 {"rejected", st.rejected()},
                 {"discarded", st.discarded()},
                 {"means", means},
                 {"ratios", ratio_rows},
                 {"verdict", all_ok ? "PASS" : "FAIL"}});
  if (!a.csv.empty()) {
    std::ostringstream text;
    text << csv_header("lls", config);
    lls::write_stats_csv(text, st);
    lls::write_file(a.csv, text.str());
  }
  emit(a.out, report.dump(2) + "\n");
  return all_ok ? 0 : exit_fail;
}

// ---------------------------------------------------------------- theory

struct TheoryArgs {
  std::string what = "means";
  int beta = 2;
  std::size_t lmax = 4;
  double smax = 4.0;
  double step = 0.01;
  std::string out;
};

int cmd_theory(const TheoryArgs& a) {
  lls::check_beta(a.beta, true);
  const json config{{"what", a.what}, {"beta", a.beta}, {"lmax", a.lmax}, {"smax", a.smax}, {"step", a.step}};
  std::ostringstream text;
  if (a.what == "constants") {
    const auto& ref = lls::reference_constants();
    json j = header("theory", config);
    json means, ratios, mean_r;
    for (const auto& [b, row] : ref.means) means[std::to_string(b)] = row;
    for (const auto& [b, row] : ref.ratios) ratios[std::to_string(b)] = row;
    for (const auto& [b, v] : ref.mean_r) mean_r[std::to_string(b)] = v;
    j.update({{"means", means}, {"ratios", ratios}, {"mean_r_l8", mean_r}, {"zeta_zeros", ref.riemann_zeros},
              {"billiard", ref.billiard}});
    emit(a.out, j.dump(2) + "\n");
    return 0;
  }
  if (!(a.smax > 0.0) || !(a.step > 0.0)) throw lls::ArgumentError("--smax and --step must be positive");
  text << csv_header("theory", config);
  if (a.what == "means") {
    if (a.beta != 0 && a.beta != 2)
      throw lls::ArgumentError("computed means exist for beta = 0 and 2; use --what constants for 1 and 4");
    std::vector<double> ls, vs;
    for (std::size_t l = 0; l <= a.lmax; ++l) {
      ls.push_back(static_cast<double>(l));
      vs.push_back(lls::mean_lls_theory(a.beta, l));
    }
    text << "ell,mean\n";
    for (std::size_t l = 0; l < vs.size(); ++l) text << l << ',' << lls::format17(vs[l]) << '\n';
  } else if (a.what == "gap") {
    std::vector<double> s, e;
    const auto n = static_cast<std::size_t>(std::llround(a.smax / a.step));
    for (std::size_t k = 0; k <= n; ++k) {
      s.push_back(a.step * static_cast<double>(k));
      e.push_back(lls::gap_probability(a.beta, s.back()));
    }
    lls::write_table_csv(text, "s", "E", s, e);
  } else if (a.what == "pdf" || a.what == "p0") {
    const auto d = a.what == "pdf" ? lls::spacing_pdf(a.beta, a.smax) : lls::p0_pdf(a.beta, a.smax);
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(a.step / d.h)));
    std::vector<double> s, v;
    for (std::size_t k = 0; k < d.values.size(); k += stride) {
      s.push_back(d.s(k));
      v.push_back(d.values[k]);
    }
    lls::write_table_csv(text, "s", a.what, s, v);
  } else if (a.what == "sigma") {
    const auto& table = lls::default_sigma0();
    const auto tmax = std::min(a.smax * lls::two_pi, table.t_max());
    text << "t,sigma,dsigma\n";
    for (double t = table.t0; t <= tmax; t += a.step * lls::two_pi) {
      const auto p = table.at(t);
      text << lls::format17(p.t) << ',' << lls::format17(p.sigma) << ',' << lls::format17(p.dsigma) << '\n';
    }
  } else {
    throw lls::ArgumentError("unknown --what '" + a.what + "' (means, gap, pdf, p0, sigma, constants)");
  }
  emit(a.out, text.str());
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string profile = "desk";
  std::string zeros, zeros_base, bundled;
  std::string json_path;
  std::uint64_t seed = 20240601;
  std::size_t workers = 0;
  std::vector<int> only;
};

int cmd_report(const ReportArgs& a) {
  lls::AcceptanceOptions o;
  o.workers = a.workers ? a.workers : lls::default_workers();
  o.seed = a.seed;
  if (!a.zeros.empty()) o.zeros_path = a.zeros;
  if (!a.zeros_base.empty()) o.zeros_base = a.zeros_base;
  if (!a.bundled.empty()) o.bundled_zeros = a.bundled;
#ifdef LLS_DATA_DIR
  else o.bundled_zeros = std::string(LLS_DATA_DIR) + "/zeros_1e4.txt";
#endif
  lls::AcceptanceSuite suite(lls::make_profile(a.profile), o);
  json config{{"profile", a.profile}, {"seed", a.seed}, {"workers", o.workers}};
  if (o.zeros_path) config["zeros"] = *o.zeros_path;
  if (o.bundled_zeros) config["bundled_zeros"] = *o.bundled_zeros;

  std::vector<lls::CriterionResult> results;
  auto print = [](const lls::CriterionResult& r) { std::cout << lls::format_result(r, true) << std::flush; };
  if (a.only.empty()) {
    results = suite.run_all(print);
  } else {
    for (int id : a.only) {
      results.push_back(suite.run(id));
      print(results.back());
    }
  }
  const int code = lls::exit_code(results);
  std::size_t pass = 0, fail = 0, skipped = 0;
  for (const auto& r : results)
    (r.verdict == lls::Verdict::pass ? pass : r.verdict == lls::Verdict::fail ? fail : skipped)++;
  std::cout << "\n" << pass << " passed, " << fail << " failed, " << skipped << " skipped\n";
  if (!a.json_path.empty()) {
    json j = header("report", config);
    json rs = json::array();
    for (const auto& r : results) rs.push_back(lls::to_json(r));
    j.update({{"criteria", rs}, {"passed", pass}, {"failed", fail}, {"skipped", skipped}, {"exit_code", code}});
    emit(a.json_path, j.dump(2) + "\n");
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local level spacing laboratory"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string(lls::code_version));
  app.footer("Any subcommand accepts --config FILE with key = value lines; explicit flags take precedence.\n"
             "LLS_LAB_THREADS sets the default worker count.");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample circular spectra to CSV");
  sample->add_option("--beta", sa.beta, "0 (Poisson), 1, 2 or 4")->capture_default_str();
  sample->add_option("--n", sa.n, "levels per spectrum")->capture_default_str();
  sample->add_option("--m", sa.m, "number of spectra")->capture_default_str();
  sample->add_option("--seed", sa.seed)->capture_default_str();
  sample->add_option("--method", sa.method, "cmv or haar_qr")->capture_default_str();
  sample->add_option("--out", sa.out, "output file (stdout if omitted)");

  LlsArgs la;
  auto* lls_cmd = app.add_subcommand("lls", "Local spacing means from one of the sources");
  lls_cmd->add_option("--source,--ensemble", la.source, "cue, coe, cse, poisson, syk, billiard, zeros")
      ->capture_default_str();
  lls_cmd->add_option("--protocol", la.protocol, "1, 2.1 or 2.2 (defaults by source)");
  lls_cmd->add_option("--n", la.n, "levels per circular spectrum")->capture_default_str();
  lls_cmd->add_option("--m", la.m, "spectra (protocol 1)")->capture_default_str();
  lls_cmd->add_option("--phi", la.phi, "reference point")->capture_default_str();
  lls_cmd->add_option("--lmax", la.lmax, "largest spacing order")->capture_default_str();
  lls_cmd->add_option("--seed", la.seed)->capture_default_str();
  lls_cmd->add_option("--method", la.method, "cmv or haar_qr")->capture_default_str();
  lls_cmd->add_option("--n-majorana", la.n_majorana)->capture_default_str();
  lls_cmd->add_option("--coupling", la.coupling, "SYK J")->capture_default_str();
  lls_cmd->add_option("--edge-fraction", la.edge_fraction, "SYK levels excluded at each edge")->capture_default_str();
  lls_cmd->add_option("--area", la.area, "billiard area")->capture_default_str();
  lls_cmd->add_option("--aspect-lo", la.aspect_lo)->capture_default_str();
  lls_cmd->add_option("--aspect-hi", la.aspect_hi)->capture_default_str();
  lls_cmd->add_option("--center", la.center, "billiard energy center")->capture_default_str();
  lls_cmd->add_option("--halfwidth", la.halfwidth, "billiard energy window half-width")->capture_default_str();
  lls_cmd->add_option("--zeros", la.zeros, "zeros file");
  lls_cmd->add_option("--zeros-base", la.zeros_base, "base ordinate added to every offset");
  lls_cmd->add_option("--q", la.q, "reference points (2.1) or aspect ratios (2.2)")->capture_default_str();
  lls_cmd->add_option("--tolerance", la.tolerance, "override every comparison tolerance");
  lls_cmd->add_option("--workers", la.workers, "0 = LLS_LAB_THREADS or hardware");
  lls_cmd->add_option("--csv", la.csv, "also write per-order statistics as CSV");
  lls_cmd->add_option("--out", la.out, "JSON report file (stdout if omitted)");

  TheoryArgs ta;
  auto* theory = app.add_subcommand("theory", "Painleve and Fredholm theory tables");
  theory->add_option("--what", ta.what, "means, gap, pdf, p0, sigma, constants")->capture_default_str();
  theory->add_option("--beta", ta.beta)->capture_default_str();
  theory->add_option("--lmax", ta.lmax)->capture_default_str();
  theory->add_option("--smax", ta.smax)->capture_default_str();
  theory->add_option("--step", ta.step, "grid step in s")->capture_default_str();
  theory->add_option("--out", ta.out, "output file (stdout if omitted)");

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Run the acceptance suite");
  report->add_option("--profile", ra.profile, "smoke, desk or full-desk")->capture_default_str();
  report->add_option("--zeros", ra.zeros, "high-height zeros file");
  report->add_option("--zeros-base", ra.zeros_base, "base ordinate for that file");
  report->add_option("--bundled-zeros", ra.bundled, "low zeros used for the parser round trip");
  report->add_option("--json", ra.json_path, "write the JSON report here ('-' for stdout)");
  report->add_option("--seed", ra.seed)->capture_default_str();
  report->add_option("--workers", ra.workers, "0 = LLS_LAB_THREADS or hardware");
  report->add_option("--only", ra.only, "run just these criteria")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv, {"sample", "lls", "theory", "report"});
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  } catch (const lls::Error& e) {
    std::cerr << "lls_lab: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (*sample) return cmd_sample(sa);
    if (*lls_cmd) return cmd_lls(la);
    if (*theory) return cmd_theory(ta);
    if (*report) return cmd_report(ra);
  } catch (const lls::ArgumentError& e) {
    std::cerr << "lls_lab: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "lls_lab: " << e.what() << '\n';
    return exit_fail;
  }
  return exit_usage;
}
