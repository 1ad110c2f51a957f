#include "qrp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include "qrp/haar.hpp"
#include "qrp/reciprocity.hpp"

namespace qrp::cli {

namespace {

using nlohmann::json;

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("QRECIP_OUT_DIR"))
    return std::filesystem::path(dir) / p;
  return p;
}

struct Manifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  long long seed = 0;
  std::string started_at = timestamp_utc();
  std::vector<std::string> outputs;
  std::string error;

  void write(const std::filesystem::path& path) const {
    json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["tool_version"] = kToolVersion;
    j["started_at"] = started_at;
    j["outputs"] = outputs;
    if (!error.empty()) j["error"] = error;
    std::ofstream f(path);
    f << j.dump(2) << "\n";
  }
};

// RFC 4180 line endings; the leading comment row labels the units
void write_csv(const std::filesystem::path& path, const std::string& units,
               const std::string& header,
               const std::vector<std::array<double, 2>>& rows,
               bool first_col_int = false) {
  std::ofstream f(path);
  f << "# " << units << "\r\n" << header << "\r\n";
  f.precision(12);
  for (const auto& r : rows) {
    if (first_col_int)
      f << static_cast<long long>(r[0]);
    else
      f << r[0];
    f << "," << r[1] << "\r\n";
  }
}

void write_gnuplot_stub(const std::filesystem::path& csv,
                        const std::string& xlabel, const std::string& ylabel) {
  std::filesystem::path gp = csv;
  gp += ".gp";
  std::ofstream f(gp);
  f << "set datafile separator ','\n"
    << "set xlabel '" << xlabel << "'\n"
    << "set ylabel '" << ylabel << "'\n"
    << "plot '" << csv.string() << "' skip 2 with points pt 7 title '"
    << ylabel << "'\n";
}

json coeffs_to_json(const std::vector<std::complex<double>>& c) {
  json arr = json::array();
  for (const auto& v : c) arr.push_back({{"re", v.real()}, {"im", v.imag()}});
  return arr;
}

json estimate_to_json(const lipschitz::LipschitzEstimate& e) {
  return {{"value", e.value},
          {"argmax_x", e.argmax_x},
          {"coarse_grid_points", e.coarse_grid_points},
          {"refined", e.refined},
          {"divergent", e.divergent}};
}

json fit_to_json(const lipschitz::DivergenceFit& fit) {
  return {{"model",
           fit.model == lipschitz::DivergenceModel::linear_in_inverse_epsilon
               ? "linear_in_inverse_epsilon"
               : "quadratic_in_log_inverse_epsilon"},
          {"coefficients", fit.coefficients},
          {"r_squared", fit.r_squared}};
}

int cmd_sho_scan(int n_max, double alpha, const std::string& out,
                 int threads, bool gnuplot, Manifest& manifest) {
  reciprocity::Options opts;
  opts.threads = threads;
  const auto scan = reciprocity::sho_level_scan(n_max, alpha, opts);
  std::vector<std::array<double, 2>> rows;
  for (const auto& [level, product] : scan)
    rows.push_back({static_cast<double>(level), product});
  const auto path = resolve_out(out);
  write_csv(path, "product_tilde in units of 1/hbar", "level,product_tilde",
            rows, true);
  manifest.outputs.push_back(path.string());
  if (gnuplot) {
    write_gnuplot_stub(path, "level", "product_tilde");
    manifest.outputs.push_back(path.string() + ".gp");
  }
  return 0;
}

int cmd_divergence(const std::string& state_name, double gamma, double eps_min,
                   double eps_max, int points, const std::string& model_name,
                   const std::string& out, bool gnuplot, Manifest& manifest) {
  states::StateSpec state = state_name == "cauchy"
                                ? states::make_cauchy(0.0, gamma)
                                : states::make_student(2);
  lipschitz::Density g{
      [&state](double p) { return states::momentum_density(state, p); },
      [&state](double p) { return states::momentum_density_derivative(state, p); }};
  lipschitz::Options lc;
  lc.coarse_points = 1 << 12;
  const double outer = state_name == "cauchy" ? 30.0 / gamma : 30.0;
  const auto sweep = lipschitz::epsilon_sweep(g, eps_min, eps_max, points, outer, lc);
  const auto model = model_name == "linear"
                         ? lipschitz::DivergenceModel::linear_in_inverse_epsilon
                         : lipschitz::DivergenceModel::quadratic_in_log_inverse_epsilon;
  const auto fit = lipschitz::fit_divergence(sweep, model);

  std::vector<std::array<double, 2>> rows;
  for (const auto& [eps, value] : sweep) rows.push_back({eps, value});
  const auto path = resolve_out(out);
  write_csv(path, "lc in units of 1/hbar^2 (momentum density slope)",
            "epsilon,lc", rows);
  manifest.outputs.push_back(path.string());

  std::filesystem::path fit_path = path;
  fit_path += ".fit.json";
  std::ofstream f(fit_path);
  f << fit_to_json(fit).dump(2) << "\n";
  manifest.outputs.push_back(fit_path.string());
  if (gnuplot) {
    write_gnuplot_stub(path, "epsilon", "lc");
    manifest.outputs.push_back(path.string() + ".gp");
  }
  return 0;
}

int cmd_haar_min(int degree, long samples, bool auto_doubling,
                 std::uint64_t seed, const std::string& field,
                 const std::string& objective, int threads, bool polish,
                 const std::string& out, Manifest& manifest) {
  haar::SearchConfig config;
  config.degree = degree;
  config.num_samples = samples;
  config.seed = seed;
  config.field = field == "real" ? haar::Field::real : haar::Field::complex;
  config.doubling = auto_doubling;
  config.threads = threads;
  const auto obj = objective == "uncertainty" ? haar::Objective::uncertainty
                                              : haar::Objective::reciprocity;
  const auto result = obj == haar::Objective::uncertainty
                          ? haar::minimize_uncertainty(config)
                          : haar::minimize_reciprocity(config);

  json j;
  j["degree"] = degree;
  j["field"] = field;
  j["seed"] = seed;
  j["N"] = result.samples_used;
  j["objective"] = objective;
  j["min_product"] = result.min_product;
  j["argmin_coeffs"] = coeffs_to_json(result.argmin_coeffs);
  j["converged"] = result.converged;
  json hist = json::array();
  for (const auto& [n, running] : result.history)
    hist.push_back({{"N", n}, {"running_min", running}});
  j["history"] = hist;
  if (polish) {
    const auto polished = haar::polish_minimum(result, obj);
    j["polished"] = {{"value", polished.value},
                     {"evaluations", polished.evaluations},
                     {"coeffs", coeffs_to_json(polished.coeffs)}};
  }
  const auto path = resolve_out(out);
  {
    std::ofstream f(path);
    f << j.dump(2) << "\n";
  }
  manifest.outputs.push_back(path.string());

  std::vector<std::array<double, 2>> rows;
  for (const auto& [n, running] : result.history)
    rows.push_back({static_cast<double>(n), running});
  std::filesystem::path hist_path = path;
  hist_path += ".history.csv";
  write_csv(hist_path, "running_min in units of 1/hbar", "N,running_min", rows,
            true);
  manifest.outputs.push_back(hist_path.string());
  return 0;
}

int cmd_state_report(const std::string& spec, const std::string& out,
                     Manifest& manifest) {
  const auto state = parse_state_spec(spec);
  const auto result = reciprocity::reciprocity_product(state);

  json j;
  j["state"] = spec;
  j["eta_x"] = result.eta_x;
  j["eta_p"] = result.eta_p;
  j["divergent"] = result.divergent;
  if (result.divergent)
    j["product_tilde"] = nullptr;  // +inf sentinel; JSON carries null
  else
    j["product_tilde"] = result.product_tilde;
  j["units"] = "1/hbar";
  j["diagnostics"] = {{"x_estimate", estimate_to_json(result.x_estimate)},
                      {"p_estimate", estimate_to_json(result.p_estimate)},
                      {"plan",
                       {{"x_min", result.plan.x_min},
                        {"x_max", result.plan.x_max},
                        {"n_points", result.plan.n_points},
                        {"window_tail_mass", result.plan.window_tail_mass}}}};
  if (result.divergence_fit) {
    j["diagnostics"]["divergence_fit"] = fit_to_json(*result.divergence_fit);
    json sweep = json::array();
    for (const auto& [eps, lc] : result.divergence_sweep)
      sweep.push_back({{"epsilon", eps}, {"lc", lc}});
    j["diagnostics"]["divergence_sweep"] = sweep;
  }
  try {
    j["uncertainty_product"] = reciprocity::uncertainty_product(state);
  } catch (const std::domain_error&) {
    j["uncertainty_product"] = nullptr;
  }
  const auto path = resolve_out(out);
  std::ofstream f(path);
  f << j.dump(2) << "\n";
  manifest.outputs.push_back(path.string());
  return 0;
}

}  // namespace

states::StateSpec parse_state_spec(const std::string& text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> void {
    throw ParseError(what + " at position " + std::to_string(pos) + " in '" +
                         text + "'",
                     pos);
  };
  auto take_until = [&](char stop) {
    std::string token;
    while (pos < text.size() && text[pos] != stop) token += text[pos++];
    return token;
  };
  auto expect = [&](char c) {
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "'");
    ++pos;
  };

  const std::string family = take_until(':');
  expect(':');

  auto parse_double = [&](const std::string& token, std::size_t at) {
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      return v;
    } catch (const std::exception&) {
      pos = at;
      fail("expected a number");
      return 0.0;  // unreachable
    }
  };
  auto parse_int = [&](const std::string& token, std::size_t at) {
    const double v = parse_double(token, at);
    if (v != std::floor(v)) {
      pos = at;
      fail("expected an integer");
    }
    return static_cast<int>(v);
  };

  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  if (family == "hermite") {
    const std::size_t key_at = pos;
    if (text.compare(pos, 3, "c=[") != 0) {
      pos = key_at;
      fail("expected 'c=['");
    }
    pos += 3;
    std::vector<std::complex<double>> coeffs;
    while (true) {
      const std::size_t at = pos;
      std::string token;
      while (pos < text.size() && text[pos] != ',' && text[pos] != ']')
        token += text[pos++];
      if (token.empty()) fail("expected a coefficient");
      // forms: re | imi | re+imi | re-imi
      double re = 0.0, im = 0.0;
      if (!token.empty() && token.back() == 'i') {
        std::size_t split = token.find_last_of("+-");
        if (split == std::string::npos || split == 0) split = 0;
        const std::string im_part = token.substr(split, token.size() - split - 1);
        im = parse_double(im_part.empty() || im_part == "+"   ? "1"
                          : im_part == "-"                    ? "-1"
                                                              : im_part,
                          at);
        if (split > 0) re = parse_double(token.substr(0, split), at);
      } else {
        re = parse_double(token, at);
      }
      coeffs.emplace_back(re, im);
      if (pos >= text.size()) fail("expected ',' or ']'");
      if (text[pos] == ']') {
        ++pos;
        break;
      }
      ++pos;  // ','
    }
    return states::make_hermite(std::move(coeffs));
  }

  while (pos < text.size()) {
    const std::size_t at = pos;
    const std::string key = take_until('=');
    expect('=');
    const std::size_t val_at = pos;
    const std::string value = take_until(',');
    if (value.empty()) {
      pos = val_at;
      fail("expected a value");
    }
    kv[key] = {value, val_at};
    if (pos < text.size()) ++pos;  // ','
    (void)at;
  }
  auto need = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      pos = text.size();
      fail("missing parameter '" + key + "'");
    }
    return it->second;
  };

  if (family == "sho") {
    const auto [nv, np] = need("n");
    const auto [av, ap] = need("alpha");
    return states::make_sho(parse_int(nv, np), parse_double(av, ap));
  }
  if (family == "cauchy") {
    const auto [xv, xp] = need("x0");
    const auto [gv, gp] = need("gamma");
    return states::make_cauchy(parse_double(xv, xp), parse_double(gv, gp));
  }
  if (family == "student") {
    const auto [dv, dp] = need("dof");
    return states::make_student(parse_int(dv, dp));
  }
  pos = 0;
  fail("unknown state family '" + family + "'");
  throw std::logic_error("unreachable");
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("qrecip");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Reciprocity products of position/momentum density Lipschitz "
               "constants for a catalog of one-dimensional quantum states"};
  app.require_subcommand(1);
  bool gnuplot = false;
  app.add_flag("--gnuplot-stub", gnuplot, "write a gnuplot script next to CSV outputs");

  auto* sho = app.add_subcommand("sho-scan", "reciprocity product per oscillator level");
  int n_max = 0;
  double alpha = 1.0;
  int threads = 0;
  std::string out = "sho_scan.csv";
  sho->add_option("--n-max", n_max, "highest level")->required();
  sho->add_option("--alpha", alpha, "oscillator scale m omega / hbar");
  sho->add_option("--out", out, "output CSV path");
  sho->add_option("--threads", threads, "worker cap (0: all cores)");

  auto* div = app.add_subcommand("divergence",
                                 "Lipschitz constant on punctured domains vs epsilon");
  std::string div_state = "cauchy";
  std::string model;
  double eps_min = 0.0, eps_max = 0.0, gamma = 1.0;
  int points = 24;
  std::string div_out = "divergence.csv";
  div->add_option("--state", div_state, "cauchy | student2")
      ->check(CLI::IsMember({"cauchy", "student2"}));
  div->add_option("--model", model, "linear | quadratic")
      ->check(CLI::IsMember({"linear", "quadratic"}));
  div->add_option("--eps-min", eps_min, "smallest epsilon");
  div->add_option("--eps-max", eps_max, "largest epsilon");
  div->add_option("--points", points, "sweep points");
  div->add_option("--gamma", gamma, "Cauchy scale");
  div->add_option("--out", div_out, "output CSV path");

  auto* hm = app.add_subcommand("haar-min", "minimum product over random superpositions");
  int degree = 2;
  long samples = 3200;
  bool auto_doubling = false, polish = false;
  std::uint64_t seed = 0;
  std::string field = "complex", objective = "reciprocity";
  std::string hm_out = "haar_min.json";
  hm->add_option("--degree", degree, "superposition degree (2..8)")->required();
  auto* samples_opt = hm->add_option("--samples", samples, "sample count");
  hm->add_flag("--auto", auto_doubling, "double N until the minimum stabilizes")
      ->excludes(samples_opt);
  hm->add_option("--seed", seed, "RNG seed");
  hm->add_option("--field", field, "real | complex")
      ->check(CLI::IsMember({"real", "complex"}));
  hm->add_option("--objective", objective, "reciprocity | uncertainty")
      ->check(CLI::IsMember({"reciprocity", "uncertainty"}));
  hm->add_option("--threads", threads, "worker cap (0: all cores)");
  hm->add_flag("--polish", polish, "report a locally refined minimum as well");
  hm->add_option("--out", hm_out, "output JSON path");

  auto* sr = app.add_subcommand("state-report", "full reciprocity report for one state");
  std::string spec;
  std::string sr_out = "state_report.json";
  sr->add_option("--state", spec,
                 "sho:n=<int>,alpha=<float> | cauchy:x0=<float>,gamma=<float> "
                 "| student:dof=<int> | hermite:c=[...]")
      ->required();
  sr->add_option("--out", sr_out, "output JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Manifest manifest;
  std::string manifest_base;
  int code = 0;
  try {
    if (sho->parsed()) {
      manifest.command = "sho-scan";
      manifest.parameters = {{"n_max", std::to_string(n_max)},
                             {"alpha", std::to_string(alpha)},
                             {"out", out}};
      manifest_base = resolve_out(out).string();
      code = cmd_sho_scan(n_max, alpha, out, threads, gnuplot, manifest);
    } else if (div->parsed()) {
      if (model.empty()) model = div_state == "cauchy" ? "linear" : "quadratic";
      if (eps_min == 0.0 || eps_max == 0.0) {
        const auto range = reciprocity::divergence_sweep_range(
            div_state == "cauchy" ? states::make_cauchy(0.0, gamma)
                                  : states::make_student(2));
        if (eps_min == 0.0) eps_min = range.first;
        if (eps_max == 0.0) eps_max = range.second;
      }
      if (!(0.0 < eps_min && eps_min < eps_max))
        throw std::invalid_argument("divergence: need 0 < eps-min < eps-max");
      manifest.command = "divergence";
      manifest.parameters = {{"state", div_state},
                             {"model", model},
                             {"eps_min", std::to_string(eps_min)},
                             {"eps_max", std::to_string(eps_max)},
                             {"points", std::to_string(points)},
                             {"gamma", std::to_string(gamma)},
                             {"out", div_out}};
      manifest_base = resolve_out(div_out).string();
      code = cmd_divergence(div_state, gamma, eps_min, eps_max, points, model,
                            div_out, gnuplot, manifest);
    } else if (hm->parsed()) {
      manifest.command = "haar-min";
      manifest.seed = static_cast<long long>(seed);
      manifest.parameters = {{"degree", std::to_string(degree)},
                             {"samples", std::to_string(samples)},
                             {"auto", auto_doubling ? "true" : "false"},
                             {"field", field},
                             {"objective", objective},
                             {"out", hm_out}};
      manifest_base = resolve_out(hm_out).string();
      code = cmd_haar_min(degree, samples, auto_doubling, seed, field,
                          objective, threads, polish, hm_out, manifest);
    } else if (sr->parsed()) {
      manifest.command = "state-report";
      manifest.parameters = {{"state", spec}, {"out", sr_out}};
      manifest_base = resolve_out(sr_out).string();
      code = cmd_state_report(spec, sr_out, manifest);
    }
  } catch (const ParseError& e) {
    manifest.error = e.what();
    code = 2;
  } catch (const std::invalid_argument& e) {
    manifest.error = e.what();
    code = 2;
  } catch (const std::exception& e) {
    manifest.error = e.what();
    code = 1;
  }
  if (!manifest_base.empty()) manifest.write(manifest_base + ".manifest.json");
  if (code == 2 && !manifest.error.empty())
    std::fprintf(stderr, "error: %s\n", manifest.error.c_str());
  return code;
}

}  // namespace qrp::cli
