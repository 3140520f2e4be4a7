#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "yule/analytic.hpp"
#include "yule/cli.hpp"
#include "yule/errors.hpp"
#include "yule/montecarlo.hpp"
#include "yule/specfun.hpp"

namespace yule::cli {

namespace {

using nlohmann::json;
using yule::detail::fail_domain;
using yule::detail::require;

enum class Format { csv, json };

const std::map<std::string, Format> kFormats{{"csv", Format::csv}, {"json", Format::json}};

std::string normalize(std::string s) {
  for (char& c : s) c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Output {
  std::string path;

  void write(std::ostream& out, const std::string& text) const {
    if (path.empty()) {
      out << text;
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) fail_domain("cannot open output file '" + path + "'");
    file << text;
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
  }
};

void add_output(CLI::App* cmd, Output& o) { cmd->add_option("-o,--output", o.path, "Write to this file instead of stdout"); }

void add_format(CLI::App* cmd, Format& f) {
  cmd->add_option("--format", f, "Output format")->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
}

json table_json(const Table& tab) {
  json rows = json::array();
  for (const auto& r : tab.rows) {
    json row;
    for (std::size_t i = 0; i < r.size(); ++i) row[tab.columns[i]] = std::isfinite(r[i]) ? json(r[i]) : json(nullptr);
    rows.push_back(row);
  }
  return rows;
}

// --- model flags ---------------------------------------------------------

struct ModelFlags {
  std::string model = "linear";
  double lambda = 1.0;
  double nu = 1.0;
  double beta = 1.0;
  double alpha = 1.0;
  double t = 1.0;
  std::vector<double> rates;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* nu_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* rates_opt = nullptr;

  bool species_model() const { return model != "tfpp" && model != "yule"; }

  void check() const {
    require(rates_opt->count() == 0 || model == "nonlinear", "--rates is only valid with --model nonlinear");
    require(model != "nonlinear" || rates_opt->count() > 0, "--model nonlinear needs --rates");
    require(model != "nonlinear" || lambda_opt->count() == 0, "--lambda is not used by --model nonlinear; give --rates");
    require(alpha_opt->count() == 0 || model == "tfpp", "--alpha is only valid with --model tfpp");
    require(!(model == "tfpp" && alpha_opt->count() && nu_opt->count()), "give --alpha or --nu for tfpp, not both");
    require(beta_opt->count() == 0 || species_model(), "--beta is not a parameter of --model " + model);
    require(nu_opt->count() == 0 || model != "yule", "--nu is not a parameter of --model yule");
  }

  double tfpp_alpha() const { return alpha_opt->count() ? alpha : nu; }

  processes::ModelParams params() const {
    processes::ModelParams p;
    p.nu = nu;
    p.beta = beta;
    if (model == "linear") p.species = processes::Linear{lambda};
    else if (model == "constant") p.species = processes::Constant{lambda};
    else if (model == "critical") p.species = processes::CriticalBD{lambda};
    else p.species = processes::NonlinearDistinct{rates};
    p.validate();
    return p;
  }

  json to_json() const {
    json j{{"model", model}, {"t", t}};
    if (model == "tfpp") {
      j["lambda"] = lambda;
      j["alpha"] = tfpp_alpha();
      return j;
    }
    if (model == "yule") {
      j["lambda"] = lambda;
      return j;
    }
    j["nu"] = nu;
    j["beta"] = beta;
    if (model == "nonlinear") j["rates"] = rates;
    else j["lambda"] = lambda;
    return j;
  }
};

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--model", f.model, "tfpp, yule, linear, nonlinear, constant or critical")
      ->transform([](std::string s) { return normalize(s); })
      ->check(CLI::IsMember({"tfpp", "yule", "linear", "nonlinear", "constant", "critical"}));
  f.lambda_opt = cmd->add_option("--lambda", f.lambda, "Rate parameter");
  f.nu_opt = cmd->add_option("--nu", f.nu, "Genus exponent nu in (0, 1]");
  f.beta_opt = cmd->add_option("--beta", f.beta, "Species exponent beta in (0, 1]");
  f.alpha_opt = cmd->add_option("--alpha", f.alpha, "tfpp exponent (alias of --nu)");
  f.rates_opt = cmd->add_option("--rates", f.rates, "Distinct nonlinear rates lambda_1,...,lambda_K")->delimiter(',');
  cmd->add_option("--t", f.t, "Observation time");
}

// --- eval ----------------------------------------------------------------

struct EvalFlags {
  std::string function;
  double alpha = 0, beta = 1, gamma = 1, nu = 0, z = 0, x = 0, a = 0, b = 0, c = 0, tol = 1e-15;
  Format format = Format::csv;
  Output output;
  std::map<std::string, CLI::Option*> opts;
};

int cmd_eval(EvalFlags& f, std::ostream& out) {
  const std::string fn = normalize(f.function);
  auto need = [&](std::initializer_list<const char*> names) {
    for (const auto& [name, opt] : f.opts) {
      const bool wanted = std::find_if(names.begin(), names.end(), [&](const char* n) { return name == n; }) != names.end();
      if (name == "tol") continue;
      if (wanted && name != "beta" && name != "gamma" && opt->count() == 0) fail_domain(fn + " needs --" + name);
      if (!wanted && opt->count() > 0) fail_domain("--" + name + " is not a parameter of " + fn);
    }
  };
  specfun::EvalOptions eo;
  eo.tol = f.tol;
  Table tab;
  json j{{"schema_version", 1}, {"function", fn}};
  if (fn == "gamma") {
    need({"x"});
    tab.columns = {"value"};
    tab.rows = {{specfun::gamma(f.x)}};
    j["parameters"] = {{"x", f.x}};
  } else {
    specfun::SeriesResult r;
    if (fn == "mittag-leffler") {
      need({"alpha", "beta", "z"});
      r = specfun::mittag_leffler(f.alpha, f.beta, f.z, eo);
      j["parameters"] = {{"alpha", f.alpha}, {"beta", f.beta}, {"z", f.z}};
    } else if (fn == "prabhakar") {
      need({"nu", "beta", "gamma", "z"});
      r = specfun::prabhakar(f.nu, f.beta, f.gamma, f.z, eo);
      j["parameters"] = {{"nu", f.nu}, {"beta", f.beta}, {"gamma", f.gamma}, {"z", f.z}};
    } else if (fn == "wright-phi") {
      need({"alpha", "beta", "z"});
      r = specfun::wright_phi(f.alpha, f.beta, f.z, eo);
      j["parameters"] = {{"alpha", f.alpha}, {"beta", f.beta}, {"z", f.z}};
    } else if (fn == "gauss-2f1") {
      need({"a", "b", "c", "z"});
      r = specfun::gauss_2f1(f.a, f.b, f.c, f.z, eo);
      j["parameters"] = {{"a", f.a}, {"b", f.b}, {"c", f.c}, {"z", f.z}};
    } else {
      fail_domain("unknown function '" + f.function +
                  "' (expected gamma, mittag-leffler, prabhakar, wright-phi or gauss-2f1)");
    }
    tab.columns = {"value", "abs_error_bound", "terms_used"};
    tab.rows = {{r.value, r.abs_error_bound, static_cast<double>(r.terms_used)}};
  }
  if (f.format == Format::csv) {
    f.output.write(out, format_csv(tab));
  } else {
    const json rows = table_json(tab);
    j.update(rows[0]);
    if (j.contains("terms_used")) j["terms_used"] = static_cast<int>(tab.rows[0][2]);
    f.output.write(out, j.dump(2) + "\n");
  }
  return kExitOk;
}

// --- pmf / moments -------------------------------------------------------

struct LawFlags {
  ModelFlags model;
  std::uint64_t kmax = 0;
  CLI::Option* kmax_opt = nullptr;
  double tol = 1e-6;
  std::uint64_t k_ceiling = 200;
  Format format = Format::csv;
  Output output;
};

int cmd_pmf(LawFlags& f, std::ostream& out) {
  const ModelFlags& m = f.model;
  m.check();
  analytic::PmfOptions opts;
  opts.tol = f.tol;
  opts.k_ceiling = f.k_ceiling;
  require(f.tol > 0.0 && f.tol < 1.0, "--tol must lie in (0, 1)");
  const bool fixed = f.kmax_opt->count() > 0;
  analytic::Pmf law;
  if (m.model == "tfpp") {
    law = fixed ? analytic::tfpp_pmf(m.lambda, m.tfpp_alpha(), m.t, f.kmax)
                : analytic::tfpp_law(m.lambda, m.tfpp_alpha(), m.t, opts);
  } else if (m.model == "yule") {
    law = fixed ? analytic::yule_marginal_pmf(m.lambda, m.t, f.kmax) : analytic::yule_marginal_law(m.lambda, m.t, opts);
  } else {
    const auto p = m.params();
    law = fixed ? analytic::tn_pmf(p, m.t, f.kmax) : analytic::tn_law(p, m.t, opts);
  }
  Table tab;
  tab.columns = {"k", "probability", "cumulative"};
  double cum = 0.0;
  for (std::size_t i = 0; i < law.probs.size(); ++i) {
    cum += law.probs[i];
    tab.rows.push_back({static_cast<double>(law.support_start + i), law.probs[i], std::min(cum, 1.0)});
  }
  if (f.format == Format::csv) {
    f.output.write(out, format_csv(tab));
  } else {
    json j{{"schema_version", 1},
           {"command", "pmf"},
           {"parameters", m.to_json()},
           {"rows", table_json(tab)},
           {"tail_bound", law.truncation_tail_bound}};
    f.output.write(out, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_moments(LawFlags& f, std::ostream& out) {
  const ModelFlags& m = f.model;
  m.check();
  analytic::Moments mo;
  if (m.model == "tfpp") {
    mo.mean = analytic::tfpp_mean(m.lambda, m.tfpp_alpha(), m.t);
    mo.variance = analytic::tfpp_variance(m.lambda, m.tfpp_alpha(), m.t);
    mo.second_moment = mo.variance + mo.mean * mo.mean;
  } else if (m.model == "yule") {
    require(m.lambda > 0.0 && m.t >= 0.0, "--lambda must be positive and --t >= 0");
    const double e = std::exp(m.lambda * m.t);
    mo.mean = e - 1.0;
    mo.variance = e * (e - 1.0);
    mo.second_moment = mo.variance + mo.mean * mo.mean;
  } else {
    const auto p = m.params();
    if (m.model == "linear") mo = analytic::tn_moments_linear(m.lambda, m.beta, m.nu, m.t);
    else if (m.model == "constant") mo = analytic::tn_moments_constant(m.lambda, m.beta, m.nu, m.t);
    else if (m.model == "critical") mo = analytic::tn_moments_critical(m.lambda, m.nu, m.t);
    else {
      // finite rate table: moments over the listed law
      const auto law = analytic::tn_pmf(p, m.t, m.rates.size());
      if (law.truncation_tail_bound > 1e-9)
        throw NumericalError(NumericalError::Kind::precision_loss,
                             "the rate table leaves mass " + format_number(law.truncation_tail_bound) +
                                 " beyond its last state; moments are undefined");
      for (std::size_t i = 0; i < law.probs.size(); ++i) {
        const double k = static_cast<double>(law.support_start + i);
        mo.mean += k * law.probs[i];
        mo.second_moment += k * k * law.probs[i];
      }
      mo.variance = mo.second_moment - mo.mean * mo.mean;
    }
  }
  Table tab{{"mean", "second_moment", "variance"}, {{mo.mean, mo.second_moment, mo.variance}}};
  if (f.format == Format::csv) {
    f.output.write(out, format_csv(tab));
  } else {
    json j{{"schema_version", 1}, {"command", "moments"}, {"parameters", m.to_json()}};
    j.update(table_json(tab)[0]);
    f.output.write(out, j.dump(2) + "\n");
  }
  return kExitOk;
}

// --- simulate / compare --------------------------------------------------

struct McFlags {
  std::string target = "TN";
  std::string model = "linear";
  double genus_lambda = 1.0;
  double lambda = 1.0;
  double nu = 1.0;
  double beta = 1.0;
  double t = 1.0;
  std::vector<double> rates;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t support_ceiling = 40;
  double tv_threshold = 0.01;
  bool emit_snapshot = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* rates_opt = nullptr;
  Output output;
};

void add_mc_flags(CLI::App* cmd, McFlags& f) {
  cmd->add_option("--target", f.target,
                  "TN, TFPP_MARGINAL, MPP_COUNT, YULE_EXAMPLE, BIRTH_TIMES, ML_WAITING, INVERSE_STABLE, CRITICAL_BD"
                  " (simulate also accepts SYSTEM)");
  cmd->add_option("--model", f.model, "Species model: linear, nonlinear, constant or critical")
      ->transform([](std::string s) { return normalize(s); })
      ->check(CLI::IsMember({"linear", "nonlinear", "constant", "critical"}));
  cmd->add_option("--genus-lambda", f.genus_lambda, "Genus intensity lambda_g (also the tfpp rate)");
  cmd->add_option("--lambda", f.lambda, "Species rate");
  cmd->add_option("--nu", f.nu, "Genus exponent nu in (0, 1]");
  cmd->add_option("--beta", f.beta, "Species exponent beta in (0, 1]");
  cmd->add_option("--t", f.t, "Observation time");
  f.rates_opt = cmd->add_option("--rates", f.rates, "Distinct nonlinear rates")->delimiter(',');
  cmd->add_option("--samples", f.samples, "Number of draws");
  f.seed_opt = cmd->add_option("--seed", f.seed, std::string("Seed (default: $") + kSeedEnv + " or 1)");
  cmd->add_option("--workers", f.workers, "Worker threads");
  cmd->add_option("--support-ceiling", f.support_ceiling, "Largest outcome compared atom by atom");
}

std::uint64_t resolve_seed(const McFlags& f) {
  if (f.seed_opt->count()) return f.seed;
  const char* env = std::getenv(kSeedEnv);
  if (!env || !*env) return 1;
  const std::string s = env;
  require(std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }),
          std::string(kSeedEnv) + " must be an unsigned integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::out_of_range&) {
    fail_domain(std::string(kSeedEnv) + " does not fit in 64 bits");
  }
}

processes::ModelParams mc_params(const McFlags& f) {
  require(f.rates_opt->count() == 0 || f.model == "nonlinear", "--rates is only valid with --model nonlinear");
  processes::ModelParams p;
  p.genus_intensity = f.genus_lambda;
  p.nu = f.nu;
  p.beta = f.beta;
  if (f.model == "linear") p.species = processes::Linear{f.lambda};
  else if (f.model == "constant") p.species = processes::Constant{f.lambda};
  else if (f.model == "critical") p.species = processes::CriticalBD{f.lambda};
  else p.species = processes::NonlinearDistinct{f.rates};
  p.validate();
  return p;
}

void summarize(const montecarlo::ComparisonReport& r, std::ostream& err) {
  const auto& m = r.sample_moments;
  err << montecarlo::target_name(r.config.target) << ": n = " << r.config.n_samples << " (" << r.n_values
      << " values), seed " << r.config.seed << ", workers " << r.config.workers << "\n"
      << "  tv distance  " << format_number(r.tv_distance) << "\n"
      << "  ks statistic " << format_number(r.ks_statistic) << " (1% critical "
      << format_number(montecarlo::ks_critical_1pct(r.n_values)) << ")\n"
      << "  chi-square   " << format_number(r.chi_square.statistic) << " on " << r.chi_square.dof
      << " dof, p = " << format_number(r.chi_square.p_value) << "\n"
      << "  mean         " << format_number(m.mean) << " +- " << format_number(m.mean_se);
  if (r.analytic_mean) err << " (analytic " << format_number(*r.analytic_mean) << ")";
  err << "\n  variance     " << format_number(m.variance) << " +- " << format_number(m.variance_se);
  if (r.analytic_variance) err << " (analytic " << format_number(*r.analytic_variance) << ")";
  err << "\n";
}

int cmd_simulate(McFlags& f, bool compare, std::ostream& out, std::ostream& err) {
  const auto params = mc_params(f);
  const std::uint64_t seed = resolve_seed(f);
  if (normalize(f.target) == "system") {
    require(!compare, "compare does not accept --target SYSTEM");
    require(f.emit_snapshot, "--target SYSTEM needs --emit-snapshot");
    require(f.t > 0.0 && std::isfinite(f.t), "t must be finite and positive");
    samplers::RngStream rng(seed, 0);
    const auto snap = processes::simulate_system(params, f.t, rng);
    json j{{"schema_version", 1},
           {"snapshot", {{"t", snap.t}, {"genus_birth_times", snap.genus_birth_times}, {"species_counts", snap.species_counts}}},
           {"seed", seed},
           {"params", montecarlo::params_to_json(params)}};
    f.output.write(out, j.dump(2) + "\n");
    err << "SYSTEM: " << snap.genus_birth_times.size() << " genera at t = " << format_number(snap.t) << "\n";
    return kExitOk;
  }
  require(!f.emit_snapshot, "--emit-snapshot is only valid with --target SYSTEM");
  montecarlo::McConfig c;
  c.params = params;
  c.t = f.t;
  c.n_samples = f.samples;
  c.seed = seed;
  c.workers = f.workers;
  c.target = montecarlo::parse_target(f.target);
  c.support_ceiling = f.support_ceiling;
  const auto report = montecarlo::run_experiment(c);
  f.output.write(out, montecarlo::report_to_json(report).dump(2) + "\n");
  summarize(report, err);
  if (compare) {
    require(f.tv_threshold >= 0.0, "--tv-threshold must be >= 0");
    if (report.tv_distance > f.tv_threshold) {
      err << "FAIL: tv distance " << format_number(report.tv_distance) << " exceeds threshold "
          << format_number(f.tv_threshold) << "\n";
      return kExitThreshold;
    }
    err << "PASS: tv distance within " << format_number(f.tv_threshold) << "\n";
  }
  return kExitOk;
}

// --- figure --------------------------------------------------------------

struct FigureFlags {
  int figure = 0;
  FigureOptions options;
  Format format = Format::csv;
  Output output;
};

int cmd_figure(FigureFlags& f, std::ostream& out) {
  const Table tab = figure_table(f.figure, f.options);
  if (f.format == Format::csv) {
    f.output.write(out, format_csv(tab));
  } else {
    json j{{"schema_version", 1}, {"figure", f.figure}, {"columns", tab.columns}, {"rows", tab.rows}};
    f.output.write(out, j.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional Yule model: special functions, analytic laws, simulation and figure data", "yule"};
  app.require_subcommand(1);
  std::function<int()> action;

  EvalFlags ev;
  auto* eval = app.add_subcommand("eval", "Evaluate a special function with its error bound");
  eval->add_option("function", ev.function, "gamma, mittag-leffler, prabhakar, wright-phi or gauss-2f1")->required();
  for (auto [name, ptr] : std::initializer_list<std::pair<const char*, double*>>{
           {"alpha", &ev.alpha}, {"beta", &ev.beta}, {"gamma", &ev.gamma}, {"nu", &ev.nu}, {"z", &ev.z},
           {"x", &ev.x}, {"a", &ev.a}, {"b", &ev.b}, {"c", &ev.c}, {"tol", &ev.tol}})
    ev.opts[name] = eval->add_option(std::string("--") + name, *ptr);
  add_format(eval, ev.format);
  add_output(eval, ev.output);
  eval->callback([&] { action = [&] { return cmd_eval(ev, out); }; });

  LawFlags pf, mf;
  auto* pmf = app.add_subcommand("pmf", "Print an analytic law: k, probability, cumulative");
  add_model_flags(pmf, pf.model);
  pf.kmax_opt = pmf->add_option("--kmax", pf.kmax, "List k up to this value (default: until the tail is below --tol)");
  pmf->add_option("--tol", pf.tol, "Tail tolerance when --kmax is absent");
  pmf->add_option("--k-ceiling", pf.k_ceiling, "Largest k listed when --kmax is absent");
  add_format(pmf, pf.format);
  add_output(pmf, pf.output);
  pmf->callback([&] { action = [&] { return cmd_pmf(pf, out); }; });

  auto* moments = app.add_subcommand("moments", "Print mean, second moment and variance");
  add_model_flags(moments, mf.model);
  add_format(moments, mf.format);
  add_output(moments, mf.output);
  moments->callback([&] { action = [&] { return cmd_moments(mf, out); }; });

  McFlags sf, cf;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run; JSON report on stdout, summary on stderr");
  add_mc_flags(simulate, sf);
  simulate->add_flag("--emit-snapshot", sf.emit_snapshot, "With --target SYSTEM: print one system realization");
  add_output(simulate, sf.output);
  simulate->callback([&] { action = [&] { return cmd_simulate(sf, false, out, err); }; });

  auto* compare = app.add_subcommand("compare", "As simulate, exiting with 4 when tv distance exceeds the threshold");
  add_mc_flags(compare, cf);
  compare->add_option("--tv-threshold", cf.tv_threshold, "Largest accepted tv distance");
  add_output(compare, cf.output);
  compare->callback([&] { action = [&] { return cmd_simulate(cf, true, out, err); }; });

  FigureFlags ff;
  auto* figure = app.add_subcommand("figure", "CSV curve data for figures 1, 2, 4 and 5");
  figure->add_option("--figure", ff.figure, "Figure id")->required();
  figure->add_option("--nu", ff.options.nus, "Comma-separated nu values")->delimiter(',');
  figure->add_option("--t", ff.options.t, "Observation time (figures 1, 2, 5)");
  figure->add_option("--lambda", ff.options.lambda, "Rate");
  figure->add_option("--kmax", ff.options.kmax, "Largest k (figures 2, 5)");
  figure->add_option("--k", ff.options.k, "k of the lower panel (figure 4)");
  figure->add_option("--points", ff.options.points, "Grid points (figures 1, 4)");
  figure->add_option("--tmax", ff.options.tmax, "Time range (figure 4)");
  add_format(figure, ff.format);
  add_output(figure, ff.output);
  figure->callback([&] { action = [&] { return cmd_figure(ff, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  try {
    return action();
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const RateTableExhausted& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace yule::cli
