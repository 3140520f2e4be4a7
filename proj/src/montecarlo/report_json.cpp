#include <cmath>

#include "yule/montecarlo.hpp"

namespace yule::montecarlo {

namespace {

using nlohmann::json;

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json pmf_json(const Pmf& p) {
  json probs = json::array();
  for (double q : p.probs) probs.push_back(number(q));
  return {{"support_start", p.support_start}, {"probabilities", probs}, {"tail", number(p.truncation_tail_bound)}};
}

json optional_number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

}  // namespace

json params_to_json(const ModelParams& params) {
  json species = {{"model", processes::species_model_name(params.species)}};
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, processes::NonlinearDistinct>)
          species["rates"] = s.rates;
        else
          species["lambda"] = s.lambda;
      },
      params.species);
  return {{"genus_intensity", params.genus_intensity}, {"nu", params.nu}, {"beta", params.beta}, {"species", species}};
}

json report_to_json(const ComparisonReport& r) {
  const McConfig& c = r.config;
  json out;
  out["schema_version"] = 1;
  out["config"] = {{"target", target_name(c.target)},   {"t", c.t},
                   {"n_samples", c.n_samples},          {"seed", c.seed},
                   {"workers", c.workers},              {"support_ceiling", c.support_ceiling},
                   {"params", params_to_json(c.params)}};
  out["discrete"] = r.discrete;
  out["n_values"] = r.n_values;
  if (r.discrete) {
    out["empirical"] = pmf_json(r.empirical);
    out["analytic"] = pmf_json(r.analytic);
  } else {
    json grid = json::array(), fe = json::array(), fa = json::array();
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      grid.push_back(number(r.grid[i]));
      fe.push_back(number(r.empirical_cdf[i]));
      fa.push_back(number(r.analytic_cdf[i]));
    }
    out["grid"] = grid;
    out["empirical_cdf"] = fe;
    out["analytic_cdf"] = fa;
  }
  out["tv_distance"] = number(r.tv_distance);
  out["ks_statistic"] = number(r.ks_statistic);
  out["chi_square"] = {{"statistic", number(r.chi_square.statistic)},
                       {"dof", r.chi_square.dof},
                       {"p_value", number(r.chi_square.p_value)}};
  const SampleMoments& m = r.sample_moments;
  out["sample_moments"] = {{"mean", number(m.mean)},
                           {"variance", number(m.variance)},
                           {"mean_se", number(m.mean_se)},
                           {"variance_se", number(m.variance_se)}};
  out["analytic_moments"] = {{"mean", optional_number(r.analytic_mean)},
                             {"variance", optional_number(r.analytic_variance)}};
  return out;
}

}  // namespace yule::montecarlo
