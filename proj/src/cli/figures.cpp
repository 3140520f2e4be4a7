#include <cmath>
#include <cstdio>

#include "yule/analytic.hpp"
#include "yule/cli.hpp"
#include "yule/errors.hpp"

namespace yule::cli {

namespace {

std::string nu_label(const std::string& prefix, double nu) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%snu_%g", prefix.c_str(), nu);
  return buf;
}

std::vector<double> nus_or(const FigureOptions& o, std::vector<double> fallback) {
  return o.nus.empty() ? fallback : o.nus;
}

// Genus birth time: cdf (x / t)^nu and density on (0, t].
Table figure1(const FigureOptions& o) {
  const auto nus = nus_or(o, {0.25, 0.5, 0.75, 1.0});
  const double t = o.t > 0 ? o.t : 1.0;
  const int points = o.points > 0 ? o.points : 200;
  Table tab;
  tab.columns.push_back("x");
  for (double nu : nus) tab.columns.push_back(nu_label("cdf_", nu));
  for (double nu : nus) tab.columns.push_back(nu_label("pdf_", nu));
  for (int i = 1; i <= points; ++i) {
    const double x = t * i / points;
    std::vector<double> row{x};
    for (double nu : nus) row.push_back(analytic::genus_time_cdf(nu, t, x));
    for (double nu : nus) row.push_back(analytic::genus_time_pdf(nu, t, x));
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

// Linear rates, species count pmf.
Table figure2(const FigureOptions& o) {
  const auto nus = nus_or(o, {0.4, 0.6, 0.8, 1.0});
  const double t = o.t > 0 ? o.t : 10.0;
  const std::uint64_t kmax = o.kmax ? o.kmax : 100;
  Table tab;
  tab.columns.push_back("k");
  std::vector<analytic::Pmf> laws;
  for (double nu : nus) {
    tab.columns.push_back(nu_label("", nu));
    processes::ModelParams p;
    p.nu = nu;
    p.beta = 1.0;
    p.species = processes::Linear{o.lambda};
    laws.push_back(analytic::tn_pmf(p, t, kmax));
  }
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    std::vector<double> row{static_cast<double>(k)};
    for (const auto& law : laws) row.push_back(law.at(k));
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

// Critical model: P(N = 0) and P(N = k) against t.
Table figure4(const FigureOptions& o) {
  const auto nus = nus_or(o, {0.2, 0.5, 0.8});
  const int points = o.points > 0 ? o.points : 100;
  Table tab;
  tab.columns.push_back("t");
  for (double nu : nus) tab.columns.push_back(nu_label("p0_", nu));
  for (double nu : nus) tab.columns.push_back(nu_label("p" + std::to_string(o.k) + "_", nu));
  for (int i = 1; i <= points; ++i) {
    const double t = o.tmax * i / points;
    std::vector<double> row{t};
    for (double nu : nus) row.push_back(analytic::tn_pmf_critical(o.lambda, nu, t, 0));
    for (double nu : nus) row.push_back(analytic::tn_pmf_critical(o.lambda, nu, t, o.k));
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

// Critical model pmf against k.
Table figure5(const FigureOptions& o) {
  const auto nus = nus_or(o, {0.1, 0.5, 1.0});
  const double t = o.t > 0 ? o.t : 1.0;
  const std::uint64_t kmax = o.kmax ? o.kmax : 60;
  Table tab;
  tab.columns.push_back("k");
  for (double nu : nus) tab.columns.push_back(nu_label("", nu));
  for (std::uint64_t k = 0; k <= kmax; ++k) {
    std::vector<double> row{static_cast<double>(k)};
    for (double nu : nus) row.push_back(analytic::tn_pmf_critical(o.lambda, nu, t, k));
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

}  // namespace

Table figure_table(int figure, const FigureOptions& options) {
  yule::detail::require(options.lambda > 0.0, "lambda must be positive");
  yule::detail::require(options.tmax > 0.0, "tmax must be positive");
  switch (figure) {
    case 1: return figure1(options);
    case 2: return figure2(options);
    case 4: return figure4(options);
    case 5: return figure5(options);
    default: yule::detail::fail_domain("unknown figure " + std::to_string(figure) + " (expected 1, 2, 4 or 5)");
  }
}

}  // namespace yule::cli
