#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "yule/errors.hpp"
#include "yule/montecarlo.hpp"

namespace yule::montecarlo {

double tv_distance(const Pmf& p, const Pmf& q) {
  const std::uint64_t lo = std::min(p.support_start, q.support_start);
  const std::uint64_t hi = std::max(p.support_end(), q.support_end());
  double sum = 0.0;
  for (std::uint64_t k = lo; k < hi; ++k) sum += std::abs(p.at(k) - q.at(k));
  sum += std::abs(p.truncation_tail_bound - q.truncation_tail_bound);
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size();) {
    // ties: step over the whole run so F_n jumps once
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double f = cdf(samples[i]);
    d = std::max({d, std::abs(static_cast<double>(j) / n - f), std::abs(f - static_cast<double>(i) / n)});
    i = j;
  }
  return std::min(d, 1.0);
}

ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& expected) {
  detail::require(observed.size() == expected.size(), "chi_square needs aligned bins");
  std::vector<double> obs, exp;
  double o = 0.0, e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o += observed[i];
    e += expected[i];
    if (e >= 5.0) {
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (exp.empty()) {
      obs.push_back(o);
      exp.push_back(e);
    } else {
      obs.back() += o;
      exp.back() += e;
    }
  }
  ChiSquare out;
  out.dof = static_cast<int>(exp.size()) - 1;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (exp[i] > 0.0) out.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  }
  out.p_value = out.dof > 0 ? boost::math::gamma_q(0.5 * out.dof, 0.5 * out.statistic) : 1.0;
  return out;
}

double ks_critical_1pct(std::uint64_t n) { return 1.628 / std::sqrt(static_cast<double>(std::max<std::uint64_t>(n, 1))); }

double sweep_slope(const std::vector<SweepPoint>& points) {
  detail::require(points.size() >= 2, "sweep_slope needs two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(points.size());
  for (const auto& p : points) {
    detail::require(p.tv_distance > 0.0, "sweep_slope needs positive distances");
    const double x = std::log(static_cast<double>(p.n));
    const double y = std::log(p.tv_distance);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace yule::montecarlo
