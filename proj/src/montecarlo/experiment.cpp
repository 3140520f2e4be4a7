#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "yule/errors.hpp"
#include "yule/montecarlo.hpp"

namespace yule::montecarlo {

namespace {

using yule::detail::require;
using namespace yule::processes;

constexpr int kContinuousBins = 20;
// KS points for targets whose cdf costs a special-function evaluation
constexpr std::size_t kKsPoints = 2000;

struct TargetInfo {
  Target target;
  const char* name;
};
constexpr TargetInfo kTargets[] = {
    {Target::TN, "TN"},
    {Target::TFPP_MARGINAL, "TFPP_MARGINAL"},
    {Target::MPP_COUNT, "MPP_COUNT"},
    {Target::YULE_EXAMPLE, "YULE_EXAMPLE"},
    {Target::BIRTH_TIMES, "BIRTH_TIMES"},
    {Target::ML_WAITING, "ML_WAITING"},
    {Target::INVERSE_STABLE, "INVERSE_STABLE"},
    {Target::CRITICAL_BD, "CRITICAL_BD"},
};

double critical_lambda(const McConfig& c) {
  const auto* bd = std::get_if<CriticalBD>(&c.params.species);
  require(bd != nullptr, "target CRITICAL_BD needs the critical species model");
  return bd->lambda;
}

// Sample values with per-draw boundaries; only BIRTH_TIMES yields more than
// one value per draw.
struct Draws {
  std::vector<double> values;
  std::vector<std::uint64_t> ends;  // ends[i] = values.size() after draw i

  std::size_t prefix_values(std::uint64_t n) const { return n == 0 ? 0 : ends[n - 1]; }
};

void draw_one(const McConfig& c, RngStream& rng, Draws& out) {
  const ModelParams& p = c.params;
  auto push = [&](double v) { out.values.push_back(v); };
  switch (c.target) {
    case Target::TN:
      push(static_cast<double>(sample_tN(p, c.t, rng)));
      break;
    case Target::TFPP_MARGINAL:
      push(static_cast<double>(simulate_tfpp_count(p.genus_intensity, p.nu, c.t, rng)));
      break;
    case Target::MPP_COUNT:
      push(static_cast<double>(simulate_mpp_utt(p, c.t, rng).count));
      break;
    case Target::YULE_EXAMPLE:
      push(static_cast<double>(simulate_mpp_utt(p, c.t, rng, GenusClock::yule_example).count));
      break;
    case Target::BIRTH_TIMES: {
      const MppDraw d = simulate_mpp_utt(p, c.t, rng);
      out.values.insert(out.values.end(), d.birth_times.begin(), d.birth_times.end());
      break;
    }
    case Target::ML_WAITING:
      push(samplers::sample_ml_waiting_time(p.nu, p.genus_intensity, rng));
      break;
    case Target::INVERSE_STABLE:
      push(samplers::sample_inverse_stable(p.nu, c.t, rng));
      break;
    case Target::CRITICAL_BD:
      push(static_cast<double>(simulate_critical_bd_marginal(critical_lambda(c), c.t, rng)));
      break;
  }
  out.ends.push_back(out.values.size());
}

Draws draw(const McConfig& c, std::uint64_t n) {
  const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<Draws> parts(blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      try {
        RngStream rng(c.seed, b);
        const std::uint64_t count = std::min(kBlockSize, n - b * kBlockSize);
        for (std::uint64_t i = 0; i < count; ++i) draw_one(c, rng, parts[b]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = blocks;
      }
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(c.workers, std::max<std::uint64_t>(blocks, 1)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  Draws all;
  for (auto& part : parts) {
    const std::uint64_t offset = all.values.size();
    all.values.insert(all.values.end(), part.values.begin(), part.values.end());
    for (std::uint64_t e : part.ends) all.ends.push_back(offset + e);
  }
  return all;
}

// Analytic side of a comparison, computed once per configuration.
struct Reference {
  bool discrete = true;
  Pmf law;                                 // discrete: listed atoms, pooled tail in truncation_tail_bound
  std::vector<double> edges;               // continuous: interior bin edges at analytic quantiles
  std::function<double(double)> cdf;       // continuous
  bool cheap_cdf = false;
  std::optional<double> mean, variance;
};

Pmf pooled(Pmf law) {
  law.truncation_tail_bound = std::max(0.0, 1.0 - law.listed_mass());
  return law;
}

double quantile(const std::function<double(double)>& cdf, double p, double lo, double hi) {
  while (cdf(hi) < p) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericalError(NumericalError::Kind::non_convergence, "quantile bracket diverged");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Reference reference(const McConfig& c) {
  const ModelParams& p = c.params;
  analytic::PmfOptions opts;
  opts.tol = 1e-9;
  opts.k_ceiling = c.support_ceiling;
  Reference ref;
  const double lg = p.genus_intensity;
  switch (c.target) {
    case Target::TN: {
      ref.law = pooled(analytic::tn_law(p, c.t, opts));
      std::optional<analytic::Moments> m;
      if (const auto* s = std::get_if<Linear>(&p.species)) m = analytic::tn_moments_linear(s->lambda, p.beta, p.nu, c.t);
      if (const auto* s = std::get_if<Constant>(&p.species)) m = analytic::tn_moments_constant(s->lambda, p.beta, p.nu, c.t);
      if (const auto* s = std::get_if<CriticalBD>(&p.species)) m = analytic::tn_moments_critical(s->lambda, p.nu, c.t);
      if (m) {
        ref.mean = m->mean;
        ref.variance = m->variance;
      }
      break;
    }
    case Target::TFPP_MARGINAL:
    case Target::MPP_COUNT:
      ref.law = pooled(analytic::tfpp_law(lg, p.nu, c.t, opts));
      ref.mean = analytic::tfpp_mean(lg, p.nu, c.t);
      ref.variance = analytic::tfpp_variance(lg, p.nu, c.t);
      break;
    case Target::YULE_EXAMPLE: {
      ref.law = pooled(analytic::yule_marginal_law(lg, c.t, opts));
      const double e = std::exp(lg * c.t);
      ref.mean = e - 1.0;
      ref.variance = e * (e - 1.0);
      break;
    }
    case Target::CRITICAL_BD: {
      const double lambda = critical_lambda(c);
      ref.law = pooled(analytic::critical_bd_marginal_law(lambda, c.t, opts));
      ref.mean = 1.0;
      ref.variance = 2.0 * lambda * c.t;
      break;
    }
    case Target::BIRTH_TIMES: {
      ref.discrete = false;
      const double nu = p.nu, t = c.t;
      ref.cdf = [nu, t](double x) { return x <= 0.0 ? 0.0 : x >= t ? 1.0 : std::pow(x / t, nu); };
      ref.cheap_cdf = true;
      for (int i = 1; i < kContinuousBins; ++i) ref.edges.push_back(t * std::pow(double(i) / kContinuousBins, 1.0 / nu));
      ref.mean = nu * t / (nu + 1.0);
      ref.variance = t * t * nu / (nu + 2.0) - *ref.mean * *ref.mean;
      break;
    }
    case Target::ML_WAITING: {
      ref.discrete = false;
      const double nu = p.nu;
      ref.cdf = [lg, nu](double x) { return x <= 0.0 ? 0.0 : 1.0 - analytic::tfpp_interarrival_survival(lg, nu, x); };
      ref.cheap_cdf = nu == 1.0;
      if (nu == 1.0) {
        ref.mean = 1.0 / lg;
        ref.variance = 1.0 / (lg * lg);
      }
      break;
    }
    case Target::INVERSE_STABLE: {
      require(p.nu < 1.0, "target INVERSE_STABLE needs nu < 1 (nu = 1 is the point mass at t)");
      ref.discrete = false;
      const double nu = p.nu, t = c.t;
      ref.cdf = [nu, t](double x) { return x <= 0.0 ? 0.0 : analytic::inverse_stable_cdf(nu, t, x); };
      const double ta = std::pow(t, nu);
      ref.mean = ta / std::tgamma(1.0 + nu);
      ref.variance = 2.0 * ta * ta / std::tgamma(1.0 + 2.0 * nu) - *ref.mean * *ref.mean;
      break;
    }
  }
  if (!ref.discrete && ref.edges.empty()) {
    double lo = 0.0;
    double scale = c.target == Target::INVERSE_STABLE ? std::pow(c.t, p.nu) : std::pow(1.0 / lg, 1.0 / p.nu);
    for (int i = 1; i < kContinuousBins; ++i) {
      lo = quantile(ref.cdf, double(i) / kContinuousBins, lo, std::max(lo, 0.0) + scale);
      ref.edges.push_back(lo);
    }
  }
  return ref;
}

SampleMoments moments(const double* v, std::size_t n) {
  SampleMoments m;
  if (n == 0) return m;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += v[i];
  mean /= static_cast<double>(n);
  double m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (v[i] - mean) * (v[i] - mean);
    m2 += d;
    m4 += d * d;
  }
  const double nn = static_cast<double>(n);
  m.mean = mean;
  m.variance = n > 1 ? m2 / (nn - 1.0) : 0.0;
  m.mean_se = std::sqrt(m.variance / nn);
  const double pop2 = m2 / nn;
  m.variance_se = std::sqrt(std::max(0.0, m4 / nn - pop2 * pop2) / nn);
  return m;
}

ComparisonReport compare(const McConfig& c, const Reference& ref, const Draws& draws, std::uint64_t n) {
  ComparisonReport r;
  r.config = c;
  r.config.n_samples = n;
  r.discrete = ref.discrete;
  const std::size_t count = draws.prefix_values(n);
  r.n_values = count;
  const double* v = draws.values.data();
  r.sample_moments = moments(v, count);
  r.analytic_mean = ref.mean;
  r.analytic_variance = ref.variance;
  if (count == 0) {
    r.analytic = ref.law;
    return r;
  }
  const double total = static_cast<double>(count);

  if (ref.discrete) {
    r.analytic = ref.law;
    r.empirical.support_start = ref.law.support_start;
    r.empirical.probs.assign(ref.law.probs.size(), 0.0);
    double beyond = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double k = v[i];
      const double idx = k - static_cast<double>(ref.law.support_start);
      require(idx >= 0.0, "sample below the analytic support");
      if (idx < static_cast<double>(r.empirical.probs.size()))
        r.empirical.probs[static_cast<std::size_t>(idx)] += 1.0;
      else
        beyond += 1.0;
    }
    std::vector<double> observed = r.empirical.probs, expected;
    observed.push_back(beyond);
    for (double& q : r.empirical.probs) q /= total;
    r.empirical.truncation_tail_bound = beyond / total;
    for (double q : ref.law.probs) expected.push_back(q * total);
    expected.push_back(ref.law.truncation_tail_bound * total);
    r.tv_distance = tv_distance(r.empirical, r.analytic);
    r.chi_square = chi_square(observed, expected);
    double fe = 0.0, fa = 0.0, d = 0.0;
    for (std::size_t i = 0; i < ref.law.probs.size(); ++i) {
      fe += r.empirical.probs[i];
      fa += ref.law.probs[i];
      d = std::max(d, std::abs(fe - fa));
    }
    r.ks_statistic = std::min(d, 1.0);
    return r;
  }

  std::vector<double> sorted(v, v + count);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t bins = ref.edges.size() + 1;
  std::vector<double> observed(bins, 0.0), expected(bins, total / static_cast<double>(bins));
  r.grid = ref.edges;
  for (std::size_t i = 0; i < ref.edges.size(); ++i) {
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), ref.edges[i]) - sorted.begin();
    r.empirical_cdf.push_back(static_cast<double>(below) / total);
    r.analytic_cdf.push_back(static_cast<double>(i + 1) / static_cast<double>(bins));
  }
  double prev = 0.0, tv = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double cum = b + 1 < bins ? r.empirical_cdf[b] : 1.0;
    observed[b] = (cum - prev) * total;
    tv += std::abs(cum - prev - 1.0 / static_cast<double>(bins));
    prev = cum;
  }
  r.tv_distance = std::min(0.5 * tv, 1.0);
  r.chi_square = chi_square(observed, expected);
  if (ref.cheap_cdf || count <= kKsPoints) {
    r.ks_statistic = ks_statistic(sorted, ref.cdf);
  } else {
    // sup over evenly spaced order statistics; misses at most 1/kKsPoints of the true sup
    double d = 0.0;
    for (std::size_t j = 0; j < kKsPoints; ++j) {
      const std::size_t i = (2 * j + 1) * count / (2 * kKsPoints);
      const std::size_t hi = std::upper_bound(sorted.begin(), sorted.end(), sorted[i]) - sorted.begin();
      const std::size_t lo = std::lower_bound(sorted.begin(), sorted.end(), sorted[i]) - sorted.begin();
      const double f = ref.cdf(sorted[i]);
      d = std::max({d, std::abs(static_cast<double>(hi) / total - f), std::abs(f - static_cast<double>(lo) / total)});
    }
    r.ks_statistic = std::min(d, 1.0);
  }
  return r;
}

}  // namespace

std::string target_name(Target target) {
  for (const auto& t : kTargets)
    if (t.target == target) return t.name;
  return "?";
}

Target parse_target(const std::string& name) {
  std::string key;
  for (char ch : name) key += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (const auto& t : kTargets)
    if (key == t.name) return t.target;
  yule::detail::fail_domain("unknown target '" + name + "'");
}

bool is_discrete(Target target) {
  return target != Target::BIRTH_TIMES && target != Target::ML_WAITING && target != Target::INVERSE_STABLE;
}

void McConfig::validate() const {
  params.validate();
  require(t > 0.0 && std::isfinite(t), "t must be finite and positive");
  require(n_samples >= 1, "n_samples must be >= 1");
  require(workers >= 1, "workers must be >= 1");
  require(support_ceiling >= 1, "support_ceiling must be >= 1");
  if (target == Target::CRITICAL_BD) critical_lambda(*this);
}

ComparisonReport run_experiment(const McConfig& config) {
  config.validate();
  const Reference ref = reference(config);
  const Draws draws = draw(config, config.n_samples);
  return compare(config, ref, draws, config.n_samples);
}

std::vector<SweepPoint> convergence_sweep(const McConfig& config, const std::vector<std::uint64_t>& sample_sizes) {
  config.validate();
  require(!sample_sizes.empty(), "sample_sizes must not be empty");
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    require(sample_sizes[i] >= 1, "sample sizes must be >= 1");
    require(i == 0 || sample_sizes[i] > sample_sizes[i - 1], "sample sizes must increase");
  }
  const Reference ref = reference(config);
  const Draws draws = draw(config, sample_sizes.back());
  std::vector<SweepPoint> out;
  for (std::uint64_t n : sample_sizes) out.push_back({n, compare(config, ref, draws, n).tv_distance});
  return out;
}

}  // namespace yule::montecarlo
