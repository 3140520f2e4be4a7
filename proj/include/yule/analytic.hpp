#pragma once

// Closed-form laws and moments of the time-fractional Poisson process, the
// genus birth time and the species count of a uniformly chosen genus.
//
// Formulas with alternating sums (linear and distinct nonlinear rates) are
// combined in extended precision. Every pmf value below carries an absolute
// error of at most ~1e-15 unless a NumericalError is thrown.

#include <cstdint>
#include <vector>

#include "yule/processes.hpp"
#include "yule/specfun.hpp"

namespace yule::analytic {

using processes::ModelParams;

struct Pmf {
  std::uint64_t support_start = 0;
  std::vector<double> probs;
  /// Bound on the probability of all outcomes beyond the last listed one.
  double truncation_tail_bound = 0.0;

  std::uint64_t support_end() const { return support_start + probs.size(); }  // exclusive
  double at(std::uint64_t k) const;
  double listed_mass() const;
};

struct PmfOptions {
  /// Stop once the certified tail is below this.
  double tol = 1e-6;
  /// Hard ceiling on the largest listed outcome.
  std::uint64_t k_ceiling = 200;
};

struct Moments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
};

// --- time-fractional Poisson process -------------------------------------

/// P(N_t = k) = (lambda t^alpha)^k E^{k+1}_{alpha, alpha k + 1}(-lambda t^alpha), k = 0..k_max,
/// with a Chernoff tail bound from the pgf.
Pmf tfpp_pmf(double lambda, double alpha, double t, std::uint64_t k_max);
Pmf tfpp_law(double lambda, double alpha, double t, const PmfOptions& opts = {});
double tfpp_mean(double lambda, double alpha, double t);
double tfpp_variance(double lambda, double alpha, double t);
/// E u^{N_t} = E_alpha(lambda (u - 1) t^alpha).
double tfpp_pgf(double lambda, double alpha, double t, double u);
/// f_U(t) = lambda t^{alpha - 1} E_{alpha,alpha}(-lambda t^alpha).
double tfpp_interarrival_density(double lambda, double alpha, double t);
/// P(U > t) = E_alpha(-lambda t^alpha). Beyond the series budget the
/// Laplace-transform representation of E_alpha(-s^alpha) is integrated.
double tfpp_interarrival_survival(double lambda, double alpha, double t);

/// e^{-lambda t} (1 - e^{-lambda t})^k, k = 0..k_max.
Pmf yule_marginal_pmf(double lambda, double t, std::uint64_t k_max);
Pmf yule_marginal_law(double lambda, double t, const PmfOptions& opts = {});

// --- random clocks -------------------------------------------------------

double genus_time_cdf(double nu, double t, double x);
double genus_time_pdf(double nu, double t, double x);
/// Density of E_t: t^{-alpha} phi(-alpha, 1 - alpha; -xi t^{-alpha}).
double inverse_stable_pdf(double alpha, double t, double xi);
/// P(E_t <= xi) = 1 - phi(-alpha, 1; -xi t^{-alpha}).
double inverse_stable_cdf(double alpha, double t, double xi);
/// Density of W = Gamma(1 + nu) E_1.
double mixing_w_pdf(double nu, double w);

// --- species count of a random genus -------------------------------------

/// Gamma(nu + 1) prod_{j<k} lambda_j sum_{m<=k} E_{beta,nu+1}(-lambda_m t^beta) / prod_{l!=m}(lambda_l - lambda_m).
double tn_pmf_nonlinear(const std::vector<double>& rates, double beta, double nu, double t, std::uint64_t k);
/// Marginal of the fractional nonlinear pure birth process, P(Y_t = k).
double species_pmf_nonlinear(const std::vector<double>& rates, double beta, double t, std::uint64_t k);
/// Gamma(nu + 1) sum_j C(k-1, j-1) (-1)^{j-1} E_{beta,nu+1}(-lambda j t^beta).
double tn_pmf_linear(double lambda, double beta, double nu, double t, std::uint64_t k);
Moments tn_moments_linear(double lambda, double beta, double nu, double t);
/// Gamma(nu + 1) lambda^{k-1} t^{beta(k-1)} E^k_{beta, beta k - beta + nu + 1}(-lambda t^beta).
double tn_pmf_constant(double lambda, double beta, double nu, double t, std::uint64_t k);
/// Critical birth-death species count, k >= 0.
double tn_pmf_critical(double lambda, double nu, double t, std::uint64_t k);
Moments tn_moments_critical(double lambda, double nu, double t);
/// From the pgf u Gamma(nu + 1) E_{beta,nu+1}(lambda (u - 1) t^beta).
Moments tn_moments_constant(double lambda, double beta, double nu, double t);

/// Transient law of a critical birth-death population at age s, started from one.
Pmf critical_bd_marginal_law(double lambda, double s, const PmfOptions& opts = {});

struct AsymptoticTerm {
  double value = 0.0;
  double gamma_neg_beta_k = 0.0;  // Gamma(-beta k), signed
  int sign = 0;                   // sign of value
};
/// Leading large-t term Gamma(nu + 1) lambda^{-1} t^{-beta} / Gamma(-beta k), as printed.
/// Diagnostic only.
AsymptoticTerm tn_asymptotic_constant(double lambda, double beta, double nu, double t, std::uint64_t k);

/// P(tN > k) from closed forms (linear, nonlinear, critical) or a Chernoff
/// bound on the pgf (constant).
double tn_survival(const ModelParams& params, double t, std::uint64_t k);

/// Law of the species count of a random genus on 1..K (0..K for critical),
/// K grown until the tail falls below opts.tol or K reaches the ceiling.
Pmf tn_law(const ModelParams& params, double t, const PmfOptions& opts = {});
/// Same, with K fixed.
Pmf tn_pmf(const ModelParams& params, double t, std::uint64_t k_max);

/// Evaluation options used for arguments outside the default Prabhakar budget.
specfun::EvalOptions relaxed_options();

}  // namespace yule::analytic
