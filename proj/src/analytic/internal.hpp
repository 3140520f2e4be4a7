#pragma once

#include <cstdint>
#include <functional>

#include "yule/analytic.hpp"

namespace yule::analytic::detail {

/// Target absolute error for individual pmf values.
inline constexpr double kPmfAbsTol = 1e-16;

/// factor * base^expo * E^gamma_{nu,beta}(z), accurate to abs_tol.
double prabhakar_scaled(double nu, double beta, double gamma, double z, double factor, double base, double expo,
                        double abs_tol);

/// min over u > 1 of exp(log_pgf(log u) - (k + 1) log u), a bound on P(X > k).
/// log_pgf may return +inf where the pgf is not representable.
double chernoff_tail(const std::function<double(double)>& log_pgf, std::uint64_t k);

void check_time(double t);
void check_fraction(double x, const char* name);
void check_positive(double x, const char* name);

/// P(tN > k) for the critical model, closed form via 2F1.
double critical_survival(double lambda, double nu, double t, std::uint64_t k);

}  // namespace yule::analytic::detail
