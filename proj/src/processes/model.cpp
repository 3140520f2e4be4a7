#include <algorithm>
#include <cmath>

#include "yule/errors.hpp"
#include "yule/processes.hpp"

namespace yule::processes {

using yule::detail::require;

namespace {
bool positive(double x) { return x > 0.0 && std::isfinite(x); }

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;
}  // namespace

void ModelParams::validate() const {
  require(positive(genus_intensity), "genus_intensity must be positive");
  require(nu > 0.0 && nu <= 1.0, "nu must lie in (0, 1]");
  require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
  std::visit(Overloaded{
                 [](const Linear& m) { require(positive(m.lambda), "lambda must be positive"); },
                 [](const Constant& m) { require(positive(m.lambda), "lambda must be positive"); },
                 [](const NonlinearDistinct& m) {
                   require(!m.rates.empty(), "rates must not be empty");
                   for (double r : m.rates) require(positive(r), "rates must be positive");
                   std::vector<double> sorted = m.rates;
                   std::sort(sorted.begin(), sorted.end());
                   require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                           "rates must be pairwise distinct");
                 },
                 [this](const CriticalBD& m) {
                   require(positive(m.lambda), "lambda must be positive");
                   require(beta == 1.0, "the critical birth-death model requires beta = 1");
                 },
             },
             species);
}

std::string species_model_name(const SpeciesRates& rates) {
  return std::visit(Overloaded{
                        [](const Linear&) { return std::string("linear"); },
                        [](const Constant&) { return std::string("constant"); },
                        [](const NonlinearDistinct&) { return std::string("nonlinear"); },
                        [](const CriticalBD&) { return std::string("critical"); },
                    },
                    rates);
}

bool is_critical(const SpeciesRates& rates) { return std::holds_alternative<CriticalBD>(rates); }

}  // namespace yule::processes
