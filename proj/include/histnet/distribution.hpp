#pragma once

#include "histnet/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>

namespace histnet {

enum class Marginal
{
  uniform,
  truncated_linear
};

enum class Task
{
  regression,
  classification
};

enum class RegressionFamily
{
  linear, // C * u
  cosine, // (C/pi) cos(pi u)
  power   // C |u|^alpha
};

enum class EtaFamily
{
  threshold, // eta = 1{x_1 >= 0}
  half,      // eta = 1/2
  fstar      // eta = (1 + f(x)) / 2 with f from the regression family
};

/// Synthetic distribution on X x Y with analytic Bayes quantities.
///
/// The marginal is a product of identical 1-d laws on [-1,1]: uniform, or
/// the truncated-linear density (1 + a u)/2 with tilt a = c - 1, so that
/// P_X(x + t[-1,1]^d) <= c t holds with the declared density bound c.
/// The regression function is (1/d) sum_i phi(x_i) with phi from
/// RegressionFamily, which keeps the (alpha, C)-Hoelder constant of phi.
struct DistributionSpec
{
  std::size_t dim = 1;
  Marginal marginal = Marginal::uniform;
  double density_bound = 1.0;
  Task task = Task::regression;
  RegressionFamily fstar = RegressionFamily::linear;
  double alpha = 1.0;
  double holder_c = 0.5;
  double noise_b = 0.0;
  EtaFamily eta = EtaFamily::fstar;
  std::uint64_t seed = 0;

  void validate() const;

  double tilt() const;
  double marginal_density_1d(double u) const;
  double marginal_cdf_1d(double u) const;
  double marginal_quantile_1d(double p) const;
  double density(std::span<const double> x) const;

  double family_value(std::span<const double> x) const;
  double family_sup() const;
  double eta_at(std::span<const double> x) const;

  // Bayes decision function of the least squares loss, E[Y | x].
  double bayes_function(std::span<const double> x) const;

  // P_X of the cube x + t[-1,1]^d (intersected with X).
  double cube_mass(std::span<const double> x, double t) const;
  // Smallest c with P_X(x + t B) <= c t for all x and t.
  double assumption_constant() const;
};

//! Tensor-product midpoint rule of fn * density over `box` with
//! `resolution` nodes per axis.
template<class F>
double
integrate(const DistributionSpec& dist,
          const Box& box,
          F&& fn,
          std::size_t resolution)
{
  const std::size_t d = box.dim();
  if (box.degenerate() || resolution == 0)
    return 0.0;
  std::vector<double> h(d);
  std::vector<std::vector<double>> nodes(d), weights(d);
  for (std::size_t a = 0; a < d; ++a) {
    h[a] = (box.hi[a] - box.lo[a]) / static_cast<double>(resolution);
    nodes[a].resize(resolution);
    weights[a].resize(resolution);
    for (std::size_t j = 0; j < resolution; ++j) {
      nodes[a][j] = box.lo[a] + (static_cast<double>(j) + 0.5) * h[a];
      weights[a][j] = h[a] * dist.marginal_density_1d(nodes[a][j]);
    }
  }
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> x(d);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
      x[a] = nodes[a][idx[a]];
      w *= weights[a][idx[a]];
    }
    total += w * fn(std::span<const double>(x));
    std::size_t a = d;
    while (a > 0) {
      --a;
      if (++idx[a] < resolution)
        break;
      idx[a] = 0;
      if (a == 0)
        return total;
    }
  }
}

// Nodes per axis for whole-domain quadrature (about 4e6 nodes in total,
// capped at 1e4 per axis).
std::size_t domain_resolution(std::size_t dim);

Box domain_box(std::size_t dim);

// ||f*||_2^2 under P_X, f* the least squares Bayes function.
double bayes_function_sq_norm(const DistributionSpec& dist);

std::string_view to_string(Marginal m);
std::string_view to_string(Task t);
std::string_view to_string(RegressionFamily f);
std::string_view to_string(EtaFamily e);

} // namespace histnet
