#include "histnet/distribution.hpp"

#include "histnet/error.hpp"

#include <algorithm>
#include <numbers>

namespace histnet {

void
DistributionSpec::validate() const
{
  if (dim == 0)
    throw InputError("dim must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw InputError("alpha must lie in (0,1]");
  if (!(holder_c > 0.0) || !std::isfinite(holder_c))
    throw InputError("C must be positive");
  if ((fstar == RegressionFamily::linear || fstar == RegressionFamily::cosine) &&
      alpha != 1.0)
    throw InputError("linear and cosine regression functions are Lipschitz; "
                     "alpha must be 1");
  switch (marginal) {
    case Marginal::uniform:
      if (!(density_bound >= 1.0))
        throw InputError("uniform marginal needs density bound c >= 1");
      break;
    case Marginal::truncated_linear:
      if (!(density_bound >= 1.0 && density_bound <= 2.0))
        throw InputError("truncated-linear marginal needs c in [1,2] "
                         "(tilt a = c - 1)");
      break;
  }
  if (task == Task::regression) {
    if (!(noise_b >= 0.0))
      throw InputError("noise_b must be non-negative");
    if (family_sup() + noise_b > 1.0 + 1e-12)
      throw InputError("sup|f*| + noise_b exceeds 1, labels would leave "
                       "[-1,1]");
  } else if (eta == EtaFamily::fstar && family_sup() > 1.0 + 1e-12) {
    throw InputError("eta = (1+f)/2 needs sup|f| <= 1");
  }
}

double
DistributionSpec::tilt() const
{
  return marginal == Marginal::truncated_linear ? density_bound - 1.0 : 0.0;
}

double
DistributionSpec::marginal_density_1d(double u) const
{
  if (u < -1.0 || u > 1.0)
    return 0.0;
  return 0.5 * (1.0 + tilt() * u);
}

double
DistributionSpec::marginal_cdf_1d(double u) const
{
  if (u <= -1.0)
    return 0.0;
  if (u >= 1.0)
    return 1.0;
  const double a = tilt();
  return 0.5 * ((u + 1.0) + 0.5 * a * (u * u - 1.0));
}

double
DistributionSpec::marginal_quantile_1d(double p) const
{
  // Solve (a/2) u^2 + u + (1 - a/2 - 2p) = 0 for the root in [-1,1],
  // written in the cancellation-free form.
  const double a = tilt();
  const double c = 1.0 - 0.5 * a - 2.0 * p;
  const double disc = std::max(0.0, 1.0 - 2.0 * a * c);
  const double u = -2.0 * c / (1.0 + std::sqrt(disc));
  return std::clamp(u, -1.0, 1.0);
}

double
DistributionSpec::density(std::span<const double> x) const
{
  double p = 1.0;
  for (double u : x)
    p *= marginal_density_1d(u);
  return p;
}

double
DistributionSpec::family_value(std::span<const double> x) const
{
  double s = 0.0;
  for (double u : x) {
    switch (fstar) {
      case RegressionFamily::linear:
        s += holder_c * u;
        break;
      case RegressionFamily::cosine:
        s += holder_c / std::numbers::pi * std::cos(std::numbers::pi * u);
        break;
      case RegressionFamily::power:
        s += holder_c * std::pow(std::abs(u), alpha);
        break;
    }
  }
  return s / static_cast<double>(x.size());
}

double
DistributionSpec::family_sup() const
{
  switch (fstar) {
    case RegressionFamily::linear:
    case RegressionFamily::power:
      return holder_c;
    case RegressionFamily::cosine:
      return holder_c / std::numbers::pi;
  }
  return holder_c;
}

double
DistributionSpec::eta_at(std::span<const double> x) const
{
  switch (eta) {
    case EtaFamily::threshold:
      return x[0] >= 0.0 ? 1.0 : 0.0;
    case EtaFamily::half:
      return 0.5;
    case EtaFamily::fstar:
      return 0.5 * (1.0 + family_value(x));
  }
  return 0.5;
}

double
DistributionSpec::bayes_function(std::span<const double> x) const
{
  if (task == Task::regression)
    return family_value(x);
  return 2.0 * eta_at(x) - 1.0;
}

double
DistributionSpec::cube_mass(std::span<const double> x, double t) const
{
  double p = 1.0;
  for (double u : x)
    p *= marginal_cdf_1d(u + t) - marginal_cdf_1d(u - t);
  return p;
}

double
DistributionSpec::assumption_constant() const
{
  // Per axis an interval of length 2t carries at most 2t * sup density.
  return marginal == Marginal::uniform ? 1.0 : 1.0 + tilt();
}

std::size_t
domain_resolution(std::size_t dim)
{
  const double r = std::floor(std::pow(4.0e6, 1.0 / static_cast<double>(dim)));
  return static_cast<std::size_t>(std::clamp(r, 2.0, 1.0e4));
}

Box
domain_box(std::size_t dim)
{
  return Box{ Point(dim, -1.0), Point(dim, 1.0) };
}

double
bayes_function_sq_norm(const DistributionSpec& dist)
{
  return integrate(
    dist,
    domain_box(dist.dim),
    [&](std::span<const double> x) {
      const double f = dist.bayes_function(x);
      return f * f;
    },
    domain_resolution(dist.dim));
}

std::string_view
to_string(Marginal m)
{
  return m == Marginal::uniform ? "uniform" : "truncated_linear";
}

std::string_view
to_string(Task t)
{
  return t == Task::regression ? "regression" : "classification";
}

std::string_view
to_string(RegressionFamily f)
{
  switch (f) {
    case RegressionFamily::linear:
      return "linear";
    case RegressionFamily::cosine:
      return "cosine";
    case RegressionFamily::power:
      return "power";
  }
  return "?";
}

std::string_view
to_string(EtaFamily e)
{
  switch (e) {
    case EtaFamily::threshold:
      return "threshold";
    case EtaFamily::half:
      return "half";
    case EtaFamily::fstar:
      return "fstar";
  }
  return "?";
}

} // namespace histnet
