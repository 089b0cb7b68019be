#include "histnet/histogram.hpp"

#include "histnet/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace histnet {

namespace {

void
require_in_y(LossKind loss, double v, const char* what)
{
  if (!std::isfinite(v) || !label_in_range(loss, v))
    throw InputError(std::string(what) + " " + std::to_string(v) +
                     " is outside Y for " + std::string(to_string(loss)));
}

} // namespace

Histogram::Histogram(CubicPartition part,
                     LossKind loss,
                     CellMap<double> coeffs,
                     double empty_default)
  : part_(std::move(part))
  , loss_(loss)
  , coeffs_(std::move(coeffs))
  , empty_default_(empty_default)
{
  require_in_y(loss_, empty_default_, "empty-cell default");
  for (const auto& [k, c] : coeffs_) {
    if (k.size() != part_.dim())
      throw InputError("cell key dimension does not match partition");
    require_in_y(loss_, c, "histogram coefficient");
  }
}

double
Histogram::coefficient(std::span<const std::int64_t> k) const
{
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? empty_default_ : it->second;
}

double
Histogram::predict_unchecked(std::span<const double> x) const
{
  const std::size_t d = part_.dim();
  if (d <= 8) {
    std::array<std::int64_t, 8> buf;
    std::span<std::int64_t> k(buf.data(), d);
    part_.cell_index(x, k);
    return coefficient(k);
  }
  return coefficient(part_.cell_index(x));
}

double
Histogram::predict(std::span<const double> x) const
{
  if (x.size() != part_.dim())
    throw InputError("point dimension does not match histogram");
  if (!in_domain(x))
    throw InputError("point " + format_point(x) + " lies outside [-1,1]^d");
  return predict_unchecked(x);
}

Histogram
Histogram::negated() const
{
  CellMap<double> neg;
  neg.reserve(coeffs_.size());
  for (const auto& [k, c] : coeffs_)
    neg.emplace(k, -c);
  return Histogram(part_, loss_, std::move(neg), -empty_default_);
}

std::vector<std::pair<CellKey, double>>
Histogram::sorted_coeffs() const
{
  std::vector<std::pair<CellKey, double>> out(coeffs_.begin(), coeffs_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

CellMap<CellStats>
cell_stats(const Dataset& data, const CubicPartition& part)
{
  if (data.dim() != part.dim())
    throw InputError("dataset dimension does not match partition");
  CellMap<CellStats> stats;
  CellKey k(part.dim());
  for (std::size_t i = 0; i < data.size(); ++i) {
    part.cell_index(data.x[i], k);
    auto& s = stats[k];
    ++s.count;
    s.label_sum += data.y[i];
  }
  return stats;
}

double
cell_coefficient(LossKind loss, const CellStats& stats)
{
  if (stats.count == 0)
    return empty_cell_default(loss);
  const double mean = stats.label_sum / static_cast<double>(stats.count);
  if (loss == LossKind::least_squares)
    return std::clamp(mean, -1.0, 1.0);
  return sign_plus(mean);
}

Histogram
fit_histogram(const Dataset& data, const CubicPartition& part, LossKind loss)
{
  data.validate(loss);
  auto stats = cell_stats(data, part);
  CellMap<double> coeffs;
  coeffs.reserve(stats.size());
  for (const auto& [k, s] : stats)
    coeffs.emplace(k, cell_coefficient(loss, s));
  return Histogram(part, loss, std::move(coeffs), empty_cell_default(loss));
}

Histogram
population_histogram(const DistributionSpec& dist,
                     const CubicPartition& part,
                     std::size_t quadrature_resolution)
{
  dist.validate();
  if (dist.dim != part.dim())
    throw InputError("distribution dimension does not match partition");
  if (quadrature_resolution == 0)
    throw InputError("quadrature resolution must be positive");
  CellMap<double> coeffs;
  for (const auto& k : part.cells_meeting_domain()) {
    const auto bounds = part.cell_bounds(k);
    if (!bounds.restricted || bounds.restricted->degenerate())
      continue;
    const Box& a = *bounds.restricted;
    const double mass = integrate(
      dist, a, [](std::span<const double>) { return 1.0; },
      quadrature_resolution);
    if (!(mass > 0.0))
      continue;
    const double integral = integrate(
      dist, a,
      [&](std::span<const double> x) { return dist.bayes_function(x); },
      quadrature_resolution);
    coeffs.emplace(k, std::clamp(integral / mass, -1.0, 1.0));
  }
  return Histogram(part, LossKind::least_squares, std::move(coeffs),
                   empty_cell_default(LossKind::least_squares));
}

double
empirical_risk(const Predictor& f, const Dataset& data, LossKind loss)
{
  if (data.size() == 0)
    throw InputError("empirical risk of an empty dataset");
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    sum += loss_eval(loss, data.y[i], f(data.x[i]));
  return sum / static_cast<double>(data.size());
}

} // namespace histnet
