#pragma once

#include "histnet/dataset.hpp"
#include "histnet/distribution.hpp"
#include "histnet/geometry.hpp"
#include "histnet/loss.hpp"

#include <functional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace histnet {

using Predictor = std::function<double(std::span<const double>)>;

template<class V>
using CellMap = std::unordered_map<CellKey, V, CellKeyHash, CellKeyEqual>;

struct CellStats
{
  std::size_t count = 0;
  double label_sum = 0.0;
};

/// Piecewise constant function sum_j c_j 1_{A_j} over a cubic partition.
///
/// Only cells with a stored coefficient are materialized; every other cell
/// reports `empty_default`. All stored values lie in Y for `loss`.
class Histogram
{
public:
  Histogram(CubicPartition part,
            LossKind loss,
            CellMap<double> coeffs,
            double empty_default);

  const CubicPartition& partition() const { return part_; }
  LossKind loss() const { return loss_; }
  const CellMap<double>& coeffs() const { return coeffs_; }
  double empty_default() const { return empty_default_; }

  double coefficient(std::span<const std::int64_t> k) const;
  // Throws InputError for x outside [-1,1]^d.
  double predict(std::span<const double> x) const;
  double predict_unchecked(std::span<const double> x) const;

  // -h, including the empty-cell default.
  Histogram negated() const;

  // Stored coefficients ordered by key.
  std::vector<std::pair<CellKey, double>> sorted_coeffs() const;

private:
  CubicPartition part_;
  LossKind loss_;
  CellMap<double> coeffs_;
  double empty_default_;
};

CellMap<CellStats> cell_stats(const Dataset& data, const CubicPartition& part);

// Minimizer over Y of the per-cell empirical risk: label mean for least
// squares, majority vote (ties -> +1) for hinge and classification.
double cell_coefficient(LossKind loss, const CellStats& stats);

Histogram fit_histogram(const Dataset& data,
                        const CubicPartition& part,
                        LossKind loss);

// h_{P,A}: per-cell P_X-average of the least squares Bayes function.
Histogram population_histogram(const DistributionSpec& dist,
                               const CubicPartition& part,
                               std::size_t quadrature_resolution = 1024);

double empirical_risk(const Predictor& f, const Dataset& data, LossKind loss);

} // namespace histnet
