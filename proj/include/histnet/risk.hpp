#pragma once

#include "histnet/dataset.hpp"
#include "histnet/distribution.hpp"
#include "histnet/histogram.hpp"
#include "histnet/interpolate.hpp"
#include "histnet/loss.hpp"
#include "histnet/rng.hpp"

#include <cstdint>
#include <functional>

namespace histnet {

struct RiskEstimate
{
  double mean = 0.0;
  double std_error = 0.0; // sample std / sqrt(n_samples)
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Creates an independent evaluator per worker thread.
using PredictorFactory = std::function<Predictor()>;

void sample_point(const DistributionSpec& dist, Rng& g, std::span<double> x);
double sample_label(const DistributionSpec& dist,
                    std::span<const double> x,
                    Rng& g);

Dataset sample(const DistributionSpec& dist, std::size_t n, std::uint64_t seed);

// Loss that matches the distribution's label set.
bool loss_supported(const DistributionSpec& dist, LossKind loss);

// E min(eta, 1 - eta) for classification tasks.
double classification_bayes_risk(const DistributionSpec& dist);

double bayes_risk(const DistributionSpec& dist, LossKind loss);
// Risk of the negated Bayes decision function.
double worst_risk(const DistributionSpec& dist, LossKind loss);
// Bayes decision function of `loss` (f* for least squares, its sign for
// hinge and classification).
double bayes_decision(const DistributionSpec& dist,
                      LossKind loss,
                      std::span<const double> x);

inline constexpr std::size_t kMcChunk = 8192;

// Chunk c draws from derive_seed(seed, {c}); chunk sums are reduced in
// chunk order, so the result does not depend on `threads`.
RiskEstimate mc_risk(const PredictorFactory& f,
                     const DistributionSpec& dist,
                     LossKind loss,
                     std::size_t n_points,
                     std::uint64_t seed,
                     unsigned threads = 1);
RiskEstimate mc_risk(const Predictor& f,
                     const DistributionSpec& dist,
                     LossKind loss,
                     std::size_t n_points,
                     std::uint64_t seed,
                     unsigned threads = 1);

// E_{P_X} |f - g|^2 by Monte Carlo.
RiskEstimate mc_l2sq(const PredictorFactory& f,
                     const Predictor& g,
                     const DistributionSpec& dist,
                     std::size_t n_points,
                     std::uint64_t seed,
                     unsigned threads = 1);

// E_{P_X} |h - g|^2 by per-cell midpoint quadrature.
double l2sq_histogram(const Histogram& h,
                      const Predictor& g,
                      const DistributionSpec& dist,
                      std::size_t cell_resolution = 0);
// Same for an inflated histogram; bump cubes are integrated separately.
double l2sq_inflated(const InflatedHistogram& f,
                     const Predictor& g,
                     const DistributionSpec& dist,
                     std::size_t cell_resolution = 0);

double l2_distance(const Histogram& h,
                   const Predictor& g,
                   const DistributionSpec& dist,
                   std::size_t cell_resolution = 0);

} // namespace histnet
