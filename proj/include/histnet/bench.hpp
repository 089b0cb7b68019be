#pragma once

#include "histnet/distribution.hpp"
#include "histnet/loss.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace histnet {

enum class PredictorKind
{
  good_erm,
  bad_erm,
  good_dnn,
  bad_dnn
};

std::string_view to_string(PredictorKind p);
PredictorKind parse_predictor(std::string_view name);

struct ExperimentPlan
{
  DistributionSpec dist;
  LossKind loss = LossKind::least_squares;
  std::vector<std::size_t> n_grid;
  double gamma = 0.0;
  std::size_t repetitions = 1;
  std::size_t mc_points = 100000;
  std::uint64_t seed = 0;
  std::vector<PredictorKind> predictors{ PredictorKind::good_erm,
                                         PredictorKind::bad_erm };
  bool log_schedule = false; // s_n = 1/log(n)
  unsigned threads = 1;
  bool timing = false;       // adds wall_ms, which breaks byte-identity

  void validate() const;
};

// 2 alpha / (2 alpha + d): the largest admissible gamma.
double gamma_max(double alpha, std::size_t dim);

double width_schedule(std::size_t n,
                      double gamma,
                      std::size_t dim,
                      bool log_schedule = false);

struct RateRow
{
  std::size_t n = 0;
  std::size_t rep = 0;
  double s_n = 0.0;
  PredictorKind predictor = PredictorKind::good_erm;
  double risk = 0.0;
  double risk_stderr = 0.0;
  double excess_risk = 0.0;    // risk - R*
  double worst_gap = 0.0;      // R_dagger - risk
  double l2sq_fstar = 0.0;     // ||f - f*||^2
  double l2sq_neg_fstar = 0.0; // ||f + f*||^2
  bool interpolates = false;
  double wall_ms = 0.0;
};

// Rows ordered by (n, repetition, predictor) whatever the thread count.
std::vector<RateRow> run_experiment(const ExperimentPlan& plan);

void write_rate_csv(std::ostream& out,
                    const std::vector<RateRow>& rows,
                    bool timing = false);
std::vector<RateRow> read_rate_csv(std::istream& in);

// OLS slope of log(mean excess risk) against log(n / log n), one point
// per distinct n.
double fit_loglog_slope(const std::vector<RateRow>& rows,
                        PredictorKind predictor);

} // namespace histnet
