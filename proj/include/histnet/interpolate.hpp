#pragma once

#include "histnet/dataset.hpp"
#include "histnet/histogram.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace histnet {

struct InterpolationTarget
{
  Point center;
  double target = 0.0;
  std::size_t multiplicity = 0;
};

// One target per distinct sample point (exact coordinate equality), in
// order of first occurrence. The target minimizes the summed loss of the
// samples sharing that point.
std::vector<InterpolationTarget> distinct_targets(const Dataset& data,
                                                  LossKind loss);

// R*_D: the smallest empirical risk any real-valued function can reach.
double optimal_empirical_risk(const Dataset& data, LossKind loss);

struct Bump
{
  Point center;
  double amplitude = 0.0;
};

/// Histogram plus closed-cube corrections: h + sum_i b_i 1_{x_i + t B}.
///
/// Construction verifies that every cube lies in the cell of its center
/// and that the cubes are pairwise disjoint, so at most one correction
/// applies at any point.
class InflatedHistogram
{
public:
  InflatedHistogram(Histogram base, std::vector<Bump> bumps, double radius);

  const Histogram& base() const { return base_; }
  const std::vector<Bump>& bumps() const { return bumps_; }
  double radius() const { return radius_; }
  LossKind loss() const { return base_.loss(); }
  PointSet centers() const;

  std::optional<std::size_t> bump_containing(std::span<const double> x) const;

  // Throws InputError for x outside [-1,1]^d.
  double predict(std::span<const double> x) const;
  double predict_unchecked(std::span<const double> x) const;

private:
  Histogram base_;
  std::vector<Bump> bumps_;
  double radius_;
  std::vector<std::size_t> by_first_;   // bump indices sorted by x_1
  std::vector<double> first_sorted_;    // matching x_1 values
};

inline double
predict_inflated(const InflatedHistogram& f, std::span<const double> x)
{
  return f.predict(x);
}

// b_i = c*_i - c_{j_i}; the radius must properly align the centers.
InflatedHistogram build_inflated(const Histogram& base,
                                 const std::vector<InterpolationTarget>& targets,
                                 double t);

// max(2^-n, 2^-40): the bump radius cap used by the interpolating rules.
double radius_cap(std::size_t n);

enum class ErmKind
{
  good,
  bad
};

struct ErmBuild
{
  InflatedHistogram predictor;
  AlignmentResult alignment;
};

ErmBuild interpolating_erm(const Dataset& data,
                           double width,
                           LossKind loss,
                           ErmKind kind);

// Histogram part is the empirical histogram rule on the aligned partition.
InflatedHistogram good_erm(const Dataset& data, double width, LossKind loss);
// Histogram part is the negated empirical histogram rule.
InflatedHistogram bad_erm(const Dataset& data, double width, LossKind loss);

struct InterpolationCheck
{
  bool interpolates = false;
  double empirical = 0.0;
  double optimal = 0.0;
  double gap = 0.0;
};

InterpolationCheck check_interpolation(const Predictor& f,
                                       const Dataset& data,
                                       LossKind loss);

// JSON model documents; see README for the schema.
std::string export_model(const Histogram& h);
std::string export_model(const InflatedHistogram& f);
std::variant<Histogram, InflatedHistogram> import_model(std::string_view text);

} // namespace histnet
