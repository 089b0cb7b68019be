#pragma once

#include <string>
#include <string_view>

namespace histnet {

enum class LossKind
{
  least_squares,
  hinge,
  classification
};

// Labels live in [-1,1] for least squares and in {-1,+1} otherwise.
bool label_in_range(LossKind loss, double y);
bool is_binary(LossKind loss);

// sign with sign(0) := +1, so that plug-in outputs stay in {-1,+1}.
inline double
sign_plus(double v)
{
  return v >= 0.0 ? 1.0 : -1.0;
}

double loss_eval(LossKind loss, double y, double t);

// Value a histogram reports on cells without samples.
double empty_cell_default(LossKind loss);

std::string_view to_string(LossKind loss);
LossKind parse_loss(std::string_view name);

} // namespace histnet
