#include "histnet/loss.hpp"

#include "histnet/error.hpp"

#include <algorithm>
#include <cmath>

namespace histnet {

bool
label_in_range(LossKind loss, double y)
{
  if (loss == LossKind::least_squares)
    return y >= -1.0 && y <= 1.0;
  return y == 1.0 || y == -1.0;
}

bool
is_binary(LossKind loss)
{
  return loss != LossKind::least_squares;
}

double
loss_eval(LossKind loss, double y, double t)
{
  switch (loss) {
    case LossKind::least_squares:
      return (y - t) * (y - t);
    case LossKind::hinge:
      return std::max(0.0, 1.0 - t * y);
    case LossKind::classification:
      return y * sign_plus(t) <= 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double
empty_cell_default(LossKind loss)
{
  return loss == LossKind::least_squares ? 0.0 : 1.0;
}

std::string_view
to_string(LossKind loss)
{
  switch (loss) {
    case LossKind::least_squares:
      return "least_squares";
    case LossKind::hinge:
      return "hinge";
    case LossKind::classification:
      return "classification";
  }
  return "?";
}

LossKind
parse_loss(std::string_view name)
{
  if (name == "least_squares" || name == "ls")
    return LossKind::least_squares;
  if (name == "hinge")
    return LossKind::hinge;
  if (name == "classification" || name == "class")
    return LossKind::classification;
  throw InputError("unknown loss '" + std::string(name) + "'");
}

} // namespace histnet
