#include "histnet/dataset.hpp"

#include "histnet/error.hpp"

#include <cmath>

namespace histnet {

Dataset::Dataset(PointSet points, std::vector<double> labels)
  : x(std::move(points))
  , y(std::move(labels))
{
  if (x.size() != y.size())
    throw InputError("dataset has " + std::to_string(x.size()) +
                     " points but " + std::to_string(y.size()) + " labels");
}

void
Dataset::validate(LossKind loss) const
{
  if (size() == 0)
    throw InputError("dataset is empty");
  for (std::size_t i = 0; i < size(); ++i) {
    if (!in_domain(x[i]))
      throw InputError("sample " + std::to_string(i) + " at " +
                       format_point(x[i]) + " lies outside [-1,1]^d");
    if (!std::isfinite(y[i]) || !label_in_range(loss, y[i]))
      throw InputError("label " + std::to_string(y[i]) + " of sample " +
                       std::to_string(i) + " is outside Y for " +
                       std::string(to_string(loss)));
  }
}

} // namespace histnet
