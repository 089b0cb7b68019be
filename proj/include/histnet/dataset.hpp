#pragma once

#include "histnet/geometry.hpp"
#include "histnet/loss.hpp"

#include <vector>

namespace histnet {

struct Dataset
{
  PointSet x;
  std::vector<double> y;

  Dataset() = default;
  Dataset(PointSet points, std::vector<double> labels);

  std::size_t size() const { return y.size(); }
  std::size_t dim() const { return x.dim(); }

  // Throws InputError unless all points lie in [-1,1]^d and all labels
  // lie in the label set of `loss`.
  void validate(LossKind loss) const;
};

} // namespace histnet
