#include "histnet/geometry.hpp"

#include "histnet/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace histnet {

PointSet::PointSet(std::size_t dim)
  : dim_(dim)
{
  if (dim == 0)
    throw InputError("point dimension must be positive");
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
  : dim_(dim)
  , coords_(std::move(coords))
{
  if (dim == 0)
    throw InputError("point dimension must be positive");
  if (coords_.size() % dim != 0)
    throw InputError("coordinate count is not a multiple of the dimension");
  // -0.0 and +0.0 must land on the same duplicate group and bump cube.
  for (double& v : coords_)
    v += 0.0;
}

void
PointSet::push_back(std::span<const double> p)
{
  if (p.size() != dim_)
    throw InputError("point dimension mismatch");
  for (double v : p)
    coords_.push_back(v + 0.0);
}

std::size_t
CellKeyHash::operator()(std::span<const std::int64_t> k) const noexcept
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::int64_t v : k) {
    auto u = static_cast<std::uint64_t>(v);
    u ^= u >> 33;
    u *= 0xff51afd7ed558ccdULL;
    u ^= u >> 33;
    h = (h ^ u) * 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

bool
Box::degenerate() const
{
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i]))
      return true;
  return false;
}

double
Box::volume() const
{
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i)
    v *= std::max(0.0, hi[i] - lo[i]);
  return v;
}

namespace {

double
reduce_offset(double off, double width)
{
  double r = off - width * std::floor(off / width);
  if (r >= width || r < 0.0)
    r = 0.0;
  return r;
}

} // namespace

CubicPartition::CubicPartition(std::size_t dim, double width, Point offset)
  : dim_(dim)
  , width_(width)
  , offset_(std::move(offset))
{
  if (dim == 0)
    throw InputError("partition dimension must be positive");
  if (!(width > 0.0 && width <= 1.0))
    throw InputError("partition width must lie in (0,1]");
  if (offset_.size() != dim)
    throw InputError("partition offset has wrong dimension");
  for (double& o : offset_) {
    if (!std::isfinite(o))
      throw InputError("partition offset must be finite");
    o = reduce_offset(o, width_);
  }
}

CubicPartition::CubicPartition(std::size_t dim, double width)
  : CubicPartition(dim, width, Point(dim, 0.0))
{
}

std::int64_t
CubicPartition::coordinate_index(std::size_t axis, double v) const
{
  return static_cast<std::int64_t>(std::floor((v - offset_[axis]) / width_));
}

void
CubicPartition::cell_index(std::span<const double> x,
                           std::span<std::int64_t> out) const
{
  if (x.size() != dim_)
    throw InputError("point dimension does not match partition");
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!std::isfinite(x[i]))
      throw InputError("non-finite coordinate " + std::to_string(x[i]));
    out[i] = coordinate_index(i, x[i]);
  }
}

CellKey
CubicPartition::cell_index(std::span<const double> x) const
{
  CellKey k(dim_);
  cell_index(x, k);
  return k;
}

CubicPartition::Bounds
CubicPartition::cell_bounds(std::span<const std::int64_t> k) const
{
  if (k.size() != dim_)
    throw InputError("cell key dimension does not match partition");
  Bounds b;
  b.cell.lo.resize(dim_);
  b.cell.hi.resize(dim_);
  bool meets = true;
  for (std::size_t i = 0; i < dim_; ++i) {
    b.cell.lo[i] = offset_[i] + width_ * static_cast<double>(k[i]);
    b.cell.hi[i] = offset_[i] + width_ * static_cast<double>(k[i] + 1);
    // [lo,hi) meets [-1,1] iff lo <= 1 and hi > -1.
    if (!(b.cell.lo[i] <= 1.0 && b.cell.hi[i] > -1.0))
      meets = false;
  }
  if (meets) {
    Box a;
    a.lo.resize(dim_);
    a.hi.resize(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      a.lo[i] = std::max(b.cell.lo[i], -1.0);
      a.hi[i] = std::min(b.cell.hi[i], 1.0);
    }
    b.restricted = std::move(a);
  }
  return b;
}

std::vector<CellKey>
CubicPartition::cells_meeting_domain() const
{
  std::vector<std::int64_t> lo(dim_), hi(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    lo[i] = coordinate_index(i, -1.0);
    hi[i] = coordinate_index(i, 1.0);
  }
  std::vector<CellKey> out;
  CellKey k = lo;
  while (true) {
    out.push_back(k);
    std::size_t axis = dim_;
    while (axis > 0) {
      --axis;
      if (k[axis] < hi[axis]) {
        ++k[axis];
        break;
      }
      k[axis] = lo[axis];
      if (axis == 0)
        return out;
    }
  }
}

double
min_gap_separation(const PointSet& points)
{
  if (points.empty())
    throw InputError("min_gap_separation needs at least one point");
  const std::size_t m = points.size();
  double best = kNoGap;
  std::vector<double> column(m);
  for (std::size_t axis = 0; axis < points.dim(); ++axis) {
    for (std::size_t i = 0; i < m; ++i)
      column[i] = points[i][axis];
    std::sort(column.begin(), column.end());
    for (std::size_t i = 1; i < m; ++i) {
      const double gap = column[i] - column[i - 1];
      if (gap > 0.0)
        best = std::min(best, gap);
    }
  }
  return best == kNoGap ? kNoGap : best / 3.0;
}

namespace {

bool
lex_less(std::span<const double> a, std::span<const double> b)
{
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void
require_distinct(const PointSet& points)
{
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(points[a], points[b]);
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    auto a = points[order[i - 1]];
    auto b = points[order[i]];
    if (std::equal(a.begin(), a.end(), b.begin()))
      throw InputError("duplicate point " + format_point(a) +
                       " (deduplicate before aligning)");
  }
}

} // namespace

AlignmentResult
align_offset(const PointSet& points, double width)
{
  if (points.empty())
    throw InputError("align_offset needs at least one point");
  if (!(width > 0.0 && width <= 1.0))
    throw InputError("partition width must lie in (0,1]");
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!in_domain(points[i]))
      throw InputError("point " + format_point(points[i]) +
                       " lies outside [-1,1]^d");
  require_distinct(points);

  const std::size_t m = points.size();
  const std::size_t d = points.dim();
  AlignmentResult res;
  res.delta = width / static_cast<double>(m + 1);
  res.tmax = width / static_cast<double>(3 * m + 3);
  res.offset.assign(d, 0.0);

  std::uint64_t k = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (k > std::numeric_limits<std::uint64_t>::max() / (m + 1)) {
      k = std::numeric_limits<std::uint64_t>::max();
      break;
    }
    k *= (m + 1);
  }
  res.candidate_count = k;

  std::vector<char> occupied(m + 1);
  for (std::size_t axis = 0; axis < d; ++axis) {
    std::fill(occupied.begin(), occupied.end(), 0);
    for (std::size_t i = 0; i < m; ++i) {
      const double v = points[i][axis];
      double r = v - width * std::floor(v / width);
      if (r < 0.0 || r >= width)
        r = 0.0;
      auto j = static_cast<std::size_t>(std::floor(r / res.delta));
      occupied[std::min(j, m)] = 1;
    }
    // m points occupy at most m of the m+1 bins.
    std::size_t j = 0;
    for (; j <= m; ++j) {
      ++res.bins_inspected;
      if (!occupied[j])
        break;
    }
    res.offset[axis] = (static_cast<double>(j) + 0.5) * res.delta;
  }
  return res;
}

AlignmentReport
verify_proper_alignment(const PointSet& points,
                        double t,
                        const CubicPartition& part)
{
  if (!(t > 0.0))
    throw InputError("alignment radius must be positive");
  if (points.dim() != part.dim())
    throw InputError("point dimension does not match partition");

  const std::size_t m = points.size();
  const std::size_t d = points.dim();
  AlignmentReport rep;
  rep.inside_cell.assign(m, true);
  for (std::size_t i = 0; i < m; ++i) {
    auto x = points[i];
    for (std::size_t a = 0; a < d; ++a) {
      const auto k = part.coordinate_index(a, x[a]);
      if (part.coordinate_index(a, x[a] - t) != k ||
          part.coordinate_index(a, x[a] + t) != k) {
        rep.inside_cell[i] = false;
        break;
      }
    }
    if (!rep.inside_cell[i] && !rep.first_outside)
      rep.first_outside = i;
  }

  // Closed cubes intersect iff every coordinate differs by at most 2t.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a][0] < points[b][0];
  });
  for (std::size_t p = 0; p < m && rep.pairwise_disjoint; ++p) {
    auto x = points[order[p]];
    for (std::size_t q = p + 1; q < m; ++q) {
      auto y = points[order[q]];
      if (y[0] - x[0] > 2.0 * t)
        break;
      bool overlap = true;
      for (std::size_t a = 0; a < d; ++a)
        if (std::abs(x[a] - y[a]) > 2.0 * t) {
          overlap = false;
          break;
        }
      if (overlap) {
        rep.pairwise_disjoint = false;
        rep.first_overlap = std::minmax(order[p], order[q]);
        break;
      }
    }
  }
  return rep;
}

bool
in_domain(std::span<const double> x)
{
  for (double v : x)
    if (!(v >= -1.0 && v <= 1.0))
      return false;
  return true;
}

std::string
format_point(std::span<const double> x)
{
  std::string out = "(";
  char buf[32];
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i)
      out += ", ";
    const auto r = std::to_chars(buf, buf + sizeof buf, x[i]);
    out.append(buf, r.ptr);
  }
  return out + ")";
}

} // namespace histnet
