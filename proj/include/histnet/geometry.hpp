#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace histnet {

using Point = std::vector<double>;
using CellKey = std::vector<std::int64_t>;

//! Row-major collection of points sharing one dimension.
class PointSet
{
public:
  PointSet() = default;
  explicit PointSet(std::size_t dim);
  PointSet(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const
  {
    return { coords_.data() + i * dim_, dim_ };
  }

  void push_back(std::span<const double> p);
  const std::vector<double>& coords() const { return coords_; }

private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

struct CellKeyHash
{
  using is_transparent = void;
  std::size_t operator()(std::span<const std::int64_t> k) const noexcept;
};

struct CellKeyEqual
{
  using is_transparent = void;
  bool operator()(std::span<const std::int64_t> a,
                  std::span<const std::int64_t> b) const noexcept
  {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
};

//! Axis-aligned box [lo, hi]; openness of faces is decided by the owner.
struct Box
{
  Point lo;
  Point hi;

  std::size_t dim() const { return lo.size(); }
  bool degenerate() const;
  double volume() const;
};

/// Cubic partition of R^d: cells x_off + s*k + [0,s)^d for k in Z^d.
///
/// The offset is stored reduced into [0,s) per coordinate, which relabels
/// the keys but leaves the cells unchanged. Restricted cells are the
/// intersections with X = [-1,1]^d.
class CubicPartition
{
public:
  CubicPartition(std::size_t dim, double width, Point offset);
  CubicPartition(std::size_t dim, double width);

  std::size_t dim() const { return dim_; }
  double width() const { return width_; }
  const Point& offset() const { return offset_; }

  CellKey cell_index(std::span<const double> x) const;
  // Hot-path variant writing into caller storage of size dim().
  void cell_index(std::span<const double> x, std::span<std::int64_t> out) const;
  std::int64_t coordinate_index(std::size_t axis, double v) const;

  struct Bounds
  {
    Box cell;                      // B_k, half-open upper faces
    std::optional<Box> restricted; // A_k = B_k cap X, empty -> nullopt
  };
  Bounds cell_bounds(std::span<const std::int64_t> k) const;

  // Keys of every cell whose restriction to X is non-empty, in
  // lexicographic order.
  std::vector<CellKey> cells_meeting_domain() const;

private:
  std::size_t dim_;
  double width_;
  Point offset_;
};

inline constexpr double kNoGap = std::numeric_limits<double>::infinity();

/// Smallest positive gap between sorted coordinate values, over all axes,
/// divided by 3. Returns kNoGap when no axis has two distinct values.
double min_gap_separation(const PointSet& points);

struct AlignmentResult
{
  Point offset;
  double delta = 0.0;
  double tmax = 0.0;
  // (m+1)^d, saturated at UINT64_MAX. Reported only.
  std::uint64_t candidate_count = 0;
  std::size_t bins_inspected = 0;
};

/// Coordinate-wise offset search: residues (x mod s) are binned into m+1
/// bins of width s/(m+1) and the offset coordinate is placed in the middle
/// of the first empty bin. Every cube x_i + t[-1,1]^d with t <= s/(3m+3)
/// then lies inside the half-open cell containing x_i.
AlignmentResult align_offset(const PointSet& points, double width);

struct AlignmentReport
{
  std::vector<bool> inside_cell;
  bool pairwise_disjoint = true;
  std::optional<std::size_t> first_outside;
  std::optional<std::pair<std::size_t, std::size_t>> first_overlap;

  bool ok() const { return pairwise_disjoint && !first_outside; }
};

AlignmentReport verify_proper_alignment(const PointSet& points,
                                        double t,
                                        const CubicPartition& part);

bool in_domain(std::span<const double> x);
std::string format_point(std::span<const double> x);

} // namespace histnet
