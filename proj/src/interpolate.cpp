#include "histnet/interpolate.hpp"

#include "histnet/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace histnet {

using nlohmann::json;

std::vector<InterpolationTarget>
distinct_targets(const Dataset& data, LossKind loss)
{
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    auto pa = data.x[a];
    auto pb = data.x[b];
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(),
                                        pb.end());
  };
  std::stable_sort(idx.begin(), idx.end(), less);

  struct Group
  {
    std::size_t first;
    CellStats stats;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = idx[i];
    if (i == 0 || less(idx[i - 1], j))
      groups.push_back({ j, {} });
    ++groups.back().stats.count;
    groups.back().stats.label_sum += data.y[j];
  }
  std::sort(groups.begin(), groups.end(),
            [](const Group& a, const Group& b) { return a.first < b.first; });

  std::vector<InterpolationTarget> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    auto p = data.x[g.first];
    out.push_back({ Point(p.begin(), p.begin() + static_cast<long>(d)),
                    cell_coefficient(loss, g.stats), g.stats.count });
  }
  return out;
}

namespace {

double
summed_loss(const Predictor& f, const Dataset& data, LossKind loss)
{
  double s = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    s += loss_eval(loss, data.y[i], f(data.x[i]));
  return s;
}

double
optimal_summed_loss(const Dataset& data, LossKind loss)
{
  const auto targets = distinct_targets(data, loss);
  std::vector<std::pair<Point, double>> lookup;
  lookup.reserve(targets.size());
  for (const auto& t : targets)
    lookup.emplace_back(t.center, t.target);
  std::sort(lookup.begin(), lookup.end());
  double s = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto p = data.x[i];
    Point key(p.begin(), p.end());
    auto it = std::lower_bound(
      lookup.begin(), lookup.end(), key,
      [](const auto& e, const Point& k) { return e.first < k; });
    s += loss_eval(loss, data.y[i], it->second);
  }
  return s;
}

} // namespace

double
optimal_empirical_risk(const Dataset& data, LossKind loss)
{
  data.validate(loss);
  return optimal_summed_loss(data, loss) / static_cast<double>(data.size());
}

InflatedHistogram::InflatedHistogram(Histogram base,
                                     std::vector<Bump> bumps,
                                     double radius)
  : base_(std::move(base))
  , bumps_(std::move(bumps))
  , radius_(radius)
{
  if (!(radius_ > 0.0) || !std::isfinite(radius_))
    throw InputError("bump radius must be positive and finite");
  const std::size_t d = base_.partition().dim();
  const bool binary = is_binary(base_.loss());
  for (const auto& b : bumps_) {
    if (b.center.size() != d)
      throw InputError("bump center dimension does not match partition");
    if (!in_domain(b.center))
      throw InputError("bump center " + format_point(b.center) +
                       " lies outside [-1,1]^d");
    const double a = b.amplitude;
    const bool ok = binary ? (a == 0.0 || a == 2.0 || a == -2.0)
                           : (std::isfinite(a) && std::abs(a) <= 2.0);
    if (!ok)
      throw InputError("bump amplitude " + std::to_string(a) +
                       " is outside 2Y");
  }

  const PointSet c = centers();
  const auto report = verify_proper_alignment(c, radius_, base_.partition());
  if (report.first_outside)
    throw ConstructionError("cube around " +
                            format_point(c[*report.first_outside]) +
                            " leaves its cell");
  if (report.first_overlap)
    throw ConstructionError(
      "cubes around " + format_point(c[report.first_overlap->first]) +
      " and " + format_point(c[report.first_overlap->second]) + " overlap");

  by_first_.resize(bumps_.size());
  std::iota(by_first_.begin(), by_first_.end(), 0);
  std::sort(by_first_.begin(), by_first_.end(),
            [&](std::size_t a, std::size_t b) {
              return bumps_[a].center[0] < bumps_[b].center[0];
            });
  first_sorted_.reserve(bumps_.size());
  for (std::size_t i : by_first_)
    first_sorted_.push_back(bumps_[i].center[0]);
}

PointSet
InflatedHistogram::centers() const
{
  PointSet out(base_.partition().dim());
  for (const auto& b : bumps_)
    out.push_back(b.center);
  return out;
}

std::optional<std::size_t>
InflatedHistogram::bump_containing(std::span<const double> x) const
{
  auto lo = std::lower_bound(first_sorted_.begin(), first_sorted_.end(),
                             x[0] - radius_);
  for (auto it = lo; it != first_sorted_.end() && *it <= x[0] + radius_;
       ++it) {
    const std::size_t i =
      by_first_[static_cast<std::size_t>(it - first_sorted_.begin())];
    const auto& c = bumps_[i].center;
    bool inside = true;
    for (std::size_t a = 0; a < c.size() && inside; ++a)
      inside = std::abs(x[a] - c[a]) <= radius_;
    if (inside)
      return i;
  }
  return std::nullopt;
}

double
InflatedHistogram::predict_unchecked(std::span<const double> x) const
{
  const double h = base_.predict_unchecked(x);
  if (auto i = bump_containing(x))
    return h + bumps_[*i].amplitude;
  return h;
}

double
InflatedHistogram::predict(std::span<const double> x) const
{
  if (x.size() != base_.partition().dim())
    throw InputError("point dimension does not match predictor");
  if (!in_domain(x))
    throw InputError("point " + format_point(x) + " lies outside [-1,1]^d");
  return predict_unchecked(x);
}

InflatedHistogram
build_inflated(const Histogram& base,
               const std::vector<InterpolationTarget>& targets,
               double t)
{
  std::vector<Bump> bumps;
  bumps.reserve(targets.size());
  const auto& part = base.partition();
  for (const auto& tg : targets) {
    if (!label_in_range(base.loss(), tg.target))
      throw InputError("interpolation target outside Y");
    if (tg.center.size() != part.dim() || !in_domain(tg.center))
      throw InputError("interpolation center " + format_point(tg.center) +
                       " is invalid");
    const double c = base.coefficient(part.cell_index(tg.center));
    bumps.push_back({ tg.center, tg.target - c });
  }
  return InflatedHistogram(base, std::move(bumps), t);
}

double
radius_cap(std::size_t n)
{
  return std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(n, 40)));
}

ErmBuild
interpolating_erm(const Dataset& data,
                  double width,
                  LossKind loss,
                  ErmKind kind)
{
  data.validate(loss);
  const auto targets = distinct_targets(data, loss);
  PointSet c(data.dim());
  for (const auto& t : targets)
    c.push_back(t.center);
  AlignmentResult align = align_offset(c, width);
  CubicPartition part(data.dim(), width, align.offset);
  Histogram base = fit_histogram(data, part, loss);
  if (kind == ErmKind::bad)
    base = base.negated();
  const double t =
    std::min({ min_gap_separation(c), align.tmax, radius_cap(data.size()) });
  return { build_inflated(base, targets, t), std::move(align) };
}

InflatedHistogram
good_erm(const Dataset& data, double width, LossKind loss)
{
  return interpolating_erm(data, width, loss, ErmKind::good).predictor;
}

InflatedHistogram
bad_erm(const Dataset& data, double width, LossKind loss)
{
  return interpolating_erm(data, width, loss, ErmKind::bad).predictor;
}

InterpolationCheck
check_interpolation(const Predictor& f, const Dataset& data, LossKind loss)
{
  data.validate(loss);
  const double n = static_cast<double>(data.size());
  const double emp = summed_loss(f, data, loss);
  const double opt = optimal_summed_loss(data, loss);
  InterpolationCheck r;
  r.empirical = emp / n;
  r.optimal = opt / n;
  r.gap = r.empirical - r.optimal;
  r.interpolates =
    is_binary(loss) ? emp == opt : std::abs(r.gap) <= 1e-12;
  return r;
}

namespace {

json
partition_json(const CubicPartition& p)
{
  return { { "dim", p.dim() }, { "width", p.width() }, { "offset", p.offset() } };
}

json
histogram_body(const Histogram& h)
{
  json cells = json::array();
  for (const auto& [k, v] : h.sorted_coeffs())
    cells.push_back({ { "key", k }, { "value", v } });
  return { { "loss", std::string(to_string(h.loss())) },
           { "partition", partition_json(h.partition()) },
           { "empty_default", h.empty_default() },
           { "cells", std::move(cells) } };
}

Histogram
histogram_from(const json& j)
{
  const LossKind loss = parse_loss(j.at("loss").get<std::string>());
  const auto& p = j.at("partition");
  const auto dim = p.at("dim").get<std::size_t>();
  CubicPartition part(dim, p.at("width").get<double>(),
                      p.at("offset").get<Point>());
  CellMap<double> coeffs;
  for (const auto& c : j.at("cells")) {
    auto key = c.at("key").get<CellKey>();
    if (key.size() != dim)
      throw InputError("cell key dimension does not match partition");
    if (!coeffs.emplace(std::move(key), c.at("value").get<double>()).second)
      throw InputError("duplicate cell key in model");
  }
  return Histogram(std::move(part), loss, std::move(coeffs),
                   j.at("empty_default").get<double>());
}

} // namespace

std::string
export_model(const Histogram& h)
{
  json j = { { "kind", "histogram" } };
  j.update(histogram_body(h));
  return j.dump(2) + "\n";
}

std::string
export_model(const InflatedHistogram& f)
{
  json j = { { "kind", "inflated_histogram" } };
  j.update(histogram_body(f.base()));
  json bumps = json::array();
  for (const auto& b : f.bumps())
    bumps.push_back({ { "center", b.center }, { "amplitude", b.amplitude } });
  j["bumps"] = std::move(bumps);
  j["radius"] = f.radius();
  return j.dump(2) + "\n";
}

std::variant<Histogram, InflatedHistogram>
import_model(std::string_view text)
{
  try {
    const json j = json::parse(text);
    const auto kind = j.at("kind").get<std::string>();
    Histogram h = histogram_from(j);
    if (kind == "histogram")
      return h;
    if (kind != "inflated_histogram")
      throw InputError("unknown model kind '" + kind + "'");
    std::vector<Bump> bumps;
    for (const auto& b : j.at("bumps"))
      bumps.push_back(
        { b.at("center").get<Point>(), b.at("amplitude").get<double>() });
    return InflatedHistogram(std::move(h), std::move(bumps),
                             j.at("radius").get<double>());
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model JSON: ") + e.what());
  }
}

} // namespace histnet
