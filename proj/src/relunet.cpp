#include "histnet/relunet.hpp"

#include "histnet/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace histnet {

using nlohmann::json;

SparseLayer::SparseLayer(std::size_t rows,
                         std::size_t cols,
                         std::span<const double> dense,
                         std::vector<double> bias)
  : rows_(rows)
  , cols_(cols)
  , bias_(std::move(bias))
{
  if (dense.size() != rows * cols)
    throw InputError("layer weight count does not match rows x cols");
  if (bias_.size() != rows)
    throw InputError("layer bias length does not match rows");
  row_ptr_.assign(1, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = dense[r * cols + c];
      if (v != 0.0) {
        cols_idx_.push_back(c);
        values_.push_back(v);
      }
    }
    row_ptr_.push_back(values_.size());
  }
}

SparseLayer
SparseLayer::from_entries(std::size_t rows,
                          std::size_t cols,
                          std::vector<Entry> entries,
                          std::vector<double> bias)
{
  if (bias.size() != rows)
    throw InputError("layer bias length does not match rows");
  SparseLayer l;
  l.rows_ = rows;
  l.cols_ = cols;
  l.bias_ = std::move(bias);
  l.row_ptr_.assign(rows + 1, 0);
  l.cols_idx_.reserve(entries.size());
  l.values_.reserve(entries.size());
  std::size_t prev_r = 0, prev_c = 0;
  bool first = true;
  for (const auto& e : entries) {
    if (e.row >= rows || e.col >= cols)
      throw InputError("layer entry out of range");
    if (!first && (e.row < prev_r || (e.row == prev_r && e.col <= prev_c)))
      throw InputError("layer entries must be sorted and unique");
    first = false;
    prev_r = e.row;
    prev_c = e.col;
    if (e.value == 0.0)
      continue;
    ++l.row_ptr_[e.row + 1];
    l.cols_idx_.push_back(e.col);
    l.values_.push_back(e.value);
  }
  for (std::size_t r = 0; r < rows; ++r)
    l.row_ptr_[r + 1] += l.row_ptr_[r];
  return l;
}

SparseLayer
SparseLayer::identity(std::size_t n)
{
  std::vector<Entry> e;
  e.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    e.push_back({ i, i, 1.0 });
  return from_entries(n, n, std::move(e), std::vector<double>(n, 0.0));
}

std::vector<double>
SparseLayer::dense() const
{
  std::vector<double> out(rows_ * cols_, 0.0);
  for_each_entry(
    [&](std::size_t r, std::size_t c, double v) { out[r * cols_ + c] = v; });
  return out;
}

double
SparseLayer::at(std::size_t r, std::size_t c) const
{
  for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
    if (cols_idx_[p] == c)
      return values_[p];
  return 0.0;
}

void
SparseLayer::apply_relu(std::span<const double> in, std::span<double> out) const
{
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = bias_[r];
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      acc += values_[p] * in[cols_idx_[p]];
    out[r] = acc > 0.0 ? acc : 0.0;
  }
}

ReluNet::ReluNet(std::size_t input_dim,
                 std::vector<SparseLayer> hidden,
                 std::vector<double> head_weights,
                 double head_bias)
  : input_dim_(input_dim)
  , hidden_(std::move(hidden))
  , head_w_(std::move(head_weights))
  , head_b_(head_bias)
{
  if (input_dim_ == 0)
    throw InputError("network input dimension must be positive");
  std::size_t prev = input_dim_;
  for (std::size_t l = 0; l < hidden_.size(); ++l) {
    if (hidden_[l].cols() != prev)
      throw InputError("layer " + std::to_string(l + 1) + " expects " +
                       std::to_string(hidden_[l].cols()) +
                       " inputs but receives " + std::to_string(prev));
    prev = hidden_[l].rows();
  }
  if (head_w_.size() != prev)
    throw InputError("head expects " + std::to_string(head_w_.size()) +
                     " inputs but receives " + std::to_string(prev));
}

std::vector<std::size_t>
ReluNet::width_vector() const
{
  std::vector<std::size_t> w{ input_dim_ };
  for (const auto& l : hidden_)
    w.push_back(l.rows());
  w.push_back(1);
  return w;
}

Architecture
ReluNet::architecture() const
{
  Architecture a;
  a.widths = width_vector();
  for (const auto& l : hidden_)
    a.nonzeros.push_back(l.nonzeros());
  a.nonzeros.push_back(static_cast<std::size_t>(
    std::count_if(head_w_.begin(), head_w_.end(),
                  [](double v) { return v != 0.0; })));
  return a;
}

std::size_t
ReluNet::max_width() const
{
  std::size_t m = input_dim_;
  for (const auto& l : hidden_)
    m = std::max(m, l.rows());
  return m;
}

double
ReluNet::eval(std::span<const double> x) const
{
  NetEvaluator ev(*this);
  return ev(x);
}

NetEvaluator::NetEvaluator(const ReluNet& net)
  : net_(&net)
  , a_(net.max_width())
  , b_(net.max_width())
{
}

double
NetEvaluator::operator()(std::span<const double> x)
{
  const ReluNet& n = *net_;
  if (x.size() != n.input_dim_)
    throw InputError("input has dimension " + std::to_string(x.size()) +
                     ", network expects " + std::to_string(n.input_dim_));
  std::copy(x.begin(), x.end(), a_.begin());
  std::size_t width = x.size();
  for (const auto& l : n.hidden_) {
    l.apply_relu(std::span<const double>(a_.data(), width),
                 std::span<double>(b_.data(), l.rows()));
    width = l.rows();
    std::swap(a_, b_);
  }
  double acc = n.head_b_;
  for (std::size_t i = 0; i < width; ++i)
    acc += n.head_w_[i] * a_[i];
  return acc;
}

ReluNet
scale_shift(const ReluNet& net, double alpha, double c)
{
  std::vector<double> w = net.head_weights();
  for (auto& v : w)
    v *= alpha;
  return ReluNet(net.input_dim(), net.hidden(), std::move(w),
                 alpha * net.head_bias() + c);
}

ReluNet
relu_wrap(const ReluNet& net)
{
  std::vector<SparseLayer> hidden = net.hidden();
  const auto& w = net.head_weights();
  hidden.emplace_back(1, w.size(), std::span<const double>(w),
                      std::vector<double>{ net.head_bias() });
  return ReluNet(net.input_dim(), std::move(hidden), { 1.0 }, 0.0);
}

namespace {

ReluNet
pad_to_depth(const ReluNet& net, std::size_t depth)
{
  if (net.depth() >= depth)
    return net;
  std::vector<SparseLayer> hidden = net.hidden();
  std::vector<double> head = net.head_weights();
  if (hidden.empty()) {
    // x = relu(x) - relu(-x)
    const std::size_t d = net.input_dim();
    std::vector<SparseLayer::Entry> e;
    for (std::size_t i = 0; i < d; ++i)
      e.push_back({ i, i, 1.0 });
    for (std::size_t i = 0; i < d; ++i)
      e.push_back({ d + i, i, -1.0 });
    hidden.push_back(SparseLayer::from_entries(2 * d, d, std::move(e),
                                               std::vector<double>(2 * d)));
    std::vector<double> h2(head);
    for (double v : head)
      h2.push_back(-v);
    head = std::move(h2);
  }
  while (hidden.size() < depth)
    hidden.push_back(SparseLayer::identity(hidden.back().rows()));
  return ReluNet(net.input_dim(), std::move(hidden), std::move(head),
                 net.head_bias());
}

} // namespace

ReluNet
sum_all(std::span<const ReluNet> nets, bool pad)
{
  if (nets.empty())
    throw InputError("sum of an empty list of networks");
  const std::size_t d = nets[0].input_dim();
  std::size_t depth = 0;
  for (const auto& n : nets) {
    if (n.input_dim() != d)
      throw InputError("summed networks have different input dimensions");
    depth = std::max(depth, n.depth());
  }
  std::vector<ReluNet> padded;
  bool uneven = false;
  for (const auto& n : nets)
    uneven = uneven || n.depth() != depth;
  if (uneven) {
    if (!pad)
      throw InputError("summed networks have different depths");
    padded.reserve(nets.size());
    for (const auto& n : nets)
      padded.push_back(pad_to_depth(n, depth));
    nets = padded;
  }

  double bias = 0.0;
  for (const auto& n : nets)
    bias += n.head_bias();
  if (depth == 0) {
    std::vector<double> w(d, 0.0);
    for (const auto& n : nets)
      for (std::size_t i = 0; i < d; ++i)
        w[i] += n.head_weights()[i];
    return ReluNet(d, {}, std::move(w), bias);
  }

  std::vector<SparseLayer> hidden;
  hidden.reserve(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    std::size_t rows = 0, cols = 0, nnz = 0;
    for (const auto& n : nets) {
      rows += n.hidden()[l].rows();
      nnz += n.hidden()[l].nonzeros();
      cols += n.hidden()[l].cols();
    }
    if (l == 0)
      cols = d;
    std::vector<SparseLayer::Entry> e;
    e.reserve(nnz);
    std::vector<double> b;
    b.reserve(rows);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& n : nets) {
      const auto& layer = n.hidden()[l];
      const std::size_t co = l == 0 ? 0 : c0;
      layer.for_each_entry([&](std::size_t r, std::size_t c, double v) {
        e.push_back({ r0 + r, co + c, v });
      });
      b.insert(b.end(), layer.bias().begin(), layer.bias().end());
      r0 += layer.rows();
      c0 += layer.cols();
    }
    hidden.push_back(
      SparseLayer::from_entries(rows, cols, std::move(e), std::move(b)));
  }
  std::vector<double> head;
  for (const auto& n : nets)
    head.insert(head.end(), n.head_weights().begin(), n.head_weights().end());
  return ReluNet(d, std::move(hidden), std::move(head), bias);
}

ReluNet
sum(const ReluNet& f, const ReluNet& g, bool pad)
{
  const ReluNet both[] = { f, g };
  return sum_all(both, pad);
}

ReluNet
bump_net(const BumpSpec& spec)
{
  const std::size_t d = spec.box.dim();
  if (d == 0 || spec.box.hi.size() != d)
    throw InputError("bump box has no dimensions");
  const double eps = spec.eps;
  if (!(eps >= kMinBumpEps) || !std::isfinite(eps))
    throw ConstructionError("bump shell width " + std::to_string(eps) +
                            " is not a positive value >= 2^-44");
  for (std::size_t i = 0; i < d; ++i) {
    const double side = spec.box.hi[i] - spec.box.lo[i];
    if (!(eps < side / 2.0))
      throw ConstructionError("bump shell width " + std::to_string(eps) +
                              " is not below half the box side " +
                              std::to_string(side));
  }
  std::vector<SparseLayer::Entry> e;
  std::vector<double> b(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    e.push_back({ i, i, -1.0 / eps });
    b[i] = (spec.box.lo[i] + eps) / eps;
  }
  for (std::size_t i = 0; i < d; ++i) {
    e.push_back({ d + i, i, 1.0 / eps });
    b[d + i] = -(spec.box.hi[i] - eps) / eps;
  }
  std::vector<SparseLayer> hidden;
  hidden.push_back(SparseLayer::from_entries(2 * d, d, std::move(e), std::move(b)));
  std::vector<double> ones(2 * d, -1.0);
  hidden.emplace_back(1, 2 * d, std::span<const double>(ones),
                      std::vector<double>{ 1.0 });
  return ReluNet(d, std::move(hidden), { 1.0 }, 0.0);
}

namespace {

ReluNet
empty_two_layer(std::size_t d)
{
  std::vector<SparseLayer> hidden;
  hidden.push_back(SparseLayer::from_entries(0, d, {}, {}));
  hidden.push_back(SparseLayer::from_entries(0, 0, {}, {}));
  return ReluNet(d, std::move(hidden), {}, 0.0);
}

void
add_cell_bumps(const Histogram& h, double eps, std::vector<ReluNet>& out)
{
  const auto& part = h.partition();
  if (!(eps < part.width() / 2.0))
    throw ConstructionError("shell width " + std::to_string(eps) +
                            " is not below half the cell width");
  auto add = [&](const CellKey& k, double c) {
    if (c == 0.0)
      return;
    auto bounds = part.cell_bounds(k);
    if (!bounds.restricted || bounds.restricted->degenerate())
      return;
    out.push_back(scale_shift(bump_net({ bounds.cell, eps }), c, 0.0));
  };
  if (h.empty_default() == 0.0) {
    for (const auto& [k, c] : h.sorted_coeffs())
      add(k, c);
    return;
  }
  for (const auto& k : part.cells_meeting_domain())
    add(k, h.coefficient(k));
}

} // namespace

ReluNet
compile_histogram(const Histogram& h, double eps)
{
  std::vector<ReluNet> parts;
  add_cell_bumps(h, eps, parts);
  if (parts.empty())
    return empty_two_layer(h.partition().dim());
  return sum_all(parts);
}

ReluNet
compile_interpolant(const InflatedHistogram& f)
{
  const double t = f.radius();
  const double eps = t / 3.0;
  std::vector<ReluNet> parts;
  add_cell_bumps(f.base(), eps, parts);
  for (const auto& b : f.bumps()) {
    if (b.amplitude == 0.0)
      continue;
    Box box{ b.center, b.center };
    for (std::size_t i = 0; i < box.dim(); ++i) {
      box.lo[i] -= t;
      box.hi[i] += t;
    }
    parts.push_back(scale_shift(bump_net({ std::move(box), eps }),
                                b.amplitude, 0.0));
  }
  if (parts.empty())
    return empty_two_layer(f.base().partition().dim());
  return sum_all(parts);
}

std::string
export_weights(const ReluNet& net)
{
  json hidden = json::array();
  for (const auto& l : net.hidden())
    hidden.push_back({ { "rows", l.rows() },
                       { "cols", l.cols() },
                       { "weights", l.dense() },
                       { "bias", l.bias() } });
  json j = { { "input_dim", net.input_dim() },
             { "hidden", std::move(hidden) },
             { "head",
               { { "weights", net.head_weights() },
                 { "bias", net.head_bias() } } } };
  return j.dump() + "\n";
}

ReluNet
import_weights(std::string_view text)
{
  try {
    const json j = json::parse(text);
    const auto d = j.at("input_dim").get<std::size_t>();
    std::vector<SparseLayer> hidden;
    for (const auto& l : j.at("hidden")) {
      const auto rows = l.at("rows").get<std::size_t>();
      const auto cols = l.at("cols").get<std::size_t>();
      const auto w = l.at("weights").get<std::vector<double>>();
      hidden.emplace_back(rows, cols, std::span<const double>(w),
                          l.at("bias").get<std::vector<double>>());
    }
    const auto& head = j.at("head");
    return ReluNet(d, std::move(hidden),
                   head.at("weights").get<std::vector<double>>(),
                   head.at("bias").get<double>());
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed weight document: ") + e.what());
  }
}

} // namespace histnet
