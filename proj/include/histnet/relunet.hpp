#pragma once

#include "histnet/geometry.hpp"
#include "histnet/histogram.hpp"
#include "histnet/interpolate.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace histnet {

/// Affine map x -> W x + b with W stored row-compressed. Exact zeros are
/// never stored, so nonzeros() counts the structural weights.
class SparseLayer
{
public:
  SparseLayer() = default;
  // Row-major dense weights; zero entries are dropped.
  SparseLayer(std::size_t rows,
              std::size_t cols,
              std::span<const double> dense,
              std::vector<double> bias);

  struct Entry
  {
    std::size_t row;
    std::size_t col;
    double value;
  };
  // Entries must be sorted by (row, col) without duplicates.
  static SparseLayer from_entries(std::size_t rows,
                                  std::size_t cols,
                                  std::vector<Entry> entries,
                                  std::vector<double> bias);
  static SparseLayer identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }
  const std::vector<double>& bias() const { return bias_; }

  std::vector<double> dense() const;
  double at(std::size_t r, std::size_t c) const;

  // out = relu(W in + b)
  void apply_relu(std::span<const double> in, std::span<double> out) const;

  template<class F>
  void for_each_entry(F&& fn) const
  {
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        fn(r, cols_idx_[p], values_[p]);
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{ 0 };
  std::vector<std::size_t> cols_idx_;
  std::vector<double> values_;
  std::vector<double> bias_;
};

struct Architecture
{
  std::vector<std::size_t> widths;    // (d, m_1, ..., m_{L-1}, 1)
  std::vector<std::size_t> nonzeros;  // per hidden layer, then the head
};

/// ReLU network: hidden affine layers each followed by max(0, .), then an
/// affine scalar head without activation.
class ReluNet
{
public:
  ReluNet(std::size_t input_dim,
          std::vector<SparseLayer> hidden,
          std::vector<double> head_weights,
          double head_bias);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t depth() const { return hidden_.size(); }
  const std::vector<SparseLayer>& hidden() const { return hidden_; }
  const std::vector<double>& head_weights() const { return head_w_; }
  double head_bias() const { return head_b_; }

  std::vector<std::size_t> width_vector() const;
  Architecture architecture() const;
  std::size_t max_width() const;

  // Throws InputError on dimension mismatch.
  double eval(std::span<const double> x) const;

private:
  friend class NetEvaluator;
  std::size_t input_dim_;
  std::vector<SparseLayer> hidden_;
  std::vector<double> head_w_;
  double head_b_;
};

//! Reusable forward-pass buffers; one per thread.
class NetEvaluator
{
public:
  explicit NetEvaluator(const ReluNet& net);
  double operator()(std::span<const double> x);

private:
  const ReluNet* net_;
  std::vector<double> a_, b_;
};

ReluNet scale_shift(const ReluNet& net, double alpha, double c);
ReluNet relu_wrap(const ReluNet& net);

// Parallel composition realizing f + g. Nets of unequal depth are an error
// unless `pad` is set, in which case the shallower net is extended by
// pass-through layers.
ReluNet sum(const ReluNet& f, const ReluNet& g, bool pad = false);
ReluNet sum_all(std::span<const ReluNet> nets, bool pad = false);

// Smallest epsilon accepted by the bump constructions; below this the
// first-layer weights 1/eps lose the precision that exactness relies on.
inline constexpr double kMinBumpEps = 0x1.0p-44;

struct BumpSpec
{
  Box box;
  double eps = 0.0;
};

/// Network in A_{d,(2d,1),1} equal to 1 on [z1+eps, z2-eps], 0 outside
/// (z1, z2) and in [0,1] on the shell.
ReluNet bump_net(const BumpSpec& spec);

/// Sum of coefficient-scaled bump nets over the cells B_j, one per cell
/// whose coefficient is nonzero and whose restriction to X has positive
/// volume. Cells without samples count with the histogram's empty-cell
/// default.
ReluNet compile_histogram(const Histogram& h, double eps);

// compile_histogram of the base with eps = t/3, plus one amplitude-scaled
// bump over x_i + t[-1,1]^d with shell t/3 per nonzero correction.
ReluNet compile_interpolant(const InflatedHistogram& f);

std::string export_weights(const ReluNet& net);
ReluNet import_weights(std::string_view text);

} // namespace histnet
