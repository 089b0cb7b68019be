#include "histnet/risk.hpp"

#include "histnet/error.hpp"
#include "histnet/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace histnet {

void
sample_point(const DistributionSpec& dist, Rng& g, std::span<double> x)
{
  for (auto& v : x)
    v = dist.marginal_quantile_1d(uniform01(g));
}

double
sample_label(const DistributionSpec& dist, std::span<const double> x, Rng& g)
{
  if (dist.task == Task::regression) {
    const double f = dist.family_value(x);
    if (dist.noise_b == 0.0)
      return f;
    return std::clamp(f + uniform(g, -dist.noise_b, dist.noise_b), -1.0, 1.0);
  }
  return uniform01(g) < dist.eta_at(x) ? 1.0 : -1.0;
}

Dataset
sample(const DistributionSpec& dist, std::size_t n, std::uint64_t seed)
{
  dist.validate();
  if (n == 0)
    throw InputError("sample size must be positive");
  Rng g(derive_seed(seed, { 0x5a4d }));
  PointSet x(dist.dim);
  std::vector<double> y;
  y.reserve(n);
  Point p(dist.dim);
  for (std::size_t i = 0; i < n; ++i) {
    sample_point(dist, g, p);
    x.push_back(p);
    y.push_back(sample_label(dist, p, g));
  }
  return Dataset(std::move(x), std::move(y));
}

bool
loss_supported(const DistributionSpec& dist, LossKind loss)
{
  return dist.task == Task::classification || loss == LossKind::least_squares;
}

namespace {

void
require_supported(const DistributionSpec& dist, LossKind loss)
{
  dist.validate();
  if (!loss_supported(dist, loss))
    throw InputError(std::string(to_string(loss)) +
                     " needs binary labels but the distribution is a "
                     "regression task");
}

} // namespace

double
classification_bayes_risk(const DistributionSpec& dist)
{
  if (dist.task != Task::classification)
    throw InputError("classification Bayes risk of a regression task");
  switch (dist.eta) {
    case EtaFamily::threshold:
      return 0.0;
    case EtaFamily::half:
      return 0.5;
    case EtaFamily::fstar:
      break;
  }
  return integrate(
    dist, domain_box(dist.dim),
    [&](std::span<const double> x) {
      const double e = dist.eta_at(x);
      return std::min(e, 1.0 - e);
    },
    domain_resolution(dist.dim));
}

double
bayes_risk(const DistributionSpec& dist, LossKind loss)
{
  require_supported(dist, loss);
  if (dist.task == Task::regression)
    return dist.noise_b * dist.noise_b / 3.0;
  switch (loss) {
    case LossKind::least_squares:
      return 1.0 - bayes_function_sq_norm(dist);
    case LossKind::hinge:
      return 2.0 * classification_bayes_risk(dist);
    case LossKind::classification:
      return classification_bayes_risk(dist);
  }
  throw InputError("unknown loss");
}

double
worst_risk(const DistributionSpec& dist, LossKind loss)
{
  const double r = bayes_risk(dist, loss);
  switch (loss) {
    case LossKind::least_squares:
      return r + 4.0 * bayes_function_sq_norm(dist);
    case LossKind::hinge:
      return 2.0 - r;
    case LossKind::classification:
      return 1.0 - r;
  }
  throw InputError("unknown loss");
}

double
bayes_decision(const DistributionSpec& dist,
               LossKind loss,
               std::span<const double> x)
{
  const double f = dist.bayes_function(x);
  return loss == LossKind::least_squares ? f : sign_plus(f);
}

namespace {

struct ChunkSum
{
  double sum = 0.0;
  double sumsq = 0.0;
};

template<class Body>
RiskEstimate
chunked_mean(std::size_t n_points,
             std::uint64_t seed,
             unsigned threads,
             const PredictorFactory& factory,
             Body&& body)
{
  if (n_points == 0)
    throw InputError("Monte Carlo sample size must be positive");
  const std::size_t chunks = (n_points + kMcChunk - 1) / kMcChunk;
  std::vector<ChunkSum> sums(chunks);
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), chunks);
  std::vector<Predictor> preds(workers);
  for (auto& p : preds)
    p = factory();
  // Chunks are statically strided over workers; each worker owns one
  // predictor instance.
  parallel_for(workers, static_cast<unsigned>(workers), [&](std::size_t w) {
    for (std::size_t c = w; c < chunks; c += workers) {
      Rng g(derive_seed(seed, { c }));
      const std::size_t begin = c * kMcChunk;
      const std::size_t end = std::min(n_points, begin + kMcChunk);
      ChunkSum s;
      for (std::size_t i = begin; i < end; ++i) {
        const double v = body(preds[w], g);
        s.sum += v;
        s.sumsq += v * v;
      }
      sums[c] = s;
    }
  });
  double sum = 0.0, sumsq = 0.0;
  for (const auto& s : sums) {
    sum += s.sum;
    sumsq += s.sumsq;
  }
  const double n = static_cast<double>(n_points);
  RiskEstimate r;
  r.mean = sum / n;
  r.n_samples = n_points;
  r.seed = seed;
  if (n_points > 1) {
    const double var = std::max(0.0, (sumsq - sum * r.mean) / (n - 1.0));
    r.std_error = std::sqrt(var / n);
  }
  return r;
}

} // namespace

RiskEstimate
mc_risk(const PredictorFactory& f,
        const DistributionSpec& dist,
        LossKind loss,
        std::size_t n_points,
        std::uint64_t seed,
        unsigned threads)
{
  require_supported(dist, loss);
  return chunked_mean(n_points, seed, threads, f,
                      [&](const Predictor& p, Rng& g) {
                        thread_local std::vector<double> buf;
                        buf.resize(dist.dim);
                        std::span<double> xs(buf);
                        sample_point(dist, g, xs);
                        const double y = sample_label(dist, xs, g);
                        return loss_eval(loss, y, p(xs));
                      });
}

RiskEstimate
mc_risk(const Predictor& f,
        const DistributionSpec& dist,
        LossKind loss,
        std::size_t n_points,
        std::uint64_t seed,
        unsigned threads)
{
  return mc_risk([&f] { return f; }, dist, loss, n_points, seed, threads);
}

RiskEstimate
mc_l2sq(const PredictorFactory& f,
        const Predictor& g,
        const DistributionSpec& dist,
        std::size_t n_points,
        std::uint64_t seed,
        unsigned threads)
{
  dist.validate();
  return chunked_mean(n_points, seed, threads, f,
                      [&](const Predictor& p, Rng& rng) {
                        thread_local std::vector<double> x;
                        x.resize(dist.dim);
                        sample_point(dist, rng, x);
                        const double diff = p(x) - g(x);
                        return diff * diff;
                      });
}

namespace {

std::size_t
auto_cell_resolution(std::size_t dim, double width)
{
  const double r =
    std::ceil(static_cast<double>(domain_resolution(dim)) * width / 2.0);
  return static_cast<std::size_t>(std::clamp(r, 16.0, 4096.0));
}

} // namespace

double
l2sq_histogram(const Histogram& h,
               const Predictor& g,
               const DistributionSpec& dist,
               std::size_t cell_resolution)
{
  dist.validate();
  const auto& part = h.partition();
  if (part.dim() != dist.dim)
    throw InputError("distribution dimension does not match histogram");
  const std::size_t res = cell_resolution == 0
                            ? auto_cell_resolution(dist.dim, part.width())
                            : cell_resolution;
  double total = 0.0;
  for (const auto& k : part.cells_meeting_domain()) {
    const auto bounds = part.cell_bounds(k);
    if (!bounds.restricted || bounds.restricted->degenerate())
      continue;
    const double c = h.coefficient(k);
    total += integrate(
      dist, *bounds.restricted,
      [&](std::span<const double> x) {
        const double d = c - g(x);
        return d * d;
      },
      res);
  }
  return total;
}

double
l2sq_inflated(const InflatedHistogram& f,
              const Predictor& g,
              const DistributionSpec& dist,
              std::size_t cell_resolution)
{
  double total = l2sq_histogram(f.base(), g, dist, cell_resolution);
  const auto& part = f.base().partition();
  const double t = f.radius();
  for (const auto& b : f.bumps()) {
    if (b.amplitude == 0.0)
      continue;
    Box box{ b.center, b.center };
    for (std::size_t i = 0; i < box.dim(); ++i) {
      box.lo[i] = std::max(-1.0, box.lo[i] - t);
      box.hi[i] = std::min(1.0, box.hi[i] + t);
    }
    const double c = f.base().coefficient(part.cell_index(b.center));
    total += integrate(
      dist, box,
      [&](std::span<const double> x) {
        const double gx = g(x);
        const double with = c + b.amplitude - gx;
        const double without = c - gx;
        return with * with - without * without;
      },
      8);
  }
  return std::max(0.0, total);
}

double
l2_distance(const Histogram& h,
            const Predictor& g,
            const DistributionSpec& dist,
            std::size_t cell_resolution)
{
  return std::sqrt(l2sq_histogram(h, g, dist, cell_resolution));
}

} // namespace histnet
