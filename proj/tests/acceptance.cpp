// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here.

#include "histnet/bench.hpp"
#include "histnet/histogram.hpp"
#include "histnet/interpolate.hpp"
#include "histnet/relunet.hpp"
#include "histnet/risk.hpp"

#include "gen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <thread>

using namespace histnet;

namespace {

constexpr double kLsInterpTol = 1e-12;
constexpr double kAgreementTol = 1e-9;
constexpr double kAlgebraTol = 1e-12;
constexpr double kGridStep = 1e-3;
constexpr double kApproxSlack = 1.0;
constexpr double kSlopeLo = -0.9;
constexpr double kSlopeHi = -0.45;
constexpr double kBadL2Final = 0.05;
constexpr double kWorstRel = 0.05;
constexpr double kStderrs = 3.0;
constexpr double kBudget1 = 30.0;   // seconds
constexpr double kBudget8 = 5.0;
constexpr double kBudget9 = 600.0;
constexpr double kNoise = 0.2;      // label noise of the rate distribution

int failures = 0;

void
report(int id, const char* name, bool ok, const std::string& detail)
{
  std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name,
              detail.c_str());
  std::fflush(stdout);
  if (!ok)
    ++failures;
}

class Timer
{
public:
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
      .count();
  }

private:
  std::chrono::steady_clock::time_point start_ =
    std::chrono::steady_clock::now();
};

std::string
fmt(const char* f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Predictor
wrap(const InflatedHistogram& f)
{
  return [&f](std::span<const double> x) { return f.predict(x); };
}

unsigned
threads()
{
  return std::max(1u, std::thread::hardware_concurrency());
}

void
criterion1()
{
  Timer timer;
  Rng g(derive_seed(1, { 1 }));
  std::size_t checks = 0, bad = 0, contradictions = 0;
  for (int it = 0; it < 1000; ++it) {
    const std::size_t d = 1 + it % 3;
    const std::size_t n = testgen::pick(g, 1, 200);
    const double s = uniform(g, 0.1, 1.0);
    for (auto loss : { LossKind::least_squares, LossKind::hinge,
                       LossKind::classification }) {
      const Dataset data = testgen::dataset(g, d, n, loss, 0.1);
      if (optimal_empirical_risk(data, loss) > 0.0 &&
          loss == LossKind::classification)
        ++contradictions;
      for (auto kind : { ErmKind::good, ErmKind::bad }) {
        const auto f = interpolating_erm(data, s, loss, kind).predictor;
        ++checks;
        if (!check_interpolation(wrap(f), data, loss).interpolates)
          ++bad;
        if (loss == LossKind::classification)
          continue;
        const ReluNet net = compile_interpolant(f);
        NetEvaluator ev(net);
        ++checks;
        const auto r = check_interpolation(
          [&](std::span<const double> x) { return ev(x); }, data, loss);
        if (!r.interpolates)
          ++bad;
      }
    }
  }
  const double t = timer.seconds();
  report(1, "interpolation exactness", bad == 0 && t < kBudget1,
         fmt("%zu checks (ERMs, 3 losses; DNNs, ls+hinge), %zu failures, "
             "%zu classification sets with R*_D>0, ls tol %.0e, %.1fs "
             "(budget %.0fs)",
             checks, bad, contradictions, kLsInterpTol, t, kBudget1));
}

void
criterion2()
{
  Rng g(derive_seed(2, { 2 }));
  std::size_t outside = 0, overlap = 0;
  for (int it = 0; it < 10000; ++it) {
    const std::size_t d = 1 + it % 3;
    const std::size_t m = testgen::pick(g, 1, 200);
    const double s = uniform(g, 0.02, 1.0);
    const PointSet pts = testgen::distinct_points(g, d, m);
    const auto a = align_offset(pts, s);
    const CubicPartition part(d, s, a.offset);
    const double tmax = s / (3.0 * static_cast<double>(m) + 3.0);
    if (verify_proper_alignment(pts, tmax, part).first_outside)
      ++outside;
    const double t = std::min(tmax, min_gap_separation(pts));
    if (!verify_proper_alignment(pts, t, part).ok())
      ++overlap;
  }
  report(2, "offset alignment guarantee", outside == 0 && overlap == 0,
         fmt("10000 sets: cube-in-cell failures at t=s/(3m+3): %zu; full "
             "alignment failures at t=min(gap, s/(3m+3)): %zu",
             outside, overlap));
}

void
criterion3()
{
  Rng g(derive_seed(3, { 3 }));
  std::size_t points = 0, viol = 0, inner = 0, outer = 0;
  for (int it = 0; it < 100; ++it) {
    const std::size_t d = 1 + it % 3;
    Box b{ Point(d), Point(d) };
    double side = 2.0;
    for (std::size_t i = 0; i < d; ++i) {
      double lo = uniform(g, -1.0, 0.9);
      double hi = uniform(g, lo + 0.02, 1.0);
      b.lo[i] = lo;
      b.hi[i] = hi;
      side = std::min(side, hi - lo);
    }
    const double eps = uniform(g, 0.02, 0.98) * side / 2.0;
    const ReluNet net = bump_net({ b, eps });
    NetEvaluator ev(net);
    const std::size_t per_axis = d == 1 ? 100000 : d == 2 ? 317 : 47;
    std::vector<std::size_t> idx(d, 0);
    Point x(d);
    for (;;) {
      bool in_inner = true, in_open = true;
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = -1.0 + 2.0 * (static_cast<double>(idx[i]) + 0.5) /
                        static_cast<double>(per_axis);
        in_inner = in_inner && x[i] >= b.lo[i] + eps && x[i] <= b.hi[i] - eps;
        in_open = in_open && x[i] > b.lo[i] && x[i] < b.hi[i];
      }
      const double v = ev(x);
      ++points;
      if (v < 0.0 || v > 1.0)
        ++viol;
      if (in_inner) {
        ++inner;
        if (v != 1.0)
          ++viol;
      }
      if (!in_open) {
        ++outer;
        if (v != 0.0)
          ++viol;
      }
      std::size_t a = d;
      bool done = false;
      while (a > 0) {
        --a;
        if (++idx[a] < per_axis)
          break;
        idx[a] = 0;
        if (a == 0)
          done = true;
      }
      if (done)
        break;
    }
  }
  report(3, "bump set identities", viol == 0 && inner > 0 && outer > 0,
         fmt("100 boxes, %zu grid points (%zu in inner box, %zu outside open "
             "box), %zu violations",
             points, inner, outer, viol));
}

// True when x lies in the agreement set: at least eps inside the cell box
// (or in an uncompiled cell) and off every closed bump annulus.
bool
in_agreement_set(const InflatedHistogram& f,
                 const std::vector<bool>& compiled_bump,
                 std::span<const double> x)
{
  const auto& part = f.base().partition();
  const double t = f.radius();
  const double eps = t / 3.0;
  const auto k = part.cell_index(x);
  const auto b = part.cell_bounds(k);
  const double c = f.base().coefficient(k);
  if (c != 0.0 && b.restricted && !b.restricted->degenerate()) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < b.cell.lo[i] + eps || x[i] > b.cell.hi[i] - eps)
        return false;
  }
  for (std::size_t j = 0; j < f.bumps().size(); ++j) {
    if (!compiled_bump[j])
      continue;
    const auto& ctr = f.bumps()[j].center;
    bool open = true, inner = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double dist = std::abs(x[i] - ctr[i]);
      open = open && dist <= t;
      inner = inner && dist <= t - eps;
    }
    if (open && !inner)
      return false;
  }
  return true;
}

void
criterion4()
{
  Rng g(derive_seed(4, { 4 }));
  std::size_t sample_checks = 0, test_checks = 0, bad = 0;
  double worst = 0.0;
  for (int it = 0; it < 100; ++it) {
    const std::size_t d = 1 + it % 3;
    const std::size_t n = testgen::pick(g, 2, 200);
    const LossKind loss = it % 2 ? LossKind::hinge : LossKind::least_squares;
    const Dataset data = testgen::dataset(g, d, n, loss, 0.1);
    const auto f = interpolating_erm(data, uniform(g, 0.15, 1.0), loss,
                                     it % 4 < 2 ? ErmKind::good : ErmKind::bad)
                     .predictor;
    const ReluNet net = compile_interpolant(f);
    NetEvaluator ev(net);
    std::vector<bool> compiled(f.bumps().size());
    for (std::size_t j = 0; j < compiled.size(); ++j)
      compiled[j] = f.bumps()[j].amplitude != 0.0;
    auto check = [&](std::span<const double> x) {
      const double diff = std::abs(ev(x) - f.predict(x));
      worst = std::max(worst, diff);
      if (diff > kAgreementTol)
        ++bad;
    };
    for (std::size_t i = 0; i < data.size(); ++i, ++sample_checks)
      check(data.x[i]);
    for (int j = 0; j < 2000; ++j) {
      Point x(d);
      for (auto& v : x)
        v = uniform(g, -1.0, 1.0);
      if (j % 2 == 0 && !f.bumps().empty()) {
        // Half of the probes near a bump center to cover the plateaus.
        const auto& c = f.bumps()[testgen::pick(g, 0, f.bumps().size() - 1)].center;
        for (std::size_t i = 0; i < d; ++i)
          x[i] = std::clamp(c[i] + uniform(g, -1.5, 1.5) * f.radius(), -1.0, 1.0);
      }
      if (!in_agreement_set(f, compiled, x))
        continue;
      ++test_checks;
      check(x);
    }
  }
  report(4, "DNN/ERM agreement", bad == 0,
         fmt("100 interpolants, %zu sample points, %zu agreement-set test "
             "points, %zu mismatches (tol %.0e), max |diff| %.3g",
             sample_checks, test_checks, bad, kAgreementTol, worst));
}

ReluNet
random_net(Rng& g, std::size_t d)
{
  std::vector<ReluNet> parts;
  const std::size_t k = testgen::pick(g, 1, 4);
  for (std::size_t j = 0; j < k; ++j) {
    Box b{ Point(d), Point(d) };
    double side = 2.0;
    for (std::size_t i = 0; i < d; ++i) {
      b.lo[i] = uniform(g, -1.0, 0.8);
      b.hi[i] = uniform(g, b.lo[i] + 0.05, 1.0);
      side = std::min(side, b.hi[i] - b.lo[i]);
    }
    parts.push_back(scale_shift(bump_net({ b, uniform(g, 0.1, 0.9) * side / 2 }),
                                uniform(g, -1.0, 1.0), 0.0));
  }
  return scale_shift(sum_all(parts), 1.0, uniform(g, -0.5, 0.5));
}

void
criterion5()
{
  Rng g(derive_seed(5, { 5 }));
  std::size_t points = 0, bad_eval = 0, bad_width = 0, bad_block = 0;
  double worst = 0.0;
  for (int it = 0; it < 30; ++it) {
    const std::size_t d = 1 + it % 3;
    const ReluNet f = random_net(g, d);
    const ReluNet h = random_net(g, d);
    const double alpha = uniform(g, -2.0, 2.0), c = uniform(g, -1.0, 1.0);
    const ReluNet s = sum(f, h);
    const ReluNet a = scale_shift(f, alpha, c);
    const auto wf = f.width_vector(), wh = h.width_vector(),
               ws = s.width_vector();
    if (a.width_vector() != wf || ws.size() != wf.size() || ws[0] != d ||
        ws.back() != 1)
      ++bad_width;
    for (std::size_t l = 1; l + 1 < ws.size(); ++l)
      if (ws[l] != wf[l] + wh[l])
        ++bad_width;
    // Layer-2 blocks: rows of f read only columns of f, likewise for h.
    const std::size_t rf = f.hidden()[1].rows(), cf = f.hidden()[1].cols();
    s.hidden()[1].for_each_entry([&](std::size_t r, std::size_t col, double) {
      if ((r < rf) != (col < cf))
        ++bad_block;
    });
    NetEvaluator es(s), ea(a), ef(f), eh(h);
    for (int j = 0; j < 10000 / 30 + 1; ++j, ++points) {
      const Point x = testgen::point(g, d);
      const double fx = ef(x);
      const double e1 = std::abs(es(x) - (fx + eh(x)));
      const double e2 = std::abs(ea(x) - (alpha * fx + c));
      worst = std::max({ worst, e1, e2 });
      if (e1 > kAlgebraTol || e2 > kAlgebraTol)
        ++bad_eval;
    }
  }
  report(5, "network algebra",
         bad_eval == 0 && bad_width == 0 && bad_block == 0,
         fmt("30 net pairs, %zu points, identity violations %zu (max err "
             "%.3g, tol %.0e), width mismatches %zu, nonzero off-diagonal "
             "entries %zu",
             points, bad_eval, worst, kAlgebraTol, bad_width, bad_block));
}

void
criterion6()
{
  Rng g(derive_seed(6, { 6 }));
  std::size_t bad = 0, hinge_bad = 0;
  std::size_t max_ratio_w1 = 0, max_ratio_w2 = 0;
  for (int it = 0; it < 100; ++it) {
    const std::size_t d = 1 + it % 3;
    const std::size_t nmin = std::size_t{ 1 } << d;
    const std::size_t n = testgen::pick(g, std::max<std::size_t>(nmin, 2), 200);
    const double smin =
      std::min(1.0, 2.0 * std::pow(static_cast<double>(n), -1.0 / d));
    const double s = uniform(g, smin, 1.0);
    const Dataset data = testgen::dataset(g, d, n, LossKind::least_squares);
    const auto f = interpolating_erm(data, s, LossKind::least_squares,
                                     it % 2 ? ErmKind::bad : ErmKind::good)
                     .predictor;
    const auto a = compile_interpolant(f).architecture();
    const bool ok = a.widths.size() == 4 && a.widths[1] <= 4 * d * n &&
                    a.widths[2] <= 2 * n && a.widths[1] == 2 * d * a.widths[2] &&
                    a.nonzeros[0] == 2 * d * a.widths[2];
    if (!ok)
      ++bad;
    max_ratio_w1 = std::max(max_ratio_w1, 1000 * a.widths[1] / (4 * d * n));
    max_ratio_w2 = std::max(max_ratio_w2, 1000 * a.widths[2] / (2 * n));

    // Hinge: units = compiled cells (default +1 included) + corrections.
    const Dataset hd = testgen::dataset(g, d, n, LossKind::hinge);
    const auto fh = good_erm(hd, s, LossKind::hinge);
    std::size_t units = 0;
    const auto& part = fh.base().partition();
    for (const auto& k : part.cells_meeting_domain()) {
      const auto b = part.cell_bounds(k);
      if (b.restricted && !b.restricted->degenerate() &&
          fh.base().coefficient(k) != 0.0)
        ++units;
    }
    for (const auto& b : fh.bumps())
      units += b.amplitude != 0.0;
    const auto ah = compile_interpolant(fh).architecture();
    if (ah.widths[2] != units || ah.nonzeros[0] != 2 * d * units)
      ++hinge_bad;
  }
  report(6, "architecture accounting", bad == 0 && hinge_bad == 0,
         fmt("100 least squares builds with s >= 2n^(-1/d): %zu exceed "
             "(4dn, 2n) or miss 2d nonzeros per unit (peak use %.3f, %.3f "
             "of the bounds); hinge unit-count mismatches %zu/100",
             bad, max_ratio_w1 / 1000.0, max_ratio_w2 / 1000.0, hinge_bad));
}

void
criterion7()
{
  Rng g(derive_seed(7, { 7 }));
  std::size_t cells = 0, viol = 0;
  const LossKind losses[] = { LossKind::least_squares, LossKind::hinge,
                              LossKind::classification };
  while (cells < 600) {
    const LossKind loss = losses[cells % 3];
    const Dataset data = testgen::dataset(g, 1, testgen::pick(g, 5, 40), loss, 0.2);
    const CubicPartition part(1, uniform(g, 0.2, 1.0));
    const auto h = fit_histogram(data, part, loss);
    // One random occupied cell per dataset.
    const auto k = part.cell_index(data.x[testgen::pick(g, 0, data.size() - 1)]);
    std::vector<double> y;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (part.cell_index(data.x[i]) == k)
        y.push_back(data.y[i]);
    auto risk = [&](double t) {
      double r = 0.0;
      for (double v : y)
        r += loss_eval(loss, v, t);
      return r;
    };
    const double fitted = risk(h.coefficient(k));
    const int steps = static_cast<int>(std::lround(2.0 / kGridStep));
    for (int j = 0; j <= steps; ++j) {
      const double c = -1.0 + j * kGridStep;
      if (loss == LossKind::classification && c != -1.0 && c != 1.0)
        continue;
      if (fitted > risk(c) + 1e-12)
        ++viol;
    }
    ++cells;
  }
  report(7, "cell ERM oracle", viol == 0,
         fmt("%zu cells (200 per loss; grid step %.0e over [-1,1], {-1,1} "
             "for classification), %zu violations",
             cells, kGridStep, viol));
}

void
criterion8()
{
  Timer timer;
  DistributionSpec d;
  d.holder_c = 0.5;
  const Predictor fs = [&](std::span<const double> x) {
    return d.bayes_function(x);
  };
  bool ok = true;
  std::string detail;
  for (double s : { 0.5, 0.25, 0.125 }) {
    const auto h = population_histogram(d, CubicPartition(1, s));
    const double dist = l2_distance(h, fs, d);
    const double bound = kApproxSlack * 2.0 * d.holder_c * s;
    ok = ok && dist <= bound;
    detail += fmt("s=%.3f: %.5f <= %.3f; ", s, dist, bound);
  }
  const double t = timer.seconds();
  ok = ok && t < kBudget8;
  report(8, "approximation error", ok,
         detail + fmt("%.2fs (budget %.0fs)", t, kBudget8));
}

std::vector<std::size_t>
rate_grid()
{
  std::vector<std::size_t> n;
  for (int k = 8; k <= 15; ++k)
    n.push_back(std::size_t{ 1 } << k);
  return n;
}

ExperimentPlan
rate_plan()
{
  ExperimentPlan p;
  p.dist.dim = 1;
  p.dist.fstar = RegressionFamily::linear;
  p.dist.holder_c = 0.5;
  p.dist.noise_b = kNoise;
  p.loss = LossKind::least_squares;
  p.n_grid = rate_grid();
  p.gamma = gamma_max(1.0, 1);
  p.repetitions = 50;
  p.mc_points = 100000;
  p.seed = 20240909;
  p.predictors = { PredictorKind::good_erm, PredictorKind::bad_erm };
  p.threads = threads();
  return p;
}

std::map<std::size_t, double>
mean_by_n(const std::vector<RateRow>& rows,
          PredictorKind k,
          double RateRow::*field)
{
  std::map<std::size_t, std::pair<double, int>> acc;
  for (const auto& r : rows)
    if (r.predictor == k) {
      acc[r.n].first += r.*field;
      ++acc[r.n].second;
    }
  std::map<std::size_t, double> out;
  for (const auto& [n, e] : acc)
    out[n] = e.first / e.second;
  return out;
}

void
criteria9and10()
{
  Timer timer;
  const ExperimentPlan plan = rate_plan();
  const auto rows = run_experiment(plan);
  const double t = timer.seconds();
  bool interp = true;
  for (const auto& r : rows)
    interp = interp && r.interpolates;

  const double slope = fit_loglog_slope(rows, PredictorKind::good_erm);
  report(9, "rate reproduction",
         slope >= kSlopeLo && slope <= kSlopeHi && t < kBudget9 && interp,
         fmt("good_erm slope %.4f in [%.2f, %.2f] (reference -2/3), n=2^8..2^15, "
             "50 reps, 1e5 MC points, noise b=%.2f, all rows interpolate: %s, "
             "%.1fs (budget %.0fs)",
             slope, kSlopeLo, kSlopeHi, kNoise, interp ? "yes" : "no", t,
             kBudget9));

  const auto l2 =
    mean_by_n(rows, PredictorKind::bad_erm, &RateRow::l2sq_neg_fstar);
  bool decreasing = true;
  double prev = INFINITY;
  std::string trail;
  for (const auto& [n, v] : l2) {
    decreasing = decreasing && v < prev;
    prev = v;
    trail += fmt("%.4g ", v);
  }
  const double n_max = static_cast<double>(plan.n_grid.back());
  const auto risk = mean_by_n(rows, PredictorKind::bad_erm, &RateRow::risk);
  const double worst = worst_risk(plan.dist, plan.loss);
  const double r_last = risk.at(plan.n_grid.back());
  const double rel = std::abs(r_last - worst) / worst;

  // Classification variant: eta = (1 + x/2)/2, so 1 - R* = 5/8.
  ExperimentPlan cls = plan;
  cls.dist.task = Task::classification;
  cls.dist.eta = EtaFamily::fstar;
  cls.dist.noise_b = 0.0;
  cls.loss = LossKind::classification;
  cls.predictors = { PredictorKind::bad_erm };
  cls.seed = plan.seed + 1;
  const auto crows = run_experiment(cls);
  const auto crisk = mean_by_n(crows, PredictorKind::bad_erm, &RateRow::risk);
  const double cworst = worst_risk(cls.dist, cls.loss);
  const double c_last = crisk.at(cls.n_grid.back());
  const double crel = std::abs(c_last - cworst) / cworst;

  report(10, "bad predictor divergence",
         decreasing && prev <= kBadL2Final && rel <= kWorstRel &&
           crel <= kWorstRel,
         fmt("||f- + f*||^2 by n: %s(decreasing: %s, final <= %.2f); "
             "ls risk at n=%.0f %.5f vs R_dagger %.5f (rel %.4f); "
             "classification risk %.5f vs 1-R* %.5f (rel %.4f); tol %.2f",
             trail.c_str(), decreasing ? "yes" : "no", kBadL2Final, n_max,
             r_last, worst, rel, c_last, cworst, crel, kWorstRel));
}

Histogram
random_predictor(Rng& g, const DistributionSpec& d, int kind)
{
  const CubicPartition part(d.dim, uniform(g, 0.1, 1.0),
                            Point(d.dim, uniform(g, 0.0, 0.1)));
  CellMap<double> c;
  for (const auto& k : part.cells_meeting_domain()) {
    const auto b = part.cell_bounds(k);
    if (!b.restricted)
      continue;
    Point mid(d.dim);
    for (std::size_t i = 0; i < d.dim; ++i)
      mid[i] = 0.5 * (b.restricted->lo[i] + b.restricted->hi[i]);
    const double fs = d.bayes_function(mid);
    double v = 0.0;
    switch (kind) {
      case 0: v = uniform(g, -1.0, 1.0); break;                 // arbitrary
      case 1: v = std::clamp(fs + uniform(g, -0.2, 0.2), -1.0, 1.0); break;
      case 2: v = std::clamp(-fs + uniform(g, -0.2, 0.2), -1.0, 1.0); break;
      default: v = uniform01(g) < 0.5 ? 0.0 : sign_plus(fs); break;
    }
    c.emplace(k, v);
  }
  return Histogram(part, LossKind::least_squares, std::move(c), 0.0);
}

void
criterion11()
{
  Rng g(derive_seed(11, { 11 }));
  std::vector<DistributionSpec> dists;
  for (auto eta : { EtaFamily::threshold, EtaFamily::half, EtaFamily::fstar }) {
    for (std::size_t dim : { 1u, 2u }) {
      DistributionSpec d;
      d.dim = dim;
      d.task = Task::classification;
      d.eta = eta;
      d.holder_c = 0.8;
      d.fstar = dim == 1 ? RegressionFamily::linear : RegressionFamily::cosine;
      if (dim == 2)
        d.holder_c = 2.5;
      dists.push_back(d);
    }
  }
  std::size_t flip_bad = 0, calib_bad = 0;
  double flip_margin = INFINITY, calib_margin = INFINITY;
  for (int it = 0; it < 100; ++it) {
    const DistributionSpec& d = dists[it % dists.size()];
    const Histogram h = random_predictor(g, d, it % 4);
    const Predictor f = [&](std::span<const double> x) {
      return h.predict_unchecked(x);
    };
    const Predictor neg_fs = [&](std::span<const double> x) {
      return -d.bayes_function(x);
    };
    const std::uint64_t seed = derive_seed(11, { 100, static_cast<std::uint64_t>(it) });
    const auto rc = mc_risk(f, d, LossKind::classification, 100000, seed);
    const auto rl = mc_risk(f, d, LossKind::least_squares, 100000, seed);
    const double rstar_c = bayes_risk(d, LossKind::classification);
    const double rstar_l = bayes_risk(d, LossKind::least_squares);

    const double lhs = std::abs(rc.mean - (1.0 - rstar_c));
    const double rhs = l2_distance(h, neg_fs, d) + kStderrs * rc.std_error;
    flip_margin = std::min(flip_margin, rhs - lhs);
    if (lhs > rhs)
      ++flip_bad;

    const double excess_c = rc.mean - rstar_c - kStderrs * rc.std_error;
    const double excess_l =
      std::max(0.0, rl.mean - rstar_l + kStderrs * rl.std_error);
    calib_margin = std::min(calib_margin, std::sqrt(excess_l) - excess_c);
    if (excess_c > std::sqrt(excess_l))
      ++calib_bad;
  }
  report(11, "label flipping and calibration", flip_bad == 0 && calib_bad == 0,
         fmt("100 predictors over %zu classification dists: label-flip "
             "violations %zu (min slack %.4g), calibration violations %zu "
             "(min slack %.4g), %.0f stderr allowance",
             dists.size(), flip_bad, flip_margin, calib_bad, calib_margin,
             kStderrs));
}

void
criterion12()
{
  ExperimentPlan p;
  p.dist.dim = 2;
  p.dist.fstar = RegressionFamily::cosine;
  p.dist.holder_c = 1.0;
  p.dist.noise_b = 0.3;
  p.loss = LossKind::least_squares;
  p.n_grid = { 64, 128, 256 };
  p.gamma = 0.25;
  p.repetitions = 4;
  p.mc_points = 20000;
  p.seed = 12;
  p.predictors = { PredictorKind::good_erm, PredictorKind::bad_erm,
                   PredictorKind::good_dnn, PredictorKind::bad_dnn };
  auto csv = [&](unsigned th) {
    p.threads = th;
    std::ostringstream o;
    write_rate_csv(o, run_experiment(p));
    return o.str();
  };
  const std::string a = csv(1), b = csv(8), c = csv(1);
  report(12, "determinism", a == b && a == c && !a.empty(),
         fmt("%zu-byte CSV, 1 vs 8 threads identical: %s, repeat identical: %s",
             a.size(), a == b ? "yes" : "no", a == c ? "yes" : "no"));
}

} // namespace

int
main()
{
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criteria9and10();
  criterion11();
  criterion12();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
