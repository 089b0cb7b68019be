#include "histnet/bench.hpp"

#include "histnet/error.hpp"
#include "histnet/interpolate.hpp"
#include "histnet/parallel.hpp"
#include "histnet/relunet.hpp"
#include "histnet/risk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

namespace histnet {

std::string_view
to_string(PredictorKind p)
{
  switch (p) {
    case PredictorKind::good_erm:
      return "good_erm";
    case PredictorKind::bad_erm:
      return "bad_erm";
    case PredictorKind::good_dnn:
      return "good_dnn";
    case PredictorKind::bad_dnn:
      return "bad_dnn";
  }
  return "?";
}

PredictorKind
parse_predictor(std::string_view name)
{
  for (auto p : { PredictorKind::good_erm, PredictorKind::bad_erm,
                  PredictorKind::good_dnn, PredictorKind::bad_dnn })
    if (name == to_string(p))
      return p;
  throw InputError("unknown predictor '" + std::string(name) + "'");
}

double
gamma_max(double alpha, std::size_t dim)
{
  return 2.0 * alpha / (2.0 * alpha + static_cast<double>(dim));
}

void
ExperimentPlan::validate() const
{
  dist.validate();
  if (!loss_supported(dist, loss))
    throw InputError(std::string(to_string(loss)) +
                     " needs a classification distribution");
  if (n_grid.empty())
    throw InputError("experiment needs at least one sample size");
  for (auto n : n_grid)
    if (n < 2)
      throw InputError("sample sizes must be at least 2");
  const double gmax = gamma_max(dist.alpha, dist.dim);
  if (!(gamma >= 0.0 && gamma <= gmax))
    throw InputError("gamma " + std::to_string(gamma) + " outside [0, " +
                     std::to_string(gmax) + "]");
  if (repetitions == 0)
    throw InputError("repetitions must be positive");
  if (mc_points == 0)
    throw InputError("Monte Carlo point count must be positive");
  if (predictors.empty())
    throw InputError("experiment needs at least one predictor");
  for (std::size_t i = 0; i < predictors.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (predictors[i] == predictors[j])
        throw InputError("predictor listed twice");
    const bool dnn = predictors[i] == PredictorKind::good_dnn ||
                     predictors[i] == PredictorKind::bad_dnn;
    if (dnn && loss == LossKind::classification)
      throw InputError("DNN predictors are compiled for least squares and "
                       "hinge only");
  }
}

double
width_schedule(std::size_t n, double gamma, std::size_t dim, bool log_schedule)
{
  if (n < 2)
    throw InputError("width schedule needs n >= 2");
  if (dim == 0)
    throw InputError("dimension must be positive");
  const double ln = std::log(static_cast<double>(n));
  const double s =
    log_schedule
      ? 1.0 / ln
      : std::pow(ln / static_cast<double>(n),
                 (1.0 - gamma) / static_cast<double>(dim));
  return std::min(1.0, s);
}

namespace {

struct TaskOutput
{
  std::vector<RateRow> rows;
};

std::vector<RateRow>
run_task(const ExperimentPlan& plan,
         std::size_t n,
         std::size_t rep,
         double bayes,
         double worst)
{
  using clock = std::chrono::steady_clock;
  const auto& dist = plan.dist;
  const double s = width_schedule(n, plan.gamma, dist.dim, plan.log_schedule);
  const Dataset data = sample(dist, n, derive_seed(plan.seed, { n, rep, 1 }));
  const std::uint64_t mc_seed = derive_seed(plan.seed, { n, rep, 2 });
  const std::uint64_t l2_seed = derive_seed(plan.seed, { n, rep, 3 });

  const Predictor fstar = [&dist](std::span<const double> x) {
    return dist.bayes_function(x);
  };
  const Predictor neg_fstar = [&dist](std::span<const double> x) {
    return -dist.bayes_function(x);
  };

  std::vector<RateRow> rows;
  for (auto kind : plan.predictors) {
    const auto start = clock::now();
    const bool good =
      kind == PredictorKind::good_erm || kind == PredictorKind::good_dnn;
    const bool dnn =
      kind == PredictorKind::good_dnn || kind == PredictorKind::bad_dnn;
    auto f = std::make_shared<InflatedHistogram>(
      interpolating_erm(data, s, plan.loss,
                        good ? ErmKind::good : ErmKind::bad)
        .predictor);

    RateRow row;
    row.n = n;
    row.rep = rep;
    row.s_n = s;
    row.predictor = kind;

    PredictorFactory factory;
    if (dnn) {
      auto net = std::make_shared<const ReluNet>(compile_interpolant(*f));
      factory = [net] {
        auto ev = std::make_shared<NetEvaluator>(*net);
        return Predictor(
          [net, ev](std::span<const double> x) { return (*ev)(x); });
      };
    } else {
      factory = [f] {
        return Predictor(
          [f](std::span<const double> x) { return f->predict_unchecked(x); });
      };
    }

    row.interpolates =
      check_interpolation(factory(), data, plan.loss).interpolates;
    const RiskEstimate r =
      mc_risk(factory, dist, plan.loss, plan.mc_points, mc_seed, 1);
    row.risk = r.mean;
    row.risk_stderr = r.std_error;
    row.excess_risk = r.mean - bayes;
    row.worst_gap = worst - r.mean;
    if (dnn) {
      row.l2sq_fstar =
        mc_l2sq(factory, fstar, dist, plan.mc_points, l2_seed, 1).mean;
      row.l2sq_neg_fstar =
        mc_l2sq(factory, neg_fstar, dist, plan.mc_points, l2_seed, 1).mean;
    } else {
      row.l2sq_fstar = l2sq_inflated(*f, fstar, dist);
      row.l2sq_neg_fstar = l2sq_inflated(*f, neg_fstar, dist);
    }
    row.wall_ms =
      std::chrono::duration<double, std::milli>(clock::now() - start).count();
    rows.push_back(row);
  }
  return rows;
}

} // namespace

std::vector<RateRow>
run_experiment(const ExperimentPlan& plan)
{
  plan.validate();
  const double bayes = bayes_risk(plan.dist, plan.loss);
  const double worst = worst_risk(plan.dist, plan.loss);
  const std::size_t reps = plan.repetitions;
  const std::size_t tasks = plan.n_grid.size() * reps;
  std::vector<TaskOutput> out(tasks);
  parallel_for(tasks, plan.threads, [&](std::size_t i) {
    out[i].rows =
      run_task(plan, plan.n_grid[i / reps], i % reps, bayes, worst);
  });
  std::vector<RateRow> rows;
  rows.reserve(tasks * plan.predictors.size());
  for (auto& t : out)
    rows.insert(rows.end(), t.rows.begin(), t.rows.end());
  return rows;
}

namespace {

std::string
fmt17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* const kColumns[] = { "n",           "rep",         "s_n",
                                 "predictor",   "risk",        "risk_stderr",
                                 "excess_risk", "worst_gap",   "l2sq_fstar",
                                 "l2sq_neg_fstar", "interpolates" };

} // namespace

void
write_rate_csv(std::ostream& out, const std::vector<RateRow>& rows, bool timing)
{
  for (std::size_t i = 0; i < std::size(kColumns); ++i)
    out << (i ? "," : "") << kColumns[i];
  if (timing)
    out << ",wall_ms";
  out << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.rep << ',' << fmt17(r.s_n) << ','
        << to_string(r.predictor) << ',' << fmt17(r.risk) << ','
        << fmt17(r.risk_stderr) << ',' << fmt17(r.excess_risk) << ','
        << fmt17(r.worst_gap) << ',' << fmt17(r.l2sq_fstar) << ','
        << fmt17(r.l2sq_neg_fstar) << ',' << (r.interpolates ? 1 : 0);
    if (timing)
      out << ',' << fmt17(r.wall_ms);
    out << '\n';
  }
}

std::vector<RateRow>
read_rate_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line))
    throw InputError("rate CSV is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      header.push_back(cell);
  }
  const std::size_t ncol = std::size(kColumns);
  if (header.size() < ncol ||
      !std::equal(kColumns, kColumns + ncol, header.begin()))
    throw InputError("rate CSV header does not match");
  const bool timing = header.size() == ncol + 1 && header.back() == "wall_ms";
  if (header.size() != ncol && !timing)
    throw InputError("rate CSV header does not match");

  std::vector<RateRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      f.push_back(cell);
    if (f.size() != header.size())
      throw InputError("rate CSV line " + std::to_string(lineno) +
                       " has the wrong number of fields");
    try {
      RateRow r;
      r.n = std::stoull(f[0]);
      r.rep = std::stoull(f[1]);
      r.s_n = std::stod(f[2]);
      r.predictor = parse_predictor(f[3]);
      r.risk = std::stod(f[4]);
      r.risk_stderr = std::stod(f[5]);
      r.excess_risk = std::stod(f[6]);
      r.worst_gap = std::stod(f[7]);
      r.l2sq_fstar = std::stod(f[8]);
      r.l2sq_neg_fstar = std::stod(f[9]);
      r.interpolates = f[10] == "1";
      if (timing)
        r.wall_ms = std::stod(f[11]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw InputError("rate CSV line " + std::to_string(lineno) +
                       " is malformed");
    }
  }
  return rows;
}

double
fit_loglog_slope(const std::vector<RateRow>& rows, PredictorKind predictor)
{
  std::map<std::size_t, std::pair<double, std::size_t>> by_n;
  for (const auto& r : rows) {
    if (r.predictor != predictor)
      continue;
    auto& e = by_n[r.n];
    e.first += r.excess_risk;
    ++e.second;
  }
  if (by_n.size() < 4)
    throw InputError("slope fit needs at least 4 distinct sample sizes, got " +
                     std::to_string(by_n.size()));
  std::vector<double> xs, ys;
  for (const auto& [n, e] : by_n) {
    const double mean = e.first / static_cast<double>(e.second);
    if (!(mean > 0.0))
      throw InputError("mean excess risk at n=" + std::to_string(n) +
                       " is not positive");
    const double nd = static_cast<double>(n);
    xs.push_back(std::log(nd / std::log(nd)));
    ys.push_back(std::log(mean));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

} // namespace histnet
