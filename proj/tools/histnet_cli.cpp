#include "histnet/bench.hpp"
#include "histnet/error.hpp"
#include "histnet/histogram.hpp"
#include "histnet/interpolate.hpp"
#include "histnet/io.hpp"
#include "histnet/relunet.hpp"
#include "histnet/risk.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace histnet;

namespace {

constexpr int kValidationFailure = 2;

Dataset
load_dataset(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  return read_dataset_csv(in);
}

// Points file: dataset CSV, or the same without the label column.
PointSet
load_points(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  std::string rest((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const bool labelled = header.size() >= 2 &&
                        header.compare(header.size() - 2, 2, ",y") == 0;
  if (labelled) {
    std::istringstream ss(header + "\n" + rest);
    return read_dataset_csv(ss).x;
  }
  // Add a dummy label column and reuse the dataset reader.
  std::ostringstream buf;
  buf << header << ",y\n";
  std::istringstream lines(rest);
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty())
      buf << line << ",0\n";
  std::istringstream ss(buf.str());
  return read_dataset_csv(ss).x;
}

Point
parse_point(const std::string& s, std::size_t dim)
{
  Point p;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ','))
    p.push_back(parse_double(cell, "offset"));
  if (p.size() != dim)
    throw InputError("offset needs " + std::to_string(dim) + " coordinates");
  return p;
}

void
emit(const std::string& path, const std::string& content)
{
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file(path, content);
}

struct ModelOrNet
{
  std::optional<std::variant<Histogram, InflatedHistogram>> model;
  std::optional<ReluNet> net;

  Predictor predictor() const
  {
    if (net) {
      auto ev = std::make_shared<NetEvaluator>(*net);
      return [ev](std::span<const double> x) { return (*ev)(x); };
    }
    return std::visit(
      [](const auto& m) -> Predictor {
        return [&m](std::span<const double> x) { return m.predict(x); };
      },
      *model);
  }
};

ModelOrNet
load(const std::string& model_path, const std::string& net_path)
{
  if (model_path.empty() == net_path.empty())
    throw InputError("give exactly one of --model and --net");
  ModelOrNet m;
  if (!model_path.empty())
    m.model = import_model(read_file(model_path));
  else
    m.net = import_weights(read_file(net_path));
  return m;
}

std::vector<std::size_t>
parse_grid(const std::string& s)
{
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ','))
    out.push_back(parse_uint(cell, "--n-grid"));
  return out;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Interpolating histogram rules and their ReLU network "
                "compilations" };
  app.require_subcommand(1);

  std::string data_path, model_path, net_path, out_path, loss_name = "ls",
                                                         offset_str;
  double width = 0.5;

  auto* fit = app.add_subcommand("fit-histogram",
                                 "Fit the empirical histogram rule");
  fit->add_option("--data", data_path, "Dataset CSV")->required();
  fit->add_option("--loss", loss_name, "ls | hinge | classification");
  fit->add_option("--width", width, "Cell width s in (0,1]")->required();
  fit->add_option("--offset", offset_str, "Comma-separated offset");
  fit->add_option("--out", out_path, "Model JSON (default stdout)");

  bool good = false, bad = false;
  auto* build = app.add_subcommand("build-interpolant",
                                   "Build the good or bad interpolating ERM");
  build->add_option("--data", data_path, "Dataset CSV")->required();
  build->add_option("--loss", loss_name, "ls | hinge | classification");
  build->add_option("--width", width, "Cell width s in (0,1]")->required();
  auto* good_flag = build->add_flag("--good", good, "Empirical histogram base");
  auto* bad_flag = build->add_flag("--bad", bad, "Negated histogram base");
  good_flag->excludes(bad_flag);
  build->add_option("--out", out_path, "Model JSON (default stdout)");

  double eps = 0.0;
  auto* compile = app.add_subcommand("compile-dnn",
                                     "Compile a model into a ReLU network");
  compile->add_option("--model", model_path, "Model JSON")->required();
  compile->add_option("--eps", eps,
                      "Shell width for plain histograms (interpolants use "
                      "t/3)");
  compile->add_option("--out", out_path, "Weight JSON (default stdout)");

  std::string points_path;
  auto* eval = app.add_subcommand("eval", "Evaluate a model or network");
  eval->add_option("--model", model_path, "Model JSON");
  eval->add_option("--net", net_path, "Weight JSON");
  eval->add_option("--points", points_path, "Points CSV")->required();
  eval->add_option("--out", out_path, "Predictions CSV (default stdout)");

  auto* verify = app.add_subcommand(
    "verify-interpolation", "Check that a predictor reaches R*_D on data");
  verify->add_option("--model", model_path, "Model JSON");
  verify->add_option("--net", net_path, "Weight JSON");
  verify->add_option("--data", data_path, "Dataset CSV")->required();
  verify->add_option("--loss", loss_name, "ls | hinge | classification");

  std::string dist_path, grid_str = "256,512,1024,2048",
                         predictors_str = "good_erm,bad_erm";
  ExperimentPlan plan;
  std::optional<double> gamma;
  auto* exp = app.add_subcommand("experiment", "Run a rate experiment");
  exp->add_option("--dist", dist_path, "Distribution config")->required();
  exp->add_option("--loss", loss_name, "ls | hinge | classification");
  exp->add_option("--gamma", gamma, "Schedule exponent (default: largest)");
  exp->add_option("--n-grid", grid_str, "Comma-separated sample sizes");
  exp->add_option("--reps", plan.repetitions, "Repetitions per n");
  exp->add_option("--mc", plan.mc_points, "Monte Carlo evaluation points");
  exp->add_option("--seed", plan.seed, "Master seed");
  exp->add_option("--threads", plan.threads, "Worker threads");
  exp->add_option("--predictors", predictors_str,
                  "Subset of good_erm,bad_erm,good_dnn,bad_dnn");
  exp->add_flag("--log-schedule", plan.log_schedule, "Use s_n = 1/log n");
  exp->add_flag("--timing", plan.timing, "Append a wall_ms column");
  exp->add_option("--out", out_path, "Rate CSV (default stdout)");

  auto* exportw = app.add_subcommand("export-weights",
                                     "Write network weights as JSON");
  exportw->add_option("--model", model_path, "Model JSON (compiled first)");
  exportw->add_option("--net", net_path, "Weight JSON (re-exported)");
  exportw->add_option("--eps", eps, "Shell width for plain histograms");
  exportw->add_option("--out", out_path, "Weight JSON (default stdout)");

  std::size_t n = 100;
  std::uint64_t seed = 0;
  auto* samp = app.add_subcommand("sample", "Draw a dataset");
  samp->add_option("--dist", dist_path, "Distribution config")->required();
  samp->add_option("--n", n, "Sample size");
  samp->add_option("--seed", seed, "Seed");
  samp->add_option("--out", out_path, "Dataset CSV (default stdout)");

  std::string in_path, predictor_name = "good_erm";
  auto* slope = app.add_subcommand("fit-slope",
                                   "Log-log slope of excess risk in a rate CSV");
  slope->add_option("--in", in_path, "Rate CSV")->required();
  slope->add_option("--predictor", predictor_name, "Predictor tag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidationFailure;
  }

  try {
    const LossKind loss = parse_loss(loss_name);

    if (*fit) {
      const Dataset data = load_dataset(data_path);
      const CubicPartition part =
        offset_str.empty()
          ? CubicPartition(data.dim(), width)
          : CubicPartition(data.dim(), width,
                           parse_point(offset_str, data.dim()));
      emit(out_path, export_model(fit_histogram(data, part, loss)));
    } else if (*build) {
      if (!good && !bad)
        throw InputError("choose --good or --bad");
      const Dataset data = load_dataset(data_path);
      emit(out_path,
           export_model(interpolating_erm(data, width, loss,
                                          good ? ErmKind::good : ErmKind::bad)
                          .predictor));
    } else if (*compile || *exportw) {
      ReluNet net = [&] {
        if (*exportw && !net_path.empty()) {
          if (!model_path.empty())
            throw InputError("give exactly one of --model and --net");
          return import_weights(read_file(net_path));
        }
        if (model_path.empty())
          throw InputError("give --model or --net");
        auto m = import_model(read_file(model_path));
        if (auto* f = std::get_if<InflatedHistogram>(&m))
          return compile_interpolant(*f);
        if (eps <= 0.0)
          throw InputError("compiling a plain histogram needs --eps");
        return compile_histogram(std::get<Histogram>(m), eps);
      }();
      emit(out_path, export_weights(net));
    } else if (*eval) {
      const ModelOrNet m = load(model_path, net_path);
      const PointSet pts = load_points(points_path);
      const Predictor f = m.predictor();
      std::ostringstream o;
      for (std::size_t i = 0; i < pts.dim(); ++i)
        o << 'x' << i + 1 << ',';
      o << "prediction\n";
      char buf[40];
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (double v : pts[i]) {
          std::snprintf(buf, sizeof buf, "%.17g", v);
          o << buf << ',';
        }
        std::snprintf(buf, sizeof buf, "%.17g", f(pts[i]));
        o << buf << '\n';
      }
      emit(out_path, o.str());
    } else if (*verify) {
      const ModelOrNet m = load(model_path, net_path);
      const Dataset data = load_dataset(data_path);
      const auto r = check_interpolation(m.predictor(), data, loss);
      std::printf("empirical_risk=%.17g\noptimal_risk=%.17g\ngap=%.17g\n"
                  "interpolates=%s\n",
                  r.empirical, r.optimal, r.gap,
                  r.interpolates ? "true" : "false");
      return r.interpolates ? 0 : kValidationFailure;
    } else if (*exp) {
      plan.dist = parse_distribution_config(read_file(dist_path));
      plan.loss = loss;
      plan.n_grid = parse_grid(grid_str);
      plan.gamma = gamma ? *gamma : gamma_max(plan.dist.alpha, plan.dist.dim);
      plan.predictors.clear();
      std::stringstream ss(predictors_str);
      std::string p;
      while (std::getline(ss, p, ','))
        plan.predictors.push_back(parse_predictor(p));
      std::ostringstream o;
      write_rate_csv(o, run_experiment(plan), plan.timing);
      emit(out_path, o.str());
    } else if (*samp) {
      const DistributionSpec d = parse_distribution_config(read_file(dist_path));
      std::ostringstream o;
      write_dataset_csv(o, sample(d, n, seed));
      emit(out_path, o.str());
    } else if (*slope) {
      std::ifstream in(in_path);
      if (!in)
        throw InputError("cannot open '" + in_path + "'");
      const auto rows = read_rate_csv(in);
      std::printf("%.17g\n",
                  fit_loglog_slope(rows, parse_predictor(predictor_name)));
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const ConstructionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
