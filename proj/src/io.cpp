#include "histnet/io.hpp"

#include "histnet/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace histnet {

namespace {

std::string_view
trim(std::string_view s)
{
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view>
split(std::string_view line, char sep)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto p = line.find(sep, start);
    out.push_back(trim(line.substr(start, p - start)));
    if (p == std::string_view::npos)
      return out;
    start = p + 1;
  }
}

std::string
fmt17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

double
parse_double(std::string_view s, std::string_view what)
{
  s = trim(s);
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size() ||
      !std::isfinite(v))
    throw InputError(std::string(what) + ": '" + std::string(s) +
                     "' is not a finite number");
  return v;
}

std::uint64_t
parse_uint(std::string_view s, std::string_view what)
{
  s = trim(s);
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw InputError(std::string(what) + ": '" + std::string(s) +
                     "' is not a non-negative integer");
  return v;
}

Dataset
read_dataset_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line))
    throw InputError("dataset file is empty");
  const auto header = split(line, ',');
  if (header.size() < 2 || header.back() != "y")
    throw InputError("dataset header must be x1,...,xd,y");
  const std::size_t d = header.size() - 1;
  for (std::size_t i = 0; i < d; ++i)
    if (header[i] != "x" + std::to_string(i + 1))
      throw InputError("dataset header must be x1,...,xd,y");
  PointSet x(d);
  std::vector<double> y;
  Point p(d);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty())
      continue;
    const auto f = split(line, ',');
    const std::string where = "dataset line " + std::to_string(lineno);
    if (f.size() != d + 1)
      throw InputError(where + " has " + std::to_string(f.size()) +
                       " fields, expected " + std::to_string(d + 1));
    for (std::size_t i = 0; i < d; ++i)
      p[i] = parse_double(f[i], where);
    x.push_back(p);
    y.push_back(parse_double(f[d], where));
  }
  return Dataset(std::move(x), std::move(y));
}

void
write_dataset_csv(std::ostream& out, const Dataset& data)
{
  for (std::size_t i = 0; i < data.dim(); ++i)
    out << 'x' << i + 1 << ',';
  out << "y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.x[i])
      out << fmt17(v) << ',';
    out << fmt17(data.y[i]) << '\n';
  }
}

DistributionSpec
parse_distribution_config(std::string_view text)
{
  DistributionSpec d;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(lineno);
    if (eq == std::string_view::npos)
      throw InputError(where + ": expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto val = trim(line.substr(eq + 1));
    if (key == "dim") {
      d.dim = parse_uint(val, where);
    } else if (key == "marginal") {
      if (val == "uniform")
        d.marginal = Marginal::uniform;
      else if (val == "truncated_linear")
        d.marginal = Marginal::truncated_linear;
      else
        throw InputError(where + ": unknown marginal '" + std::string(val) + "'");
    } else if (key == "c") {
      d.density_bound = parse_double(val, where);
    } else if (key == "task") {
      if (val == "regression")
        d.task = Task::regression;
      else if (val == "classification")
        d.task = Task::classification;
      else
        throw InputError(where + ": unknown task '" + std::string(val) + "'");
    } else if (key == "fstar") {
      if (val == "linear")
        d.fstar = RegressionFamily::linear;
      else if (val == "cosine")
        d.fstar = RegressionFamily::cosine;
      else if (val == "power")
        d.fstar = RegressionFamily::power;
      else
        throw InputError(where + ": unknown fstar '" + std::string(val) + "'");
    } else if (key == "alpha") {
      d.alpha = parse_double(val, where);
    } else if (key == "C") {
      d.holder_c = parse_double(val, where);
    } else if (key == "noise_b") {
      d.noise_b = parse_double(val, where);
    } else if (key == "eta") {
      if (val == "threshold")
        d.eta = EtaFamily::threshold;
      else if (val == "half")
        d.eta = EtaFamily::half;
      else if (val == "fstar")
        d.eta = EtaFamily::fstar;
      else
        throw InputError(where + ": unknown eta '" + std::string(val) + "'");
    } else if (key == "seed") {
      d.seed = parse_uint(val, where);
    } else {
      throw InputError(where + ": unknown key '" + std::string(key) + "'");
    }
  }
  d.validate();
  return d;
}

std::string
format_distribution_config(const DistributionSpec& d)
{
  std::ostringstream o;
  o << "dim=" << d.dim << '\n'
    << "marginal=" << to_string(d.marginal) << '\n'
    << "c=" << fmt17(d.density_bound) << '\n'
    << "task=" << to_string(d.task) << '\n'
    << "fstar=" << to_string(d.fstar) << '\n'
    << "alpha=" << fmt17(d.alpha) << '\n'
    << "C=" << fmt17(d.holder_c) << '\n'
    << "noise_b=" << fmt17(d.noise_b) << '\n'
    << "eta=" << to_string(d.eta) << '\n'
    << "seed=" << d.seed << '\n';
  return o.str();
}

std::string
read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void
write_file(const std::string& path, std::string_view content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out)
    throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace histnet
