#pragma once

#include "histnet/dataset.hpp"
#include "histnet/distribution.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace histnet {

// Header `x1,...,xd,y`, one sample per line.
Dataset read_dataset_csv(std::istream& in);
void write_dataset_csv(std::ostream& out, const Dataset& data);

// key=value lines; '#' starts a comment. Keys: dim, marginal, c, task,
// fstar, alpha, C, noise_b, eta, seed.
DistributionSpec parse_distribution_config(std::string_view text);
std::string format_distribution_config(const DistributionSpec& dist);

double parse_double(std::string_view s, std::string_view what);
std::uint64_t parse_uint(std::string_view s, std::string_view what);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace histnet
