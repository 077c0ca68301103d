#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "conesphere/io.hpp"
#include "conesphere/sampling.hpp"

namespace testing {

inline conesphere::ProjectFile catalog(const std::string& name)
{
    return conesphere::parse_project(conesphere::read_file(std::string(CONESPHERE_DATA) + "/catalog/" + name + ".json"));
}

inline std::string data_path(const std::string& rel) { return std::string(CONESPHERE_DATA) + "/" + rel; }

inline conesphere::EdgeLengths random_lengths(std::size_t k, conesphere::detail::Sampler& rng)
{
    conesphere::EdgeLengths l(static_cast<Eigen::Index>(k));
    for (Eigen::Index i = 0; i < l.size(); ++i) l[i] = 0.05 + rng.uniform();
    return l;
}

// Positive deficits summing to 2pi, none below 0.05.
inline std::vector<double> random_deficits(std::size_t n, conesphere::detail::Sampler& rng)
{
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& x : w) sum += (x = 0.2 + rng.uniform());
    for (auto& x : w) x *= 2.0 * std::numbers::pi / sum;
    return w;
}

} // namespace testing
