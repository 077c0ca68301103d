#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace conesphere::detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// std::normal_distribution is implementation defined, so draws are built by
// hand from the raw engine output to keep seeds portable.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal()
    {
        double u = 1.0 - uniform();
        double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }

    Eigen::Vector3d on_sphere()
    {
        for (;;) {
            Eigen::Vector3d v(normal(), normal(), normal());
            double n = v.norm();
            if (n > 1e-6) return v / n;
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace conesphere::detail
