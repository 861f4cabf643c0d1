#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace heavytail {

/// Standard normal variates with a pinned, portable algorithm.
///
/// Engine: std::mt19937_64 seeded with the 64-bit seed (its output sequence is
/// fixed by the C++ standard). Uniforms use the top 53 bits:
///   u1 = ((r >> 11) + 1) * 2^-53  in (0, 1]
///   u2 =  (r >> 11)      * 2^-53  in [0, 1)
/// Normals come from the Box-Muller transform in pairs,
///   z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2),
/// returned in the order z0, z1.
class NormalGenerator {
public:
    explicit NormalGenerator(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * kScale;
        const double u2 = static_cast<double>(engine_() >> 11) * kScale;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace heavytail
