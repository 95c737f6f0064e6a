#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace yspde {

/// splitmix64 step; used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded, splittable stream of uniforms and Gaussians. Streams with the
/// same (seed, stream_index) replay bit-for-bit; distinct stream indices
/// are seeded with seed ^ splitmix64(stream_index + 1).
///
/// The engine is std::mt19937_64 (output sequence fixed by the standard);
/// Gaussians come from our own Box-Muller so draws do not depend on the
/// standard library's unspecified normal_distribution algorithm.
class RngStream {
public:
    static constexpr const char* algorithm_id = "mt19937_64/boxmuller";

    RngStream(std::uint64_t seed, std::uint64_t stream_index = 0)
        : seed_(seed), stream_index_(stream_index),
          engine_(seed ^ splitmix64(stream_index + 1)) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    RngStream substream(std::uint64_t index) const { return RngStream(seed_, index); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double c = std::cos(6.283185307179586476925286766559 * u2);
        double s = std::sin(6.283185307179586476925286766559 * u2);
        spare_ = r * s;
        have_spare_ = true;
        return r * c;
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace yspde
