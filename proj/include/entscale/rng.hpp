#pragma once

#include <cstdint>
#include <random>

namespace entscale {

// All randomness in the library flows through this generator: an mt19937_64
// stream with uniform doubles taken from the top 53 bits, so sequences are
// identical across platforms for a fixed seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform draw in [0, 1).
    double canonical() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace entscale
