#pragma once

#include <cstdint>
#include <random>

namespace sentivol {

/// Portable seeded generator: 64-bit Mersenne Twister (MT19937-64, whose
/// output sequence is fixed by the C++ standard), uniforms from the top 53
/// bits, normals by the Box-Muller transform. Standard-library distributions
/// are avoided because their algorithms vary between implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Independent stream for replication `index` of a seeded experiment.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

} // namespace sentivol
