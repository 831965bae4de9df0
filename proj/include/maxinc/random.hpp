#pragma once

#include <cstdint>
#include <random>

namespace maxinc {

// Identifies one independent random stream: replication `replication_index`
// of the experiment seeded by `master_seed`.
struct SeedStream {
    std::uint64_t master_seed = 0;
    std::uint64_t replication_index = 0;

    friend bool operator==(const SeedStream&, const SeedStream&) = default;
};

using Engine = std::mt19937_64;

// Engine state is derived through std::seed_seq, whose mixing is fixed by the
// standard, so draws are bit-identical across toolchains.
Engine make_engine(const SeedStream& seed);

// Uniform on the open interval (0, 1) with 53 random bits.
inline double uniform_open(Engine& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Marsaglia's polar method. Portable, unlike
// std::normal_distribution whose algorithm is implementation-defined.
double standard_normal(Engine& eng);

}  // namespace maxinc
