#include "maxinc/random.hpp"

#include <cmath>

namespace maxinc {

Engine make_engine(const SeedStream& seed) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed.master_seed), hi(seed.master_seed), lo(seed.replication_index),
                      hi(seed.replication_index), 0x6d617869u};
    return Engine(seq);
}

double standard_normal(Engine& eng) {
    for (;;) {
        const double u = 2.0 * uniform_open(eng) - 1.0;
        const double v = 2.0 * uniform_open(eng) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

}  // namespace maxinc
