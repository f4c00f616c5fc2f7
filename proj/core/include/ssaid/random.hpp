#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace ssaid {

using Engine = std::mt19937_64;

/// Mixes a master seed with a tuple of keys into a 64-bit seed. Streams keyed
/// by distinct tuples are independent of one another and of call order.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

/// Engine seeded with derive_seed(seed, keys).
Engine make_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {});

/// Fills `out` with i.i.d. standard Gaussian draws from `engine`.
void fill_standard_normal(Engine& engine, std::span<double> out);

} // namespace ssaid
