#include <ssaid/random.hpp>

#include <array>
#include <vector>

namespace ssaid {

namespace {

std::vector<std::uint32_t> words(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::vector<std::uint32_t> w;
    w.reserve(2 * (keys.size() + 1));
    auto push = [&](std::uint64_t v) {
        w.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
        w.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (auto k : keys) {
        push(k);
    }
    return w;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    const auto w = words(seed, keys);
    std::seed_seq seq(w.begin(), w.end());
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

Engine make_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    return Engine(derive_seed(seed, keys));
}

void fill_standard_normal(Engine& engine, std::span<double> out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& x : out) {
        x = normal(engine);
    }
}

} // namespace ssaid
