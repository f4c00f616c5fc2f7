#include <ssaid/core.hpp>
#include <ssaid/random.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

using namespace ssaid;

namespace {

// Frequency count over every value, smallest value wins ties.
Index brute_mode(const std::vector<Index>& xs) {
    std::map<Index, int> freq;
    for (Index x : xs) {
        ++freq[x];
    }
    Index best = 0;
    int count = -1;
    for (const auto& [value, n] : freq) {
        if (n > count) {
            best = value;
            count = n;
        }
    }
    return best;
}

} // namespace

TEST(TimeSeries, RejectsInvalidInput) {
    EXPECT_THROW(TimeSeries({}), Error);
    EXPECT_THROW(TimeSeries({1.0, std::nan("")}), Error);
    EXPECT_THROW(TimeSeries({1.0, std::numeric_limits<double>::infinity()}), Error);
    EXPECT_THROW(TimeSeries({1.0}, 0.0), Error);
    EXPECT_THROW(TimeSeries({1.0}, -1.0), Error);
}

TEST(TimeSeries, TimeAndSlice) {
    const TimeSeries x({1, 2, 3, 4}, 0.5, 10.0);
    EXPECT_DOUBLE_EQ(x.time(2), 11.0);
    const auto s = x.slice(1, 2);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_DOUBLE_EQ(s[0], 2.0);
    EXPECT_DOUBLE_EQ(s.origin(), 10.5);
    EXPECT_THROW(x.slice(3, 2), Error);
}

TEST(Mode, Examples) {
    const std::vector<Index> a{3, 3, 4};
    const std::vector<Index> b{7};
    const std::vector<Index> c{1, 1, 2, 2};
    EXPECT_EQ(mode(a), 3);
    EXPECT_EQ(mode(b), 7);
    EXPECT_EQ(mode(c), 1);
    EXPECT_THROW(mode(std::vector<Index>{}), Error);
}

TEST(Mode, MatchesFrequencyCountAndIsPermutationInvariant) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<Index> value(-4, 4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Index> xs(1 + trial % 17);
        for (auto& x : xs) {
            x = value(rng);
        }
        const Index expected = brute_mode(xs);
        EXPECT_EQ(mode(xs), expected);
        std::shuffle(xs.begin(), xs.end(), rng);
        EXPECT_EQ(mode(xs), expected);
    }
}

TEST(Rmse, Examples) {
    const std::vector<Index> q{5, 40, 90};
    EXPECT_DOUBLE_EQ(rmse(q, q), 0.0);
    const std::vector<Index> shifted{8, 43, 93};
    EXPECT_DOUBLE_EQ(rmse(shifted, q), 3.0);
    const std::vector<Index> p2{10, 20};
    const std::vector<Index> q2{13, 24};
    EXPECT_NEAR(rmse(p2, q2), 3.5355339059327378, 1e-15);
}

TEST(Rmse, CountMismatchThrows) {
    EXPECT_THROW(rmse(DetectionResult{{1, 2}}, GroundTruth{{1}}), Error);
}

TEST(Rmse, TranslationInvariant) {
    const std::vector<Index> p{10, 31, 55};
    const std::vector<Index> q{12, 30, 50};
    const std::vector<Index> p7{17, 38, 62};
    const std::vector<Index> q7{19, 37, 57};
    EXPECT_DOUBLE_EQ(rmse(p, q), rmse(p7, q7));
}

TEST(Quartile3, Examples) {
    EXPECT_DOUBLE_EQ(quartile3(std::vector<double>{5, 5, 5, 5}), 5.0);
    EXPECT_DOUBLE_EQ(quartile3(std::vector<double>{1, 2, 3, 4}), 3.25);
    EXPECT_DOUBLE_EQ(quartile3(std::vector<double>{4, 1, 3, 2}), 3.25);
    EXPECT_DOUBLE_EQ(quartile3(std::vector<double>{0}), 0.0);
    EXPECT_THROW(quartile3(std::vector<double>{}), Error);
}

TEST(Quartile3, WithinRange) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int n = 1; n < 40; ++n) {
        std::vector<double> xs(n);
        for (auto& x : xs) {
            x = g(rng);
        }
        const double q = quartile3(xs);
        EXPECT_GE(q, *std::min_element(xs.begin(), xs.end()));
        EXPECT_LE(q, *std::max_element(xs.begin(), xs.end()));
    }
}

TEST(Zscore, Examples) {
    const auto a = zscore_normalize(TimeSeries({0.0, 2.0}));
    const double s = std::sqrt(2.0);
    // Sample std of {0, 2} is sqrt(2), so the values are -1/s and 1/s.
    EXPECT_NEAR(a[0], -1.0 / s, 1e-15);
    EXPECT_NEAR(a[1], 1.0 / s, 1e-15);
    // Sample std of {1, 2, 3} is exactly 1.
    const auto b = zscore_normalize(TimeSeries({1.0, 2.0, 3.0}));
    EXPECT_NEAR(b[0], -1.0, 1e-15);
    EXPECT_NEAR(b[1], 0.0, 1e-15);
    EXPECT_NEAR(b[2], 1.0, 1e-15);
    EXPECT_THROW(zscore_normalize(TimeSeries({4.0, 4.0, 4.0})), Error);
    EXPECT_THROW(zscore_normalize(TimeSeries({4.0})), Error);
}

TEST(Zscore, PostconditionAndIdempotence) {
    auto engine = make_engine(3);
    std::vector<double> v(300);
    fill_standard_normal(engine, v);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = 5.0 + 3.0 * v[i] + 0.01 * static_cast<double>(i);
    }
    const auto z = zscore_normalize(TimeSeries(v));
    EXPECT_NEAR(mean(z.values()), 0.0, 1e-12);
    EXPECT_NEAR(sample_std(z.values()), 1.0, 1e-12);
    const auto zz = zscore_normalize(z);
    for (std::size_t i = 0; i < z.size(); ++i) {
        EXPECT_NEAR(zz[i], z[i], 1e-12);
    }
}

TEST(CheckInterior, Rules) {
    EXPECT_NO_THROW(check_interior(std::vector<Index>{1, 5, 8}, 10));
    EXPECT_THROW(check_interior(std::vector<Index>{0, 5}, 10), Error);
    EXPECT_THROW(check_interior(std::vector<Index>{5, 9}, 10), Error);
    EXPECT_THROW(check_interior(std::vector<Index>{5, 5}, 10), Error);
    EXPECT_THROW(check_interior(std::vector<Index>{6, 5}, 10), Error);
}

TEST(Statistics, MedianMeanStd) {
    EXPECT_DOUBLE_EQ(median(std::vector<double>{3, 1, 2}), 2.0);
    EXPECT_DOUBLE_EQ(median(std::vector<double>{4, 1, 3, 2}), 2.5);
    EXPECT_DOUBLE_EQ(mean(std::vector<double>{1, 2, 6}), 3.0);
    EXPECT_DOUBLE_EQ(sample_std(std::vector<double>{2, 4, 4, 4, 5, 5, 7, 9}), std::sqrt(32.0 / 7.0));
}
