#include "hardbench/noise.hpp"
#include "hardbench/errors.hpp"

#include "doctest.h"

#include <array>
#include <cmath>
#include <cstring>
#include <set>
#include <thread>
#include <vector>

using namespace hardbench;

TEST_CASE("uniform is deterministic in its inputs") {
    const NoiseKey key{42, 7};
    const double a = uniform(key, 0);
    const double b = uniform(key, 0);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    CHECK(uniform(key, 1) != a);
    CHECK(uniform(NoiseKey{42, 8}, 0) != a);
    CHECK(uniform(NoiseKey{43, 7}, 0) != a);
}

TEST_CASE("philox block is stateless") {
    const std::array<std::uint32_t, 4> ctr{1, 2, 3, 4};
    const std::array<std::uint32_t, 2> key{5, 6};
    CHECK(philox4x32(ctr, key) == philox4x32(ctr, key));
    CHECK(philox4x32(ctr, key) != philox4x32(ctr, {5, 7}));
}

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference outputs of the Random123 distribution (kat_vectors).
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
          std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("moments and range over 1e5 draws") {
    const int n = 100000;
    double sum = 0.0;
    int below = 0;
    for (int i = 0; i < n; ++i) {
        const double u = uniform(NoiseKey{2024, static_cast<std::uint64_t>(i)}, 0);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        below += u < 0.25;
    }
    CHECK(std::abs(sum / n - 0.5) <= 0.01);
    CHECK(std::abs(below / double(n) - 0.25) <= 0.01);
}

TEST_CASE("chi-square on 16 bins passes at 0.001") {
    const int n = 100000, bins = 16;
    std::vector<int> counts(bins, 0);
    for (int i = 0; i < n; ++i) ++counts[static_cast<int>(uniform(NoiseKey{99, std::uint64_t(i)}, 3) * bins)];
    const double expected = double(n) / bins;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 <= 37.697);  // chi-square critical value, 15 dof, p = 0.001
}

TEST_CASE("concurrent calls reproduce serial results") {
    std::vector<double> serial(4000);
    for (std::size_t i = 0; i < serial.size(); ++i) serial[i] = uniform(NoiseKey{5, i}, i % 7);
    std::vector<double> parallel(serial.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < 4; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < parallel.size(); i += 4) parallel[i] = uniform(NoiseKey{5, i}, i % 7);
            });
    }
    CHECK(parallel == serial);
}

TEST_CASE("fixed-per-run policy pins the evaluation index") {
    const NoiseKey key{11, 500};
    CHECK(apply_policy(key, NoisePolicy::PerEvaluation) == key);
    CHECK(apply_policy(key, NoisePolicy::FixedPerRun) == NoiseKey{11, 0});
}

TEST_CASE("policy names round-trip") {
    for (auto p : {NoisePolicy::PerEvaluation, NoisePolicy::FixedPerRun})
        CHECK(noise_policy_from_string(to_string(p)) == p);
    CHECK_THROWS_AS(noise_policy_from_string("sometimes"), UsageError);
}
