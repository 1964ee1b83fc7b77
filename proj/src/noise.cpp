#include "hardbench/noise.hpp"

#include "hardbench/errors.hpp"

#include <string>

namespace hardbench {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57;
constexpr int kRounds = 10;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(product);
    hi = static_cast<std::uint32_t>(product >> 32);
}

}  // namespace

std::string_view to_string(NoisePolicy policy) {
    switch (policy) {
        case NoisePolicy::PerEvaluation: return "per_evaluation";
        case NoisePolicy::FixedPerRun: return "fixed_per_run";
    }
    return "unknown";
}

NoisePolicy noise_policy_from_string(std::string_view name) {
    if (name == "per_evaluation") return NoisePolicy::PerEvaluation;
    if (name == "fixed_per_run") return NoisePolicy::FixedPerRun;
    throw UsageError("unknown noise policy '" + std::string(name) +
                     "' (expected per_evaluation or fixed_per_run)");
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < kRounds; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kPhiloxM4x32A, ctr[0], lo0, hi0);
        mulhilo(kPhiloxM4x32B, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW32A;
        key[1] += kPhiloxW32B;
    }
    return ctr;
}

double uniform(NoiseKey key, std::uint32_t component) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(key.eval_index),
        static_cast<std::uint32_t>(key.eval_index >> 32),
        component,
        0u,
    };
    const std::array<std::uint32_t, 2> k = {
        static_cast<std::uint32_t>(key.run_seed),
        static_cast<std::uint32_t>(key.run_seed >> 32),
    };
    const auto out = philox4x32(ctr, k);
    // 53-bit mantissa from two words.
    const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 21) ^ (out[1] >> 11);
    return static_cast<double>(bits & ((std::uint64_t{1} << 53) - 1)) * 0x1.0p-53;
}

}  // namespace hardbench
