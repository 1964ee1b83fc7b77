#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace hardbench {

/// Identifies one objective evaluation within one run. Every stochastic draw
/// made during that evaluation is a pure function of this key and a component
/// index.
struct NoiseKey {
    std::uint64_t run_seed = 0;
    std::uint64_t eval_index = 0;

    friend bool operator==(const NoiseKey&, const NoiseKey&) = default;
};

enum class NoisePolicy {
    PerEvaluation,  // fresh draws on every objective call
    FixedPerRun,    // draws taken once at eval_index 0 and reused
};

std::string_view to_string(NoisePolicy policy);
NoisePolicy noise_policy_from_string(std::string_view name);

/// Philox4x32-10 block function. Stateless: the same (counter, key) always
/// yields the same four words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Uniform draw in [0, 1) with 53 bits of resolution.
double uniform(NoiseKey key, std::uint32_t component);

/// Key actually used for a draw under the given policy.
inline NoiseKey apply_policy(NoiseKey key, NoisePolicy policy) {
    if (policy == NoisePolicy::FixedPerRun) key.eval_index = 0;
    return key;
}

}  // namespace hardbench
