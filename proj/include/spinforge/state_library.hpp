#pragma once

#include <cstdint>
#include <filesystem>

#include "spinforge/types.hpp"

namespace spinforge {

// P_{2k-1} = 0, P_{2k} = 1/N.
SiteProbabilityProfile w_state_profile(int chains);

// P_{2k} proportional to exp(-(k - (N+1)/2)^2 / (2 sigma^2)), odd sites empty,
// renormalized so the discrete profile sums to 1.
SiteProbabilityProfile gaussian_state_profile(int chains, double sigma);

// Chance that random_profile empties an interior pair (P_2k = P_2k+1 = 0).
inline constexpr double kZeroBlockProbability = 0.2;

// Uniform entries, normalized. Each interior pair is zeroed with probability
// kZeroBlockProbability. Deterministic in `seed`.
SiteProbabilityProfile random_profile(int chains, std::uint64_t seed, bool even_support_only);

// Reads a profile file (CSV or JSON, see io.hpp). Sums within 1e-6 of 1 are
// accepted and renormalized.
SiteProbabilityProfile custom_profile_from_file(const std::filesystem::path& path);

}  // namespace spinforge
