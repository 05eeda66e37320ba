#include "spinforge/state_library.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "spinforge/io.hpp"

namespace spinforge {

namespace {

std::vector<double> normalized(std::vector<double> p) {
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) {
        x /= sum;
    }
    return p;
}

}  // namespace

SiteProbabilityProfile w_state_profile(int chains) {
    const ChainSize size(chains);
    std::vector<double> p(static_cast<std::size_t>(size.sites()), 0.0);
    for (int k = 1; k <= chains; ++k) {
        p[static_cast<std::size_t>(2 * k - 1)] = 1.0 / chains;
    }
    return SiteProbabilityProfile(std::move(p));
}

SiteProbabilityProfile gaussian_state_profile(int chains, double sigma) {
    const ChainSize size(chains);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("gaussian width sigma must be positive");
    }
    const double center = 0.5 * (chains + 1);
    std::vector<double> p(static_cast<std::size_t>(size.sites()), 0.0);
    for (int k = 1; k <= chains; ++k) {
        const double d = k - center;
        p[static_cast<std::size_t>(2 * k - 1)] = std::exp(-d * d / (2.0 * sigma * sigma));
    }
    return SiteProbabilityProfile(normalized(std::move(p)));
}

SiteProbabilityProfile random_profile(int chains, std::uint64_t seed, bool even_support_only) {
    const ChainSize size(chains);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::bernoulli_distribution zero_block(kZeroBlockProbability);

    std::vector<double> p(static_cast<std::size_t>(size.sites()));
    for (;;) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            const bool odd_site = j % 2 == 0;
            p[j] = (even_support_only && odd_site) ? 0.0 : uniform(rng);
        }
        for (int k = 1; k < chains; ++k) {
            if (zero_block(rng)) {
                p[static_cast<std::size_t>(2 * k - 1)] = 0.0;
                p[static_cast<std::size_t>(2 * k)] = 0.0;
            }
        }
        if (std::accumulate(p.begin(), p.end(), 0.0) > 0.0) {
            break;
        }
    }
    return SiteProbabilityProfile(normalized(std::move(p)));
}

SiteProbabilityProfile custom_profile_from_file(const std::filesystem::path& path) {
    return normalize_profile(read_profile_values(path));
}

}  // namespace spinforge
