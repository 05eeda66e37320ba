#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "spinforge/types.hpp"

namespace spinforge::testing {

inline std::vector<double> random_couplings(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> dist(0.1, 3.0);
    std::vector<double> j(static_cast<std::size_t>(n));
    for (double& x : j) {
        x = dist(rng);
    }
    return j;
}

inline int random_chain_count(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace spinforge::testing
