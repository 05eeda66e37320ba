#include "spinforge/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spinforge {

namespace {

constexpr double kProbabilitySumTolerance = 1e-10;
constexpr double kNormTolerance = 1e-12;

void check_probabilities(std::span<const double> values, const char* what) {
    if (values.empty() || values.size() % 2 != 0) {
        throw std::invalid_argument(std::string(what) + ": length must be a positive even number, got " +
                                    std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
            throw std::invalid_argument(std::string(what) + ": entry " + std::to_string(i + 1) +
                                        " is negative or not finite");
        }
    }
    const double sum = std::accumulate(values.begin(), values.end(), 0.0);
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
        throw std::invalid_argument(std::string(what) + ": probabilities sum to " + std::to_string(sum));
    }
}

}  // namespace

ChainSize::ChainSize(int chains) : chains_(chains) {
    if (chains < 1) {
        throw std::invalid_argument("chain count must be at least 1, got " + std::to_string(chains));
    }
}

CouplingProfile::CouplingProfile(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("coupling profile is empty");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!(values_[k] > 0.0) || !std::isfinite(values_[k])) {
            throw std::invalid_argument("coupling J_" + std::to_string(k + 1) + " must be positive and finite");
        }
    }
}

SiteProbabilityProfile::SiteProbabilityProfile(std::vector<double> p) : p_(std::move(p)) {
    check_probabilities(p_, "site profile");
}

VirtualProbabilityProfile::VirtualProbabilityProfile(std::vector<double> q, std::vector<bool> inverted_pairs)
    : q_(std::move(q)), inverted_(std::move(inverted_pairs)) {
    check_probabilities(q_, "virtual profile");
    const std::size_t pairs = q_.size() / 2 - 1;
    if (inverted_.empty()) {
        inverted_.assign(pairs, false);
    }
    if (inverted_.size() != pairs) {
        throw std::invalid_argument("virtual profile: expected " + std::to_string(pairs) + " pair orientations");
    }
    for (std::size_t k = 1; k <= pairs; ++k) {
        if (q_[2 * k - 1] < q_[2 * k]) {
            throw std::invalid_argument("virtual profile: q_" + std::to_string(2 * k) + " < q_" +
                                        std::to_string(2 * k + 1));
        }
    }
}

bool VirtualProbabilityProfile::any_inverted() const {
    return std::find(inverted_.begin(), inverted_.end(), true) != inverted_.end();
}

SingleExcitationState::SingleExcitationState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0 || amplitudes_.size() % 2 != 0) {
        throw std::invalid_argument("state dimension must be a positive even number");
    }
    const double norm2 = amplitudes_.squaredNorm();
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
        throw std::invalid_argument("state is not normalized: |psi|^2 = " + std::to_string(norm2));
    }
}

SingleExcitationState SingleExcitationState::basis(ChainSize size, int site) {
    if (site < 1 || site > size.sites()) {
        throw std::out_of_range("basis site " + std::to_string(site) + " outside 1.." +
                                std::to_string(size.sites()));
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size.sites());
    v(site - 1) = 1.0;
    return SingleExcitationState(std::move(v));
}

std::vector<double> SingleExcitationState::probabilities() const {
    std::vector<double> p(static_cast<std::size_t>(amplitudes_.size()));
    for (Eigen::Index j = 0; j < amplitudes_.size(); ++j) {
        p[static_cast<std::size_t>(j)] = std::norm(amplitudes_(j));
    }
    return p;
}

void validate(const SynthesisSchedule& schedule) {
    const ChainSize size(schedule.n);
    const auto n = static_cast<std::size_t>(size.chains());
    if (schedule.couplings.size() != n || schedule.intervals.size() != n || schedule.tails.size() != n + 1 ||
        schedule.phases.size() != 2 * n) {
        throw std::invalid_argument("schedule vectors do not match n = " + std::to_string(n));
    }
    if (!(schedule.j1 > 0.0)) {
        throw std::invalid_argument("schedule j1 must be positive");
    }
    CouplingProfile{schedule.couplings};
    for (std::size_t k = 0; k < n; ++k) {
        if (!(schedule.intervals[k] >= 0.0) || !std::isfinite(schedule.intervals[k])) {
            throw std::invalid_argument("schedule interval t_" + std::to_string(k + 1) + " is negative");
        }
    }
    // tau_k - tau_{k+1} = t_k and tau_N = tau_{N+1} = t_N, relative to the total time.
    const double scale = std::max(1.0, schedule.tails.front());
    const double tol = 1e-9 * scale;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (std::abs(schedule.tails[k] - schedule.tails[k + 1] - schedule.intervals[k]) > tol) {
            throw std::invalid_argument("schedule tail times inconsistent at k = " + std::to_string(k + 1));
        }
    }
    if (std::abs(schedule.tails[n - 1] - schedule.intervals[n - 1]) > tol ||
        std::abs(schedule.tails[n] - schedule.intervals[n - 1]) > tol) {
        throw std::invalid_argument("schedule requires tau_N = tau_{N+1} = t_N");
    }
}

}  // namespace spinforge
