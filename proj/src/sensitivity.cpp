#include "spinforge/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "spinforge/synthesis.hpp"

namespace spinforge {

namespace {

constexpr double kBisectionRelativeWidth = 1e-3;
constexpr int kMaxBisectionSteps = 200;

void check_grid(std::span<const double> grid) {
    if (grid.empty() || grid.front() != 0.0) {
        throw std::invalid_argument("epsilon grid must start at 0");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1]) || !std::isfinite(grid[i])) {
            throw std::invalid_argument("epsilon grid must be strictly increasing and finite");
        }
    }
}

void check_level(double f_star) {
    if (!(f_star > 0.0 && f_star < 1.0)) {
        throw std::invalid_argument("fidelity level must lie in (0, 1)");
    }
}

// Index of the first point below f_star, or points.size() if none.
std::size_t first_drop(const FidelityCurve& curve, double f_star) {
    check_level(f_star);
    if (curve.points.empty()) {
        throw std::invalid_argument("fidelity curve is empty");
    }
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        if (curve.points[i].fidelity < f_star) {
            return i;
        }
    }
    return curve.points.size();
}

}  // namespace

std::vector<double> perturbed_intervals(const SynthesisSchedule& schedule, double epsilon) {
    validate(schedule);
    std::vector<double> out = schedule.intervals;
    if (epsilon == 0.0) {
        return out;
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] += epsilon;
        if (!(out[k] > 0.0)) {
            throw std::invalid_argument("timing error " + std::to_string(epsilon) + " makes interval t_" +
                                        std::to_string(k + 1) + " nonpositive");
        }
    }
    return out;
}

TimingSensitivity::TimingSensitivity(const SiteProbabilityProfile& profile, double j1)
    : schedule_(synthesize(profile, j1)),
      propagator_(build_network_hamiltonian(schedule_.coupling_profile()).matrix),
      ideal_(propagate_full(propagator_, schedule_.intervals, Pulses::Enabled,
                            SingleExcitationState::basis(schedule_.size(), 1))) {}

double TimingSensitivity::fidelity_at(double eps_scaled) const {
    const std::vector<double> intervals = perturbed_intervals(schedule_, eps_scaled / schedule_.j1);
    const SingleExcitationState actual = propagate_full(propagator_, intervals, Pulses::Enabled,
                                                        SingleExcitationState::basis(schedule_.size(), 1));
    return fidelity(ideal_, actual);
}

FidelityCurve TimingSensitivity::curve(std::span<const double> grid, std::string label) const {
    check_grid(grid);
    FidelityCurve out;
    out.label = std::move(label);
    out.n = schedule_.n;
    out.points.resize(grid.size());

    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(grid.size()));
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](unsigned worker) {
        try {
            for (std::size_t i = worker; i < grid.size(); i += workers) {
                out.points[i] = {grid[i], fidelity_at(grid[i])};
            }
        } catch (...) {
            errors[worker] = std::current_exception();
        }
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run, w);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

Threshold TimingSensitivity::threshold(std::span<const double> grid, double f_star) const {
    return tolerance_threshold(curve(grid), f_star, [this](double eps) { return fidelity_at(eps); });
}

FidelityCurve fidelity_curve(const SiteProbabilityProfile& profile, double j1, std::span<const double> grid) {
    return TimingSensitivity(profile, j1).curve(grid);
}

Threshold tolerance_threshold(const FidelityCurve& curve, double f_star) {
    const std::size_t i = first_drop(curve, f_star);
    if (i == curve.points.size()) {
        return {curve.points.back().eps_scaled, true};
    }
    if (i == 0) {
        return {curve.points.front().eps_scaled, false};
    }
    const FidelityPoint& lo = curve.points[i - 1];
    const FidelityPoint& hi = curve.points[i];
    const double w = (lo.fidelity - f_star) / (lo.fidelity - hi.fidelity);
    return {lo.eps_scaled + w * (hi.eps_scaled - lo.eps_scaled), false};
}

Threshold tolerance_threshold(const FidelityCurve& curve, double f_star,
                              const std::function<double(double)>& fidelity_at) {
    const std::size_t i = first_drop(curve, f_star);
    if (i == curve.points.size()) {
        return {curve.points.back().eps_scaled, true};
    }
    if (i == 0) {
        return {curve.points.front().eps_scaled, false};
    }
    double lo = curve.points[i - 1].eps_scaled;
    double hi = curve.points[i].eps_scaled;
    if (curve.points[i - 1].fidelity == f_star) {
        return {lo, false};
    }
    // Invariant: F(lo) >= f_star > F(hi).
    for (int step = 0; step < kMaxBisectionSteps && hi - lo > kBisectionRelativeWidth * hi; ++step) {
        const double mid = 0.5 * (lo + hi);
        if (fidelity_at(mid) >= f_star) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {0.5 * (lo + hi), false};
}

std::vector<double> uniform_grid(double eps_max, int steps) {
    if (steps < 1) {
        throw std::invalid_argument("grid needs at least one step");
    }
    if (steps > 1 && !(eps_max > 0.0)) {
        throw std::invalid_argument("eps_max must be positive");
    }
    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        grid[static_cast<std::size_t>(i)] = steps == 1 ? 0.0 : eps_max * i / (steps - 1);
    }
    return grid;
}

double SensitivityReport::spread() const {
    if (rows.empty()) {
        return 1.0;
    }
    const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(), [](const ScalingRow& a, const ScalingRow& b) {
        return a.n_times_eps_star < b.n_times_eps_star;
    });
    return hi->n_times_eps_star / lo->n_times_eps_star;
}

SensitivityReport scaling_analysis(const ProfileFamily& family, const std::vector<int>& chain_counts, double j1,
                                   double f_star, const SweepGrid& grid) {
    if (chain_counts.empty()) {
        throw std::invalid_argument("scaling analysis needs at least one chain count");
    }
    check_level(f_star);
    SensitivityReport report;
    for (const int n : chain_counts) {
        const TimingSensitivity sensitivity(family(n), j1);
        double eps_max = grid.eps_max_times_n / n;
        Threshold th = sensitivity.threshold(uniform_grid(eps_max, grid.steps), f_star);
        for (int widen = 0; th.unbounded && widen < grid.max_widenings; ++widen) {
            eps_max *= 2.0;
            th = sensitivity.threshold(uniform_grid(eps_max, grid.steps), f_star);
        }
        report.rows.push_back({n, th.eps_scaled, n * th.eps_scaled, th.unbounded});
    }
    return report;
}

SensitivityReport threshold_levels(const TimingSensitivity& sensitivity, std::span<const double> grid,
                                   const std::vector<double>& levels) {
    const FidelityCurve curve = sensitivity.curve(grid);
    SensitivityReport report;
    for (const double level : levels) {
        const Threshold th =
            tolerance_threshold(curve, level, [&sensitivity](double eps) { return sensitivity.fidelity_at(eps); });
        report.thresholds[level] = th.eps_scaled;
    }
    return report;
}

unsigned worker_count() {
    if (const char* env = std::getenv("SPINFORGE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace spinforge
