#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spinforge/dynamics.hpp"
#include "spinforge/types.hpp"

namespace spinforge {

// Accumulated timing error: every interval is dilated by epsilon, so pulse k
// fires k * epsilon late. Throws if an interval would become negative (or
// zero for a nonzero epsilon).
std::vector<double> perturbed_intervals(const SynthesisSchedule& schedule, double epsilon);

struct FidelityPoint {
    double eps_scaled = 0.0;  // J_1 * epsilon
    double fidelity = 0.0;
};

struct FidelityCurve {
    std::string label;
    int n = 0;
    std::vector<FidelityPoint> points;  // strictly increasing in eps_scaled
};

struct Threshold {
    double eps_scaled = 0.0;
    bool unbounded = false;  // fidelity never dropped below the level on the grid
};

// A synthesized schedule with its cached propagator and ideal (unperturbed)
// final state. Immutable once built; fidelity_at may be called concurrently.
class TimingSensitivity {
public:
    TimingSensitivity(const SiteProbabilityProfile& profile, double j1);

    // Fidelity with the ideal state after dilating every interval by eps_scaled / J_1.
    double fidelity_at(double eps_scaled) const;

    // Grid must be sorted, strictly increasing, nonnegative and start at 0.
    // Points are evaluated in parallel; results do not depend on thread count.
    FidelityCurve curve(std::span<const double> grid, std::string label = {}) const;

    // First crossing below f_star on the grid, refined by bisection.
    Threshold threshold(std::span<const double> grid, double f_star) const;

    const SynthesisSchedule& schedule() const { return schedule_; }
    const SingleExcitationState& ideal() const { return ideal_; }

private:
    SynthesisSchedule schedule_;
    SpectralPropagator propagator_;
    SingleExcitationState ideal_;
};

FidelityCurve fidelity_curve(const SiteProbabilityProfile& profile, double j1, std::span<const double> grid);

// Locates the first grid point with fidelity < f_star and interpolates
// linearly inside the bracketing pair. An exact hit on a grid point returns
// that point.
Threshold tolerance_threshold(const FidelityCurve& curve, double f_star);

// Same bracket, refined by bisection on `fidelity_at` to relative width 1e-3.
Threshold tolerance_threshold(const FidelityCurve& curve, double f_star,
                              const std::function<double(double)>& fidelity_at);

// steps points evenly spaced on [0, eps_max]; steps == 1 gives {0}.
std::vector<double> uniform_grid(double eps_max, int steps);

using ProfileFamily = std::function<SiteProbabilityProfile(int chains)>;

struct ScalingRow {
    int n = 0;
    double eps_star = 0.0;
    double n_times_eps_star = 0.0;
    bool unbounded = false;
};

struct SensitivityReport {
    std::map<double, double> thresholds;  // fidelity level -> eps_scaled*
    std::vector<ScalingRow> rows;

    // max / min of N * eps* over rows; 1 for a single row.
    double spread() const;
};

struct SweepGrid {
    double eps_max_times_n = 0.25;  // grid for size N spans [0, eps_max_times_n / N]
    int steps = 100;
    int max_widenings = 8;          // grid doubles while no crossing is found
};

SensitivityReport scaling_analysis(const ProfileFamily& family, const std::vector<int>& chain_counts, double j1,
                                   double f_star, const SweepGrid& grid = {});

// Thresholds at several fidelity levels for one schedule.
SensitivityReport threshold_levels(const TimingSensitivity& sensitivity, std::span<const double> grid,
                                   const std::vector<double>& levels);

// Worker threads for sweeps: SPINFORGE_THREADS if set and positive, else the
// hardware concurrency.
unsigned worker_count();

}  // namespace spinforge
