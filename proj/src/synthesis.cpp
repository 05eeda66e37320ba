#include "spinforge/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spinforge/dynamics.hpp"

namespace spinforge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMagnitudeTolerance = 1e-8;
constexpr double kLastReleaseTolerance = 1e-8;
constexpr double kBoundSlack = 1e-12;

// Coerces a cos^2 ratio into [0, 1]; anything further out than kRatioSlack is
// an invalid profile, not rounding noise.
double clamp_ratio(double ratio, int chain) {
    if (ratio < -kRatioSlack || ratio > 1.0 + kRatioSlack || !std::isfinite(ratio)) {
        throw std::invalid_argument("cos^2 ratio " + std::to_string(ratio) + " for chain " + std::to_string(chain) +
                                    " lies outside [0, 1]");
    }
    return std::clamp(ratio, 0.0, 1.0);
}

double wrap_phase(double phi) {
    double w = std::fmod(phi, 2.0 * kPi);
    if (w < 0.0) {
        w += 2.0 * kPi;
    }
    if (w >= 2.0 * kPi) {
        w = 0.0;
    }
    return w;
}

// A_k^2 as plain tail sums, k = 0..N, accumulated from the right. The chain
// ratios divide by these directly; going through sqrt and back would leave the
// last ratio an ulp off 1, which acos turns into a 1e-8 angle.
std::vector<double> remaining_weight(const VirtualProbabilityProfile& q) {
    const int n = q.size().chains();
    const auto values = q.values();
    std::vector<double> tail(static_cast<std::size_t>(n) + 1, 0.0);
    double sum = 0.0;
    for (int k = n - 1; k >= 0; --k) {
        sum += values[static_cast<std::size_t>(2 * k)] + values[static_cast<std::size_t>(2 * k + 1)];
        tail[static_cast<std::size_t>(k)] = sum;
    }
    return tail;
}

}  // namespace

VirtualProbabilityProfile site_to_virtual_probabilities(const SiteProbabilityProfile& p) {
    const int n = p.size().chains();
    std::vector<double> q(p.values().begin(), p.values().end());
    std::vector<bool> inverted(static_cast<std::size_t>(n - 1), false);
    for (int k = 1; k < n; ++k) {
        const double ra = std::sqrt(p.at(2 * k));
        const double rb = std::sqrt(p.at(2 * k + 1));
        // (a + b)/2 +- sqrt(ab), written as squares so the minus branch stays >= 0.
        q[2 * k - 1] = 0.5 * (ra + rb) * (ra + rb);
        q[2 * k] = 0.5 * (ra - rb) * (ra - rb);
        inverted[static_cast<std::size_t>(k - 1)] = rb > ra;
    }
    return VirtualProbabilityProfile(std::move(q), std::move(inverted));
}

SiteProbabilityProfile virtual_to_site_probabilities(const VirtualProbabilityProfile& q) {
    const int n = q.size().chains();
    std::vector<double> p(q.values().begin(), q.values().end());
    for (int k = 1; k < n; ++k) {
        const double plus = std::sqrt(q.at(2 * k));
        const double minus = std::sqrt(q.at(2 * k + 1));
        const double sum = 0.5 * (plus + minus) * (plus + minus);
        const double difference = 0.5 * (plus - minus) * (plus - minus);
        p[2 * k - 1] = q.pair_inverted(k) ? difference : sum;
        p[2 * k] = q.pair_inverted(k) ? sum : difference;
    }
    return SiteProbabilityProfile(std::move(p));
}

ResidualWeights residual_weights(const VirtualProbabilityProfile& q) {
    std::vector<double> a = remaining_weight(q);
    for (double& x : a) {
        x = std::sqrt(x);
    }
    a[0] = 1.0;
    return ResidualWeights{std::move(a)};
}

ChainAngles chain_angles(const VirtualProbabilityProfile& q) {
    const int n = q.size().chains();
    const std::vector<double> tail = remaining_weight(q);
    const double base = n * kPi;

    ChainAngles angles;
    angles.release.reserve(static_cast<std::size_t>(n));
    angles.dwell.reserve(static_cast<std::size_t>(n));

    bool exhausted = false;
    for (int k = 1; k <= n; ++k) {
        const double remaining = tail[static_cast<std::size_t>(k - 1)];
        const double q_start = q.at(2 * k - 1);
        const double chain_weight = q_start + q.at(2 * k);

        exhausted = exhausted || remaining < kZeroProbability;
        double release = 0.5 * kPi;
        double dwell = base;
        if (!exhausted && chain_weight >= kZeroProbability) {
            release = std::acos(std::sqrt(clamp_ratio(chain_weight / remaining, k)));
            const double offset = std::acos(std::sqrt(clamp_ratio(q_start / chain_weight, k)));
            // sin(N pi - x) = -sin(N pi + x): the end of chain k picks up the
            // sign that sends the larger half of pair k onto the odd site.
            dwell = (k < n && q.pair_inverted(k)) ? base - offset : base + offset;
        }

        if (k == n) {
            // No pulse closes the last chain: tau_{N+1} = tau_N forces release 0.
            // The ratio is 1 analytically whenever weight remains.
            if (!exhausted && chain_weight >= kZeroProbability && release > kLastReleaseTolerance) {
                throw std::runtime_error("last chain does not absorb the residual weight (release angle " +
                                         std::to_string(release) + "); profile is inconsistent");
            }
            release = 0.0;
        }
        angles.release.push_back(release);
        angles.dwell.push_back(dwell);
    }
    return angles;
}

SynthesisSchedule solve_schedule(const VirtualProbabilityProfile& q, double j1) {
    if (!(j1 > 0.0) || !std::isfinite(j1)) {
        throw std::invalid_argument("J1 must be positive and finite");
    }
    const int n = q.size().chains();
    const ChainAngles angles = chain_angles(q);
    const auto un = static_cast<std::size_t>(n);

    SynthesisSchedule s;
    s.n = n;
    s.j1 = j1;
    s.couplings.resize(un);
    s.intervals.resize(un);
    s.tails.resize(un + 1);

    // 2 J_1 tau_1 = release_1 + dwell_1; then tau_{k+1}/tau_k = dwell_k / (release_k + dwell_k)
    // and J_k = dwell_k / (2 tau_{k+1}).
    s.tails[0] = (angles.release[0] + angles.dwell[0]) / (2.0 * j1);
    for (std::size_t k = 0; k < un; ++k) {
        const double total = angles.release[k] + angles.dwell[k];
        s.tails[k + 1] = s.tails[k] * (angles.dwell[k] / total);
        s.intervals[k] = s.tails[k] * (angles.release[k] / total);
        s.couplings[k] = angles.dwell[k] / (2.0 * s.tails[k + 1]);
    }
    s.couplings[0] = j1;
    // The last interval runs for the whole last tail.
    s.intervals[un - 1] = s.tails[un - 1];
    s.tails[un] = s.tails[un - 1];

    s.phases.assign(2 * un, 0.0);
    // Rotate every generated amplitude onto the positive real axis. Weights
    // below kZeroProbability were dropped, so the generated magnitudes, not
    // sqrt(P), are the reference here.
    const SingleExcitationState generated = evolve_virtual_closed_form(s);
    Eigen::VectorXcd magnitudes = generated.amplitudes().cwiseAbs().cast<Complex>();
    magnitudes /= magnitudes.norm();
    s.phases = phase_corrections(SingleExcitationState(std::move(magnitudes)), generated);
    return s;
}

SynthesisSchedule synthesize(const SiteProbabilityProfile& p, double j1) {
    return solve_schedule(site_to_virtual_probabilities(p), j1);
}

CouplingBoundsReport coupling_bounds_check(const SynthesisSchedule& schedule) {
    const int n = schedule.n;
    const double upper_step = 1.0 + 1.0 / n;
    const double lower_step = 1.0 / (1.0 + 0.5 / n);
    const double e = std::numbers::e;
    const double inv_sqrt_e = 1.0 / std::sqrt(e);

    CouplingBoundsReport report;
    report.within_e = true;
    report.within_product = true;
    const double j1 = schedule.couplings.front();
    for (int k = 1; k <= n; ++k) {
        const double ratio = schedule.couplings[static_cast<std::size_t>(k - 1)] / j1;
        report.ratios.push_back(ratio);
        const double upper = std::pow(upper_step, k - 1);
        const double lower = std::pow(lower_step, k - 1);
        report.within_product =
            report.within_product && ratio <= upper * (1.0 + kBoundSlack) && ratio >= lower * (1.0 - kBoundSlack);
        report.within_e = report.within_e && ratio < e && ratio > inv_sqrt_e;
    }
    report.pass = report.within_e && report.within_product;
    return report;
}

std::vector<double> phase_corrections(const SingleExcitationState& target, const SingleExcitationState& generated) {
    if (target.size() != generated.size()) {
        throw std::invalid_argument("phase_corrections: dimension mismatch");
    }
    const Eigen::VectorXcd& a = target.amplitudes();
    const Eigen::VectorXcd& b = generated.amplitudes();
    std::vector<double> phases(static_cast<std::size_t>(a.size()), 0.0);
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        const double mag = std::abs(a(j));
        if (std::abs(mag - std::abs(b(j))) > kMagnitudeTolerance) {
            throw std::invalid_argument("phase_corrections: magnitudes differ at site " + std::to_string(j + 1));
        }
        if (mag > kZeroProbability) {
            phases[static_cast<std::size_t>(j)] = wrap_phase(std::arg(a(j)) - std::arg(b(j)));
        }
    }
    return phases;
}

SingleExcitationState apply_phase_layer(const SingleExcitationState& state, const std::vector<double>& phases) {
    const Eigen::VectorXcd& amps = state.amplitudes();
    if (static_cast<Eigen::Index>(phases.size()) != amps.size()) {
        throw std::invalid_argument("phase layer length does not match state dimension");
    }
    Eigen::VectorXcd out(amps.size());
    for (Eigen::Index j = 0; j < amps.size(); ++j) {
        out(j) = amps(j) * std::polar(1.0, phases[static_cast<std::size_t>(j)]);
    }
    return SingleExcitationState(std::move(out));
}

SingleExcitationState magnitude_state(const SiteProbabilityProfile& p) {
    const auto values = p.values();
    Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t j = 0; j < values.size(); ++j) {
        v(static_cast<Eigen::Index>(j)) = std::sqrt(values[j]);
    }
    // Normalization is only within 1e-10 for profiles; rescale exactly.
    v /= v.norm();
    return SingleExcitationState(std::move(v));
}

}  // namespace spinforge
