#pragma once

#include <vector>

#include "spinforge/types.hpp"

namespace spinforge {

// Probabilities below this are treated as exactly zero when choosing branches.
inline constexpr double kZeroProbability = 1e-12;
// A cos^2 ratio may overshoot [0, 1] by at most this much before it is
// rejected as invalid input rather than clamped.
inline constexpr double kRatioSlack = 1e-9;

// Interior pairs: q_2k = (P_2k + P_2k+1)/2 + sqrt(P_2k P_2k+1),
//                 q_2k+1 = (P_2k + P_2k+1)/2 - sqrt(P_2k P_2k+1).
// The end sites map through unchanged (q_1 = P_1, q_2N = P_2N). Pair k is
// flagged inverted when P_2k+1 > P_2k.
VirtualProbabilityProfile site_to_virtual_probabilities(const SiteProbabilityProfile& p);

// Inverse of site_to_virtual_probabilities; the pair flags decide which site
// of each interior pair receives the larger weight.
SiteProbabilityProfile virtual_to_site_probabilities(const VirtualProbabilityProfile& q);

// A_0 = 1, A_k = sqrt(q_{2k+1} + ... + q_{2N}); A_N = 0.
ResidualWeights residual_weights(const VirtualProbabilityProfile& q);

// Per-chain rotation angles of the (m_k = 0, n_k = N) branch.
//   release[k] = 2 J_k (tau_k - tau_{k+1})   in [0, pi/2]
//   dwell[k]   = 2 J_k tau_{k+1}             in [N pi, N pi + pi/2]
// except for chains closing an inverted pair, whose dwell takes the mirrored
// value in [N pi - pi/2, N pi]. Empty chains (and everything after the weight runs out) take release = pi/2,
// dwell = N pi. The last chain always has release = 0.
struct ChainAngles {
    std::vector<double> release;
    std::vector<double> dwell;
};

ChainAngles chain_angles(const VirtualProbabilityProfile& q);

// Solves for couplings, intervals and tail times given the free scale j1, then
// fills the phase layer that maps the generated state onto the nonnegative
// real target sqrt(P).
SynthesisSchedule solve_schedule(const VirtualProbabilityProfile& q, double j1);

// Convenience: site_to_virtual_probabilities followed by solve_schedule.
SynthesisSchedule synthesize(const SiteProbabilityProfile& p, double j1);

struct CouplingBoundsReport {
    std::vector<double> ratios;  // J_k / J_1
    bool within_product = false;  // 1/(1 + 1/2N)^(k-1) <= J_k/J_1 <= (1 + 1/N)^(k-1)
    bool within_e = false;        // e^(-1/2) < J_k/J_1 < e
    bool pass = false;            // both
};

// The product bounds hold for every profile without inverted pairs and imply
// the e bounds. Mirrored dwells can break the product bounds, but the e bounds
// still hold for every profile.
CouplingBoundsReport coupling_bounds_check(const SynthesisSchedule& schedule);

// phi_j = arg(target_j) - arg(generated_j) wrapped into [0, 2pi); 0 where the
// target amplitude vanishes. Magnitudes must agree to 1e-8.
std::vector<double> phase_corrections(const SingleExcitationState& target, const SingleExcitationState& generated);

// Applies exp(i phi_j) to each site amplitude.
SingleExcitationState apply_phase_layer(const SingleExcitationState& state, const std::vector<double>& phases);

// sqrt(P_j) on every site.
SingleExcitationState magnitude_state(const SiteProbabilityProfile& p);

}  // namespace spinforge
