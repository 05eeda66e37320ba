#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinforge/chain_model.hpp"
#include "spinforge/types.hpp"

namespace spinforge {

// exp(-i H t) on a two-site chain with hopping `coupling`:
// (a, b) -> (cos(Jt) a - i sin(Jt) b, -i sin(Jt) a + cos(Jt) b).
std::pair<Complex, Complex> two_site_rotation(double coupling, double t, std::pair<Complex, Complex> amps);

// Final state of the pulse sequence from |1>, assembled chain by chain in the
// virtual basis and mapped back to sites. The schedule's phase layer is not
// applied.
SingleExcitationState evolve_virtual_closed_form(const SynthesisSchedule& schedule);

// Eigendecomposition of a real symmetric H, reusable for exp(-i H t) at any t.
class SpectralPropagator {
public:
    explicit SpectralPropagator(const Eigen::MatrixXd& h);

    Eigen::MatrixXcd matrix(double t) const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, double t) const;

    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

private:
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
};

// exp(-i H t) from the spectral decomposition of H.
Eigen::MatrixXcd expm_symmetric(const NetworkHamiltonian& h, double t);

enum class Pulses { Enabled, Disabled };

// exp(-i H t_N) Z_{2N-1} exp(-i H t_{N-1}) ... Z_3 exp(-i H t_1) |initial>.
// Pulses are instantaneous; none follows the last interval.
SingleExcitationState propagate_full(const CouplingProfile& couplings, const std::vector<double>& intervals,
                                     Pulses pulses, const SingleExcitationState& initial);

// Same, reusing an existing propagator for H.
SingleExcitationState propagate_full(const SpectralPropagator& propagator, const std::vector<double>& intervals,
                                     Pulses pulses, const SingleExcitationState& initial);

// |<a|b>|^2
double fidelity(const SingleExcitationState& a, const SingleExcitationState& b);

struct TraceSample {
    double time = 0.0;
    std::vector<double> probabilities;
};

// Per-site probabilities at t = 0 and at samples_per_interval evenly spaced
// points inside each interval (the last one on the interval's end, just
// before its pulse). Z pulses do not move probability, so the pre- and
// post-pulse rows coincide.
std::vector<TraceSample> sample_evolution(const CouplingProfile& couplings, const std::vector<double>& intervals,
                                          int samples_per_interval, const SingleExcitationState& initial);

// Largest |a_j - b_j| over sites.
double max_amplitude_deviation(const SingleExcitationState& a, const SingleExcitationState& b);

}  // namespace spinforge
