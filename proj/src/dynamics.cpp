#include "spinforge/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinforge {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

void check_dimensions(const SingleExcitationState& a, const SingleExcitationState& b, const char* what) {
    if (a.amplitudes().size() != b.amplitudes().size()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.amplitudes().size()) + " vs " +
                                    std::to_string(b.amplitudes().size()) + ")");
    }
}

void check_intervals(const std::vector<double>& intervals, ChainSize size) {
    if (intervals.size() != static_cast<std::size_t>(size.chains())) {
        throw std::invalid_argument("expected " + std::to_string(size.chains()) + " intervals, got " +
                                    std::to_string(intervals.size()));
    }
}

}  // namespace

std::pair<Complex, Complex> two_site_rotation(double coupling, double t, std::pair<Complex, Complex> amps) {
    const double c = std::cos(coupling * t);
    const Complex s = kMinusI * std::sin(coupling * t);
    return {c * amps.first + s * amps.second, s * amps.first + c * amps.second};
}

SingleExcitationState evolve_virtual_closed_form(const SynthesisSchedule& schedule) {
    validate(schedule);
    const ChainSize size = schedule.size();
    const int n = size.chains();

    Eigen::VectorXcd virt = Eigen::VectorXcd::Zero(size.sites());
    double residual = 1.0;  // A_{k-1}
    Complex phase{1.0, 0.0};  // (-i)^{k-1}
    for (int k = 1; k <= n; ++k) {
        const auto i = static_cast<std::size_t>(k - 1);
        const double two_j = 2.0 * schedule.couplings[i];
        const double release = two_j * (schedule.tails[i] - schedule.tails[i + 1]);
        const double dwell = two_j * schedule.tails[i + 1];
        const double kept = residual * std::cos(release);

        virt(2 * k - 2) = phase * kept * std::cos(dwell);
        virt(2 * k - 1) = phase * kMinusI * kept * std::sin(dwell);

        residual *= std::sin(two_j * schedule.intervals[i]);
        phase *= kMinusI;
    }
    return SingleExcitationState(virtual_basis_transform(size).transpose() * virt);
}

SpectralPropagator::SpectralPropagator(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols()) {
        throw std::invalid_argument("propagator: Hamiltonian is not square");
    }
    if (h.size() > 0 && (h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("propagator: Hamiltonian is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("propagator: symmetric eigensolver did not converge");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

Eigen::MatrixXcd SpectralPropagator::matrix(double t) const {
    if (t == 0.0) {
        return Eigen::MatrixXcd::Identity(eigenvalues_.size(), eigenvalues_.size());
    }
    Eigen::VectorXcd phases(eigenvalues_.size());
    for (Eigen::Index j = 0; j < eigenvalues_.size(); ++j) {
        phases(j) = std::polar(1.0, -eigenvalues_(j) * t);
    }
    const Eigen::MatrixXcd v = eigenvectors_.cast<Complex>();
    return v * phases.asDiagonal() * v.transpose();
}

Eigen::VectorXcd SpectralPropagator::apply(const Eigen::VectorXcd& psi, double t) const {
    if (t == 0.0) {
        return psi;
    }
    Eigen::VectorXcd coeffs = eigenvectors_.transpose() * psi;
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
        coeffs(j) *= std::polar(1.0, -eigenvalues_(j) * t);
    }
    return eigenvectors_ * coeffs;
}

Eigen::MatrixXcd expm_symmetric(const NetworkHamiltonian& h, double t) {
    return SpectralPropagator(h.matrix).matrix(t);
}

SingleExcitationState propagate_full(const CouplingProfile& couplings, const std::vector<double>& intervals,
                                     Pulses pulses, const SingleExcitationState& initial) {
    const NetworkHamiltonian h = build_network_hamiltonian(couplings);
    if (initial.size() != h.size) {
        throw std::invalid_argument("initial state does not match the network size");
    }
    check_intervals(intervals, h.size);
    return propagate_full(SpectralPropagator(h.matrix), intervals, pulses, initial);
}

SingleExcitationState propagate_full(const SpectralPropagator& propagator, const std::vector<double>& intervals,
                                     Pulses pulses, const SingleExcitationState& initial) {
    const ChainSize size = initial.size();
    if (propagator.eigenvalues().size() != size.sites()) {
        throw std::invalid_argument("propagator does not match the initial state dimension");
    }
    check_intervals(intervals, size);

    Eigen::VectorXcd psi = initial.amplitudes();
    const int n = size.chains();
    for (int k = 1; k <= n; ++k) {
        psi = propagator.apply(psi, intervals[static_cast<std::size_t>(k - 1)]);
        if (k < n && pulses == Pulses::Enabled) {
            // Z_{2k+1}: diagonal sign flip on that site.
            psi(2 * k) = -psi(2 * k);
        }
    }
    return SingleExcitationState(std::move(psi));
}

double fidelity(const SingleExcitationState& a, const SingleExcitationState& b) {
    check_dimensions(a, b, "fidelity");
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

std::vector<TraceSample> sample_evolution(const CouplingProfile& couplings, const std::vector<double>& intervals,
                                          int samples_per_interval, const SingleExcitationState& initial) {
    if (samples_per_interval < 1) {
        throw std::invalid_argument("samples_per_interval must be at least 1");
    }
    const NetworkHamiltonian h = build_network_hamiltonian(couplings);
    if (initial.size() != h.size) {
        throw std::invalid_argument("initial state does not match the network size");
    }
    check_intervals(intervals, h.size);
    const SpectralPropagator propagator(h.matrix);

    auto probabilities = [](const Eigen::VectorXcd& psi) {
        std::vector<double> p(static_cast<std::size_t>(psi.size()));
        for (Eigen::Index j = 0; j < psi.size(); ++j) {
            p[static_cast<std::size_t>(j)] = std::norm(psi(j));
        }
        return p;
    };

    std::vector<TraceSample> trace;
    trace.reserve(intervals.size() * static_cast<std::size_t>(samples_per_interval) + 1);
    Eigen::VectorXcd psi = initial.amplitudes();
    trace.push_back({0.0, probabilities(psi)});

    const int n = h.size.chains();
    double start = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double length = intervals[static_cast<std::size_t>(k - 1)];
        for (int s = 1; s <= samples_per_interval; ++s) {
            const double dt = length * s / samples_per_interval;
            trace.push_back({start + dt, probabilities(propagator.apply(psi, dt))});
        }
        psi = propagator.apply(psi, length);
        if (k < n) {
            psi(2 * k) = -psi(2 * k);
        }
        start += length;
    }
    return trace;
}

double max_amplitude_deviation(const SingleExcitationState& a, const SingleExcitationState& b) {
    check_dimensions(a, b, "max_amplitude_deviation");
    return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

}  // namespace spinforge
