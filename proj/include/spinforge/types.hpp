#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spinforge {

using Complex = std::complex<double>;

// Number of virtual 2-chains N. The physical network has 2N sites, indexed
// 1..2N at every public interface; storage is 0-based.
class ChainSize {
public:
    explicit ChainSize(int chains);

    int chains() const { return chains_; }
    int sites() const { return 2 * chains_; }

    friend bool operator==(ChainSize, ChainSize) = default;

private:
    int chains_;
};

// Engineered XX couplings J_1..J_N, one per virtual chain. All strictly positive.
class CouplingProfile {
public:
    explicit CouplingProfile(std::vector<double> values);

    ChainSize size() const { return ChainSize(static_cast<int>(values_.size())); }
    std::span<const double> values() const { return values_; }
    // 1-based chain index.
    double at(int k) const { return values_.at(static_cast<std::size_t>(k - 1)); }

private:
    std::vector<double> values_;
};

// Probabilities P_1..P_2N on the physical sites. Nonnegative, sums to 1.
class SiteProbabilityProfile {
public:
    explicit SiteProbabilityProfile(std::vector<double> p);

    ChainSize size() const { return ChainSize(static_cast<int>(p_.size() / 2)); }
    std::span<const double> values() const { return p_; }
    double at(int site) const { return p_.at(static_cast<std::size_t>(site - 1)); }

private:
    std::vector<double> p_;
};

// Probabilities q_1..q_2N on the virtual basis
// [|1>, |2,3+>, |2,3->, |4,5+>, ..., |2N-2,2N-1->, |2N>].
//
// q_2k >= q_2k+1 always. The probabilities alone do not say which of the
// physical sites 2k, 2k+1 carries the sum sqrt(q_2k) + sqrt(q_2k+1); pair k is
// "inverted" when the odd site 2k+1 does (the two virtual amplitudes then have
// opposite signs).
class VirtualProbabilityProfile {
public:
    explicit VirtualProbabilityProfile(std::vector<double> q, std::vector<bool> inverted_pairs = {});

    ChainSize size() const { return ChainSize(static_cast<int>(q_.size() / 2)); }
    std::span<const double> values() const { return q_; }
    double at(int index) const { return q_.at(static_cast<std::size_t>(index - 1)); }
    // Interior pair k = 1..N-1 (sites 2k, 2k+1).
    bool pair_inverted(int k) const { return inverted_.at(static_cast<std::size_t>(k - 1)); }
    bool any_inverted() const;

private:
    std::vector<double> q_;
    std::vector<bool> inverted_;
};

// A_0..A_N, the amplitude still in transit after virtual chain k.
struct ResidualWeights {
    std::vector<double> a;

    double at(int k) const { return a.at(static_cast<std::size_t>(k)); }
};

// Normalized amplitude vector in the single-excitation sector, site ordering 1..2N.
class SingleExcitationState {
public:
    explicit SingleExcitationState(Eigen::VectorXcd amplitudes);

    // |site> for 1 <= site <= 2N.
    static SingleExcitationState basis(ChainSize size, int site);

    ChainSize size() const { return ChainSize(static_cast<int>(amplitudes_.size() / 2)); }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    Complex at(int site) const { return amplitudes_(site - 1); }
    std::vector<double> probabilities() const;

private:
    Eigen::VectorXcd amplitudes_;
};

// Output of the inverse problem. Branch is fixed at m_k = 0, n_k = N.
struct SynthesisSchedule {
    int n = 0;
    double j1 = 1.0;
    std::vector<double> couplings;  // J_1..J_N
    std::vector<double> intervals;  // t_1..t_N, t_k between pulse k-1 and pulse k
    std::vector<double> tails;      // tau_1..tau_{N+1}, tau_{N+1} = t_N
    std::vector<double> phases;     // final local phase layer, one per site, in [0, 2pi)

    ChainSize size() const { return ChainSize(n); }
    CouplingProfile coupling_profile() const { return CouplingProfile(couplings); }
};

// Throws std::invalid_argument when the schedule's vectors are inconsistent
// with n or violate the tail-time relations.
void validate(const SynthesisSchedule& schedule);

}  // namespace spinforge
