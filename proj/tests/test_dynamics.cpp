#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "spinforge/dynamics.hpp"
#include "spinforge/state_library.hpp"
#include "spinforge/synthesis.hpp"
#include "test_support.hpp"

using namespace spinforge;
using std::numbers::pi;

namespace {

double unitarity_error(const Eigen::MatrixXcd& u) {
    return (u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

SingleExcitationState random_state(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(2 * n);
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        v(j) = Complex(g(rng), g(rng));
    }
    return SingleExcitationState(v / v.norm());
}

}  // namespace

TEST_CASE("two-site rotation") {
    const auto same = two_site_rotation(1.3, 0.0, {Complex(0.6, 0.0), Complex(0.0, 0.8)});
    CHECK(std::abs(same.first - Complex(0.6, 0.0)) == 0.0);
    CHECK(std::abs(same.second - Complex(0.0, 0.8)) == 0.0);

    const auto moved = two_site_rotation(1.0, pi / 2, {Complex(1.0), Complex(0.0)});
    CHECK(std::abs(moved.first) < 1e-15);
    CHECK(std::abs(moved.second - Complex(0.0, -1.0)) < 1e-15);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int i = 0; i < 100; ++i) {
        const std::pair<Complex, Complex> in{{g(rng), g(rng)}, {g(rng), g(rng)}};
        const auto out = two_site_rotation(g(rng), g(rng), in);
        CHECK(std::norm(out.first) + std::norm(out.second) ==
              doctest::Approx(std::norm(in.first) + std::norm(in.second)).epsilon(1e-14));
    }
}

TEST_CASE("matrix exponential of a symmetric Hamiltonian") {
    SUBCASE("t = 0 is the identity") {
        const auto h = build_network_hamiltonian(CouplingProfile({1.0, 0.4, 2.0}));
        CHECK((expm_symmetric(h, 0.0) - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("two-site closed form") {
        const double j = 0.37;
        const auto h = build_network_hamiltonian(CouplingProfile({j}));
        for (const double t : {0.1, 1.0, 4.2, 17.0}) {
            Eigen::Matrix2cd expected;
            const double c = std::cos(2 * j * t), s = std::sin(2 * j * t);
            expected << c, Complex(0, -s), Complex(0, -s), c;
            CHECK((expm_symmetric(h, t) - expected).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
    SUBCASE("unitary and consistent with Pade for random networks") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> time(0.0, 20.0);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = testing::random_chain_count(rng, 1, 20);
            const auto h = build_network_hamiltonian(CouplingProfile(testing::random_couplings(rng, n)));
            const double t = time(rng);
            const Eigen::MatrixXcd u = expm_symmetric(h, t);
            REQUIRE(unitarity_error(u) < 1e-12);
            const Eigen::MatrixXcd pade = (Complex(0, -t) * h.matrix.cast<Complex>()).exp();
            REQUIRE((u - pade).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    SUBCASE("non-symmetric input is rejected") {
        Eigen::MatrixXd m(2, 2);
        m << 0, 1, 2, 0;
        CHECK_THROWS_AS(SpectralPropagator{m}, std::invalid_argument);
    }
}

TEST_CASE("full propagation") {
    SUBCASE("zero intervals leave the state alone") {
        const auto psi0 = SingleExcitationState::basis(ChainSize(3), 1);
        const auto out = propagate_full(CouplingProfile({1, 2, 3}), {0, 0, 0}, Pulses::Enabled, psi0);
        CHECK(max_amplitude_deviation(out, psi0) == 0.0);
    }
    SUBCASE("single chain reaches i|2>") {
        const double t = 3.0 * pi / 4.0;  // 2 J t = 3 pi / 2
        const auto out = propagate_full(CouplingProfile({1.0}), {t}, Pulses::Enabled,
                                        SingleExcitationState::basis(ChainSize(1), 1));
        CHECK(std::abs(out.at(1)) < 1e-14);
        CHECK(std::abs(out.at(2) - Complex(0, 1)) < 1e-14);
    }
    SUBCASE("N = 2 W schedule agrees with the closed form") {
        const auto s = synthesize(w_state_profile(2), 1.0);
        const auto dense = propagate_full(s.coupling_profile(), s.intervals, Pulses::Enabled,
                                          SingleExcitationState::basis(ChainSize(2), 1));
        const auto closed = evolve_virtual_closed_form(s);
        CHECK(max_amplitude_deviation(dense, closed) < 1e-10);

        const double r = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(closed.at(1)) < 1e-15);
        CHECK(std::abs(closed.at(2) - Complex(0, -r)) < 1e-14);
        CHECK(std::abs(closed.at(3)) < 1e-15);
        CHECK(std::abs(closed.at(4) - Complex(-r, 0)) < 1e-14);
    }
    SUBCASE("dimension mismatches") {
        const auto psi0 = SingleExcitationState::basis(ChainSize(2), 1);
        CHECK_THROWS_AS(propagate_full(CouplingProfile({1, 1, 1}), {1, 1, 1}, Pulses::Enabled, psi0),
                        std::invalid_argument);
        CHECK_THROWS_AS(propagate_full(CouplingProfile({1, 1}), {1}, Pulses::Enabled, psi0), std::invalid_argument);
    }
}

TEST_CASE("closed form with no elapsed time") {
    SynthesisSchedule s;
    s.n = 3;
    s.couplings = {1.0, 1.2, 0.9};
    s.intervals = {0.0, 0.0, 0.0};
    s.tails = {0.0, 0.0, 0.0, 0.0};
    s.phases.assign(6, 0.0);
    const auto psi = evolve_virtual_closed_form(s);
    CHECK(std::abs(psi.at(1) - Complex(1.0)) < 1e-15);
    for (int j = 2; j <= 6; ++j) {
        CHECK(std::abs(psi.at(j)) == 0.0);
    }
}

TEST_CASE("fidelity") {
    const auto e1 = SingleExcitationState::basis(ChainSize(1), 1);
    const auto e2 = SingleExcitationState::basis(ChainSize(1), 2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(fidelity(e1, e1) == 1.0);
    CHECK(fidelity(e1, e2) == 0.0);
    CHECK(fidelity(e1, SingleExcitationState(Eigen::Vector2cd(r, r))) == doctest::Approx(0.5));
    CHECK_THROWS_AS(fidelity(e1, SingleExcitationState::basis(ChainSize(2), 1)), std::invalid_argument);
}

TEST_CASE("evolution trace") {
    const auto s = synthesize(w_state_profile(2), 1.0);
    const auto psi0 = SingleExcitationState::basis(ChainSize(2), 1);

    SUBCASE("one sample per interval hits the interval endpoints") {
        const auto trace = sample_evolution(s.coupling_profile(), s.intervals, 1, psi0);
        REQUIRE(trace.size() == 3);
        const auto after_first = propagate_full(s.coupling_profile(), {s.intervals[0], 0.0}, Pulses::Enabled, psi0);
        const auto p1 = after_first.probabilities();
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(trace[1].probabilities[j] == doctest::Approx(p1[j]).epsilon(1e-12));
        }
        CHECK(trace[2].time == doctest::Approx(s.tails[0]));
        const double expected[] = {0.0, 0.5, 0.0, 0.5};
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(trace[2].probabilities[j] == doctest::Approx(expected[j]).epsilon(1e-10));
        }
    }
    SUBCASE("rows stay normalized") {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> time(0.0, 3.0);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = testing::random_chain_count(rng, 1, 10);
            std::vector<double> t(static_cast<std::size_t>(n));
            for (double& x : t) {
                x = time(rng);
            }
            const auto trace = sample_evolution(CouplingProfile(testing::random_couplings(rng, n)), t, 7,
                                                SingleExcitationState::basis(ChainSize(n), 1));
            REQUIRE(trace.size() == static_cast<std::size_t>(7 * n + 1));
            for (const auto& row : trace) {
                double sum = 0.0;
                for (const double p : row.probabilities) {
                    sum += p;
                }
                REQUIRE(std::abs(sum - 1.0) < 1e-10);
            }
        }
    }
    SUBCASE("at least one sample per interval") {
        CHECK_THROWS_AS(sample_evolution(s.coupling_profile(), s.intervals, 0, psi0), std::invalid_argument);
    }
}

TEST_CASE("property: both engines agree on synthesized schedules") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = testing::random_chain_count(rng, 1, 25);
        const auto p = random_profile(n, rng(), trial % 2 == 1);
        const auto s = synthesize(p, 1.0);
        const auto closed = evolve_virtual_closed_form(s);
        const auto dense = propagate_full(s.coupling_profile(), s.intervals, Pulses::Enabled,
                                          SingleExcitationState::basis(ChainSize(n), 1));
        REQUIRE(max_amplitude_deviation(closed, dense) < 1e-9);
        const auto probs = dense.probabilities();
        for (int j = 1; j <= 2 * n; ++j) {
            REQUIRE(std::abs(probs[static_cast<std::size_t>(j - 1)] - p.at(j)) < 1e-10);
        }
    }
}

TEST_CASE("property: unitarity through arbitrary pulse sequences") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> time(0.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = testing::random_chain_count(rng, 1, 20);
        std::vector<double> t(static_cast<std::size_t>(n));
        for (double& x : t) {
            x = time(rng);
        }
        const auto psi = random_state(rng, n);
        const auto out = propagate_full(CouplingProfile(testing::random_couplings(rng, n)), t,
                                        trial % 2 ? Pulses::Enabled : Pulses::Disabled, psi);
        REQUIRE(std::abs(out.amplitudes().squaredNorm() - 1.0) < 1e-12);
    }
}

TEST_CASE("property: without pulses the excitation stays in the first virtual chain") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> time(0.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = testing::random_chain_count(rng, 2, 20);
        std::vector<double> t(static_cast<std::size_t>(n));
        for (double& x : t) {
            x = time(rng);
        }
        const auto out = propagate_full(CouplingProfile(testing::random_couplings(rng, n)), t, Pulses::Disabled,
                                        SingleExcitationState::basis(ChainSize(n), 1));
        for (int j = 4; j <= 2 * n; ++j) {
            REQUIRE(std::abs(out.at(j)) < 1e-12);
        }
        // (|2> - |3>)/sqrt2 stays empty: sites 2 and 3 carry equal amplitude.
        REQUIRE(std::abs(out.at(2) - out.at(3)) < 1e-12);
    }
}
