#include "spinforge/chain_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinforge {

NetworkHamiltonian build_network_hamiltonian(const CouplingProfile& couplings) {
    const ChainSize size = couplings.size();
    const int n = size.chains();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size.sites(), size.sites());

    if (n == 1) {
        h(0, 1) = h(1, 0) = 2.0 * couplings.at(1);
        return {std::move(h), size};
    }

    const double root2 = std::sqrt(2.0);
    // 0-based: site s lives at s - 1.
    auto couple = [&h](int site_a, int site_b, double value) {
        h(site_a - 1, site_b - 1) = value;
        h(site_b - 1, site_a - 1) = value;
    };

    couple(1, 2, root2 * couplings.at(1));
    couple(1, 3, root2 * couplings.at(1));
    for (int k = 2; k < n; ++k) {
        const double j = couplings.at(k);
        couple(2 * k - 2, 2 * k, j);
        couple(2 * k - 2, 2 * k + 1, j);
        couple(2 * k - 1, 2 * k, -j);
        couple(2 * k - 1, 2 * k + 1, -j);
    }
    couple(2 * n - 2, 2 * n, root2 * couplings.at(n));
    couple(2 * n - 1, 2 * n, -root2 * couplings.at(n));

    return {std::move(h), size};
}

Eigen::MatrixXd virtual_basis_transform(ChainSize size) {
    const int dim = size.sites();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
    const double s = 1.0 / std::sqrt(2.0);
    t(0, 0) = 1.0;
    for (int k = 1; k < size.chains(); ++k) {
        // |2k,2k+1+> then |2k,2k+1->
        t(2 * k - 1, 2 * k - 1) = s;
        t(2 * k - 1, 2 * k) = s;
        t(2 * k, 2 * k - 1) = s;
        t(2 * k, 2 * k) = -s;
    }
    t(dim - 1, dim - 1) = 1.0;
    return t;
}

Eigen::MatrixXd pulse_operator(int site, ChainSize size) {
    if (site < 1 || site > size.sites()) {
        throw std::out_of_range("pulse site " + std::to_string(site) + " outside 1.." +
                                std::to_string(size.sites()));
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Ones(size.sites());
    diag(site - 1) = -1.0;
    return diag.asDiagonal();
}

}  // namespace spinforge
