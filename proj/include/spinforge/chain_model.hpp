#pragma once

#include <Eigen/Dense>

#include "spinforge/types.hpp"

namespace spinforge {

// Single-excitation-sector Hamiltonian of the quasi-1D network.
struct NetworkHamiltonian {
    Eigen::MatrixXd matrix;
    ChainSize size;
};

// Builds the 2N x 2N hopping matrix. Interior block k couples sites
// {2k-2, 2k-1} to {2k, 2k+1} with +J_k from site 2k-2 and -J_k from site
// 2k-1. The two end blocks carry sqrt(2) J so that after the identifications
// |0,1-> := |1> and |2N,2N+1+> := |2N> every virtual chain has hopping 2 J_k.
// N = 1 collapses to [[0, 2J], [2J, 0]].
NetworkHamiltonian build_network_hamiltonian(const CouplingProfile& couplings);

// Rows are the virtual basis vectors written in the site basis:
// e_1, (e_2 + e_3)/sqrt2, (e_2 - e_3)/sqrt2, ..., e_2N.
Eigen::MatrixXd virtual_basis_transform(ChainSize size);

// Z on `site` (1-based) restricted to the single-excitation sector, global
// phase dropped: -1 at `site`, +1 elsewhere.
Eigen::MatrixXd pulse_operator(int site, ChainSize size);

}  // namespace spinforge
