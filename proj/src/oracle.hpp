#pragma once

#include <Eigen/Dense>
#include <string>

#include "model.hpp"

namespace tfwl {

inline constexpr int kDefaultSiteCap = 12;

// Dense real-symmetric Hamiltonian over the 2^n computational basis.
// Basis index: bit i of the index is (1 - sigma_i)/2 for site rank i
// (lexicographic coordinate order), bit 0 least significant.
struct DenseHamiltonian {
  int n_sites = 0;
  Eigen::VectorXd diagonal;          // classical energies H(sigma)
  std::vector<double> field;         // transverse couplings, -lambda_i off-diagonal
  Eigen::MatrixXd to_dense() const;
};

DenseHamiltonian build_hamiltonian(const Model& m, int site_cap = kDefaultSiteCap);

// One eigendecomposition serves every observable at the model's beta.
struct ThermalSolution {
  int n_sites = 0;
  double beta = 0.0;
  Eigen::VectorXd eigenvalues;
  // diagonal of the thermal density matrix in the computational basis
  Eigen::VectorXd basis_weights;
  double residual_norm = 0.0;  // max_k |H v_k - E_k v_k| / |H|
};

ThermalSolution solve_thermal(const Model& m, int site_cap = kDefaultSiteCap);

double thermal_expectation(const ThermalSolution& sol, const Observable& f);
double thermal_truncated_correlation(const ThermalSolution& sol, const Observable& f,
                                     const Observable& g);

// convenience wrappers building a fresh decomposition
double thermal_expectation(const Model& m, const Observable& f, int site_cap = kDefaultSiteCap);
double thermal_truncated_correlation(const Model& m, const Observable& f, const Observable& g,
                                     int site_cap = kDefaultSiteCap);

// Row-major binary dump: 16-byte header (magic "TFWL", u32 n_sites, u32
// reserved, u32 padding, both zero), then 2^n * 2^n doubles.
void dump_matrix(const DenseHamiltonian& h, const std::string& path);

}  // namespace tfwl
