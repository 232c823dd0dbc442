#include "oracle.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace tfwl {

namespace {

void check_cap(const Model& m, int site_cap) {
  if (m.site_count() > site_cap) {
    std::ostringstream os;
    os << "exact solver cap exceeded: " << m.site_count() << " sites > cap " << site_cap;
    throw CapExceeded(os.str());
  }
}

// observable value on a basis state; support bit k of the table mask is set
// when the basis index has bit support[k] set (sigma = -1)
double eval_on_basis(const Observable& f, uint64_t basis) {
  uint32_t mask = 0;
  const auto& supp = f.support();
  for (size_t k = 0; k < supp.size(); ++k)
    if (basis & (uint64_t{1} << supp[k])) mask |= (1u << k);
  return f.value(mask);
}

}  // namespace

Eigen::MatrixXd DenseHamiltonian::to_dense() const {
  const int64_t dim = int64_t{1} << n_sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int64_t b = 0; b < dim; ++b) {
    h(b, b) = diagonal(b);
    for (int i = 0; i < n_sites; ++i) h(b ^ (int64_t{1} << i), b) -= field[i];
  }
  return h;
}

DenseHamiltonian build_hamiltonian(const Model& m, int site_cap) {
  check_cap(m, site_cap);
  DenseHamiltonian h;
  h.n_sites = m.site_count();
  h.field = m.fields();
  const int64_t dim = int64_t{1} << h.n_sites;
  h.diagonal.resize(dim);
  std::vector<int8_t> sigma(h.n_sites);
  for (int64_t b = 0; b < dim; ++b) {
    for (int i = 0; i < h.n_sites; ++i)
      sigma[i] = (b & (int64_t{1} << i)) ? int8_t{-1} : int8_t{1};
    h.diagonal(b) = m.energy(sigma);
  }
  return h;
}

ThermalSolution solve_thermal(const Model& m, int site_cap) {
  DenseHamiltonian h = build_hamiltonian(m, site_cap);
  Eigen::MatrixXd dense = h.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success) throw CheckFailed("eigendecomposition failed");

  ThermalSolution sol;
  sol.n_sites = h.n_sites;
  sol.beta = m.beta();
  sol.eigenvalues = es.eigenvalues();

  const auto& V = es.eigenvectors();
  const int64_t dim = sol.eigenvalues.size();
  const double e0 = sol.eigenvalues.minCoeff();
  Eigen::VectorXd w(dim);
  for (int64_t k = 0; k < dim; ++k) w(k) = std::exp(-sol.beta * (sol.eigenvalues(k) - e0));
  w /= w.sum();

  sol.basis_weights = (V.array().square().matrix() * w).eval();

  const double hnorm = dense.cwiseAbs().maxCoeff();
  double res = 0.0;
  for (int64_t k = 0; k < dim; ++k) {
    double r = (dense * V.col(k) - sol.eigenvalues(k) * V.col(k)).cwiseAbs().maxCoeff();
    res = std::max(res, r);
  }
  sol.residual_norm = hnorm > 0 ? res / hnorm : res;
  return sol;
}

double thermal_expectation(const ThermalSolution& sol, const Observable& f) {
  const int64_t dim = sol.basis_weights.size();
  double acc = 0.0;
  for (int64_t b = 0; b < dim; ++b) acc += sol.basis_weights(b) * eval_on_basis(f, b);
  return acc;
}

double thermal_truncated_correlation(const ThermalSolution& sol, const Observable& f,
                                     const Observable& g) {
  const int64_t dim = sol.basis_weights.size();
  double ef = 0.0, eg = 0.0, efg = 0.0;
  for (int64_t b = 0; b < dim; ++b) {
    const double w = sol.basis_weights(b);
    const double fv = eval_on_basis(f, b);
    const double gv = eval_on_basis(g, b);
    ef += w * fv;
    eg += w * gv;
    efg += w * fv * gv;
  }
  return efg - ef * eg;
}

double thermal_expectation(const Model& m, const Observable& f, int site_cap) {
  return thermal_expectation(solve_thermal(m, site_cap), f);
}

double thermal_truncated_correlation(const Model& m, const Observable& f, const Observable& g,
                                     int site_cap) {
  return thermal_truncated_correlation(solve_thermal(m, site_cap), f, g);
}

void dump_matrix(const DenseHamiltonian& h, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open matrix dump path: " + path);
  char header[16] = {};
  std::memcpy(header, "TFWL", 4);
  const uint32_t n = static_cast<uint32_t>(h.n_sites);
  std::memcpy(header + 4, &n, 4);
  out.write(header, sizeof(header));
  Eigen::MatrixXd dense = h.to_dense();
  const int64_t dim = dense.rows();
  std::vector<double> row(dim);
  for (int64_t r = 0; r < dim; ++r) {
    for (int64_t cidx = 0; cidx < dim; ++cidx) row[cidx] = dense(r, cidx);
    out.write(reinterpret_cast<const char*>(row.data()), dim * sizeof(double));
  }
  if (!out) throw InvalidInput("failed writing matrix dump: " + path);
}

}  // namespace tfwl
