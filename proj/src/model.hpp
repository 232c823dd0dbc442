#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lattice.hpp"

namespace tfwl {

enum class WeightSign { Boltzmann, Paper };

// One monomial c_A * prod_{i in A} sigma_i of the classical Hamiltonian.
struct Term {
  std::vector<int> sites;  // site ranks, sorted, distinct, nonempty
  double coeff = 0.0;
};

struct ModelConstants {
  double C = 0.0;         // 2 * max_i sum_{A contains i} |c_A|
  int R = 0;              // max l-infinity diameter over term supports
  double lambda_max = 0.0;
};

// Raw model description as parsed from a config file, before validation.
struct ModelInput {
  std::vector<int> box;
  bool periodic = false;
  double beta = 0.0;
  struct RawTerm {
    std::vector<Coord> sites;
    double coeff = 0.0;
  };
  std::vector<RawTerm> terms;
  std::vector<double> fields;  // per site, lexicographic order
  WeightSign weight_sign = WeightSign::Boltzmann;
  std::optional<int> range_cap;
};

// Validated, immutable model: lattice + multilinear classical Hamiltonian +
// transverse fields + inverse temperature. Terms are deduplicated by support
// (coefficients summed, exact zeros dropped) and sorted.
class Model {
 public:
  static Model validate(const ModelInput& raw);

  const Lattice& lattice() const { return lattice_; }
  double beta() const { return beta_; }
  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<double>& fields() const { return fields_; }
  double field(int site) const { return fields_[site]; }
  WeightSign weight_sign() const { return weight_sign_; }
  // sign s of the exponent in the target density exp[s * Hhat]
  double sign() const { return weight_sign_ == WeightSign::Boltzmann ? -1.0 : 1.0; }
  int site_count() const { return lattice_.site_count(); }

  double energy(std::span<const int8_t> sigma) const;
  // H(sigma^i) - H(sigma); exact negation under repeated flip by construction
  double flip_delta(std::span<const int8_t> sigma, int site) const;

  const ModelConstants& constants() const { return constants_; }
  const std::vector<int>& terms_at(int site) const { return terms_at_[site]; }
  // sites sharing at least one term with `site`, excluding it, sorted
  const std::vector<int>& neighbors(int site) const { return neighbors_[site]; }

  // Same model with all transverse fields scaled; used by the estimators'
  // sampling layer. Spectral constants (C, R) are field-independent.
  Model with_scaled_fields(double factor) const;

  // Same lattice, fields and beta with the classical Hamiltonian dropped
  // (H == 0); the free-field reference chain of the stationarity checks.
  Model without_terms() const;

 private:
  Lattice lattice_;
  double beta_ = 0.0;
  std::vector<Term> terms_;
  std::vector<double> fields_;
  WeightSign weight_sign_ = WeightSign::Boltzmann;
  ModelConstants constants_;
  std::vector<std::vector<int>> terms_at_;
  std::vector<std::vector<int>> neighbors_;

  void build_caches();
};

// Classical observable on a finite support, stored as a value table.
// Table index: bit k set <=> sigma at support[k] == -1 (support sorted by
// site rank; the same convention orders the exact solver's basis).
class Observable {
 public:
  Observable() = default;
  static Observable from_table(const Lattice& lattice, std::vector<int> support,
                               std::vector<double> table, std::string id);

  const std::string& id() const { return id_; }
  const std::vector<int>& support() const { return support_; }
  double value(uint32_t mask) const { return table_[mask]; }
  double eval(std::span<const int8_t> sigma_full) const;

  double grad_norm(int site) const;
  double sup_norm() const;
  double triple_norm() const;
  std::vector<int> effective_support() const;

 private:
  std::string id_;
  std::vector<int> support_;
  std::vector<double> table_;
};

}  // namespace tfwl
