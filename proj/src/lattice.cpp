#include "lattice.hpp"

#include <cstdlib>

#include "errors.hpp"

namespace tfwl {

Lattice::Lattice(std::vector<int> box, bool periodic)
    : box_(std::move(box)), periodic_(periodic) {
  if (box_.empty()) throw InvalidInput("lattice box must have at least one axis");
  long long n = 1;
  for (int e : box_) {
    if (e < 1) throw InvalidInput("lattice box extents must be positive");
    n *= e;
    if (n > (1LL << 30)) throw InvalidInput("lattice too large");
  }
  n_sites_ = static_cast<int>(n);
}

bool Lattice::contains(const Coord& c) const {
  if (static_cast<int>(c.size()) != dimension()) return false;
  for (int a = 0; a < dimension(); ++a)
    if (c[a] < 0 || c[a] >= box_[a]) return false;
  return true;
}

int Lattice::index_of(const Coord& c) const {
  if (!contains(c)) throw InvalidInput("site outside box");
  int idx = 0;
  for (int a = 0; a < dimension(); ++a) idx = idx * box_[a] + c[a];
  return idx;
}

Coord Lattice::coords_of(int index) const {
  Coord c(dimension());
  for (int a = dimension() - 1; a >= 0; --a) {
    c[a] = index % box_[a];
    index /= box_[a];
  }
  return c;
}

int Lattice::distance(const Coord& a, const Coord& b) const {
  int dmax = 0;
  for (int k = 0; k < dimension(); ++k) {
    int d = std::abs(a[k] - b[k]);
    if (periodic_) d = std::min(d, box_[k] - d);
    if (d > dmax) dmax = d;
  }
  return dmax;
}

int Lattice::distance(int a, int b) const {
  return distance(coords_of(a), coords_of(b));
}

}  // namespace tfwl
