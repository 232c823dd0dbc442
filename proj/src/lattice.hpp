#pragma once

#include <vector>

namespace tfwl {

using Coord = std::vector<int>;

// Finite box in Z^d with free or periodic boundary. Sites are addressed by
// coordinates or by lexicographic rank (axis 0 most significant); everything
// downstream works with ranks. Distances are l-infinity, circular per axis
// under periodic boundary.
class Lattice {
 public:
  Lattice() = default;
  Lattice(std::vector<int> box, bool periodic);

  int dimension() const { return static_cast<int>(box_.size()); }
  const std::vector<int>& box() const { return box_; }
  bool periodic() const { return periodic_; }
  int site_count() const { return n_sites_; }

  bool contains(const Coord& c) const;
  int index_of(const Coord& c) const;
  Coord coords_of(int index) const;

  int distance(int a, int b) const;
  int distance(const Coord& a, const Coord& b) const;

 private:
  std::vector<int> box_;
  bool periodic_ = false;
  int n_sites_ = 0;
};

}  // namespace tfwl
