#pragma once

#include <cstdint>
#include <vector>

#include "model.hpp"

namespace tfwl {

enum class MoveKind : uint8_t { AddXi, AddEta, RemoveXi, RemoveEta, Flip };

inline bool is_addition(MoveKind k) { return k == MoveKind::AddXi || k == MoveKind::AddEta; }
inline bool is_removal(MoveKind k) { return k == MoveKind::RemoveXi || k == MoveKind::RemoveEta; }
// the mark of the point touched by an add/remove move; true = xi (label +1)
inline bool move_mark_is_xi(MoveKind k) { return k == MoveKind::AddXi || k == MoveKind::RemoveXi; }
const char* move_kind_name(MoveKind k);

struct Move {
  MoveKind kind = MoveKind::Flip;
  int site = 0;
  double time = 0.0;  // point on the circle; ignored for Flip
};

// A labeled point on the circle [0, beta). xi-points carry label +1,
// eta-points label -1.
struct MarkedPoint {
  double time;
  bool xi;
  int label() const { return xi ? 1 : -1; }
  friend bool operator==(const MarkedPoint&, const MarkedPoint&) = default;
};

// One site's piece of the lifted configuration: the merged, strictly
// time-sorted labeled point set plus the spin used when no points exist.
// The induced trajectory is right-continuous; the value on the arc between
// consecutive points equals the label of the arc's right endpoint.
struct SiteWorldline {
  std::vector<MarkedPoint> events;
  int8_t rho = 1;

  bool empty() const { return events.empty(); }
  int size() const { return static_cast<int>(events.size()); }
  // index of first event with time > t (cyclic successor is % size)
  int upper_bound(double t) const;
  // index of the event at exactly `t`, or -1
  int find_exact(double t) const;
  int spin_at(double t) const;
  std::vector<double> xi_times() const;
  std::vector<double> eta_times() const;

  friend bool operator==(const SiteWorldline&, const SiteWorldline&) = default;
};

struct Config {
  std::vector<SiteWorldline> sites;
  int point_count() const;
  friend bool operator==(const Config&, const Config&) = default;
};

Config empty_config(const Model& m, int8_t rho = 1);

// Piecewise-constant coloring of one site as arcs (start, length, spin) that
// partition the circle; the arc starting at the last event wraps through 0.
struct Arc {
  double start;
  double length;
  int spin;
};
std::vector<Arc> color_site(const SiteWorldline& w, double beta);

std::vector<int8_t> sigma_at(const Config& c, double t);

// Hhat = integral over [0, beta) of H(sigma(t)) dt, by a global sweep over
// the merged event times (Kahan-compensated).
double path_energy(const Model& m, const Config& c);

// Hhat(move applied) - Hhat(config), computed locally: only the arc of the
// moved site that changes color is integrated, subdivided at the event times
// of interacting neighbor sites. Throws InvalidInput if the move is not
// applicable (removing an absent point / adding a duplicate time).
double move_delta(const Model& m, const Config& c, const Move& mv);

void apply_move_inplace(Config& c, const Move& mv, double beta);
Config apply_move(const Config& c, const Move& mv, double beta);

// log of the per-site coloring multiplicity correction 2^{#empty sites},
// relating the product-prior lifted law to the physical path measure; the
// estimators weight configurations by exp of this.
double multiplicity_log_weight(const Config& c);

}  // namespace tfwl
