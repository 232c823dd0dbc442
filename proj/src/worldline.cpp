#include "worldline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace tfwl {

const char* move_kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::AddXi: return "add_xi";
    case MoveKind::AddEta: return "add_eta";
    case MoveKind::RemoveXi: return "remove_xi";
    case MoveKind::RemoveEta: return "remove_eta";
    case MoveKind::Flip: return "flip";
  }
  return "?";
}

int SiteWorldline::upper_bound(double t) const {
  auto it = std::upper_bound(events.begin(), events.end(), t,
                             [](double v, const MarkedPoint& p) { return v < p.time; });
  return static_cast<int>(it - events.begin());
}

int SiteWorldline::find_exact(double t) const {
  auto it = std::lower_bound(events.begin(), events.end(), t,
                             [](const MarkedPoint& p, double v) { return p.time < v; });
  if (it == events.end() || it->time != t) return -1;
  return static_cast<int>(it - events.begin());
}

int SiteWorldline::spin_at(double t) const {
  if (events.empty()) return rho;
  const int n = size();
  int k = upper_bound(t);
  return events[k % n].label();  // value on [t, next event) = label of successor
}

std::vector<double> SiteWorldline::xi_times() const {
  std::vector<double> v;
  for (const auto& p : events)
    if (p.xi) v.push_back(p.time);
  return v;
}

std::vector<double> SiteWorldline::eta_times() const {
  std::vector<double> v;
  for (const auto& p : events)
    if (!p.xi) v.push_back(p.time);
  return v;
}

int Config::point_count() const {
  int n = 0;
  for (const auto& s : sites) n += s.size();
  return n;
}

Config empty_config(const Model& m, int8_t rho) {
  Config c;
  c.sites.assign(m.site_count(), SiteWorldline{{}, rho});
  return c;
}

std::vector<Arc> color_site(const SiteWorldline& w, double beta) {
  std::vector<Arc> arcs;
  const int n = w.size();
  if (n == 0) {
    arcs.push_back(Arc{0.0, beta, w.rho});
    return arcs;
  }
  arcs.reserve(n);
  for (int j = 0; j < n; ++j) {
    const auto& p = w.events[j];
    const auto& q = w.events[(j + 1) % n];
    double len = (j + 1 < n) ? q.time - p.time : beta - p.time + q.time;
    arcs.push_back(Arc{p.time, len, q.label()});
  }
  return arcs;
}

std::vector<int8_t> sigma_at(const Config& c, double t) {
  std::vector<int8_t> s(c.sites.size());
  for (size_t i = 0; i < c.sites.size(); ++i)
    s[i] = static_cast<int8_t>(c.sites[i].spin_at(t));
  return s;
}

double path_energy(const Model& m, const Config& c) {
  const double beta = m.beta();
  std::vector<std::pair<double, int>> events;
  for (size_t i = 0; i < c.sites.size(); ++i)
    for (const auto& p : c.sites[i].events) events.emplace_back(p.time, static_cast<int>(i));
  std::sort(events.begin(), events.end());

  std::vector<int8_t> sigma = sigma_at(c, 0.0);
  double h = m.energy(sigma);

  double acc = 0.0, comp = 0.0;
  auto add = [&](double x) {  // Kahan
    double y = x - comp;
    double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  };

  double t_prev = 0.0;
  for (const auto& [t, site] : events) {
    add(h * (t - t_prev));
    t_prev = t;
    int ns = c.sites[site].spin_at(t);
    if (ns != sigma[site]) {
      h += m.flip_delta(sigma, site);
      sigma[site] = static_cast<int8_t>(ns);
    }
  }
  add(h * (beta - t_prev));
  return acc;
}

namespace {

// The single arc whose color a move changes: [start, start+length) cyclically,
// switching from old_spin to new_spin. length == beta means the full circle.
struct ChangedArc {
  double start = 0.0;
  double length = 0.0;
  int old_spin = 0;
  int new_spin = 0;
};

ChangedArc changed_arc(const SiteWorldline& w, const Move& mv, double beta) {
  ChangedArc a;
  const int n = w.size();
  if (mv.kind == MoveKind::Flip) {
    if (!w.events.empty()) return a;  // trajectory independent of rho
    a.start = 0.0;
    a.length = beta;
    a.old_spin = w.rho;
    a.new_spin = -w.rho;
    return a;
  }
  const double x = mv.time;
  if (!(x >= 0.0 && x < beta)) throw InvalidInput("move time outside [0, beta)");
  const bool xi = move_mark_is_xi(mv.kind);
  if (is_addition(mv.kind)) {
    if (w.find_exact(x) >= 0) throw InvalidInput("addition time already present at site");
    const int new_label = xi ? 1 : -1;
    if (n == 0) {
      a.start = x;
      a.length = beta;
      a.old_spin = w.rho;
      a.new_spin = new_label;
      return a;
    }
    int pos = w.upper_bound(x);
    const auto& succ = w.events[pos % n];
    const auto& pred = w.events[(pos + n - 1) % n];
    a.old_spin = succ.label();
    a.new_spin = new_label;
    a.start = pred.time;
    a.length = x - pred.time;
    if (a.length <= 0.0) a.length += beta;
    return a;
  }
  // removal
  int k = w.find_exact(x);
  if (k < 0 || w.events[k].xi != xi) {
    std::ostringstream os;
    os << "removal of nonexistent point (site " << mv.site << ", t=" << x << ")";
    throw InvalidInput(os.str());
  }
  a.old_spin = w.events[k].label();
  if (n == 1) {
    a.start = x;
    a.length = beta;
    a.new_spin = w.rho;
    return a;
  }
  const auto& succ = w.events[(k + 1) % n];
  const auto& pred = w.events[(k + n - 1) % n];
  a.new_spin = succ.label();
  a.start = pred.time;
  a.length = x - pred.time;
  if (a.length <= 0.0) a.length += beta;
  return a;
}

thread_local std::vector<double> g_breaks;

}  // namespace

double move_delta(const Model& m, const Config& c, const Move& mv) {
  const double beta = m.beta();
  if (mv.site < 0 || mv.site >= m.site_count()) throw InvalidInput("move site outside box");
  const SiteWorldline& w = c.sites[mv.site];
  ChangedArc arc = changed_arc(w, mv, beta);
  if (arc.length == 0.0 || arc.old_spin == arc.new_spin) return 0.0;

  const auto& term_ids = m.terms_at(mv.site);
  if (term_ids.empty()) return 0.0;

  // collect subdivision offsets from interacting neighbors' events
  auto& breaks = g_breaks;
  breaks.clear();
  for (int j : m.neighbors(mv.site)) {
    for (const auto& p : c.sites[j].events) {
      double off = p.time - arc.start;
      if (off <= 0.0) off += beta;
      if (off < arc.length) breaks.push_back(off);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.push_back(arc.length);

  const double dspin = arc.new_spin - arc.old_spin;  // +-2
  double delta = 0.0;
  double off_prev = 0.0;
  for (double off : breaks) {
    const double len = off - off_prev;
    if (len > 0.0) {
      // evaluate at the midpoint: safely interior to the sub-arc, immune to
      // the wraparound rounding of start + offset - beta at its endpoints
      double t = arc.start + 0.5 * (off_prev + off);
      if (t >= beta) t -= beta;
      double g = 0.0;
      for (int tid : term_ids) {
        const Term& term = m.terms()[tid];
        double p = term.coeff;
        for (int s : term.sites)
          if (s != mv.site) p *= c.sites[s].spin_at(t);
        g += p;
      }
      delta += dspin * g * len;
    }
    off_prev = off;
  }
  return delta;
}

void apply_move_inplace(Config& c, const Move& mv, double beta) {
  if (mv.site < 0 || mv.site >= static_cast<int>(c.sites.size()))
    throw InvalidInput("move site outside box");
  SiteWorldline& w = c.sites[mv.site];
  if (mv.kind == MoveKind::Flip) {
    w.rho = static_cast<int8_t>(-w.rho);
    return;
  }
  const double x = mv.time;
  if (!(x >= 0.0 && x < beta)) throw InvalidInput("move time outside [0, beta)");
  if (is_addition(mv.kind)) {
    if (w.find_exact(x) >= 0) throw InvalidInput("addition time already present at site");
    int pos = w.upper_bound(x);
    w.events.insert(w.events.begin() + pos, MarkedPoint{x, move_mark_is_xi(mv.kind)});
    return;
  }
  int k = w.find_exact(x);
  if (k < 0 || w.events[k].xi != move_mark_is_xi(mv.kind))
    throw InvalidInput("removal of nonexistent point");
  w.events.erase(w.events.begin() + k);
}

Config apply_move(const Config& c, const Move& mv, double beta) {
  Config out = c;
  apply_move_inplace(out, mv, beta);
  return out;
}

double multiplicity_log_weight(const Config& c) {
  int empties = 0;
  for (const auto& s : c.sites)
    if (s.empty()) ++empties;
  return empties * std::log(2.0);
}

}  // namespace tfwl
