#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace tfwl {

Model Model::validate(const ModelInput& raw) {
  std::vector<std::string> errors;
  Model m;

  try {
    m.lattice_ = Lattice(raw.box, raw.periodic);
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("invalid model: ") + e.what());
  }
  const int n = m.lattice_.site_count();

  if (!(raw.beta > 0.0)) errors.push_back("beta must be positive");
  m.beta_ = raw.beta;
  m.weight_sign_ = raw.weight_sign;

  if (static_cast<int>(raw.fields.size()) != n) {
    errors.push_back("fields must provide one value per site");
  } else {
    for (int i = 0; i < n; ++i) {
      if (!(raw.fields[i] >= 0.0)) {
        std::ostringstream os;
        os << "negative transverse field at site " << i;
        errors.push_back(os.str());
      }
    }
    m.fields_ = raw.fields;
  }

  // canonicalize terms: site coords -> sorted ranks, dedupe by support
  std::map<std::vector<int>, double> merged;
  for (size_t t = 0; t < raw.terms.size(); ++t) {
    const auto& rt = raw.terms[t];
    if (rt.sites.empty()) {
      std::ostringstream os;
      os << "term " << t << ": empty term support";
      errors.push_back(os.str());
      continue;
    }
    std::vector<int> ranks;
    bool ok = true;
    for (const auto& c : rt.sites) {
      if (!m.lattice_.contains(c)) {
        std::ostringstream os;
        os << "term " << t << ": site outside box";
        errors.push_back(os.str());
        ok = false;
        break;
      }
      ranks.push_back(m.lattice_.index_of(c));
    }
    if (!ok) continue;
    std::sort(ranks.begin(), ranks.end());
    if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end()) {
      std::ostringstream os;
      os << "term " << t << ": duplicate site in term support";
      errors.push_back(os.str());
      continue;
    }
    if (raw.range_cap) {
      int diam = 0;
      for (size_t a = 0; a < ranks.size(); ++a)
        for (size_t b = a + 1; b < ranks.size(); ++b)
          diam = std::max(diam, m.lattice_.distance(ranks[a], ranks[b]));
      if (diam > 2 * *raw.range_cap) {
        std::ostringstream os;
        os << "term " << t << ": support diameter " << diam
           << " exceeds 2*range_cap";
        errors.push_back(os.str());
        continue;
      }
    }
    merged[ranks] += rt.coeff;
  }

  if (!errors.empty()) {
    std::string msg = "invalid model:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw InvalidInput(msg);
  }

  for (auto& [sites, coeff] : merged) {
    if (coeff == 0.0) continue;
    m.terms_.push_back(Term{sites, coeff});
  }
  m.build_caches();
  return m;
}

void Model::build_caches() {
  const int n = lattice_.site_count();
  terms_at_.assign(n, {});
  neighbors_.assign(n, {});
  for (size_t t = 0; t < terms_.size(); ++t)
    for (int s : terms_[t].sites) terms_at_[s].push_back(static_cast<int>(t));

  for (int i = 0; i < n; ++i) {
    auto& nb = neighbors_[i];
    for (int t : terms_at_[i])
      for (int j : terms_[t].sites)
        if (j != i) nb.push_back(j);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }

  double cmax = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int t : terms_at_[i]) s += std::abs(terms_[t].coeff);
    cmax = std::max(cmax, s);
  }
  constants_.C = 2.0 * cmax;

  int r = 0;
  for (const auto& term : terms_)
    for (size_t a = 0; a < term.sites.size(); ++a)
      for (size_t b = a + 1; b < term.sites.size(); ++b)
        r = std::max(r, lattice_.distance(term.sites[a], term.sites[b]));
  constants_.R = r;

  constants_.lambda_max = fields_.empty() ? 0.0 : *std::max_element(fields_.begin(), fields_.end());
}

double Model::energy(std::span<const int8_t> sigma) const {
  if (static_cast<int>(sigma.size()) != site_count())
    throw InvalidInput("spin assignment must cover every site");
  double e = 0.0;
  for (const auto& term : terms_) {
    double p = term.coeff;
    for (int s : term.sites) p *= sigma[s];
    e += p;
  }
  return e;
}

double Model::flip_delta(std::span<const int8_t> sigma, int site) const {
  if (static_cast<int>(sigma.size()) != site_count())
    throw InvalidInput("spin assignment must cover every site");
  if (site < 0 || site >= site_count()) throw InvalidInput("site outside box");
  double g = 0.0;
  for (int t : terms_at_[site]) {
    double p = terms_[t].coeff;
    for (int s : terms_[t].sites)
      if (s != site) p *= sigma[s];
    g += p;
  }
  return -2.0 * sigma[site] * g;
}

Model Model::with_scaled_fields(double factor) const {
  Model m = *this;
  for (double& f : m.fields_) f *= factor;
  m.constants_.lambda_max *= factor;
  return m;
}

Model Model::without_terms() const {
  Model m = *this;
  m.terms_.clear();
  m.build_caches();
  return m;
}

Observable Observable::from_table(const Lattice& lattice, std::vector<int> support,
                                  std::vector<double> table, std::string id) {
  Observable o;
  o.id_ = std::move(id);
  const size_t k = support.size();
  if (k > 16) throw InvalidInput("observable support too large (max 16 sites)");
  for (int s : support)
    if (s < 0 || s >= lattice.site_count())
      throw InvalidInput("observable support site outside box");
  if (table.size() != (size_t{1} << k))
    throw InvalidInput("observable table must have exactly 2^|support| entries");

  // canonicalize support to ascending site rank, permuting table bits to match
  std::vector<size_t> order(k);
  for (size_t i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return support[a] < support[b]; });
  for (size_t i = 0; i + 1 < k; ++i)
    if (support[order[i]] == support[order[i + 1]])
      throw InvalidInput("observable support has duplicate sites");

  o.support_.resize(k);
  for (size_t i = 0; i < k; ++i) o.support_[i] = support[order[i]];
  o.table_.resize(table.size());
  for (uint32_t mask = 0; mask < table.size(); ++mask) {
    uint32_t canon = 0;
    for (size_t i = 0; i < k; ++i)
      if (mask & (1u << order[i])) canon |= (1u << i);
    o.table_[canon] = table[mask];
  }
  return o;
}

double Observable::eval(std::span<const int8_t> sigma_full) const {
  uint32_t mask = 0;
  for (size_t i = 0; i < support_.size(); ++i)
    if (sigma_full[support_[i]] < 0) mask |= (1u << i);
  return table_[mask];
}

double Observable::grad_norm(int site) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), site);
  if (it == support_.end() || *it != site) return 0.0;
  const uint32_t bit = 1u << (it - support_.begin());
  double g = 0.0;
  for (uint32_t mask = 0; mask < table_.size(); ++mask)
    g = std::max(g, std::abs(table_[mask ^ bit] - table_[mask]));
  return g;
}

double Observable::sup_norm() const {
  double s = 0.0;
  for (double v : table_) s = std::max(s, std::abs(v));
  return s;
}

double Observable::triple_norm() const {
  double t = 0.0;
  for (int s : support_) t += grad_norm(s);
  return t;
}

std::vector<int> Observable::effective_support() const {
  std::vector<int> eff;
  for (int s : support_)
    if (grad_norm(s) > 0.0) eff.push_back(s);
  return eff;
}

}  // namespace tfwl
