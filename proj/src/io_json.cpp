#include "io_json.hpp"

#include <cstdint>
#include <sstream>

#include "errors.hpp"

namespace tfwl {

namespace {

Coord coord_from_json(const json& j, int dimension) {
  if (!j.is_array() || static_cast<int>(j.size()) != dimension)
    throw InvalidInput("site coordinates must be arrays of length `dimension`");
  Coord c;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InvalidInput("site coordinates must be integers");
    c.push_back(v.get<int>());
  }
  return c;
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput("malformed JSON in " + what + ": " + e.what());
  }
}

Model model_from_json(const json& j) {
  try {
    if (!j.is_object()) throw InvalidInput("model config must be a JSON object");
    ModelInput in;
    const int dimension = j.at("dimension").get<int>();
    if (dimension < 1) throw InvalidInput("dimension must be positive");
    in.box = j.at("box").get<std::vector<int>>();
    if (static_cast<int>(in.box.size()) != dimension)
      throw InvalidInput("box must list one extent per dimension");
    if (j.contains("boundary")) {
      const std::string b = j.at("boundary").get<std::string>();
      if (b == "periodic")
        in.periodic = true;
      else if (b == "free")
        in.periodic = false;
      else
        throw InvalidInput("boundary must be \"free\" or \"periodic\"");
    }
    in.beta = j.at("beta").get<double>();

    int n_sites = 1;
    for (int e : in.box) {
      if (e < 1) throw InvalidInput("box extents must be positive");
      n_sites *= e;
    }
    const auto& jf = j.at("fields");
    if (jf.is_number()) {
      in.fields.assign(n_sites, jf.get<double>());
    } else if (jf.is_array()) {
      in.fields = jf.get<std::vector<double>>();
    } else {
      throw InvalidInput("fields must be a number or an array");
    }

    if (j.contains("terms")) {
      for (const auto& jt : j.at("terms")) {
        ModelInput::RawTerm t;
        t.coeff = jt.at("coeff").get<double>();
        for (const auto& js : jt.at("sites")) t.sites.push_back(coord_from_json(js, dimension));
        in.terms.push_back(std::move(t));
      }
    }
    if (j.contains("weight_sign")) {
      const std::string w = j.at("weight_sign").get<std::string>();
      if (w == "boltzmann")
        in.weight_sign = WeightSign::Boltzmann;
      else if (w == "paper")
        in.weight_sign = WeightSign::Paper;
      else
        throw InvalidInput("weight_sign must be \"boltzmann\" or \"paper\"");
    }
    if (j.contains("range_cap")) in.range_cap = j.at("range_cap").get<int>();
    return Model::validate(in);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("invalid model config: ") + e.what());
  }
}

Model model_from_json_text(const std::string& text) {
  return model_from_json(parse_json_text(text, "model config"));
}

json model_to_json(const Model& m) {
  json j;
  j["dimension"] = m.lattice().dimension();
  j["box"] = m.lattice().box();
  j["boundary"] = m.lattice().periodic() ? "periodic" : "free";
  j["beta"] = m.beta();
  j["fields"] = m.fields();
  j["weight_sign"] = m.weight_sign() == WeightSign::Boltzmann ? "boltzmann" : "paper";
  json terms = json::array();
  for (const auto& t : m.terms()) {
    json jt;
    json sites = json::array();
    for (int s : t.sites) sites.push_back(m.lattice().coords_of(s));
    jt["sites"] = sites;
    jt["coeff"] = t.coeff;
    terms.push_back(jt);
  }
  j["terms"] = terms;
  return j;
}

std::string spec_hash(const Model& m) {
  const std::string text = model_to_json(m).dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << h;
  return os.str();
}

Observable observable_from_json(const Lattice& lat, const json& j,
                                const std::string& fallback_id) {
  try {
    std::vector<int> support;
    for (const auto& js : j.at("support"))
      support.push_back(lat.index_of(coord_from_json(js, lat.dimension())));
    const size_t k = support.size();
    if (k > 16) throw InvalidInput("observable support too large (max 16 sites)");

    const auto& jt = j.at("table");
    if (!jt.is_array() || jt.size() != (size_t{1} << k))
      throw InvalidInput("observable table must have exactly 2^|support| entries");
    std::vector<double> table(size_t{1} << k);
    std::vector<bool> seen(table.size(), false);
    for (const auto& je : jt) {
      const auto spins = je.at("spins").get<std::vector<int>>();
      if (spins.size() != k) throw InvalidInput("table entry spins must match support size");
      uint32_t mask = 0;
      for (size_t i = 0; i < k; ++i) {
        if (spins[i] == -1)
          mask |= (1u << i);
        else if (spins[i] != 1)
          throw InvalidInput("table entry spins must be +1 or -1");
      }
      if (seen[mask]) throw InvalidInput("observable table repeats a spin assignment");
      seen[mask] = true;
      table[mask] = je.at("value").get<double>();
    }
    const std::string id = j.contains("id") ? j.at("id").get<std::string>() : fallback_id;
    return Observable::from_table(lat, std::move(support), std::move(table), id);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("invalid observable: ") + e.what());
  }
}

Observable observable_from_json_text(const Lattice& lat, const std::string& text,
                                     const std::string& fallback_id) {
  return observable_from_json(lat, parse_json_text(text, "observable"), fallback_id);
}

json config_to_json(const Config& c) {
  json sites = json::array();
  for (const auto& w : c.sites) {
    json js;
    js["xi"] = w.xi_times();
    js["eta"] = w.eta_times();
    js["rho"] = static_cast<int>(w.rho);
    sites.push_back(js);
  }
  return json{{"sites", sites}};
}

json move_to_json(const Move& m) {
  json j;
  j["kind"] = move_kind_name(m.kind);
  j["site"] = m.site;
  if (m.kind != MoveKind::Flip) j["time"] = m.time;
  return j;
}

Move move_from_json(const json& j) {
  Move m;
  const std::string k = j.at("kind").get<std::string>();
  if (k == "add_xi")
    m.kind = MoveKind::AddXi;
  else if (k == "add_eta")
    m.kind = MoveKind::AddEta;
  else if (k == "remove_xi")
    m.kind = MoveKind::RemoveXi;
  else if (k == "remove_eta")
    m.kind = MoveKind::RemoveEta;
  else if (k == "flip")
    m.kind = MoveKind::Flip;
  else
    throw InvalidInput("unknown move kind: " + k);
  m.site = j.at("site").get<int>();
  if (m.kind != MoveKind::Flip) m.time = j.at("time").get<double>();
  return m;
}

json estimate_to_json(const Estimate& e) {
  json j;
  j["observable_id"] = e.observable_id;
  j["mean"] = e.mean;
  j["stderr"] = e.std_error;
  j["n_samples"] = e.n_samples;
  j["tau_int"] = e.tau_int;
  j["ess"] = e.ess;
  j["reliable"] = e.reliable;
  return j;
}

McmcParams mcmc_params_from_json(const json& j) {
  McmcParams p;
  try {
    if (j.contains("burn_in")) p.burn_in = j.at("burn_in").get<double>();
    if (j.contains("run_length")) p.run_length = j.at("run_length").get<double>();
    if (j.contains("batches")) p.batch_count = j.at("batches").get<int>();
    if (j.contains("seed")) p.seed = j.at("seed").get<uint64_t>();
    if (j.contains("chains")) p.chains = j.at("chains").get<int>();
    if (j.contains("threads")) p.threads = j.at("threads").get<int>();
    if (j.contains("rotation_average")) p.rotation_average = j.at("rotation_average").get<bool>();
    if (j.contains("observation")) {
      const std::string o = j.at("observation").get<std::string>();
      if (o == "time-weighted")
        p.observation = ObservationMode::TimeWeighted;
      else if (o == "grid")
        p.observation = ObservationMode::Grid;
      else
        throw InvalidInput("observation must be \"time-weighted\" or \"grid\"");
    }
    if (j.contains("grid_dt")) p.grid_dt = j.at("grid_dt").get<double>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("invalid sampler params: ") + e.what());
  }
  return p;
}

}  // namespace tfwl
