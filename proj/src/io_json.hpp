#pragma once

#include <string>

#include "estimators.hpp"
#include "model.hpp"
#include "worldline.hpp"

#include <json.hpp>

namespace tfwl {

using nlohmann::json;

// Model config schema: {dimension, box, boundary, beta, terms: [{sites:
// [[coords]...], coeff}], fields: number|array, weight_sign?, range_cap?}
Model model_from_json(const json& j);
Model model_from_json_text(const std::string& text);

// canonical normalized form; also the input of the spec hash
json model_to_json(const Model& m);
std::string spec_hash(const Model& m);

// Observable schema: {support: [[coords]...], table: [{spins, value}...], id?}
Observable observable_from_json(const Lattice& lat, const json& j,
                                const std::string& fallback_id);
Observable observable_from_json_text(const Lattice& lat, const std::string& text,
                                     const std::string& fallback_id);

json config_to_json(const Config& c);
json move_to_json(const Move& m);
Move move_from_json(const json& j);

json estimate_to_json(const Estimate& e);

McmcParams mcmc_params_from_json(const json& j);

// strict parse wrapper turning json exceptions into InvalidInput
json parse_json_text(const std::string& text, const std::string& what);

}  // namespace tfwl
