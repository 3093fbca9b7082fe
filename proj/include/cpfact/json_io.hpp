#pragma once

#include <json.hpp>

#include "cpfact/matrix_core.hpp"
#include "cpfact/oracle.hpp"

namespace cpfact {

inline nlohmann::json to_json(const SymMat2& m) {
    return nlohmann::json{{"a", m.a}, {"b", m.b}, {"c", m.c}};
}

inline nlohmann::json to_json(const Factorization& f) {
    nlohmann::json terms = nlohmann::json::array();
    for (const RankOneTerm& t : f.terms) terms.push_back({t.k, t.t});
    return nlohmann::json{{"matrix", to_json(f.source)},
                          {"method", to_string(f.method)},
                          {"terms", std::move(terms)}};
}

inline nlohmann::json to_json(const MinRankResult& r) {
    nlohmann::json j{{"matrix", to_json(r.witness.source)},
                     {"status", to_string(r.status)},
                     {"nodes_explored", r.nodes_explored}};
    if (r.status == SearchStatus::Exact) {
        j["min_terms"] = r.min_terms;
        j["witness"] = to_json(r.witness);
    }
    return j;
}

} // namespace cpfact
