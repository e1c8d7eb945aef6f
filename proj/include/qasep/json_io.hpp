#pragma once

// JSON serialization of the shared wire formats: sparse rate matrices and
// verification reports.

#include <json.hpp>

#include "lattice.hpp"

namespace qasep {

inline nlohmann::json rate_matrix_to_json(const RateMatrix& Q) {
  nlohmann::json triplets = nlohmann::json::array();
  for (const auto& t : Q.off_diagonal())
    triplets.push_back({t.row, t.col, t.value});
  for (int i = 0; i < Q.dim(); ++i)
    if (Q.diagonal()[i] != 0.0) triplets.push_back({i, i, Q.diagonal()[i]});
  return nlohmann::json{{"dim", Q.dim()}, {"triplets", triplets}};
}

inline RateMatrix rate_matrix_from_json(const nlohmann::json& j) {
  RateMatrix Q(j.at("dim").get<int>());
  for (const auto& t : j.at("triplets")) {
    int r = t.at(0).get<int>(), c = t.at(1).get<int>();
    if (r != c) Q.add(r, c, t.at(2).get<double>());
  }
  return Q;
}

}  // namespace qasep
