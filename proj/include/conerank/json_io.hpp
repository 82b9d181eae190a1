#pragma once

// JSON wire formats for cones, rankings, verdicts and planar regions.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conerank/analysis.hpp"
#include "conerank/cones.hpp"
#include "conerank/quantiles.hpp"

namespace conerank {

using ojson = nlohmann::ordered_json;

inline ojson vector_to_json(const Vector& v) {
  ojson arr = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

template <typename Json>
Vector vector_from_json(const Json& arr) {
  if (!arr.is_array()) throw ParseError("expected an array of numbers", "");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ParseError("non-numeric entry", "[" + std::to_string(i) + "]");
    v(static_cast<Eigen::Index>(i)) = arr[i].template get<double>();
  }
  return v;
}

inline ojson rays_to_json(const std::vector<Vector>& rays) {
  ojson arr = ojson::array();
  for (const auto& r : rays) arr.push_back(vector_to_json(r));
  return arr;
}

inline ojson cone_to_json(const ConvexCone& c) {
  return {{"generators", rays_to_json(c.generators())}, {"facet_normals", rays_to_json(c.facet_normals())}};
}

/// Rebuilds a cone from its debug form; the generator list is authoritative.
template <typename Json>
ConvexCone cone_from_json(const Json& j) {
  std::vector<Vector> gens, facets;
  for (const auto& g : j.at("generators")) gens.push_back(vector_from_json(g));
  for (const auto& f : j.at("facet_normals")) facets.push_back(vector_from_json(f));
  if (!gens.empty()) return ConvexCone::from_generators(gens, gens.front().size());
  if (facets.empty()) throw ParseError("cone without generators or facet normals", "cone");
  return ConvexCone::trivial(facets.front().size());
}

inline ojson cones_summary_json(const ConvexCone& importance, const ConvexCone& acceptance) {
  return {{"importance_cone", cone_to_json(importance)}, {"acceptance_cone", cone_to_json(acceptance)}};
}

inline ojson rank_result_to_json(const RankResult& r) {
  ojson ranks = ojson::object();
  for (const auto& e : r.entries) {
    ranks[e.alternative_id] = {{"value", e.value.rank.count},
                               {"of", e.value.rank.of},
                               {"witness", vector_to_json(e.value.witness.direction)}};
  }
  ojson order = ojson::array();
  for (const auto& e : r.sorted()) order.push_back(e.alternative_id);
  return {{"ranks", std::move(ranks)},
          {"order", std::move(order)},
          {"cone", cone_to_json(r.importance)},
          {"acceptance_cone", cone_to_json(r.acceptance)}};
}

/// Entries in document order; cones are rebuilt from their generators.
template <typename Json>
RankResult rank_result_from_json(const Json& j) {
  RankResult r;
  std::size_t index = 0;
  for (const auto& [id, v] : j.at("ranks").items()) {
    RankEntry e;
    e.alternative_id = id;
    e.index = index++;
    e.value.rank = {v.at("value").template get<std::size_t>(), v.at("of").template get<std::size_t>()};
    e.value.witness = {vector_from_json(v.at("witness")), e.value.rank.count};
    r.entries.push_back(std::move(e));
  }
  r.importance = cone_from_json(j.at("cone"));
  r.acceptance = j.contains("acceptance_cone") ? cone_from_json(j.at("acceptance_cone")) : dual_cone(r.importance);
  return r;
}

inline ojson verdicts_to_json(double p, const std::vector<QuantileVerdict>& verdicts) {
  ojson arr = ojson::array();
  for (const auto& v : verdicts)
    arr.push_back({{"alternative", v.alternative_id},
                   {"in_lower", v.in_lower},
                   {"in_upper", v.in_upper},
                   {"label", to_string(v.label)}});
  return {{"p", p}, {"verdicts", std::move(arr)}};
}

template <typename Json>
std::vector<QuantileVerdict> verdicts_from_json(const Json& j) {
  std::vector<QuantileVerdict> out;
  for (const auto& v : j.at("verdicts")) {
    QuantileVerdict q;
    q.alternative_id = v.at("alternative").template get<std::string>();
    q.in_lower = v.at("in_lower").template get<bool>();
    q.in_upper = v.at("in_upper").template get<bool>();
    q.label = verdict_from_string(v.at("label").template get<std::string>());
    if (q.label != verdict_of(q.in_lower, q.in_upper))
      throw ParseError("label inconsistent with memberships", q.alternative_id);
    out.push_back(std::move(q));
  }
  return out;
}

inline ojson polygon_to_json(const Polygon& poly) {
  ojson arr = ojson::array();
  for (const auto& q : poly) arr.push_back({q.x(), q.y()});
  return arr;
}

inline ojson region_to_json(const QuantileRegion2D& r) {
  const Polygon both = r.intersection();
  return {{"p", r.p},
          {"bbox", {r.bbox.x0, r.bbox.y0, r.bbox.x1, r.bbox.y1}},
          {"lower_polygon", polygon_to_json(r.lower_polygon)},
          {"upper_polygon", polygon_to_json(r.upper_polygon)},
          {"intersection_polygon", polygon_to_json(both)},
          {"intersection_kind", to_string(overlap_kind(both))}};
}

}  // namespace conerank
