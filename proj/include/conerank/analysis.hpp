#pragma once

// Problem-level entry points shared by the CLI and the service.

#include <algorithm>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "conerank/cones.hpp"
#include "conerank/distribution.hpp"
#include "conerank/model.hpp"
#include "conerank/quantiles.hpp"

namespace conerank {

struct RankEntry {
  std::string alternative_id;
  std::size_t index = 0;
  RankedValue value;
};

struct RankResult {
  std::vector<RankEntry> entries;  // alternative order
  ConvexCone importance;
  ConvexCone acceptance;

  /// Descending rank; ties keep alternative order.
  std::vector<RankEntry> sorted() const {
    auto out = entries;
    std::stable_sort(out.begin(), out.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.value.rank > b.value.rank; });
    return out;
  }
};

inline std::vector<std::string> split_ids(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

inline JudgePanel select_judges(const JudgePanel& panel, std::span<const std::string> ids) {
  if (ids.empty()) throw InvalidArgument("empty judge subset");
  JudgePanel out;
  for (const auto& id : ids) {
    auto it = std::find_if(panel.judges.begin(), panel.judges.end(),
                           [&](const ImportanceVector& j) { return j.judge_id == id; });
    if (it == panel.judges.end()) throw InvalidArgument("unknown judge id '" + id + "'");
    if (std::none_of(out.judges.begin(), out.judges.end(),
                     [&](const ImportanceVector& j) { return j.judge_id == id; }))
      out.judges.push_back(*it);
  }
  return out;
}

/// Conic hull of the panel's importance vectors.
inline ConvexCone importance_cone(const JudgePanel& panel) {
  if (panel.judges.empty()) throw InvalidArgument("empty judge panel");
  auto cone = conic_hull(panel.weight_vectors());
  if (!validate_importance_cone(cone)) throw InvalidArgument("importance vectors leave the nonnegative orthant");
  return cone;
}

inline RankResult rank_alternatives(const EvaluationMatrix& x, const ConvexCone& k_i,
                                    std::span<const std::string> ids) {
  if (ids.size() != x.alternatives()) throw InvalidArgument("alternative id count does not match the evaluation matrix");
  RankResult r;
  r.importance = k_i;
  r.acceptance = dual_cone(k_i);
  for (std::size_t i = 0; i < x.alternatives(); ++i)
    r.entries.push_back({ids[i], i, cone_distribution(x, k_i, x.column(i))});
  return r;
}

inline std::vector<std::string> alternative_ids(const DecisionProblem& p) {
  std::vector<std::string> ids;
  for (const auto& a : p.alternatives) ids.push_back(a.id);
  return ids;
}

inline RankResult rank_alternatives(const DecisionProblem& p, const JudgePanel& panel) {
  const auto ids = alternative_ids(p);
  return rank_alternatives(p.evaluations, importance_cone(panel), ids);
}

inline std::vector<QuantileVerdict> classify(const DecisionProblem& p, const JudgePanel& panel, double prob) {
  const auto ids = alternative_ids(p);
  return classify(p.evaluations, importance_cone(panel), prob, ids);
}

/// Data bounds padded by 20% of the extent (at least one unit) on every side.
inline Box default_bbox(const EvaluationMatrix& x) {
  const Matrix& d = x.data();
  const double x0 = d.row(0).minCoeff(), x1 = d.row(0).maxCoeff();
  const double y0 = d.row(1).minCoeff(), y1 = d.row(1).maxCoeff();
  const double px = std::max(1.0, 0.2 * (x1 - x0)), py = std::max(1.0, 0.2 * (y1 - y0));
  return {x0 - px, y0 - py, x1 + px, y1 + py};
}

}  // namespace conerank
