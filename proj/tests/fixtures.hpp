#pragma once

#include <string>
#include <vector>

#include "conerank/cones.hpp"
#include "conerank/model.hpp"

namespace conerank::testing {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Five alternatives on two criteria: (1,5), (2,3), (3,2), (5,1), (5,5).
inline EvaluationMatrix example3() {
  return EvaluationMatrix::from_columns({{1, 5}, {2, 3}, {3, 2}, {5, 1}, {5, 5}});
}

// Same with the fifth alternative lowered to (3,3).
inline EvaluationMatrix example6() {
  return EvaluationMatrix::from_columns({{1, 5}, {2, 3}, {3, 2}, {5, 1}, {3, 3}});
}

inline Vector v1() { return vec({2, 1}); }
inline Vector v2() { return vec({1, 1}); }
inline Vector v3() { return vec({1, 2}); }

inline ConvexCone table1_cone() { return conic_hull({v1(), v3()}); }
inline ConvexCone table2_cone() { return conic_hull({v1(), v2()}); }

inline const char* example3_json() {
  return R"({
  "criteria": ["c1", "c2"],
  "alternatives": ["a1", "a2", "a3", "a4", "a5"],
  "judges": [{"id": "j1", "weights": [2, 1]}, {"id": "j2", "weights": [1, 1]}, {"id": "j3", "weights": [1, 2]}],
  "evaluations": [[1, 5], [2, 3], [3, 2], [5, 1], [5, 5]]
})";
}

inline std::vector<std::string> example_ids() { return {"a1", "a2", "a3", "a4", "a5"}; }

}  // namespace conerank::testing
