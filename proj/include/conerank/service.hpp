#pragma once

// Session-based JSON API over the core modules. Handlers are plain functions
// from request parts to (status, body); http.hpp binds them to a server.

#include <cmath>
#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "conerank/analysis.hpp"
#include "conerank/json_io.hpp"

namespace conerank {

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

using QueryParams = std::map<std::string, std::string>;

/// Immutable snapshot of one session. Updates build a new snapshot and swap
/// the pointer, so readers never observe a half-applied panel.
struct SessionState {
  std::string session_id;
  DecisionProblem problem;
  ConvexCone importance;
  ConvexCone acceptance;
  RankResult ranking;  // full panel
};

class SessionStore {
 public:
  explicit SessionStore(std::size_t capacity = 256) : capacity_(capacity == 0 ? 1 : capacity) {}

  std::shared_ptr<const SessionState> get(const std::string& id) {
    std::unique_lock lock(mutex_);
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    order_.splice(order_.begin(), order_, it->second.position);
    return it->second.state;
  }

  void put(std::shared_ptr<const SessionState> state) {
    std::unique_lock lock(mutex_);
    const std::string id = state->session_id;
    auto it = index_.find(id);
    if (it != index_.end()) {
      it->second.state = std::move(state);
      order_.splice(order_.begin(), order_, it->second.position);
      return;
    }
    order_.push_front(id);
    index_.emplace(id, Entry{std::move(state), order_.begin()});
    while (index_.size() > capacity_) {
      index_.erase(order_.back());
      order_.pop_back();
    }
  }

  /// Replaces an existing session only; false when it was evicted meanwhile.
  bool replace(std::shared_ptr<const SessionState> state) {
    std::unique_lock lock(mutex_);
    auto it = index_.find(state->session_id);
    if (it == index_.end()) return false;
    it->second.state = std::move(state);
    order_.splice(order_.begin(), order_, it->second.position);
    return true;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return index_.size();
  }

  std::size_t capacity() const { return capacity_; }

 private:
  struct Entry {
    std::shared_ptr<const SessionState> state;
    std::list<std::string>::iterator position;
  };

  std::size_t capacity_;
  mutable std::shared_mutex mutex_;
  std::list<std::string> order_;  // most recent first
  std::unordered_map<std::string, Entry> index_;
};

class Service {
 public:
  explicit Service(std::size_t capacity = 256, std::uint64_t seed = std::random_device{}())
      : store_(capacity), rng_(seed) {}

  SessionStore& store() { return store_; }

  HttpResponse health() const { return json(200, {{"status", "ok"}}); }

  HttpResponse create_session(const std::string& body) {
    DecisionProblem problem;
    try {
      problem = parse_problem_json(std::string_view(body));
    } catch (const ParseError& e) {
      return error(400, e.what(), e.violations());
    }
    try {
      auto state = build_state(next_id(), std::move(problem));
      ojson out = {{"session_id", state->session_id}, {"problem", problem_to_json(state->problem)}};
      store_.put(std::move(state));
      return json(201, out);
    } catch (const InvalidArgument& e) {
      return error(400, e.what());
    }
  }

  HttpResponse rank(const std::string& id, const QueryParams& query) {
    auto s = store_.get(id);
    if (!s) return unknown_session(id);
    auto it = query.find("judges");
    if (it == query.end()) return json(200, rank_result_to_json(s->ranking));
    try {
      const auto panel = subset(*s, it->second);
      return json(200, rank_result_to_json(rank_alternatives(s->problem, panel)));
    } catch (const InvalidArgument& e) {
      return error(422, e.what());
    }
  }

  HttpResponse update_panel(const std::string& id, const std::string& body) {
    auto s = store_.get(id);
    if (!s) return unknown_session(id);
    JudgePanel panel;
    try {
      const auto doc = nlohmann::json::parse(body);
      const auto& arr = doc.is_object() && doc.contains("judges") ? doc["judges"] : doc;
      panel = parse_panel_json(arr, s->problem.d());
      if (panel.judges.empty()) return error(400, "empty judge panel", {{"empty_panel", "empty judge panel"}});
    } catch (const nlohmann::json::parse_error& e) {
      return error(400, std::string("malformed JSON: ") + e.what());
    } catch (const ParseError& e) {
      return error(400, e.what(), e.violations());
    }
    DecisionProblem problem = s->problem;
    problem.panel = std::move(panel);
    if (auto v = validate_problem(problem); !v.empty()) return error(400, v.front().message, v);
    std::shared_ptr<const SessionState> next;
    try {
      next = build_state(id, std::move(problem));
    } catch (const InvalidArgument& e) {
      return error(400, e.what());
    }
    if (!store_.replace(next)) return unknown_session(id);
    return json(200, summary(*next));
  }

  HttpResponse classify(const std::string& id, const QueryParams& query) {
    auto s = store_.get(id);
    if (!s) return unknown_session(id);
    auto pit = query.find("p");
    if (pit == query.end()) return error(422, "missing query parameter p");
    double p = 0.0;
    try {
      std::size_t used = 0;
      p = std::stod(pit->second, &used);
      if (used != pit->second.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      return error(422, "p must be a number in the open interval (0, 1)");
    }
    if (!(p > 0.0 && p < 1.0)) return error(422, "p must lie in the open interval (0, 1)");
    try {
      const JudgePanel panel = query.count("judges") ? subset(*s, query.at("judges")) : s->problem.panel;
      const ConvexCone k_i = query.count("judges") ? importance_cone(panel) : s->importance;
      const auto ids = alternative_ids(s->problem);
      ojson out = verdicts_to_json(p, conerank::classify(s->problem.evaluations, k_i, p, ids));
      if (s->problem.d() == 2) {
        Box box = default_bbox(s->problem.evaluations);
        if (auto b = query.find("bbox"); b != query.end()) {
          auto parsed = parse_bbox(b->second);
          if (!parsed) return error(400, "bbox must be x0,y0,x1,y1 with x0 < x1 and y0 < y1");
          box = *parsed;
        }
        out["region"] = region_to_json(quantile_region_2d(s->problem.evaluations, k_i, p, box));
      }
      return json(200, out);
    } catch (const InvalidArgument& e) {
      return error(422, e.what());
    }
  }

  HttpResponse cones(const std::string& id, const QueryParams& query = {}) {
    auto s = store_.get(id);
    if (!s) return unknown_session(id);
    if (auto it = query.find("judges"); it != query.end()) {
      try {
        const auto k = importance_cone(subset(*s, it->second));
        return json(200, cones_summary_json(k, dual_cone(k)));
      } catch (const InvalidArgument& e) {
        return error(422, e.what());
      }
    }
    return json(200, cones_summary_json(s->importance, s->acceptance));
  }

  static std::optional<Box> parse_bbox(const std::string& text) {
    const auto parts = split_ids(text);
    if (parts.size() != 4) return std::nullopt;
    double v[4];
    for (int i = 0; i < 4; ++i) {
      try {
        std::size_t used = 0;
        v[i] = std::stod(parts[static_cast<std::size_t>(i)], &used);
        if (used != parts[static_cast<std::size_t>(i)].size() || !std::isfinite(v[i])) return std::nullopt;
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
    if (!(v[2] > v[0] && v[3] > v[1])) return std::nullopt;
    return Box{v[0], v[1], v[2], v[3]};
  }

 private:
  static HttpResponse json(int status, const ojson& body) { return {status, body.dump(), "application/json"}; }

  static HttpResponse error(int status, const std::string& message, const std::vector<Violation>& violations = {}) {
    ojson v = ojson::array();
    for (const auto& x : violations) v.push_back({{"code", x.code}, {"message", x.message}});
    return json(status, {{"error", message}, {"violations", std::move(v)}});
  }

  static HttpResponse unknown_session(const std::string& id) { return error(404, "unknown session '" + id + "'"); }

  static JudgePanel subset(const SessionState& s, const std::string& ids) {
    const auto list = split_ids(ids);
    return select_judges(s.problem.panel, list);
  }

  static std::shared_ptr<const SessionState> build_state(std::string id, DecisionProblem problem) {
    auto s = std::make_shared<SessionState>();
    s->session_id = std::move(id);
    s->importance = importance_cone(problem.panel);
    s->acceptance = dual_cone(s->importance);
    s->ranking = rank_alternatives(problem.evaluations, s->importance, alternative_ids(problem));
    s->problem = std::move(problem);
    return s;
  }

  static ojson summary(const SessionState& s) {
    return {{"importance_cone", cone_to_json(s.importance)},
            {"acceptance_cone", cone_to_json(s.acceptance)},
            {"judges", panel_to_json(s.problem.panel)},
            {"ranking", rank_result_to_json(s.ranking)}};
  }

  std::string next_id() {
    std::lock_guard lock(id_mutex_);
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng_()),
                  static_cast<unsigned long long>(rng_()));
    return buf;
  }

  SessionStore store_;
  std::mutex id_mutex_;
  std::mt19937_64 rng_;
};

}  // namespace conerank
