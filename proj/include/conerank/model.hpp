#pragma once

// Decision problem data: criteria, alternatives, the judge panel and the
// evaluation matrix, plus JSON / CSV ingestion and validation.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "conerank/linalg.hpp"

namespace conerank {

struct Criterion {
  std::string id;
  std::string label;
  std::size_t index = 0;
  friend bool operator==(const Criterion&, const Criterion&) = default;
};

struct Alternative {
  std::string id;
  std::string label;
  std::size_t index = 0;
  friend bool operator==(const Alternative&, const Alternative&) = default;
};

/// One judge's nonnegative ratio-scale weights, one per criterion.
struct ImportanceVector {
  std::string judge_id;
  Vector weights;
  friend bool operator==(const ImportanceVector& a, const ImportanceVector& b) {
    return a.judge_id == b.judge_id && a.weights.size() == b.weights.size() &&
           a.weights == b.weights;
  }
};

struct JudgePanel {
  std::vector<ImportanceVector> judges;

  std::size_t size() const { return judges.size(); }
  std::vector<Vector> weight_vectors() const {
    std::vector<Vector> out;
    out.reserve(judges.size());
    for (const auto& j : judges) out.push_back(j.weights);
    return out;
  }
  friend bool operator==(const JudgePanel&, const JudgePanel&) = default;
};

/// d x m matrix whose column i holds the criteria evaluations of alternative i.
/// Every column carries probability 1/m.
class EvaluationMatrix {
 public:
  EvaluationMatrix() = default;
  explicit EvaluationMatrix(Matrix columns) : data_(std::move(columns)) {}

  static EvaluationMatrix from_columns(const std::vector<std::vector<double>>& cols) {
    const auto d = cols.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(cols.front().size());
    Matrix m(d, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (static_cast<Eigen::Index>(cols[j].size()) != d)
        throw InvalidArgument("evaluation columns have different lengths");
      for (Eigen::Index i = 0; i < d; ++i) m(i, static_cast<Eigen::Index>(j)) = cols[j][static_cast<std::size_t>(i)];
    }
    return EvaluationMatrix(std::move(m));
  }

  std::size_t criteria() const { return static_cast<std::size_t>(data_.rows()); }
  std::size_t alternatives() const { return static_cast<std::size_t>(data_.cols()); }
  Vector column(std::size_t i) const { return data_.col(static_cast<Eigen::Index>(i)); }
  const Matrix& data() const { return data_; }

  friend bool operator==(const EvaluationMatrix& a, const EvaluationMatrix& b) {
    return a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() &&
           a.data_ == b.data_;
  }

 private:
  Matrix data_;
};

struct DecisionProblem {
  std::vector<Criterion> criteria;
  std::vector<Alternative> alternatives;
  JudgePanel panel;
  EvaluationMatrix evaluations;

  std::size_t d() const { return criteria.size(); }
  std::size_t m() const { return alternatives.size(); }
  friend bool operator==(const DecisionProblem&, const DecisionProblem&) = default;
};

struct Violation {
  std::string code;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Raised by the parsers. `location` names the offending cell, e.g.
/// "judges[1][0]" or "evaluations.csv:3:2".
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string location,
             std::vector<Violation> violations = {})
      : Error(location.empty() ? message : location + ": " + message),
        location_(std::move(location)),
        violations_(std::move(violations)) {
    if (violations_.empty()) violations_.push_back({code_for(message), what()});
  }

  const std::string& location() const { return location_; }
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string code_for(const std::string& message) {
    static const std::pair<const char*, const char*> prefixes[] = {
        {"negative judge weight", "negative_weight"},
        {"all-zero importance vector", "zero_importance_vector"},
        {"dimension mismatch", "dimension_mismatch"},
        {"non-numeric", "non_numeric_cell"},
        {"duplicate id", "duplicate_id"},
        {"unknown criterion id", "unknown_id"},
        {"cannot open file", "unreadable_file"},
    };
    for (const auto& [prefix, code] : prefixes)
      if (message.rfind(prefix, 0) == 0) return code;
    return "malformed_document";
  }

  std::string location_;
  std::vector<Violation> violations_;
};

/// Every invariant violation of a type-complete problem; empty when valid.
inline std::vector<Violation> validate_problem(const DecisionProblem& p) {
  std::vector<Violation> out;
  const auto& x = p.evaluations;

  if (p.criteria.empty()) out.push_back({"empty_criteria", "empty criterion set"});
  if (p.alternatives.empty()) out.push_back({"empty_alternatives", "empty alternative set"});
  if (p.panel.judges.empty()) out.push_back({"empty_panel", "empty judge panel"});

  auto check_ids = [&out](const auto& items, const char* what) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].index != i)
        out.push_back({"index_mismatch", std::string(what) + " '" + items[i].id +
                                             "' has index " + std::to_string(items[i].index) +
                                             ", expected " + std::to_string(i)});
      if (items[i].id.empty())
        out.push_back({"empty_id", std::string(what) + " at position " + std::to_string(i) +
                                       " has an empty id"});
      else if (!seen.insert(items[i].id).second)
        out.push_back({"duplicate_id", "duplicate " + std::string(what) + " id '" + items[i].id + "'"});
    }
  };
  check_ids(p.criteria, "criterion");
  check_ids(p.alternatives, "alternative");

  if (x.criteria() != p.criteria.size() && !(x.alternatives() == 0 && x.criteria() == 0))
    out.push_back({"dimension_mismatch", "dimension mismatch: " + std::to_string(p.criteria.size()) +
                                             " criteria but evaluation columns have length " +
                                             std::to_string(x.criteria())});
  if (x.alternatives() != p.alternatives.size())
    out.push_back({"dimension_mismatch", "dimension mismatch: " +
                                             std::to_string(p.alternatives.size()) +
                                             " alternatives but " + std::to_string(x.alternatives()) +
                                             " evaluation columns"});

  for (std::size_t j = 0; j < x.alternatives(); ++j)
    for (std::size_t i = 0; i < x.criteria(); ++i)
      if (!std::isfinite(x.data()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))))
        out.push_back({"non_finite_evaluation", "evaluation of alternative " + std::to_string(j) +
                                                    " on criterion " + std::to_string(i) +
                                                    " is not a finite number"});

  std::vector<std::string> wrong_dim;
  std::set<std::string> judge_ids;
  for (const auto& judge : p.panel.judges) {
    if (static_cast<std::size_t>(judge.weights.size()) != p.criteria.size()) {
      wrong_dim.push_back(judge.judge_id);
      continue;
    }
    if (!judge_ids.insert(judge.judge_id).second)
      out.push_back({"duplicate_id", "duplicate judge id '" + judge.judge_id + "'"});
    bool positive = false;
    for (Eigen::Index i = 0; i < judge.weights.size(); ++i) {
      const double w = judge.weights(i);
      if (!std::isfinite(w))
        out.push_back({"non_finite_weight", "judge '" + judge.judge_id + "' weight " +
                                                std::to_string(i) + " is not a finite number"});
      else if (w < 0.0)
        out.push_back({"negative_weight", "judge '" + judge.judge_id + "' has negative weight " +
                                              std::to_string(w) + " on criterion " + std::to_string(i)});
      else if (w > 0.0)
        positive = true;
    }
    if (!positive)
      out.push_back({"zero_importance_vector", "judge '" + judge.judge_id +
                                                   "' has no positive weight"});
  }
  if (!wrong_dim.empty()) {
    std::string names;
    for (const auto& n : wrong_dim) names += (names.empty() ? "" : ", ") + n;
    out.push_back({"dimension_mismatch", "dimension mismatch: importance vectors of judges " + names +
                                             " do not have " + std::to_string(p.criteria.size()) +
                                             " entries"});
  }
  return out;
}

inline std::string default_judge_id(std::size_t j) { return "j" + std::to_string(j + 1); }

namespace detail {

inline void throw_if_invalid(const DecisionProblem& p) {
  auto violations = validate_problem(p);
  if (violations.empty()) return;
  std::string msg = violations.front().message;
  if (violations.size() > 1) msg += " (and " + std::to_string(violations.size() - 1) + " more)";
  throw ParseError(msg, "", std::move(violations));
}

template <typename Item>
std::vector<Item> parse_named_items(const nlohmann::json& arr, const std::string& key) {
  if (!arr.is_array()) throw ParseError("expected an array", key);
  std::vector<Item> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& e = arr[i];
    const std::string where = key + "[" + std::to_string(i) + "]";
    Item item;
    item.index = i;
    if (e.is_string()) {
      item.id = e.get<std::string>();
      item.label = item.id;
    } else if (e.is_object() && e.contains("id") && e["id"].is_string()) {
      item.id = e["id"].get<std::string>();
      item.label = e.contains("label") && e["label"].is_string() ? e["label"].get<std::string>() : item.id;
    } else {
      throw ParseError("expected a string id or an object with an \"id\" field", where);
    }
    if (item.id.empty()) throw ParseError("empty id", where);
    if (!seen.insert(item.id).second) throw ParseError("duplicate id '" + item.id + "'", where);
    out.push_back(std::move(item));
  }
  return out;
}

inline Vector parse_number_row(const nlohmann::json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError("expected an array of numbers", where);
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw ParseError("non-numeric cell", where + "[" + std::to_string(i) + "]");
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

inline void check_weights(const Vector& w, std::size_t d, const std::string& where) {
  if (static_cast<std::size_t>(w.size()) != d)
    throw ParseError("dimension mismatch: importance vector has " + std::to_string(w.size()) +
                         " entries, expected " + std::to_string(d),
                     where);
  bool positive = false;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < 0.0)
      throw ParseError("negative judge weight", where + "[" + std::to_string(i) + "]");
    if (w(i) > 0.0) positive = true;
  }
  if (!positive) throw ParseError("all-zero importance vector", where);
}

}  // namespace detail

/// Parses the judges array used both in problem documents and in panel
/// updates: either arrays of weights or {"id": .., "weights": [..]} objects.
inline JudgePanel parse_panel_json(const nlohmann::json& arr, std::size_t d,
                                   const std::string& key = "judges") {
  if (!arr.is_array()) throw ParseError("expected an array", key);
  JudgePanel panel;
  std::set<std::string> seen;
  for (std::size_t j = 0; j < arr.size(); ++j) {
    const std::string where = key + "[" + std::to_string(j) + "]";
    ImportanceVector iv;
    if (arr[j].is_array()) {
      iv.judge_id = default_judge_id(j);
      iv.weights = detail::parse_number_row(arr[j], where);
      detail::check_weights(iv.weights, d, where);
    } else if (arr[j].is_object() && arr[j].contains("weights")) {
      iv.judge_id = arr[j].contains("id") && arr[j]["id"].is_string() ? arr[j]["id"].get<std::string>()
                                                                       : default_judge_id(j);
      iv.weights = detail::parse_number_row(arr[j]["weights"], where + ".weights");
      detail::check_weights(iv.weights, d, where + ".weights");
    } else {
      throw ParseError("expected an array of weights or an object with \"weights\"", where);
    }
    if (!seen.insert(iv.judge_id).second)
      throw ParseError("duplicate id '" + iv.judge_id + "'", where);
    panel.judges.push_back(std::move(iv));
  }
  return panel;
}

inline DecisionProblem parse_problem_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("expected a JSON object", "$");
  for (const char* key : {"criteria", "alternatives", "judges", "evaluations"})
    if (!doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"", "$");

  DecisionProblem p;
  p.criteria = detail::parse_named_items<Criterion>(doc["criteria"], "criteria");
  p.alternatives = detail::parse_named_items<Alternative>(doc["alternatives"], "alternatives");
  const std::size_t d = p.criteria.size();

  const auto& ev = doc["evaluations"];
  if (!ev.is_array()) throw ParseError("expected an array", "evaluations");
  if (ev.size() != p.alternatives.size())
    throw ParseError("dimension mismatch: " + std::to_string(p.alternatives.size()) +
                         " alternatives but " + std::to_string(ev.size()) + " evaluation columns",
                     "evaluations");
  Matrix x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(ev.size()));
  for (std::size_t j = 0; j < ev.size(); ++j) {
    const std::string where = "evaluations[" + std::to_string(j) + "]";
    const Vector col = detail::parse_number_row(ev[j], where);
    if (static_cast<std::size_t>(col.size()) != d)
      throw ParseError("dimension mismatch: column has " + std::to_string(col.size()) +
                           " entries, expected " + std::to_string(d),
                       where);
    x.col(static_cast<Eigen::Index>(j)) = col;
  }
  p.evaluations = EvaluationMatrix(std::move(x));
  p.panel = parse_panel_json(doc["judges"], d);
  detail::throw_if_invalid(p);
  return p;
}

inline DecisionProblem parse_problem_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed JSON: " + std::string(e.what()), "byte " + std::to_string(e.byte));
  }
  return parse_problem_json(doc);
}

inline nlohmann::ordered_json panel_to_json(const JudgePanel& panel) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& j : panel.judges) {
    nlohmann::ordered_json w = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < j.weights.size(); ++i) w.push_back(j.weights(i));
    arr.push_back({{"id", j.judge_id}, {"weights", std::move(w)}});
  }
  return arr;
}

inline nlohmann::ordered_json problem_to_json(const DecisionProblem& p) {
  nlohmann::ordered_json doc;
  auto named = [](const auto& items) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& it : items) arr.push_back({{"id", it.id}, {"label", it.label}});
    return arr;
  };
  doc["criteria"] = named(p.criteria);
  doc["alternatives"] = named(p.alternatives);
  doc["judges"] = panel_to_json(p.panel);
  auto ev = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < p.evaluations.alternatives(); ++j) {
    auto col = nlohmann::ordered_json::array();
    const Vector c = p.evaluations.column(j);
    for (Eigen::Index i = 0; i < c.size(); ++i) col.push_back(c(i));
    ev.push_back(std::move(col));
  }
  doc["evaluations"] = std::move(ev);
  return doc;
}

// ---------------------------------------------------------------------------
// CSV pair: evaluations.csv (header = alternative ids, first column =
// criterion ids) and judges.csv (header = criterion ids, one row per judge,
// optionally preceded by a judge id column).

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  for (auto& s : cells) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  }
  return cells;
}

struct CsvTable {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based, parallel to rows
};

inline CsvTable read_csv(std::string_view text) {
  CsvTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    t.rows.push_back(split_csv_line(line));
    t.line_numbers.push_back(lineno);
  }
  return t;
}

inline double parse_csv_number(const std::string& cell, const std::string& where) {
  if (cell.empty()) throw ParseError("non-numeric cell (empty)", where);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw ParseError("non-numeric cell '" + cell + "'", where);
  }
  if (used != cell.size() || !std::isfinite(v)) throw ParseError("non-numeric cell '" + cell + "'", where);
  return v;
}

}  // namespace detail

inline DecisionProblem parse_problem_csv(std::string_view evaluations_csv, std::string_view judges_csv,
                                         const std::string& eval_name = "evaluations.csv",
                                         const std::string& judges_name = "judges.csv") {
  const auto ev = detail::read_csv(evaluations_csv);
  auto loc = [](const std::string& file, std::size_t line, std::size_t col) {
    return file + ":" + std::to_string(line) + ":" + std::to_string(col);
  };
  if (ev.rows.empty()) throw ParseError("empty file", eval_name);

  DecisionProblem p;
  const auto& header = ev.rows.front();
  std::set<std::string> seen;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) throw ParseError("empty alternative id", loc(eval_name, ev.line_numbers[0], c + 1));
    if (!seen.insert(header[c]).second)
      throw ParseError("duplicate id '" + header[c] + "'", loc(eval_name, ev.line_numbers[0], c + 1));
    p.alternatives.push_back({header[c], header[c], c - 1});
  }
  const std::size_t m = p.alternatives.size();
  const std::size_t d = ev.rows.size() - 1;
  Matrix x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m));
  seen.clear();
  for (std::size_t r = 1; r < ev.rows.size(); ++r) {
    const auto& row = ev.rows[r];
    const std::size_t line = ev.line_numbers[r];
    if (row.size() != m + 1)
      throw ParseError("dimension mismatch: row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(m + 1),
                       loc(eval_name, line, 1));
    if (row[0].empty()) throw ParseError("empty criterion id", loc(eval_name, line, 1));
    if (!seen.insert(row[0]).second) throw ParseError("duplicate id '" + row[0] + "'", loc(eval_name, line, 1));
    p.criteria.push_back({row[0], row[0], r - 1});
    for (std::size_t c = 1; c < row.size(); ++c)
      x(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) =
          detail::parse_csv_number(row[c], loc(eval_name, line, c + 1));
  }
  p.evaluations = EvaluationMatrix(std::move(x));

  const auto jt = detail::read_csv(judges_csv);
  if (jt.rows.empty()) throw ParseError("empty file", judges_name);
  const auto& jh = jt.rows.front();
  const bool has_id_column = jh.size() == d + 1;
  const std::size_t first = has_id_column ? 1 : 0;
  if (jh.size() - first != d)
    throw ParseError("dimension mismatch: header has " + std::to_string(jh.size()) + " cells for " +
                         std::to_string(d) + " criteria",
                     loc(judges_name, jt.line_numbers[0], 1));
  // Map judge columns onto criterion order by id.
  std::vector<std::size_t> column_of(d);
  std::set<std::string> used;
  for (std::size_t c = first; c < jh.size(); ++c) {
    auto it = std::find_if(p.criteria.begin(), p.criteria.end(),
                           [&](const Criterion& cr) { return cr.id == jh[c]; });
    if (it == p.criteria.end())
      throw ParseError("unknown criterion id '" + jh[c] + "'", loc(judges_name, jt.line_numbers[0], c + 1));
    if (!used.insert(jh[c]).second)
      throw ParseError("duplicate id '" + jh[c] + "'", loc(judges_name, jt.line_numbers[0], c + 1));
    column_of[it->index] = c;
  }
  seen.clear();
  for (std::size_t r = 1; r < jt.rows.size(); ++r) {
    const auto& row = jt.rows[r];
    const std::size_t line = jt.line_numbers[r];
    if (row.size() != jh.size())
      throw ParseError("dimension mismatch: row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(jh.size()),
                       loc(judges_name, line, 1));
    ImportanceVector iv;
    iv.judge_id = has_id_column ? row[0] : default_judge_id(r - 1);
    if (iv.judge_id.empty()) throw ParseError("empty judge id", loc(judges_name, line, 1));
    if (!seen.insert(iv.judge_id).second)
      throw ParseError("duplicate id '" + iv.judge_id + "'", loc(judges_name, line, 1));
    iv.weights = Vector(static_cast<Eigen::Index>(d));
    bool positive = false;
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t c = column_of[i];
      const double w = detail::parse_csv_number(row[c], loc(judges_name, line, c + 1));
      if (w < 0.0) throw ParseError("negative judge weight", loc(judges_name, line, c + 1));
      if (w > 0.0) positive = true;
      iv.weights(static_cast<Eigen::Index>(i)) = w;
    }
    if (!positive) throw ParseError("all-zero importance vector", loc(judges_name, line, 1));
    p.panel.judges.push_back(std::move(iv));
  }
  detail::throw_if_invalid(p);
  return p;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads a problem from a .json file, a directory holding evaluations.csv
/// and judges.csv, or an evaluations .csv file with judges.csv beside it.
inline DecisionProblem load_problem(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (fs::is_directory(path)) {
    return parse_problem_csv(read_text_file(path / "evaluations.csv"), read_text_file(path / "judges.csv"));
  }
  if (path.extension() == ".csv") {
    return parse_problem_csv(read_text_file(path), read_text_file(path.parent_path() / "judges.csv"),
                             path.filename().string(), "judges.csv");
  }
  const std::string text = read_text_file(path);
  return parse_problem_json(std::string_view(text));
}

}  // namespace conerank
