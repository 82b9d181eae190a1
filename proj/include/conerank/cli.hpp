#pragma once

// Command-line front end: rank, classify, quantile, cones, plot, serve.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conerank/analysis.hpp"
#include "conerank/http.hpp"
#include "conerank/json_io.hpp"
#include "conerank/svg.hpp"

namespace conerank::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 1, kUnsupportedDimension = 2, kBadFlags = 3 };

struct Options {
  std::string verb;
  std::string problem_path;
  std::optional<double> p;
  std::optional<std::string> judges;
  std::string output = "table";
  std::string bbox;
  std::string out_path;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
};

namespace detail {

struct BadFlags : Error {
  using Error::Error;
};

struct UnsupportedDimension : Error {
  using Error::Error;
};

inline std::string num(double v, const char* format = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string vec_str(const Vector& v, const char* format = "%.6f") {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v(i), format);
  return s + ")";
}

inline std::string rays_str(const std::vector<Vector>& rays) {
  if (rays.empty()) return "(none)";
  std::string s;
  for (std::size_t i = 0; i < rays.size(); ++i) s += (i ? " " : "") + vec_str(rays[i]);
  return s;
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

inline std::string fraction(const Rank& r) { return std::to_string(r.count) + "/" + std::to_string(r.of); }

// Plain-text table with left-aligned columns separated by two spaces.
inline void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], r[c].size());
    }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) line += c + 1 < r.size() ? pad(r[c], width[c] + 2) : r[c];
    out << line << "\n";
  }
}

struct Loaded {
  DecisionProblem problem;
  JudgePanel panel;
  ConvexCone importance;
};

inline Loaded load(const Options& o) {
  Loaded l;
  l.problem = load_problem(o.problem_path);
  l.panel = l.problem.panel;
  if (o.judges) {
    try {
      l.panel = select_judges(l.problem.panel, split_ids(*o.judges));
    } catch (const InvalidArgument& e) {
      throw BadFlags(std::string("--judges: ") + e.what());
    }
  }
  l.importance = importance_cone(l.panel);
  return l;
}

inline double require_p(const Options& o) {
  if (!o.p) throw BadFlags("-p/--p is required for '" + o.verb + "'");
  if (!(*o.p > 0.0 && *o.p < 1.0)) throw BadFlags("-p must lie in the open interval (0, 1)");
  return *o.p;
}

inline Box require_bbox(const Options& o) {
  if (o.bbox.empty()) throw BadFlags("--bbox x0,y0,x1,y1 is required for SVG output");
  auto b = Service::parse_bbox(o.bbox);
  if (!b) throw BadFlags("--bbox must be x0,y0,x1,y1 with x0 < x1 and y0 < y1");
  return *b;
}

inline void require_output(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (o.output == a) return;
  throw BadFlags("--output " + o.output + " is not available for '" + o.verb + "'");
}

}  // namespace detail

inline void print_rank_table(std::ostream& out, const RankResult& r) {
  using namespace detail;
  out << "importance cone generators: " << rays_str(r.importance.generators()) << "\n";
  std::vector<std::vector<std::string>> rows{{"alternative", "rank", "value", "witness"}};
  for (const auto& e : r.sorted())
    rows.push_back({e.alternative_id, fraction(e.value.rank), num(e.value.rank.value(), "%.4f"),
                    vec_str(e.value.witness.direction)});
  print_table(out, rows);
}

inline void print_verdict_table(std::ostream& out, double p, const std::vector<QuantileVerdict>& verdicts) {
  using namespace detail;
  out << "p = " << num(p, "%g") << "\n";
  std::vector<std::vector<std::string>> rows{{"alternative", "in_lower", "in_upper", "verdict"}};
  for (const auto& v : verdicts)
    rows.push_back({v.alternative_id, v.in_lower ? "yes" : "no", v.in_upper ? "yes" : "no", to_string(v.label)});
  print_table(out, rows);
}

inline void print_cones(std::ostream& out, const ConvexCone& k_i, const ConvexCone& k_a) {
  using namespace detail;
  out << "importance cone K_I\n"
      << "  generators:    " << rays_str(k_i.generators()) << "\n"
      << "  facet normals: " << rays_str(k_i.facet_normals()) << "\n"
      << "acceptance cone K_A\n"
      << "  generators:    " << rays_str(k_a.generators()) << "\n"
      << "  facet normals: " << rays_str(k_a.facet_normals()) << "\n";
}

/// Judges whose vectors are extreme rays of the importance cone, in panel order.
inline std::vector<ImportanceVector> extreme_judges(const JudgePanel& panel, const ConvexCone& k_i) {
  std::vector<ImportanceVector> out;
  for (const auto& j : panel.judges) {
    const Vector u = unit(j.weights);
    if (std::any_of(k_i.generators().begin(), k_i.generators().end(),
                    [&](const Vector& g) { return approx_equal(g, u, 1e-9); }))
      out.push_back(j);
  }
  return out;
}

inline ojson quantile_json(const DecisionProblem& problem, const JudgePanel& panel, const ConvexCone& k_i, double p) {
  const auto& x = problem.evaluations;
  ojson halfspaces = ojson::array();
  for (const auto& j : extreme_judges(panel, k_i)) {
    const auto lo = lower_v_quantile(x, j.weights, p);
    const auto up = upper_v_quantile(x, j.weights, p);
    halfspaces.push_back({{"judge", j.judge_id},
                          {"direction", vector_to_json(j.weights)},
                          {"lower_threshold", lo.threshold},
                          {"upper_threshold", up.is_whole_space() ? ojson(nullptr) : ojson(up.threshold)}});
  }
  ojson members = ojson::array();
  for (std::size_t i = 0; i < x.alternatives(); ++i) {
    const Vector z = x.column(i);
    const auto f = cone_distribution(x, k_i, z).rank;
    const auto g = strict_exceedance_sup(x, k_i, z).rank;
    const bool lo = lower_quantile_membership(x, k_i, p, z), up = upper_quantile_membership(x, k_i, p, z);
    members.push_back({{"alternative", problem.alternatives[i].id},
                       {"rank", {{"value", f.count}, {"of", f.of}}},
                       {"strict_exceedance", {{"value", g.count}, {"of", g.of}}},
                       {"in_lower", lo},
                       {"in_upper", up}});
  }
  return {{"p", p}, {"halfspaces", std::move(halfspaces)}, {"memberships", std::move(members)}};
}

inline void print_quantile_table(std::ostream& out, const ojson& q) {
  using namespace detail;
  out << "p = " << num(q["p"].get<double>(), "%g") << "\n";
  std::vector<std::vector<std::string>> rows{{"judge", "direction", "lower: v.z >=", "upper: v.z <="}};
  for (const auto& h : q["halfspaces"])
    rows.push_back({h["judge"].get<std::string>(), vec_str(vector_from_json(h["direction"]), "%g"),
                    num(h["lower_threshold"].get<double>(), "%g"),
                    h["upper_threshold"].is_null() ? "inf" : num(h["upper_threshold"].get<double>(), "%g")});
  print_table(out, rows);
  out << "\n";
  std::vector<std::vector<std::string>> members{{"alternative", "rank", "strict", "in_lower", "in_upper"}};
  for (const auto& m : q["memberships"])
    members.push_back({m["alternative"].get<std::string>(),
                       std::to_string(m["rank"]["value"].get<std::size_t>()) + "/" +
                           std::to_string(m["rank"]["of"].get<std::size_t>()),
                       std::to_string(m["strict_exceedance"]["value"].get<std::size_t>()) + "/" +
                           std::to_string(m["strict_exceedance"]["of"].get<std::size_t>()),
                       m["in_lower"].get<bool>() ? "yes" : "no", m["in_upper"].get<bool>() ? "yes" : "no"});
  print_table(out, members);
}

inline int execute(const Options& o, std::ostream& out) {
  using namespace detail;
  if (o.verb == "serve") {
    if (!o.static_dir.empty() && !std::filesystem::is_directory(o.static_dir))
      throw BadFlags("--static: '" + o.static_dir + "' is not a directory");
    Service service;
    out << "listening on http://" << o.host << ":" << o.port << std::endl;
    if (!serve(service, o.host, o.port, o.static_dir)) throw BadFlags("cannot listen on port " + std::to_string(o.port));
    return kOk;
  }
  if (o.verb == "rank") {
    require_output(o, {"table", "json"});
    const auto l = load(o);
    const auto r = rank_alternatives(l.problem.evaluations, l.importance, alternative_ids(l.problem));
    if (o.output == "json") out << rank_result_to_json(r).dump(2) << "\n";
    else print_rank_table(out, r);
    return kOk;
  }
  if (o.verb == "classify") {
    require_output(o, {"table", "json"});
    const double p = require_p(o);
    const auto l = load(o);
    const auto v = classify(l.problem.evaluations, l.importance, p, alternative_ids(l.problem));
    if (o.output == "json") {
      ojson j = verdicts_to_json(p, v);
      if (!o.bbox.empty()) {
        if (l.problem.d() != 2) throw UnsupportedDimension("regions need exactly two criteria");
        j["region"] = region_to_json(quantile_region_2d(l.problem.evaluations, l.importance, p, require_bbox(o)));
      }
      out << j.dump(2) << "\n";
    } else {
      print_verdict_table(out, p, v);
    }
    return kOk;
  }
  if (o.verb == "quantile") {
    require_output(o, {"table", "json"});
    const double p = require_p(o);
    const auto l = load(o);
    const auto q = quantile_json(l.problem, l.panel, l.importance, p);
    if (o.output == "json") out << q.dump(2) << "\n";
    else print_quantile_table(out, q);
    return kOk;
  }
  if (o.verb == "cones") {
    require_output(o, {"table", "json"});
    const auto l = load(o);
    const auto k_a = dual_cone(l.importance);
    if (o.output == "json") out << cones_summary_json(l.importance, k_a).dump(2) << "\n";
    else print_cones(out, l.importance, k_a);
    return kOk;
  }
  if (o.verb == "plot") {
    if (o.output != "table") require_output(o, {"svg"});
    const double p = require_p(o);
    const Box box = require_bbox(o);
    const auto l = load(o);
    if (l.problem.d() != 2) throw UnsupportedDimension("plot needs exactly two criteria, got " + std::to_string(l.problem.d()));
    const auto region = quantile_region_2d(l.problem.evaluations, l.importance, p, box);
    const auto svg = render_svg(l.problem.evaluations, alternative_ids(l.problem), l.importance, region);
    if (o.out_path.empty()) {
      out << svg;
    } else {
      std::ofstream f(o.out_path, std::ios::binary);
      if (!f) throw BadFlags("cannot write '" + o.out_path + "'");
      f << svg;
    }
    return kOk;
  }
  throw BadFlags("unknown command '" + o.verb + "'");
}

/// Parses `args` (without the program name) and runs the command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cone-based ranking and classification of alternatives", "conerank"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* sub, bool needs_problem) {
    auto* opt = sub->add_option("--problem", o.problem_path, "problem file (.json, .csv) or CSV directory");
    if (needs_problem) opt->required();
    sub->add_option("--judges", o.judges, "comma-separated judge ids to use");
    sub->add_option("--output", o.output, "table | json | svg")
        ->check(CLI::IsMember({"table", "json", "svg"}));
  };
  auto with_p = [&](CLI::App* sub) { sub->add_option("-p,--p", o.p, "quantile order in (0, 1)"); };

  auto* rank = app.add_subcommand("rank", "cone-distribution rank of every alternative");
  common(rank, true);
  auto* cls = app.add_subcommand("classify", "four-way verdicts at order p");
  common(cls, true);
  with_p(cls);
  cls->add_option("--bbox", o.bbox, "x0,y0,x1,y1; adds region polygons to JSON output");
  auto* qnt = app.add_subcommand("quantile", "per-judge quantile halfspaces and memberships");
  common(qnt, true);
  with_p(qnt);
  auto* cns = app.add_subcommand("cones", "importance and acceptance cones");
  common(cns, true);
  auto* plt = app.add_subcommand("plot", "SVG of points, cones and quantile regions (two criteria)");
  common(plt, true);
  with_p(plt);
  plt->add_option("--bbox", o.bbox, "x0,y0,x1,y1 viewport");
  plt->add_option("--out", o.out_path, "write the SVG here instead of standard output");
  auto* srv = app.add_subcommand("serve", "start the HTTP service");
  srv->add_option("--port", o.port, "TCP port")->check(CLI::Range(0, 65535));
  srv->add_option("--host", o.host, "bind address");
  srv->add_option("--static", o.static_dir, "directory served under /");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadFlags;
  }
  for (auto* sub : app.get_subcommands()) o.verb = sub->get_name();

  try {
    return execute(o, out);
  } catch (const detail::BadFlags& e) {
    err << "error: " << e.what() << "\n";
    return kBadFlags;
  } catch (const detail::UnsupportedDimension& e) {
    err << "error: unsupported dimension: " << e.what() << "\n";
    return kUnsupportedDimension;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace conerank::cli
