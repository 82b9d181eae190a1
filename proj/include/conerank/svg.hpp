#pragma once

// Deterministic SVG rendering of a planar problem: sample points, the
// importance and acceptance wedges, and the clipped quantile polygons.

#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "conerank/cones.hpp"
#include "conerank/model.hpp"
#include "conerank/quantiles.hpp"

namespace conerank {

struct SvgStyle {
  double width = 640.0;
  double height = 640.0;
  double margin = 24.0;
  int arc_samples = 48;
};

namespace detail {

inline std::string fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Canvas {
 public:
  Canvas(const Box& box, const SvgStyle& style) : box_(box), style_(style) {
    const double sx = (style.width - 2 * style.margin) / (box.x1 - box.x0);
    const double sy = (style.height - 2 * style.margin) / (box.y1 - box.y0);
    scale_ = std::min(sx, sy);
  }

  std::string x(double v) const { return fmt("%.3f", style_.margin + (v - box_.x0) * scale_); }
  std::string y(double v) const { return fmt("%.3f", style_.height - style_.margin - (v - box_.y0) * scale_); }

  std::string points(const Polygon& poly) const {
    std::string out;
    for (std::size_t i = 0; i < poly.size(); ++i) out += (i ? " " : "") + x(poly[i].x()) + "," + y(poly[i].y());
    return out;
  }

 private:
  Box box_;
  SvgStyle style_;
  double scale_ = 1.0;
};

// Wedge of a planar cone anchored at `apex`, drawn out to `radius`.
inline Polygon wedge(const ConvexCone& c, const Point2& apex, double radius, int samples) {
  if (c.is_trivial()) return {};
  const Arc arc = planar_arc(c.generators());
  Polygon out;
  if (arc.span < 2.0 * kPi) out.push_back(apex);
  const int n = arc.span == 0.0 ? 1 : samples;
  for (int i = 0; i <= n; ++i) {
    const Vector d = direction_at(arc.start + arc.span * i / n);
    out.emplace_back(apex.x() + radius * d(0), apex.y() + radius * d(1));
  }
  return out;
}

}  // namespace detail

/// SVG document for a planar problem. Cones are drawn at the sample mean.
inline std::string render_svg(const EvaluationMatrix& x, std::span<const std::string> ids, const ConvexCone& k_i,
                              const QuantileRegion2D& region, const SvgStyle& style = {}) {
  if (x.criteria() != 2 || k_i.dim() != 2) throw InvalidArgument("unsupported dimension: plots need two criteria");
  const Box& b = region.bbox;
  const detail::Canvas cv(b, style);
  using detail::fmt;
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", style.width) + "\" height=\"" +
       fmt("%.0f", style.height) + "\" viewBox=\"0 0 " + fmt("%.0f", style.width) + " " +
       fmt("%.0f", style.height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fmt("%.0f", style.width) + "\" height=\"" + fmt("%.0f", style.height) +
       "\" fill=\"white\"/>\n";
  s += "<polygon class=\"bbox\" points=\"" + cv.points(box_polygon(b)) + "\" fill=\"none\" stroke=\"#999\"/>\n";
  s += "<g>\n";
  if (!region.lower_polygon.empty())
    s += "<polygon class=\"lower-quantile\" points=\"" + cv.points(region.lower_polygon) +
         "\" fill=\"#2e7d32\" fill-opacity=\"0.25\" stroke=\"#2e7d32\"/>\n";
  if (!region.upper_polygon.empty())
    s += "<polygon class=\"upper-quantile\" points=\"" + cv.points(region.upper_polygon) +
         "\" fill=\"#c62828\" fill-opacity=\"0.25\" stroke=\"#c62828\"/>\n";

  const Vector mean = x.data().rowwise().mean();
  const Point2 apex(mean(0), mean(1));
  const double radius = 0.25 * std::min(b.x1 - b.x0, b.y1 - b.y0);
  auto to_box = [&](Polygon poly) {
    for (const Halfplane& h : {Halfplane{Point2(1, 0), b.x0}, Halfplane{Point2(-1, 0), -b.x1},
                               Halfplane{Point2(0, 1), b.y0}, Halfplane{Point2(0, -1), -b.y1}})
      poly = clip(poly, h);
    return poly;
  };
  const Polygon ka = to_box(detail::wedge(dual_cone(k_i), apex, radius, style.arc_samples));
  const Polygon ki = to_box(detail::wedge(k_i, apex, radius, style.arc_samples));
  if (!ka.empty())
    s += "<polygon class=\"acceptance-cone\" points=\"" + cv.points(ka) +
         "\" fill=\"#1565c0\" fill-opacity=\"0.15\" stroke=\"#1565c0\" stroke-dasharray=\"4 3\"/>\n";
  if (!ki.empty())
    s += "<polygon class=\"importance-cone\" points=\"" + cv.points(ki) +
         "\" fill=\"#ef6c00\" fill-opacity=\"0.3\" stroke=\"#ef6c00\"/>\n";
  s += "</g>\n";

  for (std::size_t i = 0; i < x.alternatives(); ++i) {
    const Vector z = x.column(i);
    const std::string label = i < ids.size() ? ids[i] : "a" + std::to_string(i + 1);
    s += "<circle class=\"alternative\" cx=\"" + cv.x(z(0)) + "\" cy=\"" + cv.y(z(1)) +
         "\" r=\"4\" fill=\"black\"/>\n";
    s += "<text x=\"" + cv.x(z(0)) + "\" y=\"" + cv.y(z(1)) + "\" dx=\"6\" dy=\"-6\" font-size=\"12\">" +
         detail::xml_escape(label) + "</text>\n";
  }
  s += "<text x=\"" + fmt("%.0f", style.margin) + "\" y=\"16\" font-size=\"12\">p = " + fmt("%g", region.p) +
       "</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace conerank
