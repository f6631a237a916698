#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "clusterlab/cluster.hpp"
#include "clusterlab/grid.hpp"
#include "clusterlab/region.hpp"

namespace clusterlab {

namespace detail {

inline constexpr const char* svg_palette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                              "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

inline const char* svg_fill(std::size_t k) { return svg_palette[k % (sizeof(svg_palette) / sizeof(*svg_palette))]; }

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

// SVG has y pointing down; flip about the box so pictures read the usual way.
struct SvgFrame {
  Box box;
  std::string x(double v) const { return fmt(v - box.xmin); }
  std::string y(double v) const { return fmt(box.ymax - v); }
  std::string pt(Vec2 p) const { return x(p.x) + "," + y(p.y); }
};

inline std::string svg_header(const Box& b) {
  const double w = b.width(), h = b.height();
  const double stroke = 0.002 * std::max(w, h);
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) +
         "\" width=\"800\" height=\"" + fmt(std::round(800.0 * h / w)) + "\">\n<g stroke=\"#222222\" stroke-width=\"" +
         fmt(stroke) + "\" fill-rule=\"evenodd\">\n";
}

inline void svg_loop(std::ostringstream& out, const SvgFrame& f, const std::vector<Edge>& loop) {
  if (loop.empty()) return;
  out << "M" << f.pt(loop.front().from);
  for (const Edge& e : loop) {
    if (!e.is_arc()) {
      out << " L" << f.pt(e.to);
      continue;
    }
    // Split into arcs of at most pi so the SVG flags stay unambiguous.
    const int parts = std::max(1, static_cast<int>(std::ceil(std::abs(e.sweep) / pi - 1e-12)));
    const double r = e.radius();
    for (int k = 1; k <= parts; ++k) {
      const Vec2 p = k == parts ? e.to : e.center + r * unit_at(e.start_angle() + e.sweep * k / parts);
      // The flip reverses orientation: counterclockwise in the plane is sweep-flag 0.
      out << " A" << fmt(r) << "," << fmt(r) << " 0 0 " << (e.sweep > 0 ? 0 : 1) << " " << f.pt(p);
    }
  }
  out << " Z";
}

template <class Inside>
void svg_runs(std::ostringstream& out, const SvgFrame& f, Vec2 origin, double h, int width, int height, Inside inside) {
  bool first = true;
  for (int j = 0; j < height; ++j)
    for (int i = 0; i < width;) {
      if (!inside(i, j)) {
        ++i;
        continue;
      }
      int e = i;
      while (e < width && inside(e, j)) ++e;
      const Vec2 lo = origin + h * Vec2{static_cast<double>(i), static_cast<double>(j)};
      const Vec2 hi = origin + h * Vec2{static_cast<double>(e), static_cast<double>(j + 1)};
      out << (first ? "" : " ") << "M" << f.pt(lo) << " H" << f.x(hi.x) << " V" << f.y(hi.y) << " H" << f.x(lo.x) << " Z";
      first = false;
      i = e;
    }
}

}  // namespace detail

/// One element per region, filled by label, boundaries stroked.
inline std::string render_svg(const Cluster& c) {
  validate(c);
  Box b;
  for (const auto& r : c.regions) b.expand(bounds(r));
  if (b.empty()) b = Box{-1, -1, 1, 1};
  const double pad = 0.02 * std::max(b.width(), b.height());
  b = Box{b.xmin - pad, b.ymin - pad, b.xmax + pad, b.ymax + pad};
  const detail::SvgFrame f{b};
  std::ostringstream out;
  out << detail::svg_header(b);
  for (std::size_t k = 0; k < c.regions.size(); ++k) {
    const Region& r = c.regions[k];
    if (const auto* d = std::get_if<Disk>(&r); d && d->orientation == 1) {
      out << "<circle cx=\"" << f.x(d->center.x) << "\" cy=\"" << f.y(d->center.y) << "\" r=\"" << detail::fmt(d->radius)
          << "\" fill=\"" << detail::svg_fill(k) << "\"/>\n";
      continue;
    }
    out << "<path fill=\"" << detail::svg_fill(k) << "\" d=\"";
    if (const auto* m = std::get_if<PixelMask>(&r)) {
      detail::svg_runs(out, f, m->origin, m->h, m->width, m->height, [m](int i, int j) { return m->at(i, j); });
      out << "\"/>\n";
      continue;
    }
    bool first = true;
    for (const auto& loop : boundary_loops(r)) {
      if (!first) out << " ";
      first = false;
      detail::svg_loop(out, f, loop);
    }
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

/// Cells drawn as merged horizontal runs per label.
inline std::string render_svg(const GridCluster& g) {
  Box b;
  b.expand(g.origin);
  b.expand(g.origin + g.h * Vec2{static_cast<double>(g.width), static_cast<double>(g.height)});
  const detail::SvgFrame f{b};
  std::ostringstream out;
  out << detail::svg_header(b);
  out << "<g stroke=\"none\">\n";
  for (int label = 1; label <= g.regions(); ++label) {
    out << "<path fill=\"" << detail::svg_fill(static_cast<std::size_t>(label - 1)) << "\" d=\"";
    detail::svg_runs(out, f, g.origin, g.h, g.width, g.height, [&](int i, int j) { return g.at(i, j) == label; });
    out << "\"/>\n";
  }
  out << "</g>\n</g>\n</svg>\n";
  return out.str();
}

inline void write_svg(const std::string& path, const std::string& svg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write SVG to '" + path + "'");
  out << svg;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace clusterlab
