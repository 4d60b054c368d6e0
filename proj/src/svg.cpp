#include "packlim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace packlim {

namespace {

std::string num(double x) {
  if (std::abs(x) < 1e-12) x = 0;
  std::ostringstream ss;
  ss.precision(8);
  ss << x;
  return ss.str();
}

struct Frame {
  double x0, y0, x1, y1, h; // world viewport and height (for y flip)
  double X(double x) const { return x - x0; }
  double Y(double y) const { return y1 - y; } // SVG y grows downward
};

template <class S>
void piece_corners(const Motion<S>& m, const Piece& p, double out[4][2]) {
  const double d0 = to_double(p.dims[0]);
  const double d1 = to_double(p.dims[1]);
  const double corners[4][2] = {{0, 0}, {d0, 0}, {d0, d1}, {0, d1}};
  for (int c = 0; c < 4; ++c) {
    double x = corners[c][0], y = corners[c][1];
    double tx, ty;
    if constexpr (std::is_same_v<S, Rat>) {
      tx = to_double(m.xi[0]) + to_double(m.theta(0, 0)) * x + to_double(m.theta(0, 1)) * y;
      ty = to_double(m.xi[1]) + to_double(m.theta(1, 0)) * x + to_double(m.theta(1, 1)) * y;
    } else {
      tx = m.xi[0] + m.theta(0, 0) * x + m.theta(0, 1) * y;
      ty = m.xi[1] + m.theta(1, 0) * x + m.theta(1, 1) * y;
    }
    out[c][0] = tx;
    out[c][1] = ty;
  }
}

void target_outline(std::ostringstream& svg, const Target& t, const Frame& f) {
  ResolvedTarget r = resolve(t);
  svg << "  <g fill=\"none\" stroke=\"#333333\" stroke-width=\"" << num(f.h / 400) << "\">\n";
  switch (r.kind) {
    case ResolvedTarget::Kind::brick:
      svg << "    <rect x=\"" << num(f.X(0)) << "\" y=\"" << num(f.Y(to_double(r.dims[1])))
          << "\" width=\"" << num(to_double(r.dims[0])) << "\" height=\""
          << num(to_double(r.dims[1])) << "\"/>\n";
      break;
    case ResolvedTarget::Kind::ball:
      svg << "    <circle cx=\"" << num(f.X(0)) << "\" cy=\"" << num(f.Y(0)) << "\" r=\""
          << num(to_double(r.radius)) << "\"/>\n";
      break;
    case ResolvedTarget::Kind::funnel: {
      double s = to_double(r.scale);
      svg << "    <path d=\"M";
      const int samples = 128;
      for (int i = 0; i <= samples; ++i) {
        double x = s + (f.x1 - s) * i / samples;
        double w = s - s * s / std::max(x, s);
        svg << (i ? " L" : "") << num(f.X(x)) << " " << num(f.Y(w));
      }
      for (int i = samples; i >= 0; --i) {
        double x = s + (f.x1 - s) * i / samples;
        double w = s - s * s / std::max(x, s);
        svg << " L" << num(f.X(x)) << " " << num(f.Y(-w));
      }
      svg << "\"/>\n";
      break;
    }
  }
  svg << "  </g>\n";
}

} // namespace

std::string render_svg(const AnyCertificate& cert) {
  return std::visit(
      [](const auto& c) -> std::string {
        if (c.dim != 2) throw std::domain_error("render_svg: only 2-D certificates supported");

        // Viewport: target bbox, or content bbox for unbounded targets.
        double x0, y0, x1, y1;
        if (c.target.bounded()) {
          Box b = bounding_box(c.target);
          x0 = to_double(b.lo[0]);
          y0 = to_double(b.lo[1]);
          x1 = to_double(b.hi[0]);
          y1 = to_double(b.hi[1]);
        } else {
          ResolvedTarget r = resolve(c.target);
          x0 = x1 = to_double(r.scale);
          y0 = y1 = 0;
          for (const auto& p : c.placements) {
            double corners[4][2];
            piece_corners(p.motion, *c.collection.find(p.piece_id), corners);
            for (auto& corner : corners) {
              x0 = std::min(x0, corner[0]);
              x1 = std::max(x1, corner[0]);
              y0 = std::min(y0, corner[1]);
              y1 = std::max(y1, corner[1]);
            }
          }
        }
        double pad = 0.05 * std::max(x1 - x0, y1 - y0);
        if (pad == 0) pad = 1;
        x0 -= pad;
        y0 -= pad;
        x1 += pad;
        y1 += pad;

        Frame f{x0, y0, x1, y1, y1 - y0};
        std::ostringstream svg;
        svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 "
            << num(x1 - x0) << " " << num(y1 - y0) << "\">\n";

        target_outline(svg, c.target, f);

        auto order = c.placements;
        std::sort(order.begin(), order.end(),
                  [](const auto& a, const auto& b) { return a.piece_id < b.piece_id; });

        svg << "  <g stroke=\"#1f3a5f\" stroke-width=\"" << num(f.h / 800) << "\">\n";
        for (const auto& p : order) {
          const Piece* piece = c.collection.find(p.piece_id);
          double corners[4][2];
          piece_corners(p.motion, *piece, corners);
          // fixed palette cycled by id
          static const char* fills[] = {"#7fb3d5", "#a9dfbf", "#f9e79f", "#f5b7b1",
                                        "#d7bde2", "#aed6f1", "#fad7a0", "#d5dbdb"};
          svg << "    <polygon fill=\"" << fills[p.piece_id % 8] << "\" points=\"";
          for (int q = 0; q < 4; ++q)
            svg << (q ? " " : "") << num(f.X(corners[q][0])) << "," << num(f.Y(corners[q][1]));
          svg << "\"/>\n";
        }
        svg << "  </g>\n";

        svg << "  <g font-family=\"sans-serif\" fill=\"#222222\">\n";
        for (const auto& p : order) {
          const Piece* piece = c.collection.find(p.piece_id);
          double corners[4][2];
          piece_corners(p.motion, *piece, corners);
          double cx = (corners[0][0] + corners[2][0]) / 2;
          double cy = (corners[0][1] + corners[2][1]) / 2;
          double side = std::min(to_double(piece->dims[0]), to_double(piece->dims[1]));
          svg << "    <text x=\"" << num(f.X(cx)) << "\" y=\"" << num(f.Y(cy))
              << "\" font-size=\"" << num(side * 0.4) << "\" text-anchor=\"middle\""
              << " dominant-baseline=\"middle\">" << p.piece_id << "</text>\n";
        }
        svg << "  </g>\n</svg>\n";
        return svg.str();
      },
      cert);
}

} // namespace packlim
