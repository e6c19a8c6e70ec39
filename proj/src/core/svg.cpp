#include "gatsac/core/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gatsac/core/csv.hpp"
#include "gatsac/core/error.hpp"

namespace gatsac {
namespace {

struct Range {
  double lo = 0.0, hi = 1.0;
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

Range axis_range(const std::vector<const std::vector<double>*>& cols,
                 const std::vector<const std::vector<double>*>& errs) {
  bool any = false;
  double lo = 0.0, hi = 0.0;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto& v = *cols[c];
    const std::vector<double>* e = (c < errs.size()) ? errs[c] : nullptr;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = (e && i < e->size()) ? (*e)[i] : 0.0;
      if (!any) {
        lo = v[i] - d;
        hi = v[i] + d;
        any = true;
      } else {
        lo = std::min(lo, v[i] - d);
        hi = std::max(hi, v[i] + d);
      }
    }
  }
  if (!any) return {0.0, 1.0};
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string SvgChart::render() const {
  const double ml = 70, mr = 20, mt = 40, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;

  std::vector<const std::vector<double>*> xs, ys, es;
  for (const auto& s : series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
    es.push_back(&s.yerr);
  }
  const Range xr = axis_range(xs, {});
  const Range yr = axis_range(ys, es);
  auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return mt + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
    << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // axes + ticks
  o << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
    << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
    << mt + ph << "\" stroke=\"black\"/>\n";
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / nticks;
    const double fy = yr.lo + (yr.hi - yr.lo) * i / nticks;
    o << "<line x1=\"" << px(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(fx)
      << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(fx) << "</text>\n";
    o << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << ml
      << "\" y2=\"" << py(fy) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(fy) << "</text>\n";
  }
  o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
    << x_label << "</text>\n";
  o << "<text x=\"16\" y=\"" << mt + ph / 2
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       "transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">" << y_label
    << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& sr = series[s];
    if (!sr.yerr.empty()) {
      for (std::size_t i = 0; i < sr.x.size() && i < sr.yerr.size(); ++i) {
        const double cx = px(sr.x[i]);
        const double y0 = py(sr.y[i] - sr.yerr[i]), y1 = py(sr.y[i] + sr.yerr[i]);
        o << "<line x1=\"" << cx << "\" y1=\"" << y0 << "\" x2=\"" << cx
          << "\" y2=\"" << y1 << "\" stroke=\"" << sr.color << "\" stroke-width=\"1\"/>\n";
        o << "<line x1=\"" << cx - 4 << "\" y1=\"" << y0 << "\" x2=\"" << cx + 4
          << "\" y2=\"" << y0 << "\" stroke=\"" << sr.color << "\"/>\n";
        o << "<line x1=\"" << cx - 4 << "\" y1=\"" << y1 << "\" x2=\"" << cx + 4
          << "\" y2=\"" << y1 << "\" stroke=\"" << sr.color << "\"/>\n";
      }
    }
    o << "<polyline fill=\"none\" stroke=\"" << sr.color
      << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < sr.x.size(); ++i)
      o << px(sr.x[i]) << "," << py(sr.y[i]) << " ";
    o << "\"/>\n";
    for (std::size_t i = 0; i < sr.x.size(); ++i)
      o << "<circle cx=\"" << px(sr.x[i]) << "\" cy=\"" << py(sr.y[i])
        << "\" r=\"2.5\" fill=\"" << sr.color << "\"/>\n";
    // legend
    const double ly = mt + 14 + 16 * static_cast<double>(s);
    o << "<line x1=\"" << ml + pw - 130 << "\" y1=\"" << ly << "\" x2=\""
      << ml + pw - 110 << "\" y2=\"" << ly << "\" stroke=\"" << sr.color
      << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << ml + pw - 104 << "\" y=\"" << ly + 4
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << sr.label
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void SvgChart::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << render();
}

}  // namespace gatsac
