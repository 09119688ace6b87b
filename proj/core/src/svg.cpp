#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "giftrl/sweep.hpp"

namespace giftrl {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 30, kTop = 30, kBottom = 50;

const char* strategy_color(Strategy s) {
  switch (s) {
    case Strategy::Linearized: return "#1f77b4";
    case Strategy::AProx: return "#ff7f0e";
    case Strategy::Iwa: return "#2ca02c";
    case Strategy::Proximal: return "#d62728";
  }
  return "#000000";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void emit_svg(const SweepResult& result, std::ostream& out) {
  const auto means = mean_final_loss(result);
  if (means.empty())
    throw std::invalid_argument("emit_svg: result has no cells");

  // Collect per-strategy curves of finite points in eta0 order.
  std::map<Strategy, std::vector<std::pair<double, double>>> curves;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool any = false;
  for (const auto& [key, mean] : means) {
    if (!std::isfinite(mean)) continue;
    const double lx = std::log10(key.second);
    curves[key.first].emplace_back(lx, mean);
    if (!any) {
      xmin = xmax = lx;
      ymin = ymax = mean;
      any = true;
    } else {
      xmin = std::min(xmin, lx);
      xmax = std::max(xmax, lx);
      ymin = std::min(ymin, mean);
      ymax = std::max(ymax, mean);
    }
  }
  if (!any) {  // nothing finite: degenerate frame around the origin
    xmin = -1;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto sx = [&](double lx) {
    return kLeft + (lx - xmin) / (xmax - xmin) * plot_w;
  };
  const auto sy = [&](double y) {
    return kTop + (ymax - y) / (ymax - ymin) * plot_h;
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      << "width=\"" << kWidth << "\" height=\"" << kHeight << "\" "
      << "viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" fill=\"white\"/>\n";

  // Frame.
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // X ticks at integer decades, y ticks at 5 even splits.
  for (int d = static_cast<int>(std::ceil(xmin));
       d <= static_cast<int>(std::floor(xmax)); ++d) {
    const double x = sx(d);
    out << "<line x1=\"" << x << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << x
        << "\" y2=\"" << kTop + plot_h + 6
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double y = ymin + (ymax - ymin) * i / 5.0;
    const double py = sy(y);
    out << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << py << "\" x2=\"" << kLeft
        << "\" y2=\"" << py << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << kLeft - 10 << "\" y=\"" << py + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" font-size=\"14\" text-anchor=\"middle\">eta0</text>\n"
      << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kTop + plot_h / 2 << ")\">final averaged loss</text>\n";

  // Curves and markers.
  for (const auto& [strategy, pts] : curves) {
    const char* color = strategy_color(strategy);
    if (pts.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"2\" points=\"";
      for (const auto& [lx, y] : pts) out << sx(lx) << "," << sy(y) << " ";
      out << "\"/>\n";
    }
    for (const auto& [lx, y] : pts)
      out << "<circle cx=\"" << sx(lx) << "\" cy=\"" << sy(y)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  }

  // Legend.
  double ly = kTop + 14;
  for (const auto& [strategy, pts] : curves) {
    const double lx = kLeft + plot_w - 130;
    out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << strategy_color(strategy)
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << lx + 30 << "\" y=\"" << ly
        << "\" font-size=\"12\">" << to_string(strategy) << "</text>\n";
    ly += 18;
  }

  out << "</svg>\n";
}

void emit_svg_file(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  emit_svg(result, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace giftrl
