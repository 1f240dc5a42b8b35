#include "hql/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace hql::svg {

namespace {

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range padded_range(double lo, double hi) {
    if (!(lo <= hi)) return {0.0, 1.0};
    if (lo == hi) {
        const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

}  // namespace

void Plot::add_line(std::string label, std::vector<double> x, std::vector<double> y,
                    std::string color) {
    if (x.size() != y.size()) {
        throw std::domain_error("Plot::add_line: x and y length mismatch");
    }
    series.push_back({std::move(label), std::move(x), std::move(y), std::move(color), false});
}

void Plot::add_points(std::string label, std::vector<double> x, std::vector<double> y,
                      std::string color) {
    if (x.size() != y.size()) {
        throw std::domain_error("Plot::add_points: x and y length mismatch");
    }
    series.push_back({std::move(label), std::move(x), std::move(y), std::move(color), true});
}

std::string Plot::render(int width, int height) const {
    const double ml = 70.0, mr = 20.0, mt = 36.0, mb = 48.0;  // margins
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;

    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const Series& s : series) {
        for (double v : s.x) {
            xlo = std::min(xlo, v);
            xhi = std::max(xhi, v);
        }
        for (double v : s.y) {
            ylo = std::min(ylo, v);
            yhi = std::max(yhi, v);
        }
    }
    const Range xr = padded_range(xlo, xhi);
    const Range yr = padded_range(ylo, yhi);
    const auto sx = [&](double v) { return ml + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    const auto sy = [&](double v) { return mt + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << px(width / 2.0) << "\" y=\"20\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"14\">"
       << escape(title) << "</text>\n";

    // frame and ticks
    os << "<rect x=\"" << px(ml) << "\" y=\"" << px(mt) << "\" width=\"" << px(pw)
       << "\" height=\"" << px(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / ticks;
        const double gx = sx(fx);
        os << "<line x1=\"" << px(gx) << "\" y1=\"" << px(mt + ph) << "\" x2=\"" << px(gx)
           << "\" y2=\"" << px(mt + ph + 5) << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << px(gx) << "\" y=\"" << px(mt + ph + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << tick_label(fx) << "</text>\n";
        const double fy = yr.lo + (yr.hi - yr.lo) * i / ticks;
        const double gy = sy(fy);
        os << "<line x1=\"" << px(ml - 5) << "\" y1=\"" << px(gy) << "\" x2=\"" << px(ml)
           << "\" y2=\"" << px(gy) << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << px(ml - 8) << "\" y=\"" << px(gy + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << tick_label(fy) << "</text>\n";
    }
    os << "<text x=\"" << px(ml + pw / 2.0) << "\" y=\"" << px(height - 8.0)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       << escape(xlabel) << "</text>\n";
    os << "<text x=\"16\" y=\"" << px(mt + ph / 2.0)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
          "transform=\"rotate(-90 16 "
       << px(mt + ph / 2.0) << ")\">" << escape(ylabel) << "</text>\n";

    for (const Series& s : series) {
        if (!s.markers && s.x.size() > 1) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" "
                  "points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                os << (i ? " " : "") << px(sx(s.x[i])) << "," << px(sy(s.y[i]));
            }
            os << "\"/>\n";
        }
        if (s.markers || s.x.size() == 1) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                os << "<circle cx=\"" << px(sx(s.x[i])) << "\" cy=\"" << px(sy(s.y[i]))
                   << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
            }
        }
    }

    double ly = mt + 14.0;
    for (const Series& s : series) {
        os << "<line x1=\"" << px(ml + pw - 120) << "\" y1=\"" << px(ly - 4) << "\" x2=\""
           << px(ml + pw - 100) << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << s.color
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << px(ml + pw - 94) << "\" y=\"" << px(ly)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label)
           << "</text>\n";
        ly += 16.0;
    }

    os << "</svg>\n";
    return os.str();
}

}  // namespace hql::svg
