#include "igahmm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace igahmm {

namespace {

constexpr double kWidth = 640, kHeight = 480, kMargin = 70;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

double pick(const ConvergenceRecord& r, ErrorColumn c) {
    return c == ErrorColumn::H1 ? r.err_h1 : c == ErrorColumn::L2 ? r.err_l2 : r.err_l2_alt;
}

void header(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << escape(title) << "</text>\n";
}

}  // namespace

std::string convergence_svg(const std::vector<ConvergenceRecord>& records, ErrorColumn column, const std::string& title) {
    std::ostringstream os;
    header(os, title);

    std::map<int, std::vector<std::pair<double, double>>> series;
    double xmin = std::numeric_limits<double>::max(), xmax = 0, ymin = xmin, ymax = 0;
    for (const auto& r : records) {
        const double e = pick(r, column);
        if (!(e > 0.0)) continue;
        series[r.p].emplace_back(r.n_mac, e);
        xmin = std::min(xmin, static_cast<double>(r.n_mac));
        xmax = std::max(xmax, static_cast<double>(r.n_mac));
        ymin = std::min(ymin, e);
        ymax = std::max(ymax, e);
    }
    if (series.empty()) {
        os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\">no data</text>\n</svg>\n";
        return os.str();
    }
    const double lx0 = std::floor(std::log10(xmin) * 4) / 4, lx1 = std::ceil(std::log10(xmax) * 4) / 4 + 1e-9;
    const double ly0 = std::floor(std::log10(ymin)), ly1 = std::ceil(std::log10(ymax)) + 1e-9;
    const double lxr = std::max(lx1 - lx0, 0.25), lyr = std::max(ly1 - ly0, 1.0);
    auto px = [&](double x) { return kMargin + (std::log10(x) - lx0) / lxr * (kWidth - 2 * kMargin); };
    auto py = [&](double y) { return kHeight - kMargin - (std::log10(y) - ly0) / lyr * (kHeight - 2 * kMargin); };

    os << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
       << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin << "\"/></g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
        const double y = py(std::pow(10.0, d));
        os << "<line x1=\"" << kMargin << "\" y1=\"" << num(y) << "\" x2=\"" << kWidth - kMargin << "\" y2=\"" << num(y)
           << "\" stroke=\"#ddd\"/>";
        os << "<text x=\"" << kMargin - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">1e" << d << "</text>\n";
    }
    std::vector<int> ticks;
    for (const auto& [p, pts] : series)
        for (const auto& pt : pts) ticks.push_back(static_cast<int>(pt.first));
    std::sort(ticks.begin(), ticks.end());
    ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
    for (int t : ticks) {
        os << "<text x=\"" << num(px(t)) << "\" y=\"" << kHeight - kMargin + 16 << "\" text-anchor=\"middle\">" << t
           << "</text>\n";
    }
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 25 << "\" text-anchor=\"middle\">N_mac</text>\n";
    os << "<text x=\"20\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 20 " << kHeight / 2
       << ")\" text-anchor=\"middle\">relative error</text>\n";

    int idx = 0;
    for (const auto& [p, pts] : series) {
        const char* color = kColors[idx % 7];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        std::vector<double> h, e;
        for (const auto& [n, err] : pts) {
            os << num(px(n)) << ',' << num(py(err)) << ' ';
            h.push_back(1.0 / n);
            e.push_back(err);
        }
        os << "\"/>\n";
        for (const auto& [n, err] : pts)
            os << "<circle cx=\"" << num(px(n)) << "\" cy=\"" << num(py(err)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        std::string label = "p=" + std::to_string(p);
        if (const auto s = fit_slope(h, e)) label += ", slope " + num(*s);
        os << "<text x=\"" << kWidth - kMargin - 8 << "\" y=\"" << kMargin + 18 + 16 * idx
           << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(label) << "</text>\n";
        ++idx;
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string patch_svg(const NurbsPatch& patch, const std::string& title) {
    constexpr int samples = 48;
    std::vector<std::vector<Eigen::Vector2d>> lines;
    for (int dir = 0; dir < 2; ++dir) {
        for (double k : patch.knots(dir).unique_knots()) {
            std::vector<Eigen::Vector2d> line;
            for (int s = 0; s <= samples; ++s) {
                const double t = static_cast<double>(s) / samples;
                line.push_back(dir == 0 ? map_point(patch, k, t) : map_point(patch, t, k));
            }
            lines.push_back(std::move(line));
        }
    }
    Eigen::Vector2d lo = patch.net().points.colwise().minCoeff().transpose();
    Eigen::Vector2d hi = patch.net().points.colwise().maxCoeff().transpose();
    const double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-12});
    const double scale = std::min(kWidth, kHeight) - 2 * kMargin;
    auto px = [&](const Eigen::Vector2d& x) {
        return std::make_pair(kMargin + (x.x() - lo.x()) / span * scale, kHeight - kMargin - (x.y() - lo.y()) / span * scale);
    };

    std::ostringstream os;
    header(os, title);
    os << "<g fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\">\n";
    for (const auto& line : lines) {
        os << "<polyline points=\"";
        for (const auto& x : line) {
            const auto [a, b] = px(x);
            os << num(a) << ',' << num(b) << ' ';
        }
        os << "\"/>\n";
    }
    os << "</g>\n<g fill=\"none\" stroke=\"#d62728\" stroke-dasharray=\"4 3\">\n";
    const ControlNet& net = patch.net();
    for (int j = 0; j < net.count_v; ++j) {
        os << "<polyline points=\"";
        for (int i = 0; i < net.count_u; ++i) {
            const auto [a, b] = px(net.points.row(net.index(i, j)).transpose());
            os << num(a) << ',' << num(b) << ' ';
        }
        os << "\"/>\n";
    }
    for (int i = 0; i < net.count_u; ++i) {
        os << "<polyline points=\"";
        for (int j = 0; j < net.count_v; ++j) {
            const auto [a, b] = px(net.points.row(net.index(i, j)).transpose());
            os << num(a) << ',' << num(b) << ' ';
        }
        os << "\"/>\n";
    }
    os << "</g>\n<g fill=\"#d62728\">\n";
    for (int k = 0; k < net.size(); ++k) {
        const auto [a, b] = px(net.points.row(k).transpose());
        os << "<circle cx=\"" << num(a) << "\" cy=\"" << num(b) << "\" r=\"2.5\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace igahmm
