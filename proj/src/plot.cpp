#include "netdiff/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace netdiff {

namespace {

constexpr double kWidth = 640.0, kHeight = 440.0;
constexpr double kLeft = 70.0, kRight = 24.0, kTop = 28.0, kBottom = 58.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Short human label for tick values.
std::string tick_label(double v) {
    char buf[32];
    const double mag = std::abs(v);
    if (v == 0.0)
        std::snprintf(buf, sizeof(buf), "0");
    else if (mag >= 0.01 && mag < 10000.0)
        std::snprintf(buf, sizeof(buf), "%.4g", v);
    else
        std::snprintf(buf, sizeof(buf), "%.1e", v);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double place(double v, double pix_lo, double pix_hi) const {
        const double a = log ? std::log10(v) : v;
        const double l = log ? std::log10(lo) : lo;
        const double h = log ? std::log10(hi) : hi;
        const double t = (h > l) ? (a - l) / (h - l) : 0.5;
        return pix_lo + t * (pix_hi - pix_lo);
    }
};

Axis make_axis(double lo, double hi) {
    Axis ax;
    // Log scale when everything is positive and spans over two decades.
    if (lo > 0.0 && hi / lo > 100.0) {
        ax.log = true;
        ax.lo = std::pow(10.0, std::floor(std::log10(lo)));
        ax.hi = std::pow(10.0, std::ceil(std::log10(hi)));
    } else {
        const double pad = (hi > lo) ? 0.05 * (hi - lo) : std::max(0.5, std::abs(hi) * 0.5);
        ax.lo = lo - pad;
        ax.hi = hi + pad;
        if (lo >= 0.0 && ax.lo < 0.0) ax.lo = 0.0;
    }
    return ax;
}

std::vector<double> axis_ticks(const Axis& ax) {
    std::vector<double> ticks;
    if (ax.log) {
        for (double v = ax.lo; v <= ax.hi * 1.0000001; v *= 10.0) ticks.push_back(v);
    } else {
        for (int i = 0; i <= 5; ++i)
            ticks.push_back(ax.lo + (ax.hi - ax.lo) * static_cast<double>(i) / 5.0);
    }
    return ticks;
}

} // namespace

void emit_plot(std::ostream& out, const std::vector<RateSummary>& summaries) {
    if (summaries.size() < 2)
        throw UsageError("emit_plot: need at least 2 rate summaries to draw a curve");

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : summaries) {
        x_lo = std::min(x_lo, s.mean_velocity);
        x_hi = std::max(x_hi, s.mean_velocity);
        for (const double v : {s.mean_rmse_eq, s.mean_rmse_pert}) {
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
        if (s.ci95_eq) y_hi = std::max(y_hi, s.mean_rmse_eq + *s.ci95_eq);
        if (s.ci95_pert) y_hi = std::max(y_hi, s.mean_rmse_pert + *s.ci95_pert);
    }
    const Axis xa = make_axis(x_lo, x_hi);
    const Axis ya = make_axis(y_lo, y_hi);

    const auto px = [&](double v) { return xa.place(v, kLeft, kWidth - kRight); };
    const auto py = [&](double v) { return ya.place(v, kHeight - kBottom, kTop); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\">\n"
        << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";

    // Frame and ticks.
    out << "<g stroke=\"black\" fill=\"none\">\n"
        << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kHeight - kBottom) << "\" x2=\""
        << fmt(kWidth - kRight) << "\" y2=\"" << fmt(kHeight - kBottom) << "\"/>\n"
        << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
        << fmt(kLeft) << "\" y2=\"" << fmt(kHeight - kBottom) << "\"/>\n</g>\n";

    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    for (const double t : axis_ticks(xa)) {
        const double x = px(t);
        out << "<line stroke=\"black\" x1=\"" << fmt(x) << "\" y1=\""
            << fmt(kHeight - kBottom) << "\" x2=\"" << fmt(x) << "\" y2=\""
            << fmt(kHeight - kBottom + 5) << "\"/>\n"
            << "<text text-anchor=\"middle\" x=\"" << fmt(x) << "\" y=\""
            << fmt(kHeight - kBottom + 18) << "\">" << tick_label(t) << "</text>\n";
    }
    for (const double t : axis_ticks(ya)) {
        const double y = py(t);
        out << "<line stroke=\"black\" x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(y)
            << "\" x2=\"" << fmt(kLeft) << "\" y2=\"" << fmt(y) << "\"/>\n"
            << "<text text-anchor=\"end\" x=\"" << fmt(kLeft - 8) << "\" y=\""
            << fmt(y + 4) << "\">" << tick_label(t) << "</text>\n";
    }
    out << "<text text-anchor=\"middle\" x=\"" << fmt((kLeft + kWidth - kRight) / 2)
        << "\" y=\"" << fmt(kHeight - 16) << "\">mean Hamming velocity</text>\n"
        << "<text text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fmt((kTop + kHeight - kBottom) / 2) << ")\" x=\"16\" y=\""
        << fmt((kTop + kHeight - kBottom) / 2)
        << "\">mean RMSE of final-state approximation</text>\n</g>\n";

    struct Series {
        const char* cls;
        const char* color;
        double RateSummary::*mean;
        std::optional<double> RateSummary::*ci;
        const char* label;
    };
    const Series series[] = {
        {"series-eq", "#c63", &RateSummary::mean_rmse_eq, &RateSummary::ci95_eq,
         "equilibrium"},
        {"series-pert", "#36c", &RateSummary::mean_rmse_pert, &RateSummary::ci95_pert,
         "perturbative"},
    };

    for (const auto& s : series) {
        out << "<g class=\"" << s.cls << "\" stroke=\"" << s.color << "\" fill=\""
            << s.color << "\">\n";
        // polyline through bins in x order
        std::vector<const RateSummary*> ordered;
        for (const auto& b : summaries) ordered.push_back(&b);
        std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
            return a->mean_velocity < b->mean_velocity;
        });
        out << "<polyline fill=\"none\" points=\"";
        for (const auto* b : ordered)
            out << fmt(px(b->mean_velocity)) << ',' << fmt(py(b->*(s.mean))) << ' ';
        out << "\"/>\n";
        for (const auto* b : ordered) {
            if (b->*(s.ci)) {
                const double half = *(b->*(s.ci));
                const double lo = std::clamp(b->*(s.mean) - half, ya.lo, ya.hi);
                const double hi = std::clamp(b->*(s.mean) + half, ya.lo, ya.hi);
                out << "<line x1=\"" << fmt(px(b->mean_velocity)) << "\" y1=\""
                    << fmt(py(lo)) << "\" x2=\"" << fmt(px(b->mean_velocity))
                    << "\" y2=\"" << fmt(py(hi)) << "\"/>\n";
            }
            out << "<circle cx=\"" << fmt(px(b->mean_velocity)) << "\" cy=\""
                << fmt(py(b->*(s.mean))) << "\" r=\"3.5\"/>\n";
        }
        out << "</g>\n";
    }

    // Legend.
    out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    double ly = kTop + 8.0;
    for (const auto& s : series) {
        out << "<circle fill=\"" << s.color << "\" cx=\"" << fmt(kLeft + 14) << "\" cy=\""
            << fmt(ly) << "\" r=\"3.5\"/>\n"
            << "<text x=\"" << fmt(kLeft + 24) << "\" y=\"" << fmt(ly + 4) << "\">"
            << s.label << "</text>\n";
        ly += 18.0;
    }
    out << "</g>\n</svg>\n";
}

void emit_plot_file(const std::string& path, const std::vector<RateSummary>& summaries) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    emit_plot(out, summaries);
}

} // namespace netdiff
