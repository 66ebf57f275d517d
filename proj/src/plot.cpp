#include "plastiflow/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace plastiflow {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s)
{
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

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string px(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string emit_plot(const std::vector<PlotSeries>& series, const PlotStyle& style)
{
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    std::size_t points = 0;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw Error(ErrorKind::ConfigError, "series '" + s.label + "' has mismatched lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (style.log_y && !(s.y[i] > 0.0))
                continue;
            const double y = style.log_y ? std::log10(s.y[i]) : s.y[i];
            if (!std::isfinite(s.x[i]) || !std::isfinite(y))
                continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
            ++points;
        }
    }
    if (points == 0)
        throw Error(ErrorKind::EmptySeries, "nothing to plot");
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        const double pad = ymin == 0.0 ? 1.0 : 0.5 * std::abs(ymin);
        ymin -= pad;
        ymax += pad;
    }
    const double xpad = 0.05 * (xmax - xmin);
    const double ypad = 0.05 * (ymax - ymin);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;

    const double left = 70.0;
    const double right = 20.0;
    const double top = 36.0;
    const double bottom = 50.0;
    const double w = style.width - left - right;
    const double h = style.height - top - bottom;
    const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * w; };
    const auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * h; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
       << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty())
        os << "<text x=\"" << px(style.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
           << escape(style.title) << "</text>\n";
    os << "<g id=\"plot\" data-xmin=\"" << format_real(xmin) << "\" data-xmax=\"" << format_real(xmax)
       << "\" data-ymin=\"" << format_real(ymin) << "\" data-ymax=\"" << format_real(ymax)
       << "\" data-left=\"" << px(left) << "\" data-top=\"" << px(top) << "\" data-width=\"" << px(w)
       << "\" data-height=\"" << px(h) << "\" data-log-y=\"" << (style.log_y ? 1 : 0) << "\">\n";
    os << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\"" << px(w) << "\" height=\""
       << px(h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double fx = xmin + (xmax - xmin) * k / 4.0;
        const double fy = ymin + (ymax - ymin) * k / 4.0;
        os << "<text x=\"" << px(sx(fx)) << "\" y=\"" << px(top + h + 16) << "\" text-anchor=\"middle\" font-size=\"11\">"
           << num(fx) << "</text>\n";
        os << "<text x=\"" << px(left - 6) << "\" y=\"" << px(sy(fy) + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
           << (style.log_y ? "1e" + num(fy) : num(fy)) << "</text>\n";
    }
    os << "<text x=\"" << px(left + w / 2) << "\" y=\"" << px(style.height - 10.0)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(style.x_label) << "</text>\n";
    os << "<text x=\"14\" y=\"" << px(top + h / 2) << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
       << px(top + h / 2) << ")\">" << escape(style.y_label + (style.log_y ? " (log10)" : "")) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" data-label=\""
           << escape(s.label) << "\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (style.log_y && !(s.y[i] > 0.0))
                continue;
            const double y = style.log_y ? std::log10(s.y[i]) : s.y[i];
            if (!std::isfinite(s.x[i]) || !std::isfinite(y))
                continue;
            os << (first ? "" : " ") << px(sx(s.x[i])) << ',' << px(sy(y));
            first = false;
        }
        os << "\"/>\n";
        os << "<text x=\"" << px(left + w - 4) << "\" y=\"" << px(top + 14 + 14.0 * k)
           << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << colour << "\">" << escape(s.label)
           << "</text>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

std::string emit_plot(const std::vector<GridFunction>& profiles, const PlotStyle& style)
{
    std::vector<PlotSeries> series;
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        const auto& u = profiles[k];
        if (u.domain().kind() != DomainKind::Interval)
            throw Error(ErrorKind::UnsupportedDomain, "profile plots need interval domains");
        PlotSeries s;
        s.label = u.time() ? "t=" + num(*u.time()) : "profile " + std::to_string(k);
        for (std::size_t n = 0; n < u.size(); ++n) {
            s.x.push_back(u.domain().x(n));
            s.y.push_back(u[n]);
        }
        series.push_back(std::move(s));
    }
    return emit_plot(series, style);
}

}  // namespace plastiflow
