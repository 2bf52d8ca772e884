#include "avalanche/output.hpp"

#include "avalanche/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace avalanche::output {

std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

void write_basis_csv(std::ostream &os, const ReducedBasis &basis) {
    os << "index,bitstring,charge\n";
    const int n = basis.qubit_count();
    for (std::size_t s = 0; s < basis.slot_count(); ++s) {
        const OccupationPattern p = basis.pattern_at_slot(s);
        const Charge c = conserved_charge(p, basis.layers());
        os << basis.index_of_slot(s) << ',' << p.to_string(n) << ',' << c.numerator;
        if (c.denominator != 1) os << '/' << c.denominator;
        os << '\n';
    }
}

void write_occupation_csv(std::ostream &os, const std::vector<ObservableSeries> &layers) {
    os << "t,layer,mean,std\n";
    if (layers.empty()) return;
    for (std::size_t k = 0; k < layers.front().times.size(); ++k)
        for (const auto &s : layers)
            os << format_double(s.times[k]) << ',' << s.probe << ',' << format_double(s.values[k]) << ','
               << format_double(s.stddev.empty() ? 0.0 : s.stddev[k]) << '\n';
}

void write_series_csv(std::ostream &os, const std::vector<ObservableSeries> &series) {
    os << "t,probe_qubit,value,std,n\n";
    if (series.empty()) return;
    for (std::size_t k = 0; k < series.front().times.size(); ++k)
        for (const auto &s : series)
            os << format_double(s.times[k]) << ',' << s.probe << ',' << format_double(s.values[k]) << ','
               << format_double(s.stddev.empty() ? 0.0 : s.stddev[k]) << ',' << s.count << '\n';
}

void write_realizations_csv(std::ostream &os, const std::vector<std::vector<ObservableSeries>> &per_realization) {
    os << "realization,t,probe,value\n";
    for (std::size_t r = 0; r < per_realization.size(); ++r) {
        const auto &series = per_realization[r];
        if (series.empty()) continue;
        for (std::size_t k = 0; k < series.front().times.size(); ++k)
            for (const auto &s : series)
                os << r << ',' << format_double(s.times[k]) << ',' << s.probe << ',' << format_double(s.values[k]) << '\n';
    }
}

void write_arrivals_csv(std::ostream &os, const std::vector<Arrival> &arrivals) {
    os << "realization,arrival_time\n";
    for (const auto &a : arrivals) os << a.realization << ',' << (a.time ? format_double(*a.time) : "none") << '\n';
}

void write_spectrum_csv(std::ostream &os, const SpectrumEnsemble &spectrum) {
    os << "realization,n,r\n";
    for (std::size_t r = 0; r < spectrum.per_realization.size(); ++r) {
        const auto &ratios = spectrum.per_realization[r].ratios;
        for (std::size_t n = 0; n < ratios.size(); ++n) os << r << ',' << n + 1 << ',' << format_double(ratios[n]) << '\n';
    }
    os << "summary," << spectrum.pooled.excluded_degenerate << ',' << format_double(spectrum.pooled.mean_ratio) << '\n';
}

void write_histogram_csv(std::ostream &os, const Histogram &histogram) {
    os << "bin_lo,bin_hi,density,poisson\n";
    for (std::size_t k = 0; k < histogram.densities.size(); ++k) {
        const double lo = histogram.edges[k];
        const double hi = histogram.edges[k + 1];
        // Bin average of the reference density: integral of 2/(1+r)^2 over the bin.
        const double ref = (2.0 / (1.0 + lo) - 2.0 / (1.0 + hi)) / (hi - lo);
        os << format_double(lo) << ',' << format_double(hi) << ',' << format_double(histogram.densities[k]) << ','
           << format_double(ref) << '\n';
    }
}

namespace {

struct Rgb {
    double r, g, b;
};

Rgb mix(Rgb a, Rgb b, double u) { return {a.r + (b.r - a.r) * u, a.g + (b.g - a.g) * u, a.b + (b.b - a.b) * u}; }

constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kBlue{33, 102, 172};
constexpr Rgb kRed{178, 24, 43};
constexpr Rgb kNavy{8, 48, 107};

std::string hex(Rgb c) {
    auto byte = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0))); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(c.r), byte(c.g), byte(c.b));
    return buf;
}

} // namespace

std::string describe(ColorScale scale, double lo, double hi) {
    std::ostringstream os;
    if (scale == ColorScale::diverging)
        os << "linear: " << format_double(lo) << " -> " << hex(kBlue) << ", " << format_double(0.5 * (lo + hi)) << " -> "
           << hex(kWhite) << ", " << format_double(hi) << " -> " << hex(kRed) << "; saturating outside";
    else
        os << "linear: " << format_double(lo) << " -> " << hex(kWhite) << ", " << format_double(hi) << " -> "
           << hex(kNavy) << "; saturating outside";
    return os.str();
}

std::string color_of(double value, double lo, double hi, ColorScale scale) {
    double u = hi > lo ? (value - lo) / (hi - lo) : 0.5;
    u = std::clamp(std::isfinite(u) ? u : 0.5, 0.0, 1.0);
    if (scale == ColorScale::sequential) return hex(mix(kWhite, kNavy, u));
    return u < 0.5 ? hex(mix(kBlue, kWhite, 2.0 * u)) : hex(mix(kWhite, kRed, 2.0 * u - 1.0));
}

void write_heatmap_svg(std::ostream &os, const Heatmap &map) {
    const std::size_t rows = map.values.size();
    const std::size_t cols = rows ? map.values.front().size() : 0;
    constexpr double left = 70, top = 40, plot_w = 600, bar_w = 16, bottom = 50;
    const double cell_h = rows ? std::max(12.0, 240.0 / static_cast<double>(rows)) : 12.0;
    const double plot_h = cell_h * static_cast<double>(rows);
    const double cell_w = cols ? plot_w / static_cast<double>(cols) : plot_w;
    const double width = left + plot_w + 40 + bar_w + 60;
    const double height = top + plot_h + bottom;

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(width) << "\" height=\""
       << format_double(height) << "\" viewBox=\"0 0 " << format_double(width) << ' ' << format_double(height)
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<title>" << map.title << "</title>\n";
    os << "<text x=\"" << format_double(left) << "\" y=\"20\" font-size=\"13\">" << map.title << "</text>\n";
    os << "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            os << "<rect x=\"" << format_double(left + cell_w * static_cast<double>(c)) << "\" y=\""
               << format_double(top + cell_h * static_cast<double>(r)) << "\" width=\"" << format_double(cell_w)
               << "\" height=\"" << format_double(cell_h) << "\" fill=\""
               << color_of(map.values[r][c], map.lo, map.hi, map.scale) << "\"/>\n";
    os << "</g>\n";
    os << "<rect x=\"" << format_double(left) << "\" y=\"" << format_double(top) << "\" width=\"" << format_double(plot_w)
       << "\" height=\"" << format_double(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (std::size_t r = 0; r < rows && r < map.row_labels.size(); ++r)
        os << "<text x=\"" << format_double(left - 6) << "\" y=\""
           << format_double(top + cell_h * (static_cast<double>(r) + 0.5) + 4) << "\" text-anchor=\"end\">"
           << map.row_labels[r] << "</text>\n";
    os << "<text transform=\"translate(16," << format_double(top + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << map.row_axis << "</text>\n";

    if (!map.times.empty()) {
        const double t0 = map.times.front();
        const double t1 = map.times.back();
        for (int k = 0; k <= 4; ++k) {
            const double t = t0 + (t1 - t0) * k / 4.0;
            const double x = left + plot_w * k / 4.0;
            os << "<line x1=\"" << format_double(x) << "\" y1=\"" << format_double(top + plot_h) << "\" x2=\""
               << format_double(x) << "\" y2=\"" << format_double(top + plot_h + 4) << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << format_double(x) << "\" y=\"" << format_double(top + plot_h + 16)
               << "\" text-anchor=\"middle\">" << format_double(std::round(t * 100.0) / 100.0) << "</text>\n";
        }
    }
    os << "<text x=\"" << format_double(left + plot_w / 2) << "\" y=\"" << format_double(top + plot_h + 36)
       << "\" text-anchor=\"middle\">t [1/g]</text>\n";

    // Color bar, hi at the top.
    const double bx = left + plot_w + 40;
    constexpr int steps = 32;
    for (int k = 0; k < steps; ++k) {
        const double v = map.hi - (map.hi - map.lo) * (k + 0.5) / steps;
        os << "<rect x=\"" << format_double(bx) << "\" y=\"" << format_double(top + plot_h * k / steps) << "\" width=\""
           << format_double(bar_w) << "\" height=\"" << format_double(plot_h / steps + 0.5) << "\" fill=\""
           << color_of(v, map.lo, map.hi, map.scale) << "\"/>\n";
    }
    os << "<text x=\"" << format_double(bx + bar_w + 4) << "\" y=\"" << format_double(top + 8) << "\">"
       << format_double(map.hi) << "</text>\n";
    os << "<text x=\"" << format_double(bx + bar_w + 4) << "\" y=\"" << format_double(top + plot_h) << "\">"
       << format_double(map.lo) << "</text>\n";
    os << "</svg>\n";
}

void write_file(const std::filesystem::path &path, const std::function<void(std::ostream &)> &body) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    body(os);
    os.flush();
    if (!os) throw IoError("failed writing " + path.string());
}

} // namespace avalanche::output
