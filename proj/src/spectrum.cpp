#include "avalanche/spectrum.hpp"

#include "avalanche/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace avalanche {

SpectrumResult spacing_ratios(std::vector<double> eigenvalues, std::size_t bins) {
    if (eigenvalues.size() < 3) throw ArgumentError("level-spacing ratios need at least 3 eigenvalues");
    std::sort(eigenvalues.begin(), eigenvalues.end());
    SpectrumResult out;
    const double range = eigenvalues.back() - eigenvalues.front();
    const double floor = 1e-12 * range;
    for (std::size_t n = 1; n + 1 < eigenvalues.size(); ++n) {
        const double d0 = eigenvalues[n] - eigenvalues[n - 1];
        const double d1 = eigenvalues[n + 1] - eigenvalues[n];
        const double hi = std::max(d0, d1);
        if (hi < floor || hi == 0.0) {
            ++out.excluded_degenerate;
            continue;
        }
        out.ratios.push_back(std::min(d0, d1) / hi);
    }
    if (!out.ratios.empty())
        out.mean_ratio = std::accumulate(out.ratios.begin(), out.ratios.end(), 0.0) / static_cast<double>(out.ratios.size());
    out.histogram = ratio_histogram(out.ratios, bins);
    out.eigenvalues = std::move(eigenvalues);
    return out;
}

double poisson_reference(double r) {
    if (r < 0.0 || r > 1.0) throw ArgumentError("ratio must lie in [0, 1]");
    return 2.0 / ((1.0 + r) * (1.0 + r));
}

double poisson_mean_ratio() { return 2.0 * std::numbers::ln2 - 1.0; }

Histogram ratio_histogram(const std::vector<double> &ratios, std::size_t bins) {
    if (bins == 0) throw ArgumentError("histogram needs at least one bin");
    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = static_cast<double>(k) / static_cast<double>(bins);
    h.densities.assign(bins, 0.0);
    if (ratios.empty()) return h;
    for (const double r : ratios) {
        auto k = static_cast<std::size_t>(r * static_cast<double>(bins));
        h.densities[std::min(k, bins - 1)] += 1.0;
    }
    const double width = 1.0 / static_cast<double>(bins);
    for (auto &d : h.densities) d /= static_cast<double>(ratios.size()) * width;
    return h;
}

} // namespace avalanche
