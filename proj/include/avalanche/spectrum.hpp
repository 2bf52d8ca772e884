#pragma once

#include <cstddef>
#include <vector>

namespace avalanche {

struct Histogram {
    std::vector<double> edges;     // bins + 1 entries
    std::vector<double> densities; // normalized so sum(density * width) = 1
};

/// Adjacent-gap ratio statistics of one spectrum.
struct SpectrumResult {
    std::vector<double> eigenvalues; // ascending
    std::vector<double> ratios;      // r_n in [0, 1]
    double mean_ratio = 0.0;
    std::size_t excluded_degenerate = 0;
    Histogram histogram;
};

/// r_n = min(d_n, d_{n+1}) / max(d_n, d_{n+1}) with d_n = E_n - E_{n-1} on the
/// sorted spectrum. Pairs whose larger gap is below 1e-12 times the spectral
/// range are skipped and counted in `excluded_degenerate`. Needs >= 3 values.
SpectrumResult spacing_ratios(std::vector<double> eigenvalues, std::size_t bins = 20);

/// Density of r for uncorrelated (Poisson) levels, 2 / (1 + r)^2.
double poisson_reference(double r);

/// Mean of the Poisson ratio density, 2 ln 2 - 1.
double poisson_mean_ratio();

/// Uniform bins on [0, 1]; an empty sample gives all-zero densities.
Histogram ratio_histogram(const std::vector<double> &ratios, std::size_t bins = 20);

} // namespace avalanche
