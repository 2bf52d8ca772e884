#pragma once

#include "avalanche/ensemble.hpp"
#include "avalanche/observables.hpp"
#include "avalanche/reduced_basis.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace avalanche::output {

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

// CSV writers. Every file starts with a header row; lines end in LF.

/// index,bitstring,charge (vacuum, when present, is index 0).
void write_basis_csv(std::ostream &os, const ReducedBasis &basis);
/// t,layer,mean,std, time-major.
void write_occupation_csv(std::ostream &os, const std::vector<ObservableSeries> &layers);
/// t,probe_qubit,value,std,n, time-major.
void write_series_csv(std::ostream &os, const std::vector<ObservableSeries> &series);
/// realization,t,probe,value for every realization's raw series.
void write_realizations_csv(std::ostream &os, const std::vector<std::vector<ObservableSeries>> &per_realization);
/// realization,arrival_time; "none" when the threshold was never crossed.
void write_arrivals_csv(std::ostream &os, const std::vector<Arrival> &arrivals);
/// realization,n,r followed by one row "summary,<excluded>,<mean_ratio>".
void write_spectrum_csv(std::ostream &os, const SpectrumEnsemble &spectrum);
/// bin_lo,bin_hi,density,poisson.
void write_histogram_csv(std::ostream &os, const Histogram &histogram);

enum class ColorScale {
    diverging, // blue (lo) - white (mid) - red (hi)
    sequential // white (lo) - dark blue (hi)
};

struct Heatmap {
    std::string title;
    std::string row_axis = "layer";
    std::vector<std::string> row_labels;    // top row first
    std::vector<double> times;              // column centers
    std::vector<std::vector<double>> values; // [row][column]
    double lo = 0.0;
    double hi = 1.0;
    ColorScale scale = ColorScale::sequential;
};

/// Value-to-color rule, also recorded in run manifests.
std::string describe(ColorScale scale, double lo, double hi);
/// "#rrggbb" for a value; values outside [lo, hi] saturate.
std::string color_of(double value, double lo, double hi, ColorScale scale);

/// Standalone SVG: one rect per cell, time axis in units of 1/g.
void write_heatmap_svg(std::ostream &os, const Heatmap &map);

/// Opens `path` for binary writing and hands the stream to `body`; IoError
/// when the file cannot be created or written.
void write_file(const std::filesystem::path &path, const std::function<void(std::ostream &)> &body);

} // namespace avalanche::output
