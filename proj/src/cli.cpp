#include "avalanche/cli.hpp"

#include "avalanche/ensemble.hpp"
#include "avalanche/errors.hpp"
#include "avalanche/output.hpp"
#include "avalanche/reduced_basis.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <optional>
#include <sstream>

#ifndef AVALANCHE_VERSION
#define AVALANCHE_VERSION "dev"
#endif

namespace avalanche {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Options {
    int layers = 4;
    std::string mode = "ideal";
    double sigma = 0.0;
    double resample_dt = 0.0;
    double g = 1.0;
    double coupling_spread = 0.0;
    double tmax = 10.0;
    std::size_t steps = 101;
    std::uint64_t seed = 0;
    std::size_t realizations = 10;
    std::string probe = "left-edge";
    bool vacuum = false;
    std::string out = ".";
    unsigned threads = 0;
    int source = 1;
    std::string op = "sigma-z";
    std::string input = "superposition";
    std::optional<double> window;
    double threshold = -0.5;
    std::size_t bins = 20;
};

std::vector<Qubit> parse_probes(const std::string &spec, int layers) {
    if (spec == "left-edge") return left_edge_probes(layers);
    if (spec == "all") {
        std::vector<Qubit> all((1U << layers) - 1);
        std::iota(all.begin(), all.end(), 1);
        return all;
    }
    std::vector<Qubit> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.rfind("qubit:", 0) != 0) throw ArgumentError("bad probe '" + item + "'; use left-edge, all or qubit:<k>");
        const std::string digits = item.substr(6);
        std::size_t used = 0;
        int q = 0;
        try {
            q = std::stoi(digits, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (digits.empty() || used != digits.size()) throw ArgumentError("bad probe qubit '" + digits + "'");
        out.push_back(q);
    }
    if (out.empty()) throw ArgumentError("empty probe list");
    return out;
}

EnsembleConfig to_config(const Options &o, ObservableKind kind) {
    EnsembleConfig c;
    c.layers = o.layers;
    c.mode = parse_mode(o.mode);
    c.sigma = o.sigma;
    c.resample_dt = o.resample_dt;
    c.g = o.g;
    c.coupling_spread = o.coupling_spread;
    c.t_max = o.tmax;
    c.n_steps = o.steps;
    c.master_seed = o.seed;
    c.realizations = o.realizations;
    c.kind = kind;
    c.source = o.source;
    c.vacuum = o.vacuum;
    c.holevo_operator = parse_local_operator(o.op);
    c.holevo_input = parse_holevo_input(o.input);
    c.threads = o.threads;
    if (c.layers < 1 || c.layers > kMaxLayers) throw ArgumentError("layers must be in [1, 6]");
    if (kind != ObservableKind::occupation) c.probes = parse_probes(o.probe, o.layers);
    return c;
}

// Resolved settings as a key = value file that --config accepts.
std::string config_text(const std::string &command, const Options &o) {
    using output::format_double;
    std::ostringstream os;
    os << "# avalanche " << command << " --config <this file>\n";
    os << "layers = " << o.layers << '\n';
    os << "mode = \"" << o.mode << "\"\n";
    os << "sigma = " << format_double(o.sigma) << '\n';
    os << "resample-dt = " << format_double(o.resample_dt) << '\n';
    os << "g = " << format_double(o.g) << '\n';
    os << "coupling-spread = " << format_double(o.coupling_spread) << '\n';
    os << "tmax = " << format_double(o.tmax) << '\n';
    os << "steps = " << o.steps << '\n';
    os << "seed = " << o.seed << '\n';
    os << "realizations = " << o.realizations << '\n';
    os << "probe = \"" << o.probe << "\"\n";
    os << "vacuum = " << (o.vacuum ? "true" : "false") << '\n';
    os << "source = " << o.source << '\n';
    os << "operator = \"" << o.op << "\"\n";
    os << "input = \"" << o.input << "\"\n";
    if (o.window) os << "window = " << format_double(*o.window) << '\n';
    os << "threshold = " << format_double(o.threshold) << '\n';
    os << "bins = " << o.bins << '\n';
    return os.str();
}

ordered_json config_json(const Options &o) {
    ordered_json j;
    j["layers"] = o.layers;
    j["mode"] = o.mode;
    j["sigma"] = o.sigma;
    j["resample-dt"] = o.resample_dt;
    j["g"] = o.g;
    j["coupling-spread"] = o.coupling_spread;
    j["tmax"] = o.tmax;
    j["steps"] = o.steps;
    j["seed"] = o.seed;
    j["realizations"] = o.realizations;
    j["probe"] = o.probe;
    j["vacuum"] = o.vacuum;
    j["source"] = o.source;
    j["operator"] = o.op;
    j["input"] = o.input;
    j["window"] = o.window ? ordered_json(*o.window) : ordered_json(nullptr);
    j["threshold"] = o.threshold;
    j["bins"] = o.bins;
    j["threads"] = o.threads;
    return j;
}

class Run {
  public:
    Run(std::string command, const Options &options)
        : command_(std::move(command)), options_(options), dir_(options.out), start_(std::chrono::steady_clock::now()) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory " + dir_.string());
    }

    void csv(const std::string &name, const std::string &columns, const std::function<void(std::ostream &)> &body) {
        output::write_file(dir_ / name, body);
        outputs_.push_back({{"file", name}, {"kind", "csv"}, {"columns", columns}});
    }

    void svg(const std::string &name, const output::Heatmap &map) {
        output::write_file(dir_ / name, [&](std::ostream &os) { output::write_heatmap_svg(os, map); });
        outputs_.push_back({{"file", name},
                            {"kind", "svg"},
                            {"color_map", output::describe(map.scale, map.lo, map.hi)}});
    }

    void note(const std::string &key, ordered_json value) { extra_[key] = std::move(value); }

    void finish(std::ostream &out) {
        const std::string conf = "run.conf";
        output::write_file(dir_ / conf, [&](std::ostream &os) { os << config_text(command_, options_); });
        outputs_.push_back({{"file", conf}, {"kind", "config"}});

        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        ordered_json m;
        m["command"] = command_;
        m["version"] = AVALANCHE_VERSION;
        m["seed"] = options_.seed;
        m["config"] = config_json(options_);
        m["reproduce"] = "avalanche " + command_ + " --config " + conf + " --out <dir>";
        m["duration_seconds"] = seconds;
        m["outputs"] = outputs_;
        for (auto &[k, v] : extra_.items()) m[k] = v;
        output::write_file(dir_ / "manifest.json", [&](std::ostream &os) { os << m.dump(2) << '\n'; });
        for (const auto &o : outputs_) out << (dir_ / o["file"].get<std::string>()).string() << '\n';
        out << (dir_ / "manifest.json").string() << '\n';
    }

  private:
    std::string command_;
    Options options_;
    fs::path dir_;
    std::chrono::steady_clock::time_point start_;
    ordered_json outputs_ = ordered_json::array();
    ordered_json extra_ = ordered_json::object();
};

std::vector<std::vector<double>> rows_of(const std::vector<ObservableSeries> &series) {
    std::vector<std::vector<double>> rows;
    for (const auto &s : series) rows.push_back(s.values);
    return rows;
}

std::vector<std::string> qubit_labels(const std::vector<ObservableSeries> &series) {
    std::vector<std::string> labels;
    for (const auto &s : series) labels.push_back("q" + std::to_string(s.probe) + " (L" + std::to_string(layer_of(s.probe)) + ")");
    return labels;
}

void cmd_basis(const Options &o, std::ostream &out) {
    Run run("basis", o);
    const ReducedBasis basis = enumerate(o.layers, o.vacuum);
    run.csv("basis.csv", "index,bitstring,charge", [&](std::ostream &os) { output::write_basis_csv(os, basis); });
    run.note("dimension", basis.dimension());
    run.finish(out);
}

void cmd_evolve(const Options &o, std::ostream &out) {
    const EnsembleConfig c = to_config(o, ObservableKind::occupation);
    Run run("evolve", o);
    const EnsembleResult res = avalanche::run(c);
    run.csv("occupation.csv", "t,layer,mean,std", [&](std::ostream &os) { output::write_occupation_csv(os, res.averaged); });
    output::Heatmap map;
    map.title = "mean layer occupation";
    map.row_axis = "layer";
    for (const auto &s : res.averaged) map.row_labels.push_back(std::to_string(s.probe));
    map.times = res.averaged.front().times;
    map.values = rows_of(res.averaged);
    map.lo = 0.0;
    map.hi = 1.0;
    map.scale = output::ColorScale::sequential;
    run.svg("occupation.svg", map);
    run.finish(out);
}

void cmd_otoc(const Options &o, std::ostream &out) {
    const EnsembleConfig c = to_config(o, ObservableKind::otoc);
    Run run("otoc", o);
    const EnsembleResult res = avalanche::run(c);
    run.csv("otoc.csv", "t,probe_qubit,value,std,n", [&](std::ostream &os) { output::write_series_csv(os, res.averaged); });
    run.csv("otoc_realizations.csv", "realization,t,probe,value",
            [&](std::ostream &os) { output::write_realizations_csv(os, res.per_realization); });
    output::Heatmap map;
    map.title = "OTOC F(t), source qubit " + std::to_string(o.source);
    map.row_axis = "probe qubit";
    map.row_labels = qubit_labels(res.averaged);
    map.times = res.averaged.front().times;
    map.values = rows_of(res.averaged);
    map.lo = -1.0;
    map.hi = 1.0;
    map.scale = output::ColorScale::diverging;
    run.svg("otoc.svg", map);
    run.finish(out);
}

void cmd_holevo(const Options &o, std::ostream &out) {
    const EnsembleConfig c = to_config(o, ObservableKind::holevo);
    Run run("holevo", o);
    const EnsembleResult res = avalanche::run(c);
    run.csv("holevo.csv", "t,probe_qubit,value,std,n", [&](std::ostream &os) { output::write_series_csv(os, res.averaged); });
    run.csv("holevo_realizations.csv", "realization,t,probe,value",
            [&](std::ostream &os) { output::write_realizations_csv(os, res.per_realization); });
    output::Heatmap map;
    map.title = "Holevo information (bits), operator on qubit " + std::to_string(o.source);
    map.row_axis = "probe qubit";
    map.row_labels = qubit_labels(res.averaged);
    map.times = res.averaged.front().times;
    map.values = rows_of(res.averaged);
    map.lo = 0.0;
    map.hi = 1.0;
    map.scale = output::ColorScale::sequential;
    run.svg("holevo.svg", map);
    run.finish(out);
}

void cmd_arrivals(const Options &o, std::ostream &out) {
    EnsembleConfig c = to_config(o, ObservableKind::otoc);
    Run run("arrivals", o);
    const double window = o.window ? *o.window : default_arrival_window(c, o.threshold);
    const auto arrivals = arrival_scatter(c, window, o.threshold);
    run.csv("arrivals.csv", "realization,arrival_time", [&](std::ostream &os) { output::write_arrivals_csv(os, arrivals); });
    std::vector<double> times;
    for (const auto &a : arrivals)
        if (a.time) times.push_back(*a.time);
    ordered_json summary;
    summary["window"] = window;
    summary["threshold"] = o.threshold;
    summary["probe_qubit"] = TreeNetwork::first_in_layer(o.layers);
    summary["crossed"] = times.size();
    if (!times.empty()) {
        const double mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
        double ss = 0.0;
        for (const double t : times) ss += (t - mean) * (t - mean);
        summary["mean"] = mean;
        summary["std"] = times.size() > 1 ? std::sqrt(ss / static_cast<double>(times.size() - 1)) : 0.0;
    }
    run.note("arrival_summary", summary);
    run.finish(out);
}

void cmd_spectrum(const Options &o, std::ostream &out) {
    const EnsembleConfig c = to_config(o, ObservableKind::occupation);
    if (o.bins < 1) throw ArgumentError("bins must be >= 1");
    Run run("spectrum", o);
    const SpectrumEnsemble spec = run_spectrum(c, o.bins);
    run.csv("spectrum.csv", "realization,n,r", [&](std::ostream &os) { output::write_spectrum_csv(os, spec); });
    run.csv("spectrum_histogram.csv", "bin_lo,bin_hi,density,poisson",
            [&](std::ostream &os) { output::write_histogram_csv(os, spec.pooled.histogram); });
    run.note("mean_ratio", spec.pooled.mean_ratio);
    run.note("poisson_mean_ratio", poisson_mean_ratio());
    run.note("excluded_degenerate", spec.pooled.excluded_degenerate);
    run.finish(out);
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Options o;
    CLI::App app{"Exact dynamics of the avalanche qubit-tree photodetector model", "avalanche"};
    app.require_subcommand(1, 1);
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "key = value file; flags given on the command line win");
    app.add_option("--layers", o.layers, "tree depth L (1..6)")->capture_default_str();
    app.add_option("--mode", o.mode, "disorder mode")
        ->check(CLI::IsMember({"ideal", "static", "dynamic"}))
        ->capture_default_str();
    app.add_option("--sigma", o.sigma, "mismatch half-width, units of g")->capture_default_str();
    app.add_option("--resample-dt", o.resample_dt, "dynamic resampling period, units of 1/g")->capture_default_str();
    app.add_option("--g", o.g, "kernel coupling")->capture_default_str();
    app.add_option("--coupling-spread", o.coupling_spread, "relative spread of random couplings, [0,1)")
        ->capture_default_str();
    app.add_option("--tmax", o.tmax, "end of the time grid")->capture_default_str();
    app.add_option("--steps", o.steps, "number of grid points including t=0")->capture_default_str();
    app.add_option("--seed", o.seed, "master seed")->capture_default_str();
    app.add_option("--realizations", o.realizations, "disorder realizations")->capture_default_str();
    app.add_option("--probe", o.probe, "left-edge | all | qubit:<k>[,qubit:<k>...]")->capture_default_str();
    app.add_flag("--vacuum", o.vacuum, "add the vacuum slot to the basis");
    app.add_option("--out", o.out, "output directory")->capture_default_str();
    app.add_option("--threads", o.threads, "worker threads, 0 = all cores")->capture_default_str();
    app.add_option("--source", o.source, "OTOC source qubit / Holevo operator qubit")->capture_default_str();
    app.add_option("--operator", o.op, "Holevo local operator: sigma-z | flip")->capture_default_str();
    app.add_option("--input", o.input, "Holevo input: superposition | top")->capture_default_str();
    app.add_option("--window", o.window, "arrival search window (default: from the ideal model)");
    app.add_option("--threshold", o.threshold, "OTOC arrival threshold")->capture_default_str();
    app.add_option("--bins", o.bins, "histogram bins for spacing ratios")->capture_default_str();

    auto *basis = app.add_subcommand("basis", "reduced basis listing")->fallthrough();
    auto *spectrum = app.add_subcommand("spectrum", "spacing-ratio statistics")->fallthrough();
    auto *evolve = app.add_subcommand("evolve", "layer occupation series and heatmap")->fallthrough();
    auto *otoc = app.add_subcommand("otoc", "OTOC series and heatmap")->fallthrough();
    auto *holevo = app.add_subcommand("holevo", "Holevo information series and heatmap")->fallthrough();
    auto *arrivals = app.add_subcommand("arrivals", "last-layer OTOC arrival times")->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (basis->parsed()) cmd_basis(o, out);
        else if (spectrum->parsed()) cmd_spectrum(o, out);
        else if (evolve->parsed()) cmd_evolve(o, out);
        else if (otoc->parsed()) cmd_otoc(o, out);
        else if (holevo->parsed()) cmd_holevo(o, out);
        else if (arrivals->parsed()) cmd_arrivals(o, out);
        return 0;
    } catch (const ArgumentError &e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    } catch (const ResourceError &e) {
        err << "resource limit: " << e.what() << '\n';
        return 3;
    } catch (const IoError &e) {
        err << "io error: " << e.what() << '\n';
        return 3;
    } catch (const std::bad_alloc &) {
        err << "resource limit: out of memory\n";
        return 3;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace avalanche
