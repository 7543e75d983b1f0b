// wavecount: measurement statistics of simultaneous wave-amplitude and
// photon-counting detection for vacuum and single-photon light beams.
//
// Subcommands: params, figure, sample, mi, oracle. Every dataset written
// with --out is accompanied by a manifest recording the resolved parameters
// for an exact re-run. Exit codes: 0 success, 1 numerical/internal failure,
// 2 invalid input.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wavecount/config.hpp"
#include "wavecount/distributions.hpp"
#include "wavecount/geometry.hpp"
#include "wavecount/gridfock.hpp"
#include "wavecount/information.hpp"
#include "wavecount/sampler.hpp"
#include "wavecount/version.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
namespace wc = wavecount;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

/// Writes datasets to --out (with a manifest per file) or to stdout.
class OutputSink {
public:
    OutputSink(std::string subcommand, std::optional<std::string> dir,
               std::optional<std::uint64_t> seed, json parameters)
        : subcommand_(std::move(subcommand)),
          dir_(std::move(dir)),
          seed_(seed),
          parameters_(std::move(parameters)) {}

    void write(const std::string& filename, const std::string& content) const {
        if (!dir_) {
            std::cout << content;
            return;
        }
        namespace fs = std::filesystem;
        fs::create_directories(*dir_);
        const fs::path path = fs::path(*dir_) / filename;
        {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + path.string());
            out << content;
        }
        json manifest;
        manifest["subcommand"] = subcommand_;
        manifest["version"] = wc::kVersion;
        manifest["parameters"] = parameters_;
        if (seed_) manifest["seed"] = *seed_;
        else manifest["seed"] = nullptr;
        manifest["outputs"] = {path.filename().string()};
        manifest["timestamp"] = timestamp_utc();
        std::ofstream mout(path.string() + ".manifest.json");
        mout << manifest.dump(2) << '\n';
        std::cerr << "wrote " << path.string() << '\n';
    }

private:
    std::string subcommand_;
    std::optional<std::string> dir_;
    std::optional<std::uint64_t> seed_;
    json parameters_;
};

json params_to_json(const std::vector<wc::DetectorParams>& params,
                    const std::vector<wc::DetectorMode>& modes) {
    json arr = json::array();
    for (std::size_t i = 0; i < params.size(); ++i) {
        json det;
        det["index"] = i;
        det["mode"] = modes[i] == wc::DetectorMode::wave ? "wave" : "count";
        if (params[i].sigma) det["sigma"] = *params[i].sigma;
        if (params[i].s) {
            det["s"] = {params[i].s->real(), params[i].s->imag()};
            det["abs_s"] = std::abs(*params[i].s);
        }
        if (params[i].P) det["P"] = *params[i].P;
        arr.push_back(det);
    }
    return arr;
}

std::string mode_name(wc::ExperimentMode mode) {
    switch (mode) {
        case wc::ExperimentMode::single: return "single";
        case wc::ExperimentMode::wave_wave: return "WW";
        case wc::ExperimentMode::count_count: return "CC";
        case wc::ExperimentMode::wave_count: return "WC";
    }
    return "?";
}

int cmd_params(const std::string& config_path, const std::string& format,
               const std::optional<std::string>& out_dir) {
    const wc::Experiment exp = wc::load_experiment(config_path);
    const auto params = exp.params();
    const auto report = wc::validate_experiment(params, exp.mode);

    OutputSink sink("params", out_dir, std::nullopt,
                    {{"config", config_path}, {"format", format}});
    if (format == "json") {
        json doc;
        doc["mode"] = mode_name(exp.mode);
        doc["detectors"] = params_to_json(params, exp.modes);
        doc["feasible"] = report.ok;
        doc["violations"] = report.violations;
        sink.write("params.json", doc.dump(2) + "\n");
    } else if (format == "csv") {
        std::ostringstream csv;
        csv << "index,mode,sigma,s_re,s_im,abs_s,P,feasible\n";
        for (std::size_t i = 0; i < params.size(); ++i) {
            csv << i << ',' << (exp.modes[i] == wc::DetectorMode::wave ? "wave" : "count")
                << ',';
            csv << (params[i].sigma ? fmt17(*params[i].sigma) : "") << ',';
            if (params[i].s)
                csv << fmt17(params[i].s->real()) << ',' << fmt17(params[i].s->imag()) << ','
                    << fmt17(std::abs(*params[i].s)) << ',';
            else
                csv << ",,,";
            csv << (params[i].P ? fmt17(*params[i].P) : "") << ',' << (report.ok ? 1 : 0)
                << '\n';
        }
        sink.write("params.csv", csv.str());
    } else {
        throw std::invalid_argument("params: --format must be json or csv");
    }
    if (!report.ok) {
        for (const auto& v : report.violations) std::cerr << "constraint violated: " << v << '\n';
        return 2;
    }
    return 0;
}

int cmd_figure(const std::string& which, double sigma, int points,
               std::vector<double> s_values, int n_s, int n_P,
               const std::optional<std::string>& out_dir) {
    json params{{"which", which}, {"sigma", sigma}, {"points", points},
                {"ns", n_s},      {"nP", n_P}};
    OutputSink sink("figure", out_dir, std::nullopt, params);
    std::ostringstream csv;

    if (which == "fig2") {
        if (s_values.empty()) s_values = {0.0, 0.2, 0.5, 0.7, 1.0};
        for (const double s : s_values)
            if (std::abs(s) > 1.0)
                throw std::invalid_argument("figure fig2: |s| must not exceed 1");
        csv << "w,s,density\n";
        for (const double s : s_values) {
            // Step sigma/16 puts w = +-sigma exactly on the grid, where all
            // curves intersect.
            for (int i = -64; i <= 64; ++i) {
                const double w = i * sigma / 16.0;
                csv << fmt17(w) << ',' << fmt17(s) << ','
                    << fmt17(wc::pdf_w(wc::BeamState::single_photon, sigma, s, w)) << '\n';
            }
        }
        sink.write("fig2.csv", csv.str());
        return 0;
    }
    if (which == "fig3") {
        if (s_values.empty()) s_values = {0.0, 0.2, 0.5, 0.7};
        const double s_cap = 1.0 / std::sqrt(2.0);
        for (const double s : s_values)
            if (s > s_cap + 1e-12 || s < 0.0)
                throw std::invalid_argument(
                    "figure fig3: equal overlaps require 0 <= s <= 1/sqrt(2)");
        csv << "s,w1,w2,density\n";
        for (const double s : s_values) {
            const std::vector<wc::WaveDetector> dets{{sigma, {s, 0.0}}, {sigma, {s, 0.0}}};
            for (int i = 0; i < points; ++i) {
                const double w1 = (-4.0 + 8.0 * i / (points - 1)) * sigma;
                for (int j = 0; j < points; ++j) {
                    const double w2 = (-4.0 + 8.0 * j / (points - 1)) * sigma;
                    const std::array<double, 2> w{w1, w2};
                    csv << fmt17(s) << ',' << fmt17(w1) << ',' << fmt17(w2) << ','
                        << fmt17(wc::pdf_ww(wc::BeamState::single_photon, dets, w)) << '\n';
                }
            }
        }
        sink.write("fig3.csv", csv.str());
        return 0;
    }
    if (which == "fig4") {
        csv << "s,P,I,feasible\n";
        for (const auto& pt : wc::mi_map(n_s, n_P))
            csv << fmt17(pt.s) << ',' << fmt17(pt.P) << ',' << fmt17(pt.I) << ','
                << (pt.feasible ? 1 : 0) << '\n';
        sink.write("fig4.csv", csv.str());
        return 0;
    }
    throw std::invalid_argument("figure: --which must be fig2, fig3 or fig4");
}

struct SampleArgs {
    std::string mode;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    int threads = 1;
    double sigma = 1.0, sigma2 = 1.0;
    double s = 0.0, s2 = 0.0;
    double P = 0.0, P2 = 0.0;
    std::optional<std::string> config;
};

int cmd_sample(const SampleArgs& args, const std::optional<std::string>& out_dir) {
    std::string mode = args.mode;
    double sigma = args.sigma, sigma2 = args.sigma2;
    std::complex<double> s1(args.s, 0.0), s2(args.s2, 0.0);
    double P = args.P, P2 = args.P2;

    if (args.config) {
        const wc::Experiment exp = wc::load_experiment(*args.config);
        const auto params = exp.params();
        const auto report = wc::validate_experiment(params, exp.mode);
        if (!report.ok) {
            for (const auto& v : report.violations)
                std::cerr << "constraint violated: " << v << '\n';
            return 2;
        }
        switch (exp.mode) {
            case wc::ExperimentMode::single:
                if (exp.modes[0] != wc::DetectorMode::wave)
                    throw std::invalid_argument(
                        "sample: a single counting detector needs no Monte Carlo");
                mode = "w";
                sigma = *params[0].sigma;
                s1 = *params[0].s;
                break;
            case wc::ExperimentMode::wave_wave: {
                if (params.size() != 2)
                    throw std::invalid_argument("sample: WW sampling via the CLI covers 2 "
                                                "detectors; use the library for more");
                mode = "ww";
                sigma = *params[0].sigma;
                sigma2 = *params[1].sigma;
                s1 = *params[0].s;
                s2 = *params[1].s;
                break;
            }
            case wc::ExperimentMode::count_count:
                if (params.size() != 2)
                    throw std::invalid_argument("sample: CC sampling covers 2 detectors");
                mode = "cc";
                P = *params[0].P;
                P2 = *params[1].P;
                break;
            case wc::ExperimentMode::wave_count: {
                mode = "wc";
                const bool wave_first = params[0].s.has_value();
                const auto& wv = wave_first ? params[0] : params[1];
                const auto& ct = wave_first ? params[1] : params[0];
                sigma = *wv.sigma;
                s1 = *wv.s;
                P = *ct.P;
                break;
            }
        }
    }

    json jp{{"mode", mode},     {"n", args.n},
            {"sigma", sigma},   {"sigma2", sigma2},
            {"s", {s1.real(), s1.imag()}}, {"s2", {s2.real(), s2.imag()}},
            {"P", P},           {"P2", P2},
            {"threads", args.threads}};
    if (args.config) jp["config"] = *args.config;
    OutputSink sink("sample", out_dir, args.seed, jp);

    wc::SampleBatch batch;
    if (mode == "w") {
        batch = wc::sample_w_single(args.n, sigma, s1, args.seed, args.threads);
    } else if (mode == "ww") {
        const std::vector<wc::WaveDetector> dets{{sigma, s1}, {sigma2, s2}};
        batch = wc::sample_ww_single(args.n, dets, args.seed, args.threads);
    } else if (mode == "cc") {
        batch = wc::sample_cc_single(args.n, P, P2, args.seed, args.threads);
    } else if (mode == "wc") {
        batch = wc::sample_wc_single(args.n, sigma, s1, P, args.seed, args.threads);
    } else {
        throw std::invalid_argument("sample: --mode must be w, ww, cc or wc");
    }

    std::ostringstream csv;
    wc::write_csv(batch, csv);
    sink.write("sample_" + mode + ".csv", csv.str());
    return 0;
}

int cmd_mi(bool do_max, bool do_cc, bool do_map, double s, double P, double P1, double P2,
           int n_s, int n_P, const std::string& format,
           const std::optional<std::string>& out_dir) {
    json jp{{"s", s},   {"P", P},   {"P1", P1},        {"P2", P2},
            {"ns", n_s}, {"nP", n_P}, {"format", format}};
    OutputSink sink("mi", out_dir, std::nullopt, jp);
    if (format != "json" && format != "csv")
        throw std::invalid_argument("mi: --format must be json or csv");
    if (do_map) {
        std::ostringstream csv;
        csv << "s,P,I,feasible\n";
        for (const auto& pt : wc::mi_map(n_s, n_P))
            csv << fmt17(pt.s) << ',' << fmt17(pt.P) << ',' << fmt17(pt.I) << ','
                << (pt.feasible ? 1 : 0) << '\n';
        sink.write("mi_map.csv", csv.str());
        return 0;
    }
    json doc;
    if (do_max) {
        const wc::MiMaximum best = wc::maximize_mi_wc();
        doc["s"] = best.s;
        doc["P"] = best.P;
        doc["I"] = best.I;
        doc["boundary_gap"] = best.boundary_gap;
        doc["I_over_ln2"] = best.I / std::log(2.0);
    } else if (do_cc) {
        doc["P1"] = P1;
        doc["P2"] = P2;
        doc["I"] = wc::mutual_info_cc(P1, P2);
    } else {
        doc["s"] = s;
        doc["P"] = P;
        doc["I"] = wc::mutual_info_wc(s, P);
    }
    if (format == "csv") {
        std::ostringstream csv;
        bool first = true;
        for (const auto& [key, value] : doc.items()) {
            csv << (first ? "" : ",") << key;
            first = false;
        }
        csv << '\n';
        first = true;
        for (const auto& [key, value] : doc.items()) {
            (void)key;
            csv << (first ? "" : ",") << fmt17(value.get<double>());
            first = false;
        }
        csv << '\n';
        sink.write("mi.csv", csv.str());
    } else {
        sink.write("mi.json", doc.dump(2) + "\n");
    }
    return 0;
}

int cmd_oracle(int grid_points, int n_max, double extent,
               const std::optional<std::string>& config_path,
               const std::optional<std::string>& out_dir) {
    wc::BeamField beam = wc::BeamField::gaussian(1.0);
    std::vector<wc::DetectorSpec> detectors;
    if (config_path) {
        const wc::Experiment exp = wc::load_experiment(*config_path);
        if (exp.direct)
            throw std::invalid_argument("oracle: needs a geometric experiment config");
        beam = *exp.beam;
        detectors = exp.detectors;
    } else {
        // Two disc detectors straddling the beam axis, each carrying both a
        // counting region and a smearing response.
        for (const double cx : {-0.9, 0.9}) {
            wc::DetectorSpec det;
            det.mode = wc::DetectorMode::count;
            det.region = wc::DetectorRegion::disc({cx, 0.0}, 0.8);
            det.smearing = wc::SmearingFunction::gaussian(0.45, {cx, 0.0});
            detectors.push_back(det);
        }
    }

    const wc::gridfock::Model model = wc::gridfock::build_lattice_model(
        {grid_points, extent}, beam, detectors, n_max);
    const std::string report = wc::gridfock::oracle_report_json(model);

    json jp{{"G", grid_points}, {"nmax", n_max}, {"extent", extent}};
    if (config_path) jp["config"] = *config_path;
    OutputSink sink("oracle", out_dir, std::nullopt, jp);
    sink.write("oracle.json", report + "\n");

    const json parsed = json::parse(report);
    return parsed["all_pass"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wave-amplitude and photon-counting measurement statistics for "
                 "vacuum and single-photon beams"};
    app.set_version_flag("--version", std::string("wavecount ") + wc::kVersion);
    app.require_subcommand(1);

    std::optional<std::string> out_dir;
    const auto add_out = [&out_dir](CLI::App* sub) {
        sub->add_option("--out", out_dir, "Directory for datasets and manifests");
    };

    // params
    auto* sc_params = app.add_subcommand("params", "Derive (sigma, s, P) from a config");
    std::string config_path;
    sc_params->add_option("--config", config_path, "Experiment JSON")->required();
    std::string params_format = "json";
    sc_params->add_option("--format", params_format, "json | csv");
    add_out(sc_params);

    // figure
    auto* sc_figure = app.add_subcommand("figure", "Emit plot-ready figure datasets");
    std::string which;
    double fig_sigma = 1.0;
    int fig_points = 81;
    int fig_ns = 101, fig_nP = 101;
    std::vector<double> fig_s;
    sc_figure->add_option("--which", which, "fig2 | fig3 | fig4")->required();
    sc_figure->add_option("--sigma", fig_sigma, "Wave-noise scale");
    sc_figure->add_option("--points", fig_points, "Grid points per axis (fig3)");
    sc_figure->add_option("--s", fig_s, "Overlap values (fig2/fig3)");
    sc_figure->add_option("--ns", fig_ns, "s-axis points (fig4)");
    sc_figure->add_option("--nP", fig_nP, "P-axis points (fig4)");
    add_out(sc_figure);

    // sample
    auto* sc_sample = app.add_subcommand("sample", "Draw Monte Carlo batches");
    SampleArgs sargs;
    std::string sample_config;
    sc_sample->add_option("--mode", sargs.mode, "w | ww | cc | wc");
    sc_sample->add_option("--n", sargs.n, "Number of draws")->capture_default_str();
    sc_sample->add_option("--seed", sargs.seed, "64-bit seed")->capture_default_str();
    sc_sample->add_option("--threads", sargs.threads, "Worker threads");
    sc_sample->add_option("--sigma", sargs.sigma, "sigma (w/ww/wc)");
    sc_sample->add_option("--sigma2", sargs.sigma2, "sigma of detector 2 (ww)");
    sc_sample->add_option("--s", sargs.s, "overlap s (w/ww/wc)");
    sc_sample->add_option("--s2", sargs.s2, "overlap of detector 2 (ww)");
    sc_sample->add_option("--P", sargs.P, "counting probability (cc: detector 1; wc)");
    sc_sample->add_option("--P2", sargs.P2, "counting probability of detector 2 (cc)");
    sc_sample->add_option("--config", sample_config, "Experiment JSON instead of flags");
    add_out(sc_sample);

    // mi
    auto* sc_mi = app.add_subcommand("mi", "Mutual information");
    bool mi_max = false, mi_cc = false, mi_map_flag = false;
    double mi_s = 0.0, mi_P = 0.0, mi_P1 = 0.0, mi_P2 = 0.0;
    int mi_ns = 101, mi_nP = 101;
    sc_mi->add_flag("--max", mi_max, "Maximize over the feasible (s, P) set");
    sc_mi->add_flag("--cc", mi_cc, "Count-count pair instead of wave-count");
    sc_mi->add_flag("--map", mi_map_flag, "Emit the (s, P) surface as CSV");
    sc_mi->add_option("--s", mi_s, "overlap s");
    sc_mi->add_option("--P", mi_P, "counting probability");
    sc_mi->add_option("--P1", mi_P1, "P of counter 1 (--cc)");
    sc_mi->add_option("--P2", mi_P2, "P of counter 2 (--cc)");
    sc_mi->add_option("--ns", mi_ns, "s-axis points (--map)");
    sc_mi->add_option("--nP", mi_nP, "P-axis points (--map)");
    std::string mi_format = "json";
    sc_mi->add_option("--format", mi_format, "json | csv (point values)");
    add_out(sc_mi);

    // oracle
    auto* sc_oracle = app.add_subcommand("oracle", "Finite-lattice brute-force checks");
    int oracle_G = 4, oracle_nmax = 3;
    double oracle_extent = 3.0;
    std::string oracle_config;
    sc_oracle->add_option("--G", oracle_G, "Lattice sites per axis")->capture_default_str();
    sc_oracle->add_option("--nmax", oracle_nmax, "Photon-number cap")->capture_default_str();
    sc_oracle->add_option("--extent", oracle_extent, "Lattice half-extent")->capture_default_str();
    sc_oracle->add_option("--config", oracle_config, "Geometric experiment JSON");
    add_out(sc_oracle);

    try {
        app.parse(argc, argv);
        if (sc_params->parsed()) return cmd_params(config_path, params_format, out_dir);
        if (sc_figure->parsed())
            return cmd_figure(which, fig_sigma, fig_points, fig_s, fig_ns, fig_nP, out_dir);
        if (sc_sample->parsed()) {
            if (!sample_config.empty()) sargs.config = sample_config;
            return cmd_sample(sargs, out_dir);
        }
        if (sc_mi->parsed())
            return cmd_mi(mi_max, mi_cc, mi_map_flag, mi_s, mi_P, mi_P1, mi_P2, mi_ns,
                          mi_nP, mi_format, out_dir);
        if (sc_oracle->parsed())
            return cmd_oracle(oracle_G, oracle_nmax, oracle_extent,
                              oracle_config.empty() ? std::nullopt
                                                    : std::optional<std::string>(oracle_config),
                              out_dir);
        return 2;
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::domain_error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "failure: " << err.what() << '\n';
        return 1;
    }
}
