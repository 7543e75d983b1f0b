#include <benchmark/benchmark.h>

#include "wavecount/distributions.hpp"
#include "wavecount/geometry.hpp"
#include "wavecount/gridfock.hpp"
#include "wavecount/information.hpp"
#include "wavecount/sampler.hpp"

#include <array>
#include <complex>
#include <vector>

namespace {

namespace wc = wavecount;

void BM_wave_pdf(benchmark::State& state) {
    const wc::WavePdf p(wc::BeamState::single_photon, 1.0, 0.6);
    double w = -3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.pdf(w));
        w = w < 3.0 ? w + 1e-4 : -3.0;
    }
}
BENCHMARK(BM_wave_pdf);

void BM_joint_wave_pdf(benchmark::State& state) {
    const std::vector<wc::WaveDetector> dets{{1.0, {0.45, 0.25}}, {0.8, {-0.35, 0.3}}};
    const wc::JointWavePdf p(wc::BeamState::single_photon, dets);
    std::array<double, 2> w{0.3, -0.7};
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.pdf(w));
        w[0] = w[0] < 3.0 ? w[0] + 1e-4 : -3.0;
    }
}
BENCHMARK(BM_joint_wave_pdf);

void BM_differential_entropy(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(wc::differential_entropy_w(1.0, 0.6));
}
BENCHMARK(BM_differential_entropy);

void BM_mutual_info_wc(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(wc::mutual_info_wc(0.6, 0.3));
}
BENCHMARK(BM_mutual_info_wc);

void BM_maximize_mi(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(wc::maximize_mi_wc());
}
BENCHMARK(BM_maximize_mi)->Unit(benchmark::kMillisecond);

void BM_sample_wc(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(wc::sample_wc_single(n, 1.0, 0.5, 0.4, seed++));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_sample_wc)->Arg(1 << 14);

void BM_sample_ww(benchmark::State& state) {
    const std::vector<wc::WaveDetector> dets{{1.0, {0.45, 0.25}}, {0.8, {-0.35, 0.3}}};
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(wc::sample_ww_single(n, dets, seed++));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_sample_ww)->Arg(1 << 14);

void BM_detector_params(benchmark::State& state) {
    const wc::BeamField beam = wc::BeamField::gaussian(1.0);
    const wc::SmearingFunction f = wc::SmearingFunction::gaussian(0.12, {-0.6, 0.0});
    const wc::DetectorRegion region = wc::DetectorRegion::disc({-0.6, 0.0}, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(wc::detector_params(beam, f, region));
}
BENCHMARK(BM_detector_params)->Unit(benchmark::kMillisecond);

wc::gridfock::Model oracle_model() {
    std::vector<wc::DetectorSpec> detectors;
    for (const double cx : {-0.9, 0.9}) {
        wc::DetectorSpec det;
        det.mode = wc::DetectorMode::count;
        det.region = wc::DetectorRegion::disc({cx, 0.0}, 0.8);
        det.smearing = wc::SmearingFunction::gaussian(0.45, {cx, 0.0});
        detectors.push_back(det);
    }
    return wc::gridfock::build_lattice_model({4, 3.0}, wc::BeamField::gaussian(1.0),
                                             detectors, 3);
}

void BM_lattice_build(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle_model());
}
BENCHMARK(BM_lattice_build)->Unit(benchmark::kMillisecond);

void BM_commutator_checks(benchmark::State& state) {
    const auto model = oracle_model();
    for (auto _ : state)
        benchmark::DoNotOptimize(wc::gridfock::check_commutators(model));
}
BENCHMARK(BM_commutator_checks)->Unit(benchmark::kMillisecond);

void BM_characteristic_pdf(benchmark::State& state) {
    const auto model = oracle_model();
    std::vector<double> grid;
    const double sigma = *model.lattice.params(0).sigma;
    for (int i = -80; i <= 80; ++i) grid.push_back(0.05 * i * sigma);
    for (auto _ : state)
        benchmark::DoNotOptimize(wc::gridfock::characteristic_pdf_w(
            model, 0, wc::BeamState::single_photon, grid));
}
BENCHMARK(BM_characteristic_pdf)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
