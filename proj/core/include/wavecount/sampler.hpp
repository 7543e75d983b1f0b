#pragma once

#include "wavecount/distributions.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wavecount {

enum class BatchLayout { w, ww, cc, wc };

/// A reproducible batch of Monte Carlo draws: same (seed, parameters, count)
/// always yields the same rows, independent of thread count.
struct SampleBatch {
    BatchLayout layout = BatchLayout::w;
    std::vector<std::string> columns;
    std::vector<double> data;  // row-major
    std::uint64_t seed = 0;
    std::size_t count = 0;

    std::size_t width() const { return columns.size(); }
    double at(std::size_t row, std::size_t col) const { return data[row * width() + col]; }
    std::vector<double> column(std::size_t col) const;
};

/// Exact mixture weights behind each sampler; nonnegative and summing to 1
/// on the feasible parameter set.
std::vector<double> wave_mixture_weights(std::complex<double> s);
std::vector<double> joint_wave_mixture_weights(std::span<const WaveDetector> detectors);
std::vector<double> mixed_mixture_weights(std::complex<double> s, double P);

/// Single-detector wave amplitude, single-photon state:
/// (1-|s|^2) N(0, sigma^2) + |s|^2 signed-Maxwell(sigma).
SampleBatch sample_w_single(std::size_t n, double sigma, std::complex<double> s,
                            std::uint64_t seed, int threads = 1);

/// Joint wave amplitudes of M >= 2 detectors, single-photon state. The
/// quadratic enhancement of the standardized joint density is a rank <= 2
/// form; it is eigen-decomposed and each eigen-direction is sampled as a
/// signed-Maxwell coordinate with Gaussian orthogonal complement.
SampleBatch sample_ww_single(std::size_t n, std::span<const WaveDetector> detectors,
                             std::uint64_t seed, int threads = 1);

/// Joint clicks of two counting detectors, single-photon state: categorical
/// over {00, 10, 01}; the double click never occurs.
SampleBatch sample_cc_single(std::size_t n, double P1, double P2, std::uint64_t seed,
                             int threads = 1);

/// Joint draw of one wave amplitude and one click, single-photon state,
/// via the exact conditional mixtures g1/P and g0/(1-P).
SampleBatch sample_wc_single(std::size_t n, double sigma, std::complex<double> s, double P,
                             std::uint64_t seed, int threads = 1);

struct EmpiricalStats {
    std::vector<double> mean;
    std::vector<double> variance;          // unbiased
    std::optional<double> pearson;         // two-column batches, both non-degenerate
    std::optional<double> plugin_mi;       // wc batches only
};

/// Column means/variances, Pearson coefficient, and (for wave/count batches)
/// the histogram plug-in mutual information.
EmpiricalStats empirical_stats(const SampleBatch& batch);

/// Kolmogorov-Smirnov distance between a sample and an analytic CDF.
double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Histogram plug-in mutual information of a (w, c) batch: per-class counts
/// over Freedman-Diaconis bins of the pooled w sample.
double plugin_mi_wc(const SampleBatch& batch);

/// CSV export with a header row; floating-point fields use 17 significant
/// digits so the file round-trips 64-bit values exactly.
void write_csv(const SampleBatch& batch, std::ostream& os);

}  // namespace wavecount
