#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace wavecount {

enum class BeamState { vacuum, single_photon };

/// (sigma, s) pair of one wave detector.
struct WaveDetector {
    double sigma = 1.0;
    std::complex<double> s{0.0, 0.0};
};

/// First/second moments of a pair of random variables. `pearson` is unset
/// when one of the variances vanishes (degenerate distribution).
struct PairMoments {
    double mean1 = 0.0, mean2 = 0.0;
    double var1 = 0.0, var2 = 0.0;
    double covariance = 0.0;
    std::optional<double> pearson;
};

/// Amplitude density of one wave detector. Vacuum: centered Gaussian of
/// variance sigma^2. Single photon: the Gaussian times
/// 1 - |s|^2 (1 - w^2/sigma^2), which dips at w = 0 and reaches the pure
/// bell-shaped w^2-weighted law at |s| = 1.
struct WavePdf {
    BeamState state = BeamState::vacuum;
    double sigma = 1.0;
    std::complex<double> s{0.0, 0.0};

    WavePdf(BeamState state, double sigma, std::complex<double> s);

    double pdf(double w) const;
    double cdf(double w) const;
    double moment(int k) const;  // E[W^k] by Gauss-Hermite quadrature
    double mean() const { return 0.0; }
    double variance() const;
};

/// Click/no-click mass function of one counting detector.
struct CountPmf {
    BeamState state = BeamState::vacuum;
    double P = 0.0;

    CountPmf(BeamState state, double P);

    double pmf(int c) const;
    double mean() const;
    double variance() const;
};

/// Joint amplitude density of M >= 2 wave detectors.
struct JointWavePdf {
    BeamState state = BeamState::vacuum;
    std::vector<WaveDetector> detectors;

    JointWavePdf(BeamState state, std::vector<WaveDetector> detectors);

    double pdf(std::span<const double> w) const;
    PairMoments moments(std::size_t m = 0, std::size_t n = 1) const;
};

/// Joint count masses of M >= 2 counting detectors: at most one detector
/// clicks per single photon.
struct JointCountPmf {
    BeamState state = BeamState::vacuum;
    std::vector<double> P;

    JointCountPmf(BeamState state, std::vector<double> P);

    double pmf(std::span<const int> c) const;
    double zero_click_mass() const;
    PairMoments moments(std::size_t m = 0, std::size_t n = 1) const;
};

/// Mixed continuous-discrete joint law of one wave and one counting
/// detector, represented exactly by the density pair {g0(w), g1(w)} with
/// p(w, c) = delta(c) g0(w) + delta(c - 1) g1(w).
struct MixedJointPdf {
    BeamState state = BeamState::vacuum;
    double sigma = 1.0;
    std::complex<double> s{0.0, 0.0};
    double P = 0.0;

    MixedJointPdf(BeamState state, double sigma, std::complex<double> s, double P);

    double g0(double w) const;
    double g1(double w) const;
    double pdf(double w, int c) const;
    PairMoments moments() const;
};

// Free-function forms of the same evaluations.
double pdf_w(BeamState state, double sigma, std::complex<double> s, double w);
double pmf_c(BeamState state, double P, int c);
double pdf_ww(BeamState state, std::span<const WaveDetector> detectors,
              std::span<const double> w);
double pmf_cc(BeamState state, std::span<const double> P, std::span<const int> c);
double pdf_wc(BeamState state, double sigma, std::complex<double> s, double P,
              double w, int c);

/// Pearson coefficient of the symmetric two-wave arrangement
/// (sigma_1 = sigma_2, s_1 = s_2 = s, real): 2|s|^2 / (1 + 2|s|^2) <= 1/2.
double pearson_ww_symmetric(double s);

/// Pearson coefficient of a two-counter arrangement:
/// -sqrt(P1 P2 / ((1-P1)(1-P2))); unset at P in {0, 1}.
std::optional<double> pearson_cc(double P1, double P2);

}  // namespace wavecount
