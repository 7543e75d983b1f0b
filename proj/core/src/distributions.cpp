#include "wavecount/distributions.hpp"

#include "wavecount/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace wavecount {

namespace {

void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("wave distribution: sigma must be positive");
}

void check_s(std::complex<double> s) {
    if (std::abs(s) > 1.0 + 1e-12)
        throw std::invalid_argument("wave distribution: |s| > 1 violates the overlap bound");
}

void check_P(double P) {
    if (!(P >= 0.0 && P <= 1.0))
        throw std::invalid_argument("count distribution: P must lie in [0, 1]");
}

double gauss_pdf(double w, double sigma) {
    const double t = w / sigma;
    return std::exp(-0.5 * t * t) / (sigma * std::sqrt(2.0 * M_PI));
}

double gauss_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

}  // namespace

WavePdf::WavePdf(BeamState state_, double sigma_, std::complex<double> s_)
    : state(state_), sigma(sigma_), s(s_) {
    check_sigma(sigma);
    check_s(s);
}

double WavePdf::pdf(double w) const {
    const double vac = gauss_pdf(w, sigma);
    if (state == BeamState::vacuum) return vac;
    const double s2 = std::norm(s);
    const double t = w / sigma;
    return vac * (1.0 - s2 * (1.0 - t * t));
}

double WavePdf::cdf(double w) const {
    const double t = w / sigma;
    if (state == BeamState::vacuum) return gauss_cdf(t);
    const double s2 = std::norm(s);
    const double phi = std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
    return gauss_cdf(t) - s2 * t * phi;
}

double WavePdf::moment(int k) const {
    if (k < 0) throw std::invalid_argument("WavePdf::moment: negative order");
    return gaussian_expectation(
        [&](double w) {
            double p = 1.0;
            for (int i = 0; i < k; ++i) p *= w;
            if (state == BeamState::vacuum) return p;
            const double t = w / sigma;
            return p * (1.0 - std::norm(s) * (1.0 - t * t));
        },
        0.0, sigma);
}

double WavePdf::variance() const {
    if (state == BeamState::vacuum) return sigma * sigma;
    return sigma * sigma * (1.0 + 2.0 * std::norm(s));
}

CountPmf::CountPmf(BeamState state_, double P_) : state(state_), P(P_) { check_P(P); }

double CountPmf::pmf(int c) const {
    if (c != 0 && c != 1)
        throw std::invalid_argument(
            "CountPmf: count must be 0 or 1 (a single photon cannot click twice)");
    if (state == BeamState::vacuum) return c == 0 ? 1.0 : 0.0;
    return c == 0 ? 1.0 - P : P;
}

double CountPmf::mean() const { return state == BeamState::vacuum ? 0.0 : P; }

double CountPmf::variance() const {
    return state == BeamState::vacuum ? 0.0 : P * (1.0 - P);
}

JointWavePdf::JointWavePdf(BeamState state_, std::vector<WaveDetector> detectors_)
    : state(state_), detectors(std::move(detectors_)) {
    if (detectors.size() < 2)
        throw std::invalid_argument("JointWavePdf: needs at least two detectors");
    double sum = 0.0;
    for (const auto& d : detectors) {
        check_sigma(d.sigma);
        check_s(d.s);
        sum += std::norm(d.s);
    }
    if (state == BeamState::single_photon && sum > 1.0 + 1e-12)
        throw std::invalid_argument(
            "JointWavePdf: sum of |s_n|^2 > 1, density would be negative at w = 0");
}

double JointWavePdf::pdf(std::span<const double> w) const {
    if (w.size() != detectors.size())
        throw std::invalid_argument("JointWavePdf::pdf: wrong number of coordinates");
    double vac = 1.0;
    for (std::size_t n = 0; n < detectors.size(); ++n)
        vac *= gauss_pdf(w[n], detectors[n].sigma);
    if (state == BeamState::vacuum) return vac;
    double s2 = 0.0;
    std::complex<double> mix{0.0, 0.0};
    for (std::size_t n = 0; n < detectors.size(); ++n) {
        s2 += std::norm(detectors[n].s);
        mix += (w[n] / detectors[n].sigma) * detectors[n].s;
    }
    return vac * (1.0 - s2 + std::norm(mix));
}

PairMoments JointWavePdf::moments(std::size_t m, std::size_t n) const {
    if (m >= detectors.size() || n >= detectors.size() || m == n)
        throw std::invalid_argument("JointWavePdf::moments: bad detector pair");
    PairMoments out;
    const auto& a = detectors[m];
    const auto& b = detectors[n];
    if (state == BeamState::vacuum) {
        out.var1 = a.sigma * a.sigma;
        out.var2 = b.sigma * b.sigma;
        out.covariance = 0.0;
        out.pearson = 0.0;
        return out;
    }
    out.var1 = a.sigma * a.sigma * (1.0 + 2.0 * std::norm(a.s));
    out.var2 = b.sigma * b.sigma * (1.0 + 2.0 * std::norm(b.s));
    out.covariance = 2.0 * a.sigma * b.sigma * (a.s * std::conj(b.s)).real();
    out.pearson = 2.0 * (a.s * std::conj(b.s)).real() /
                  std::sqrt((1.0 + 2.0 * std::norm(a.s)) * (1.0 + 2.0 * std::norm(b.s)));
    return out;
}

JointCountPmf::JointCountPmf(BeamState state_, std::vector<double> P_)
    : state(state_), P(std::move(P_)) {
    if (P.size() < 2)
        throw std::invalid_argument("JointCountPmf: needs at least two detectors");
    double sum = 0.0;
    for (double p : P) {
        check_P(p);
        sum += p;
    }
    if (state == BeamState::single_photon && sum > 1.0 + 1e-12)
        throw std::invalid_argument("JointCountPmf: sum of P_n exceeds 1");
}

double JointCountPmf::pmf(std::span<const int> c) const {
    if (c.size() != P.size())
        throw std::invalid_argument("JointCountPmf::pmf: wrong number of counts");
    int clicks = 0;
    std::size_t which = 0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (c[n] != 0 && c[n] != 1)
            throw std::invalid_argument("JointCountPmf::pmf: counts must be 0 or 1");
        if (c[n] == 1) {
            ++clicks;
            which = n;
        }
    }
    if (state == BeamState::vacuum) return clicks == 0 ? 1.0 : 0.0;
    if (clicks == 0) return zero_click_mass();
    if (clicks == 1) return P[which];
    return 0.0;  // one photon cannot click in two places
}

double JointCountPmf::zero_click_mass() const {
    if (state == BeamState::vacuum) return 1.0;
    double sum = 0.0;
    for (double p : P) sum += p;
    return 1.0 - sum;
}

PairMoments JointCountPmf::moments(std::size_t m, std::size_t n) const {
    if (m >= P.size() || n >= P.size() || m == n)
        throw std::invalid_argument("JointCountPmf::moments: bad detector pair");
    PairMoments out;
    if (state == BeamState::vacuum) return out;
    out.mean1 = P[m];
    out.mean2 = P[n];
    out.var1 = P[m] * (1.0 - P[m]);
    out.var2 = P[n] * (1.0 - P[n]);
    out.covariance = -P[m] * P[n];  // E[C_m C_n] = 0
    out.pearson = pearson_cc(P[m], P[n]);
    return out;
}

MixedJointPdf::MixedJointPdf(BeamState state_, double sigma_, std::complex<double> s_,
                             double P_)
    : state(state_), sigma(sigma_), s(s_), P(P_) {
    check_sigma(sigma);
    check_s(s);
    check_P(P);
    if (state == BeamState::single_photon && 1.0 - P - std::norm(s) < -1e-12)
        throw std::invalid_argument(
            "MixedJointPdf: 1 - P - |s|^2 < 0, density g0 would be negative");
}

double MixedJointPdf::g0(double w) const {
    if (state == BeamState::vacuum) return gauss_pdf(w, sigma);
    return WavePdf(BeamState::single_photon, sigma, s).pdf(w) - P * gauss_pdf(w, sigma);
}

double MixedJointPdf::g1(double w) const {
    if (state == BeamState::vacuum) return 0.0;
    return P * gauss_pdf(w, sigma);
}

double MixedJointPdf::pdf(double w, int c) const {
    if (c != 0 && c != 1)
        throw std::invalid_argument("MixedJointPdf::pdf: count must be 0 or 1");
    return c == 0 ? g0(w) : g1(w);
}

PairMoments MixedJointPdf::moments() const {
    PairMoments out;
    if (state == BeamState::vacuum) {
        out.var1 = sigma * sigma;
        return out;  // counting variance 0: pearson degenerate
    }
    out.mean2 = P;
    out.var1 = sigma * sigma * (1.0 + 2.0 * std::norm(s));
    out.var2 = P * (1.0 - P);
    out.covariance = 0.0;  // E[WC] = 0
    if (out.var2 > 0.0) out.pearson = 0.0;
    return out;
}

double pdf_w(BeamState state, double sigma, std::complex<double> s, double w) {
    return WavePdf(state, sigma, s).pdf(w);
}

double pmf_c(BeamState state, double P, int c) { return CountPmf(state, P).pmf(c); }

double pdf_ww(BeamState state, std::span<const WaveDetector> detectors,
              std::span<const double> w) {
    return JointWavePdf(state, {detectors.begin(), detectors.end()}).pdf(w);
}

double pmf_cc(BeamState state, std::span<const double> P, std::span<const int> c) {
    return JointCountPmf(state, {P.begin(), P.end()}).pmf(c);
}

double pdf_wc(BeamState state, double sigma, std::complex<double> s, double P, double w,
              int c) {
    return MixedJointPdf(state, sigma, s, P).pdf(w, c);
}

double pearson_ww_symmetric(double s) {
    const double s2 = s * s;
    if (s2 > 0.5 + 1e-12)
        throw std::invalid_argument("pearson_ww_symmetric: |s|^2 must not exceed 1/2");
    return 2.0 * s2 / (1.0 + 2.0 * s2);
}

std::optional<double> pearson_cc(double P1, double P2) {
    check_P(P1);
    check_P(P2);
    if (P1 == 0.0 || P1 == 1.0 || P2 == 0.0 || P2 == 1.0) return std::nullopt;
    return -std::sqrt(P1 * P2 / ((1.0 - P1) * (1.0 - P2)));
}

}  // namespace wavecount
