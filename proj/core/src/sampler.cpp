#include "wavecount/sampler.hpp"

#include "wavecount/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace wavecount {

namespace {

// Distinct sub-stream per operation so equal seeds do not alias across ops.
constexpr std::uint32_t kStreamW = 0;
constexpr std::uint32_t kStreamWW = 1;
constexpr std::uint32_t kStreamCC = 2;
constexpr std::uint32_t kStreamWC = 3;

void fill_parallel(std::size_t n, int threads,
                   const std::function<void(std::size_t, std::size_t)>& fill_range) {
    if (threads <= 1 || n < 1024) {
        fill_range(0, n);
        return;
    }
    const std::size_t t = static_cast<std::size_t>(threads);
    std::vector<std::thread> pool;
    pool.reserve(t);
    const std::size_t chunk = (n + t - 1) / t;
    for (std::size_t k = 0; k < t; ++k) {
        const std::size_t lo = k * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] { fill_range(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<double> SampleBatch::column(std::size_t col) const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = at(i, col);
    return out;
}

std::vector<double> wave_mixture_weights(std::complex<double> s) {
    const double s2 = std::norm(s);
    if (s2 > 1.0 + 1e-12)
        throw std::invalid_argument("wave_mixture_weights: |s| > 1");
    return {std::max(0.0, 1.0 - s2), s2};
}

std::vector<double> joint_wave_mixture_weights(std::span<const WaveDetector> detectors) {
    const std::size_t m = detectors.size();
    Eigen::VectorXd u(m), v(m);
    double s2 = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
        u(static_cast<Eigen::Index>(n)) = detectors[n].s.real();
        v(static_cast<Eigen::Index>(n)) = detectors[n].s.imag();
        s2 += std::norm(detectors[n].s);
    }
    if (s2 > 1.0 + 1e-12)
        throw std::invalid_argument("joint_wave_mixture_weights: sum |s_n|^2 > 1");
    Eigen::MatrixXd quad_form = u * u.transpose() + v * v.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(quad_form);
    const Eigen::Index last = static_cast<Eigen::Index>(m) - 1;
    const double mu1 = m >= 1 ? std::max(0.0, solver.eigenvalues()(last)) : 0.0;
    const double mu2 = m >= 2 ? std::max(0.0, solver.eigenvalues()(last - 1)) : 0.0;
    return {std::max(0.0, 1.0 - s2), mu1, mu2};
}

std::vector<double> mixed_mixture_weights(std::complex<double> s, double P) {
    const double s2 = std::norm(s);
    if (!(P >= 0.0 && P <= 1.0))
        throw std::invalid_argument("mixed_mixture_weights: P outside [0, 1]");
    if (1.0 - P - s2 < -1e-12)
        throw std::invalid_argument("mixed_mixture_weights: 1 - P - |s|^2 < 0");
    return {P, std::max(0.0, 1.0 - P - s2), s2};
}

SampleBatch sample_w_single(std::size_t n, double sigma, std::complex<double> s,
                            std::uint64_t seed, int threads) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sample_w_single: sigma must be positive");
    const double s2 = wave_mixture_weights(s)[1];
    SampleBatch batch;
    batch.layout = BatchLayout::w;
    batch.columns = {"w"};
    batch.seed = seed;
    batch.count = n;
    batch.data.resize(n);
    fill_parallel(n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            RandomStream rs(seed, kStreamW, i);
            const double u = rs.uniform();
            batch.data[i] = sigma * (u < s2 ? rs.maxwell_signed() : rs.normal());
        }
    });
    return batch;
}

SampleBatch sample_ww_single(std::size_t n, std::span<const WaveDetector> detectors,
                             std::uint64_t seed, int threads) {
    const std::size_t m = detectors.size();
    if (m < 2) throw std::invalid_argument("sample_ww_single: needs at least two detectors");
    for (const auto& d : detectors)
        if (!(d.sigma > 0.0))
            throw std::invalid_argument("sample_ww_single: sigma must be positive");

    Eigen::VectorXd u(m), v(m);
    for (std::size_t k = 0; k < m; ++k) {
        u(static_cast<Eigen::Index>(k)) = detectors[k].s.real();
        v(static_cast<Eigen::Index>(k)) = detectors[k].s.imag();
    }
    Eigen::MatrixXd quad_form = u * u.transpose() + v * v.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(quad_form);
    const std::vector<double> weights = joint_wave_mixture_weights(detectors);
    const Eigen::Index last = static_cast<Eigen::Index>(m) - 1;
    const Eigen::VectorXd e1 = solver.eigenvectors().col(last);
    const Eigen::VectorXd e2 = solver.eigenvectors().col(last - 1);

    SampleBatch batch;
    batch.layout = BatchLayout::ww;
    batch.columns.reserve(m);
    for (std::size_t k = 0; k < m; ++k) batch.columns.push_back("w" + std::to_string(k + 1));
    batch.seed = seed;
    batch.count = n;
    batch.data.resize(n * m);

    fill_parallel(n, threads, [&](std::size_t lo, std::size_t hi) {
        Eigen::VectorXd z(m);
        for (std::size_t i = lo; i < hi; ++i) {
            RandomStream rs(seed, kStreamWW, i);
            const double pick = rs.uniform();
            for (std::size_t k = 0; k < m; ++k)
                z(static_cast<Eigen::Index>(k)) = rs.normal();
            int component = 0;
            double acc = weights[0];
            while (component < 2 && pick >= acc) {
                ++component;
                acc += weights[static_cast<std::size_t>(component)];
            }
            if (component > 0) {
                const Eigen::VectorXd& axis = component == 1 ? e1 : e2;
                const double t = rs.maxwell_signed();
                z += (t - z.dot(axis)) * axis;
            }
            for (std::size_t k = 0; k < m; ++k)
                batch.data[i * m + k] = detectors[k].sigma * z(static_cast<Eigen::Index>(k));
        }
    });
    return batch;
}

SampleBatch sample_cc_single(std::size_t n, double P1, double P2, std::uint64_t seed,
                             int threads) {
    if (!(P1 >= 0.0 && P1 <= 1.0) || !(P2 >= 0.0 && P2 <= 1.0))
        throw std::invalid_argument("sample_cc_single: P outside [0, 1]");
    if (P1 + P2 > 1.0 + 1e-12)
        throw std::invalid_argument("sample_cc_single: P1 + P2 exceeds 1");
    SampleBatch batch;
    batch.layout = BatchLayout::cc;
    batch.columns = {"c1", "c2"};
    batch.seed = seed;
    batch.count = n;
    batch.data.resize(2 * n);
    const double p00 = 1.0 - P1 - P2;
    fill_parallel(n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            RandomStream rs(seed, kStreamCC, i);
            const double pick = rs.uniform();
            double c1 = 0.0, c2 = 0.0;
            if (pick >= p00) {
                if (pick < p00 + P1)
                    c1 = 1.0;
                else
                    c2 = 1.0;
            }
            batch.data[2 * i] = c1;
            batch.data[2 * i + 1] = c2;
        }
    });
    return batch;
}

SampleBatch sample_wc_single(std::size_t n, double sigma, std::complex<double> s, double P,
                             std::uint64_t seed, int threads) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sample_wc_single: sigma must be positive");
    mixed_mixture_weights(s, P);  // validates feasibility
    const double s2 = std::norm(s);
    SampleBatch batch;
    batch.layout = BatchLayout::wc;
    batch.columns = {"w", "c"};
    batch.seed = seed;
    batch.count = n;
    batch.data.resize(2 * n);
    fill_parallel(n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            RandomStream rs(seed, kStreamWC, i);
            const double pick = rs.uniform();
            double w, c;
            if (pick < P) {
                c = 1.0;  // conditional law g1 / P is the vacuum Gaussian
                w = sigma * rs.normal();
            } else {
                c = 0.0;  // conditional law g0 / (1-P)
                const double maxwell_weight = s2 / (1.0 - P);
                w = sigma * (rs.uniform() < maxwell_weight ? rs.maxwell_signed() : rs.normal());
            }
            batch.data[2 * i] = w;
            batch.data[2 * i + 1] = c;
        }
    });
    return batch;
}

EmpiricalStats empirical_stats(const SampleBatch& batch) {
    const std::size_t n = batch.count;
    const std::size_t m = batch.width();
    if (n < 2) throw std::invalid_argument("empirical_stats: needs at least two rows");
    EmpiricalStats out;
    out.mean.resize(m);
    out.variance.resize(m);
    std::vector<double> sums(m, 0.0), sq(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            const double x = batch.at(i, k);
            sums[k] += x;
            sq[k] += x * x;
        }
    const double dn = static_cast<double>(n);
    for (std::size_t k = 0; k < m; ++k) {
        out.mean[k] = sums[k] / dn;
        out.variance[k] = (dn * sq[k] - sums[k] * sums[k]) / (dn * (dn - 1.0));
    }
    if (m == 2) {
        double s12 = 0.0;
        for (std::size_t i = 0; i < n; ++i) s12 += batch.at(i, 0) * batch.at(i, 1);
        const double r1 = dn * sq[0] - sums[0] * sums[0];
        const double r2 = dn * sq[1] - sums[1] * sums[1];
        // One square root of the product keeps exact anti-/correlation at
        // exactly -1/+1 for integer-valued data.
        if (r1 > 0.0 && r2 > 0.0)
            out.pearson = (dn * s12 - sums[0] * sums[1]) / std::sqrt(r1 * r2);
    }
    if (batch.layout == BatchLayout::wc) out.plugin_mi = plugin_mi_wc(batch);
    return out;
}

double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double dn = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / dn,
                                 static_cast<double>(i + 1) / dn - f));
    }
    return d;
}

double plugin_mi_wc(const SampleBatch& batch) {
    if (batch.layout != BatchLayout::wc)
        throw std::invalid_argument("plugin_mi_wc: batch must have (w, c) layout");
    const std::size_t n = batch.count;
    if (n < 16) throw std::invalid_argument("plugin_mi_wc: sample too small");

    std::vector<double> w = batch.column(0);
    std::vector<double> sorted = w;
    std::sort(sorted.begin(), sorted.end());
    const double q25 = sorted[static_cast<std::size_t>(0.25 * (n - 1))];
    const double q75 = sorted[static_cast<std::size_t>(0.75 * (n - 1))];
    const double lo = sorted.front();
    const double hi = sorted.back();
    if (!(hi > lo)) return 0.0;  // constant amplitude column carries no information
    double bin_width = 2.0 * (q75 - q25) / std::cbrt(static_cast<double>(n));
    if (!(bin_width > 0.0)) bin_width = (hi - lo) > 0.0 ? (hi - lo) : 1.0;
    const std::size_t bins = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil((hi - lo) / bin_width)), 1, 8192);

    std::vector<std::array<double, 2>> counts(bins, {0.0, 0.0});
    std::array<double, 2> class_counts{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t b = static_cast<std::size_t>((w[i] - lo) / (hi - lo) * bins);
        if (b >= bins) b = bins - 1;
        const int c = batch.at(i, 1) != 0.0 ? 1 : 0;
        counts[b][static_cast<std::size_t>(c)] += 1.0;
        class_counts[static_cast<std::size_t>(c)] += 1.0;
    }
    const double dn = static_cast<double>(n);
    double mi = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        const double pb = (counts[b][0] + counts[b][1]) / dn;
        if (pb == 0.0) continue;
        for (int c = 0; c < 2; ++c) {
            const double pbc = counts[b][static_cast<std::size_t>(c)] / dn;
            if (pbc == 0.0) continue;
            const double pc = class_counts[static_cast<std::size_t>(c)] / dn;
            mi += pbc * std::log(pbc / (pb * pc));
        }
    }
    return mi;
}

void write_csv(const SampleBatch& batch, std::ostream& os) {
    for (std::size_t k = 0; k < batch.columns.size(); ++k) {
        if (k) os << ',';
        os << batch.columns[k];
    }
    os << '\n';
    char buf[32];
    for (std::size_t i = 0; i < batch.count; ++i) {
        for (std::size_t k = 0; k < batch.width(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", batch.at(i, k));
            if (k) os << ',';
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace wavecount
