#include "wavecount/information.hpp"

#include "wavecount/distributions.hpp"
#include "wavecount/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace wavecount {

namespace {

constexpr double kEntropyTol = 1e-12;

double xlogx(double v) { return v > 1e-300 ? v * std::log(v) : 0.0; }

// Integration window: the integrands are Gaussian-dominated with effective
// scale sigma_eff^2 = sigma^2 (1 + 2|s|^2); beyond 12 sigma_eff the tail
// contribution is below 1e-12.
double entropy_window(double sigma, std::complex<double> s) {
    return 12.0 * sigma * std::sqrt(1.0 + 2.0 * std::norm(s));
}

double neg_int_xlogx(const std::function<double(double)>& density, double window) {
    const auto integrand = [&](double w) { return -xlogx(density(w)); };
    // Split at zero: the densities can have a |t| log|t| point there.
    return integrate_adaptive(integrand, -window, 0.0, kEntropyTol) +
           integrate_adaptive(integrand, 0.0, window, kEntropyTol);
}

void check_wc_feasible(double s, double P) {
    if (!(P >= 0.0 && P <= 1.0))
        throw std::domain_error("mutual_info_wc: P must lie in [0, 1]");
    if (1.0 - P - s * s < -1e-12)
        throw std::domain_error("mutual_info_wc: infeasible point, 1 - P - s^2 < 0");
}

}  // namespace

double differential_entropy_w(double sigma, std::complex<double> s) {
    const WavePdf p(BeamState::single_photon, sigma, s);
    return neg_int_xlogx([&](double w) { return p.pdf(w); }, entropy_window(sigma, s));
}

double discrete_entropy_c(double P) {
    if (!(P >= 0.0 && P <= 1.0))
        throw std::domain_error("discrete_entropy_c: P must lie in [0, 1]");
    return -xlogx(P) - xlogx(1.0 - P);
}

double mixed_entropy_wc(double sigma, std::complex<double> s, double P) {
    const MixedJointPdf joint(BeamState::single_photon, sigma, s, P);
    const double window = entropy_window(sigma, s);
    return neg_int_xlogx([&](double w) { return joint.g0(w); }, window) +
           neg_int_xlogx([&](double w) { return joint.g1(w); }, window);
}

double mutual_info_wc_at_sigma(double sigma, double s, double P) {
    check_wc_feasible(s, P);
    const std::complex<double> sc(std::abs(s), 0.0);
    return differential_entropy_w(sigma, sc) + discrete_entropy_c(P) -
           mixed_entropy_wc(sigma, sc, P);
}

double mutual_info_wc(double s, double P) { return mutual_info_wc_at_sigma(1.0, s, P); }

double mutual_info_cc(double P1, double P2) {
    if (!(P1 >= 0.0 && P1 <= 1.0) || !(P2 >= 0.0 && P2 <= 1.0))
        throw std::domain_error("mutual_info_cc: P must lie in [0, 1]");
    if (P1 + P2 > 1.0 + 1e-12)
        throw std::domain_error("mutual_info_cc: P1 + P2 exceeds 1");
    return -xlogx(1.0 - P1) - xlogx(1.0 - P2) + xlogx(std::max(0.0, 1.0 - P1 - P2));
}

namespace {

double mi_or_lowest(double s, double P) {
    if (s < 0.0 || s > 1.0 || P < 0.0 || P > 1.0 || 1.0 - P - s * s < 0.0)
        return -std::numeric_limits<double>::infinity();
    return mutual_info_wc(s, P);
}

double golden_max_boundary(double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const auto g = [](double s) { return mutual_info_wc(s, 1.0 - s * s); };
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = g(c), fd = g(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = g(d);
        }
    }
    return 0.5 * (a + b);
}

struct SimplexPoint {
    std::array<double, 2> x;
    double f;
};

// Nelder-Mead on -I over (s, P), infeasible points scored -inf.
SimplexPoint nelder_mead_max(std::array<double, 2> start, double step, int iters) {
    const auto f = [](const std::array<double, 2>& x) { return mi_or_lowest(x[0], x[1]); };
    std::array<SimplexPoint, 3> sx{{{start, f(start)},
                                    {{start[0] + step, start[1]}, 0.0},
                                    {{start[0], start[1] + step}, 0.0}}};
    sx[1].f = f(sx[1].x);
    sx[2].f = f(sx[2].x);
    for (int it = 0; it < iters; ++it) {
        std::sort(sx.begin(), sx.end(),
                  [](const SimplexPoint& a, const SimplexPoint& b) { return a.f > b.f; });
        const std::array<double, 2> centroid{0.5 * (sx[0].x[0] + sx[1].x[0]),
                                             0.5 * (sx[0].x[1] + sx[1].x[1])};
        const auto mix = [&](double t) {
            return std::array<double, 2>{centroid[0] + t * (centroid[0] - sx[2].x[0]),
                                         centroid[1] + t * (centroid[1] - sx[2].x[1])};
        };
        const auto refl = mix(1.0);
        const double fr = f(refl);
        if (fr > sx[0].f) {
            const auto exp_pt = mix(2.0);
            const double fe = f(exp_pt);
            sx[2] = fe > fr ? SimplexPoint{exp_pt, fe} : SimplexPoint{refl, fr};
        } else if (fr > sx[1].f) {
            sx[2] = {refl, fr};
        } else {
            const auto con = mix(-0.5);
            const double fco = f(con);
            if (fco > sx[2].f) {
                sx[2] = {con, fco};
            } else {
                for (int i = 1; i < 3; ++i) {
                    sx[i].x = {0.5 * (sx[i].x[0] + sx[0].x[0]),
                               0.5 * (sx[i].x[1] + sx[0].x[1])};
                    sx[i].f = f(sx[i].x);
                }
            }
        }
    }
    std::sort(sx.begin(), sx.end(),
              [](const SimplexPoint& a, const SimplexPoint& b) { return a.f > b.f; });
    return sx[0];
}

}  // namespace

MiMaximum maximize_mi_wc() {
    // Coarse scan of the feasible triangle-like region.
    double best_s = 0.0, best_P = 0.0, best_I = 0.0;
    const int n = 41;
    for (int i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / (n - 1);
        const double P_hi = 1.0 - s * s;
        for (int j = 1; j < n; ++j) {
            const double P = P_hi * static_cast<double>(j) / (n - 1);
            const double I = mutual_info_wc(s, P);
            if (I > best_I) {
                best_I = I;
                best_s = s;
                best_P = P;
            }
        }
    }

    // Refine along the boundary P = 1 - s^2.
    const double s_b = golden_max_boundary(std::max(0.05, best_s - 0.2),
                                           std::min(0.999, best_s + 0.2), 1e-9);
    const double I_b = mutual_info_wc(s_b, 1.0 - s_b * s_b);

    // Interior polish from the best coarse cell.
    const SimplexPoint interior = nelder_mead_max({best_s, best_P}, 0.02, 200);

    MiMaximum out;
    if (I_b >= interior.f) {
        out.s = s_b;
        out.P = 1.0 - s_b * s_b;
        out.I = I_b;
    } else {
        out.s = interior.x[0];
        out.P = interior.x[1];
        out.I = interior.f;
    }
    out.boundary_gap = std::abs(out.P - (1.0 - out.s * out.s));
    if (out.boundary_gap > 1e-3)
        throw std::runtime_error(
            "maximize_mi_wc: maximizer unexpectedly off the boundary P = 1 - s^2");
    return out;
}

std::vector<MiSurfacePoint> mi_map(int n_s, int n_P) {
    if (n_s < 2 || n_P < 2)
        throw std::invalid_argument("mi_map: grid must have at least 2 points per axis");
    std::vector<MiSurfacePoint> out;
    out.reserve(static_cast<std::size_t>(n_s) * static_cast<std::size_t>(n_P));
    for (int j = 0; j < n_P; ++j) {
        const double P = static_cast<double>(j) / (n_P - 1);
        for (int i = 0; i < n_s; ++i) {
            const double s = static_cast<double>(i) / (n_s - 1);
            MiSurfacePoint pt;
            pt.s = s;
            pt.P = P;
            pt.feasible = 1.0 - P - s * s >= -1e-12;  // boundary equality allowed
            pt.I = pt.feasible ? mutual_info_wc(s, std::min(P, 1.0 - s * s))
                               : std::numeric_limits<double>::quiet_NaN();
            out.push_back(pt);
        }
    }
    return out;
}

}  // namespace wavecount
