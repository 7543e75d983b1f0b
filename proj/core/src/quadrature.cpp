#include "wavecount/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace wavecount {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric Jacobi matrix of the
// orthogonal-polynomial recurrence, weights are mu0 * (first eigenvector
// component)^2.
GaussRule golub_welsch(const std::vector<double>& offdiag, double mu0) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        jacobi(k, k + 1) = offdiag[static_cast<std::size_t>(k)];
        jacobi(k + 1, k) = offdiag[static_cast<std::size_t>(k)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        rule.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
        const double v0 = solver.eigenvectors()(0, k);
        rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
    }
    return rule;
}

}  // namespace

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    std::vector<double> beta(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k)
        beta[static_cast<std::size_t>(k - 1)] = k / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(beta, 2.0);
}

GaussRule gauss_legendre(int n, double a, double b) {
    GaussRule rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        rule.nodes[k] = mid + half * rule.nodes[k];
        rule.weights[k] *= half;
    }
    return rule;
}

GaussRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
    std::vector<double> beta(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k)
        beta[static_cast<std::size_t>(k - 1)] = std::sqrt(0.5 * k);
    return golub_welsch(beta, std::sqrt(M_PI));
}

double gaussian_expectation(const std::function<double(double)>& h,
                            double mean, double stddev, int n) {
    const GaussRule rule = gauss_hermite(n);
    const double scale = std::sqrt(2.0) * stddev;
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        sum += rule.weights[k] * h(mean + scale * rule.nodes[k]);
    return sum / std::sqrt(M_PI);
}

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw std::runtime_error(
            "integrate_adaptive: tolerance not met after maximum refinement "
            "(remaining discrepancy " + std::to_string(std::abs(delta)) + ")");
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double tol, int max_depth) {
    if (!(b > a)) {
        if (a == b) return 0.0;
        throw std::invalid_argument("integrate_adaptive: requires b >= a");
    }
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace wavecount
