#pragma once

#include <functional>
#include <vector>

namespace wavecount {

/// Nodes and weights of an n-point Gaussian quadrature rule.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
GaussRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
GaussRule gauss_hermite(int n);

/// E[h(X)] for X ~ N(mean, stddev^2), by Gauss-Hermite quadrature.
double gaussian_expectation(const std::function<double(double)>& h,
                            double mean, double stddev, int n = 64);

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
/// Throws std::runtime_error if the tolerance cannot be met within the
/// maximum refinement depth.
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double tol = 1e-12,
                          int max_depth = 52);

}  // namespace wavecount
