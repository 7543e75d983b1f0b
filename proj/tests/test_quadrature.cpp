#include <doctest.h>

#include "wavecount/quadrature.hpp"

#include <cmath>
#include <stdexcept>

using namespace wavecount;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    const GaussRule rule = gauss_legendre(8, -1.0, 3.0);
    // integral of x^15 over [-1, 3] = (3^16 - 1) / 16
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        sum += rule.weights[k] * std::pow(rule.nodes[k], 15);
    CHECK(sum == doctest::Approx((std::pow(3.0, 16) - 1.0) / 16.0).epsilon(1e-12));

    double total = 0.0;
    for (double w : rule.weights) total += w;
    CHECK(total == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("gauss-hermite reproduces gaussian moments") {
    // E[X^2] = sigma^2, E[X^4] = 3 sigma^4 for X ~ N(0, sigma^2)
    const double sigma = 1.7;
    const double m2 = gaussian_expectation([](double x) { return x * x; }, 0.0, sigma);
    const double m4 =
        gaussian_expectation([](double x) { return x * x * x * x; }, 0.0, sigma);
    CHECK(m2 == doctest::Approx(sigma * sigma).epsilon(1e-13));
    CHECK(m4 == doctest::Approx(3.0 * std::pow(sigma, 4)).epsilon(1e-13));
    CHECK(gaussian_expectation([](double) { return 1.0; }, 0.0, sigma) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("adaptive simpson handles smooth and mildly singular integrands") {
    const double gauss = integrate_adaptive(
        [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }, -10.0,
        10.0, 1e-12);
    CHECK(gauss == doctest::Approx(1.0).epsilon(1e-11));

    // |x| log|x| style kink at zero, as in the entropy integrands.
    const double kink = integrate_adaptive(
        [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; }, 0.0, 1.0, 1e-12);
    CHECK(kink == doctest::Approx(-0.25).epsilon(1e-9));
}

TEST_CASE("adaptive simpson reports non-convergence") {
    // Integrable singularity with an impossible depth budget.
    CHECK_THROWS_AS(integrate_adaptive([](double x) { return 1.0 / std::sqrt(x + 1e-300); },
                                       0.0, 1.0, 1e-14, 8),
                    std::runtime_error);
}

TEST_SUITE_END();
