#include <doctest.h>

#include "wavecount/gridfock.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <iostream>
#include <stdexcept>

using namespace wavecount;
namespace gf = wavecount::gridfock;

namespace {

// Two disc detectors with smearing responses, straddling the beam axis.
std::vector<DetectorSpec> two_disc_detectors() {
    std::vector<DetectorSpec> detectors;
    for (const double cx : {-0.9, 0.9}) {
        DetectorSpec det;
        det.mode = DetectorMode::count;
        det.region = DetectorRegion::disc({cx, 0.0}, 0.8);
        det.smearing = SmearingFunction::gaussian(0.45, {cx, 0.0});
        detectors.push_back(det);
    }
    return detectors;
}

gf::Model default_model(int G = 4, int n_max = 3) {
    return gf::build_lattice_model({G, 3.0}, BeamField::gaussian(1.0),
                                   two_disc_detectors(), n_max);
}

}  // namespace

TEST_SUITE_BEGIN("gridfock");

TEST_CASE("basis dimension matches the combinatorial count") {
    const gf::Model model = default_model();
    // sum over photon sectors of C(modes + n - 1, n) for 16 modes, n <= 3
    long expected = 0;
    for (int n = 0; n <= 3; ++n) {
        long binom = 1;
        for (int k = 1; k <= n; ++k) binom = binom * (16 + k - 1) / k;
        expected += binom;
    }
    CHECK(expected == 969);
    CHECK(model.basis.dim() == expected);

    // sector sizes: 1, 16, 136, 816
    long by_total[4] = {0, 0, 0, 0};
    for (long i = 0; i < model.basis.dim(); ++i)
        ++by_total[model.basis.total(static_cast<int>(i))];
    CHECK(by_total[0] == 1);
    CHECK(by_total[1] == 16);
    CHECK(by_total[2] == 136);
    CHECK(by_total[3] == 816);
}

TEST_CASE("state vectors: photon number and amplitude expectations") {
    const gf::Model model = default_model();
    CHECK(std::abs(model.single_photon.norm() - 1.0) < 1e-14);

    // <1|N|1> = 1 exactly, <0|N|0> = 0
    double n_single = 0.0;
    for (long i = 0; i < model.basis.dim(); ++i)
        n_single += std::norm(model.single_photon(i)) * model.ops.N(i);
    CHECK(n_single == doctest::Approx(1.0).epsilon(1e-14));

    // <0|W_n|0> = 0: the smeared amplitude has no diagonal vacuum part
    for (const auto& W : model.ops.W) {
        const Eigen::VectorXcd w0 = W * model.vacuum;
        CHECK(std::abs(model.vacuum.dot(w0)) < 1e-15);
    }
}

TEST_CASE("canonical commutation of the smeared ladder operators") {
    // [A_n, A_n^dag] = (f_n, f_n) = 2 sigma_n^2 on the sub-shell block.
    const gf::Model model = default_model();
    for (std::size_t n = 0; n < model.ops.annihilator_f.size(); ++n) {
        const auto& A = model.ops.annihilator_f[n];
        const gf::SparseMat Adag = A.transpose();
        const gf::SparseMat comm = gf::SparseMat(A * Adag) - gf::SparseMat(Adag * A);
        const double sigma = *model.lattice.params(n).sigma;
        double worst = 0.0;
        for (long i = 0; i < model.basis.dim(); ++i) {
            if (model.basis.total(static_cast<int>(i)) >= model.basis.n_max) continue;
            Eigen::VectorXd e = Eigen::VectorXd::Zero(model.basis.dim());
            e(i) = 1.0;
            const Eigen::VectorXd col = comm * e;
            for (long r = 0; r < model.basis.dim(); ++r) {
                const double expected = (r == i) ? 2.0 * sigma * sigma : 0.0;
                worst = std::max(worst, std::abs(col(r) - expected));
            }
        }
        CHECK(worst < 1e-13);
    }
}

TEST_CASE("commutator identities hold to matrix precision") {
    const gf::Model model = default_model();
    const auto checks = gf::check_commutators(model);
    CHECK(checks.size() == 6);  // 1 WW + 1 CC + 4 WC pairings for two detectors
    for (const auto& c : checks) {
        INFO(c.name, " deviation ", c.deviation);
        CHECK(c.pass);
        CHECK(c.deviation < 1e-12);
    }
}

TEST_CASE("operator moments match the closed-form moments") {
    const gf::Model model = default_model();
    for (const auto state : {BeamState::vacuum, BeamState::single_photon}) {
        const auto rows = gf::moments_vs_analytic(model, state, 4);
        CHECK(rows.size() > 8);
        for (const auto& row : rows) {
            INFO(row.name, " matrix ", row.matrix_value, " analytic ", row.analytic_value);
            CHECK(row.relative_error < 1e-10);
        }
    }
    CHECK_THROWS_AS(gf::moments_vs_analytic(default_model(4, 1), BeamState::single_photon, 4),
                    std::invalid_argument);
}

TEST_CASE("counting spectrum reproduces the click masses exactly") {
    const gf::Model model = default_model();

    const auto vac = gf::counting_spectrum(model, BeamState::vacuum);
    CHECK(vac.size() == 1);
    CHECK(vac.at({0, 0}) == 1.0);

    const auto single = gf::counting_spectrum(model, BeamState::single_photon);
    const double P1 = *model.lattice.params(0).P;
    const double P2 = *model.lattice.params(1).P;
    CHECK(single.at({1, 0}) == doctest::Approx(P1).epsilon(1e-15));
    CHECK(single.at({0, 1}) == doctest::Approx(P2).epsilon(1e-15));
    CHECK(single.at({0, 0}) == doctest::Approx(1.0 - P1 - P2).epsilon(1e-14));
    CHECK(single.count({1, 1}) == 0);

    double total = 0.0;
    for (const auto& [outcome, mass] : single) total += mass;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("characteristic-function reconstruction of the amplitude density") {
    const gf::Model model = default_model();
    const DetectorParams lp = model.lattice.params(0);
    const double sigma = *lp.sigma;
    const double s2 = std::norm(*lp.s);

    std::vector<double> grid;
    for (int i = -120; i <= 120; ++i) grid.push_back(0.05 * i * sigma);  // +-6 sigma

    SUBCASE("vacuum state: gaussian of the lattice variance") {
        const auto rec = gf::characteristic_pdf_w(model, 0, BeamState::vacuum, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double gauss = std::exp(-0.5 * grid[i] * grid[i] / (sigma * sigma)) /
                                 (sigma * std::sqrt(2.0 * M_PI));
            worst = std::max(worst, std::abs(rec.density[i] - gauss));
        }
        CHECK(worst < 1e-4);
    }

    SUBCASE("single photon: dip, pointwise match, normalization") {
        const auto rec = gf::characteristic_pdf_w(model, 0, BeamState::single_photon, grid);
        const WavePdf analytic(BeamState::single_photon, sigma, *lp.s);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (std::abs(grid[i]) <= 4.0 * sigma)
                worst = std::max(worst, std::abs(rec.density[i] - analytic.pdf(grid[i])));
        CHECK(worst < 1e-4);

        // central dip at (1 - |s|^2) times the vacuum peak
        const std::size_t mid = grid.size() / 2;
        const double vacuum_peak = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
        CHECK(rec.density[mid] ==
              doctest::Approx(vacuum_peak * (1.0 - s2)).epsilon(1e-3));

        double mass = 0.0;  // trapezoid over the +-6 sigma grid
        for (std::size_t i = 0; i + 1 < grid.size(); ++i)
            mass += 0.5 * (rec.density[i] + rec.density[i + 1]) * (grid[i + 1] - grid[i]);
        CHECK(std::abs(mass - 1.0) < 1e-3);
    }
}

TEST_CASE("lattice scalars converge to the continuum quadrature values") {
    const BeamField beam = BeamField::gaussian(1.0);
    DetectorSpec det;
    det.mode = DetectorMode::count;
    det.region = DetectorRegion::disc({0.15, 0.05}, 0.8);
    det.smearing = SmearingFunction::gaussian(0.5, {0.15, 0.05});

    DetectorParamsOptions opts;
    opts.min_support = 0.0;  // broad response, masked on purpose
    const DetectorParams cont =
        detector_params(beam, *det.smearing, det.region, {}, opts);

    double err_sigma[2], err_s[2], err_P[2];
    int k = 0;
    for (const int G : {8, 16}) {
        const gf::Model model = gf::build_lattice_model({G, 3.0}, beam, {det}, 1);
        const DetectorParams lat = model.lattice.params(0);
        err_sigma[k] = std::abs(*lat.sigma - *cont.sigma);
        err_s[k] = std::abs(std::abs(*lat.s) - std::abs(*cont.s));
        err_P[k] = std::abs(*lat.P - *cont.P);
        ++k;
    }
    // observed convergence order >= 1 in the spacing
    CHECK(err_sigma[0] / err_sigma[1] > 1.8);
    CHECK(err_s[0] / err_s[1] > 1.8);
    CHECK(err_P[0] / err_P[1] > 1.8);
}

TEST_CASE("guards: dimension cap, region overlap on sites, missing smearing") {
    const BeamField beam = BeamField::gaussian(1.0);
    CHECK_THROWS_AS(gf::build_lattice_model({16, 3.0}, beam, two_disc_detectors(), 3),
                    std::invalid_argument);

    std::vector<DetectorSpec> overlapping = two_disc_detectors();
    overlapping[1].region = DetectorRegion::disc({-0.9, 0.0}, 0.8);
    CHECK_THROWS_AS(gf::build_lattice_model({4, 3.0}, beam, overlapping, 3),
                    std::invalid_argument);

    std::vector<DetectorSpec> bare = two_disc_detectors();
    bare[0].smearing.reset();
    const gf::Model model = gf::build_lattice_model({4, 3.0}, beam, bare, 3);
    std::vector<double> grid{0.0, 0.1};
    CHECK_THROWS_AS(gf::characteristic_pdf_w(model, 0, BeamState::vacuum, grid),
                    std::invalid_argument);
}

TEST_CASE("oracle report passes end to end") {
    const gf::Model model = default_model();
    const auto report = nlohmann::json::parse(gf::oracle_report_json(model));
    CHECK(report["all_pass"].get<bool>());
    CHECK(report["lattice"]["dimension"].get<long>() == 969);
    CHECK(report["identities"].size() > 20);
}

TEST_SUITE_END();
