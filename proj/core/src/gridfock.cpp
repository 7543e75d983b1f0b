#include "wavecount/gridfock.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wavecount::gridfock {

namespace {

double sq(double v) { return v * v; }

double basis_dim_estimate(int modes, int n_max) {
    double total = 0.0;
    for (int k = 0; k <= n_max; ++k) {
        // C(modes + k - 1, k) via lgamma; accurate enough for a cap check.
        total += std::exp(std::lgamma(modes + k) - std::lgamma(k + 1.0) -
                          std::lgamma(static_cast<double>(modes)));
    }
    return total;
}

void enumerate_sector(int modes, int remaining, int mode, std::vector<std::uint8_t>& occ,
                      std::vector<std::vector<std::uint8_t>>& out) {
    if (mode == modes - 1) {
        occ[static_cast<std::size_t>(mode)] = static_cast<std::uint8_t>(remaining);
        out.push_back(occ);
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        occ[static_cast<std::size_t>(mode)] = static_cast<std::uint8_t>(k);
        enumerate_sector(modes, remaining - k, mode + 1, occ, out);
    }
    occ[static_cast<std::size_t>(mode)] = 0;
}

}  // namespace

DetectorParams Lattice::params(std::size_t detector) const {
    DetectorParams out;
    const double dA = cell_area;
    double P = 0.0;
    for (int site : region_sites[detector])
        P += std::norm(phi(site)) * dA;
    out.P = P;
    if (f[detector].size() == 0) return out;

    double ff = 0.0;
    std::complex<double> phif{0.0, 0.0};
    for (int site = 0; site < f[detector].size(); ++site) {
        const double fx = f[detector](site);
        if (fx == 0.0) continue;
        ff += fx * fx * dA;
        phif += std::conj(phi(site)) * fx * dA;
    }
    out.sigma = std::sqrt(0.5 * ff);
    out.s = phif / std::sqrt(ff);
    return out;
}

int FockBasis::total(int state) const {
    const auto& occ = states[static_cast<std::size_t>(state)];
    return std::accumulate(occ.begin(), occ.end(), 0);
}

int FockBasis::lookup(const std::vector<std::uint8_t>& occ) const {
    const auto it = index.find(occ);
    return it == index.end() ? -1 : it->second;
}

Model build_lattice_model(const LatticeSpec& spec, const BeamField& phi,
                          const std::vector<DetectorSpec>& detectors, int n_max,
                          long dim_cap) {
    if (spec.grid_points < 2)
        throw std::invalid_argument("build_lattice_model: grid must have at least 2 sites per axis");
    if (n_max < 1)
        throw std::invalid_argument("build_lattice_model: n_max must be at least 1");

    Model model;
    Lattice& lat = model.lattice;
    lat.spec = spec;
    const int G = spec.grid_points;
    const int modes = G * G;
    lat.dx = 2.0 * spec.half_extent / G;
    lat.cell_area = sq(lat.dx);
    lat.sites.reserve(static_cast<std::size_t>(modes));
    for (int iy = 0; iy < G; ++iy)
        for (int ix = 0; ix < G; ++ix)
            lat.sites.push_back({-spec.half_extent + (ix + 0.5) * lat.dx,
                                 -spec.half_extent + (iy + 0.5) * lat.dx});

    if (basis_dim_estimate(modes, n_max) > 1.5 * static_cast<double>(dim_cap) + 16.0) {
        std::ostringstream os;
        os << "build_lattice_model: basis dimension would exceed the cap of " << dim_cap
           << "; reduce grid_points (" << G << ") or n_max (" << n_max << ")";
        throw std::invalid_argument(os.str());
    }

    // Beam samples, renormalized to unit lattice intensity.
    lat.phi.resize(modes);
    double norm2 = 0.0;
    for (int x = 0; x < modes; ++x) {
        lat.phi(x) = phi(lat.sites[static_cast<std::size_t>(x)]);
        norm2 += std::norm(lat.phi(x)) * lat.cell_area;
    }
    if (!(norm2 > 0.0))
        throw std::invalid_argument("build_lattice_model: beam vanishes on the lattice");
    lat.phi /= std::sqrt(norm2);

    // Region site sets (pairwise disjoint) and masked smearing samples.
    std::vector<int> owner(static_cast<std::size_t>(modes), -1);
    for (std::size_t n = 0; n < detectors.size(); ++n) {
        lat.region_sites.emplace_back();
        for (int x = 0; x < modes; ++x) {
            if (!detectors[n].region.contains(lat.sites[static_cast<std::size_t>(x)])) continue;
            if (owner[static_cast<std::size_t>(x)] >= 0) {
                std::ostringstream os;
                os << "build_lattice_model: site " << x << " falls in regions "
                   << owner[static_cast<std::size_t>(x)] << " and " << n
                   << "; regions must be disjoint";
                throw std::invalid_argument(os.str());
            }
            owner[static_cast<std::size_t>(x)] = static_cast<int>(n);
            lat.region_sites.back().push_back(x);
        }
        if (detectors[n].smearing) {
            Eigen::VectorXd fn = Eigen::VectorXd::Zero(modes);
            double total = 0.0;
            for (int x : lat.region_sites.back()) {
                fn(x) = (*detectors[n].smearing)(lat.sites[static_cast<std::size_t>(x)]);
                total += fn(x) * lat.cell_area;
            }
            if (!(total > 0.0))
                throw std::invalid_argument(
                    "build_lattice_model: smearing vanishes on its region sites");
            fn /= total;  // unit lattice integral over the region
            lat.f.push_back(std::move(fn));
        } else {
            lat.f.emplace_back();
        }
    }

    // Occupation basis, ordered by total photon number.
    FockBasis& basis = model.basis;
    basis.n_modes = modes;
    basis.n_max = n_max;
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(modes), 0);
    for (int n = 0; n <= n_max; ++n)
        enumerate_sector(modes, n, 0, occ, basis.states);
    if (basis.dim() > dim_cap) {
        std::ostringstream os;
        os << "build_lattice_model: basis dimension " << basis.dim() << " exceeds the cap of "
           << dim_cap << "; reduce grid_points or n_max";
        throw std::invalid_argument(os.str());
    }
    for (std::size_t i = 0; i < basis.states.size(); ++i)
        basis.index[basis.states[i]] = static_cast<int>(i);

    const long dim = basis.dim();

    // Raising transitions: state i --(site x)--> state j, amplitude sqrt(occ_x + 1).
    struct Raise {
        int from, to, site;
        double amp;
    };
    std::vector<Raise> raises;
    for (long i = 0; i < dim; ++i) {
        if (basis.total(static_cast<int>(i)) >= n_max) continue;
        std::vector<std::uint8_t> target = basis.states[static_cast<std::size_t>(i)];
        for (int x = 0; x < modes; ++x) {
            ++target[static_cast<std::size_t>(x)];
            const int j = basis.lookup(target);
            --target[static_cast<std::size_t>(x)];
            if (j < 0) continue;
            raises.push_back({static_cast<int>(i), j, x,
                              std::sqrt(basis.states[static_cast<std::size_t>(i)]
                                                    [static_cast<std::size_t>(x)] +
                                        1.0)});
        }
    }

    OperatorSet& ops = model.ops;
    const double sqrt_dA = std::sqrt(lat.cell_area);
    for (std::size_t n = 0; n < detectors.size(); ++n) {
        if (lat.f[n].size() == 0) {
            ops.W.emplace_back();
            ops.annihilator_f.emplace_back();
        } else {
            std::vector<Eigen::Triplet<double>> w_trip;
            std::vector<Eigen::Triplet<double>> a_trip;
            for (const Raise& r : raises) {
                const double fx = lat.f[n](r.site);
                if (fx == 0.0) continue;
                const double coupling = fx * sqrt_dA * r.amp;
                w_trip.emplace_back(r.to, r.from, coupling / std::sqrt(2.0));
                w_trip.emplace_back(r.from, r.to, coupling / std::sqrt(2.0));
                a_trip.emplace_back(r.from, r.to, coupling);  // annihilation: j -> i
            }
            SparseMat W(dim, dim), A(dim, dim);
            W.setFromTriplets(w_trip.begin(), w_trip.end());
            A.setFromTriplets(a_trip.begin(), a_trip.end());
            ops.W.push_back(std::move(W));
            ops.annihilator_f.push_back(std::move(A));
        }
        Eigen::VectorXd cn = Eigen::VectorXd::Zero(dim);
        for (long i = 0; i < dim; ++i) {
            int count = 0;
            for (int x : lat.region_sites[n])
                count += basis.states[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
            cn(i) = count;
        }
        ops.C.push_back(std::move(cn));
    }
    ops.N.resize(dim);
    for (long i = 0; i < dim; ++i) ops.N(i) = basis.total(static_cast<int>(i));

    // States: |0> and |1[phi]> = sum_x phi_x sqrt(dA) adag_x |0>.
    model.vacuum = Eigen::VectorXcd::Zero(dim);
    model.vacuum(0) = 1.0;
    model.single_photon = Eigen::VectorXcd::Zero(dim);
    std::vector<std::uint8_t> one(static_cast<std::size_t>(modes), 0);
    for (int x = 0; x < modes; ++x) {
        one[static_cast<std::size_t>(x)] = 1;
        const int j = basis.lookup(one);
        one[static_cast<std::size_t>(x)] = 0;
        if (j < 0) throw std::logic_error("build_lattice_model: missing one-photon state");
        model.single_photon(j) = lat.phi(x) * sqrt_dA;
    }
    return model;
}

namespace {

double frobenius_on_columns(const SparseMat& mat, const std::vector<bool>& keep_col) {
    double sum = 0.0;
    for (int col = 0; col < mat.outerSize(); ++col) {
        if (!keep_col[static_cast<std::size_t>(col)]) continue;
        for (SparseMat::InnerIterator it(mat, col); it; ++it) sum += sq(it.value());
    }
    return std::sqrt(sum);
}

// [W, diag(c)] has entries W_ij (c_j - c_i).
SparseMat commutator_with_diagonal(const SparseMat& w, const Eigen::VectorXd& c) {
    SparseMat out = w;
    for (int col = 0; col < out.outerSize(); ++col)
        for (SparseMat::InnerIterator it(out, col); it; ++it)
            it.valueRef() *= c(col) - c(it.row());
    return out;
}

}  // namespace

std::vector<IdentityCheck> check_commutators(const Model& model) {
    const long dim = model.basis.dim();
    std::vector<bool> below_shell(static_cast<std::size_t>(dim));
    for (long i = 0; i < dim; ++i)
        below_shell[static_cast<std::size_t>(i)] =
            model.basis.total(static_cast<int>(i)) < model.basis.n_max;

    std::vector<IdentityCheck> checks;
    const std::size_t m = model.ops.C.size();
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            // Counting operators are diagonal and commute entry by entry.
            if (a < b) {
                IdentityCheck cc;
                cc.name = "[C_" + std::to_string(a + 1) + ", C_" + std::to_string(b + 1) + "]";
                cc.deviation = 0.0;
                for (long i = 0; i < dim; ++i)
                    cc.deviation += sq(model.ops.C[a](i) * model.ops.C[b](i) -
                                       model.ops.C[b](i) * model.ops.C[a](i));
                cc.deviation = std::sqrt(cc.deviation);
                cc.threshold = 1e-12;
                cc.pass = cc.deviation < cc.threshold;
                checks.push_back(std::move(cc));
            }
            if (a < b && model.ops.W[a].size() != 0 && model.ops.W[b].size() != 0) {
                IdentityCheck ww;
                ww.name = "[W_" + std::to_string(a + 1) + ", W_" + std::to_string(b + 1) + "]";
                const SparseMat comm =
                    SparseMat(model.ops.W[a] * model.ops.W[b]) - SparseMat(model.ops.W[b] * model.ops.W[a]);
                ww.deviation = frobenius_on_columns(comm, below_shell);
                ww.threshold = 1e-10;
                ww.pass = ww.deviation < ww.threshold;
                checks.push_back(std::move(ww));
            }
            if (model.ops.W[a].size() != 0) {
                IdentityCheck wc;
                wc.name = "[W_" + std::to_string(a + 1) + ", C_" + std::to_string(b + 1) + "]";
                SparseMat comm = commutator_with_diagonal(model.ops.W[a], model.ops.C[b]);
                if (a == b) {
                    wc.name += " - (A - A^dag)/sqrt(2)";
                    const SparseMat& ann = model.ops.annihilator_f[a];
                    comm = comm - SparseMat((ann - SparseMat(ann.transpose())) / std::sqrt(2.0));
                    wc.threshold = 1e-10;
                } else {
                    wc.threshold = 1e-12;
                }
                wc.deviation = frobenius_on_columns(comm, below_shell);
                wc.pass = wc.deviation < wc.threshold;
                checks.push_back(std::move(wc));
            }
        }
    }
    return checks;
}

std::vector<MomentComparison> moments_vs_analytic(const Model& model, BeamState state,
                                                  int k_max) {
    const int state_level = state == BeamState::vacuum ? 0 : 1;
    if (state_level + (k_max + 1) / 2 > model.basis.n_max)
        throw std::invalid_argument(
            "moments_vs_analytic: k_max is not truncation-safe at this n_max (the "
            "amplitude operator shifts the photon number by one per power)");

    const Eigen::VectorXcd& psi =
        state == BeamState::vacuum ? model.vacuum : model.single_photon;
    std::vector<MomentComparison> rows;
    const auto push = [&](std::string name, double matrix_value, double analytic) {
        MomentComparison cmp;
        cmp.name = std::move(name);
        cmp.matrix_value = matrix_value;
        cmp.analytic_value = analytic;
        cmp.relative_error = std::abs(matrix_value - analytic) / std::max(1.0, std::abs(analytic));
        cmp.pass = cmp.relative_error < 1e-10;
        rows.push_back(std::move(cmp));
    };

    for (std::size_t n = 0; n < model.ops.C.size(); ++n) {
        const DetectorParams lp = model.lattice.params(n);
        if (model.ops.W[n].size() != 0) {
            const WavePdf analytic(state, *lp.sigma, *lp.s);
            Eigen::VectorXcd v = psi;
            for (int k = 1; k <= k_max; ++k) {
                v = model.ops.W[n] * v;
                push("<W_" + std::to_string(n + 1) + "^" + std::to_string(k) + ">",
                     psi.dot(v).real(), analytic.moment(k));
            }
        }
        for (int k = 1; k <= k_max; ++k) {
            double mk = 0.0;
            for (long i = 0; i < model.basis.dim(); ++i)
                mk += std::norm(psi(i)) * std::pow(model.ops.C[n](i), k);
            const double analytic = state == BeamState::vacuum ? 0.0 : *lp.P;
            push("<C_" + std::to_string(n + 1) + "^" + std::to_string(k) + ">", mk, analytic);
        }
    }
    if (model.ops.C.size() >= 2 && model.ops.W[0].size() != 0) {
        const Eigen::VectorXcd v = model.ops.W[0] * (model.ops.C[1].asDiagonal() * psi);
        push("<W_1 C_2>", psi.dot(v).real(), 0.0);
    }
    return rows;
}

std::map<std::vector<int>, double> counting_spectrum(const Model& model, BeamState state) {
    const Eigen::VectorXcd& psi =
        state == BeamState::vacuum ? model.vacuum : model.single_photon;
    std::map<std::vector<int>, double> spectrum;
    for (long i = 0; i < model.basis.dim(); ++i) {
        const double mass = std::norm(psi(i));
        if (mass == 0.0) continue;
        std::vector<int> outcome(model.ops.C.size());
        for (std::size_t n = 0; n < model.ops.C.size(); ++n)
            outcome[n] = static_cast<int>(std::lround(model.ops.C[n](i)));
        spectrum[outcome] += mass;
    }
    return spectrum;
}

namespace {

// Characteristic function of exp(i alpha W) on the chain of the smeared mode:
// weights over the chain eigenvalues for the vacuum / single-photon state.
struct ChainSpectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::VectorXd weights;
};

ChainSpectrum chain_spectrum(double sigma, double s_mod2, BeamState state, int cap) {
    Eigen::MatrixXd chain = Eigen::MatrixXd::Zero(cap, cap);
    for (int k = 0; k + 1 < cap; ++k) {
        const double amp = sigma * std::sqrt(k + 1.0);
        chain(k, k + 1) = amp;
        chain(k + 1, k) = amp;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(chain);
    ChainSpectrum out;
    out.eigenvalues = solver.eigenvalues();
    out.weights.resize(cap);
    for (int i = 0; i < cap; ++i) {
        const double c0 = solver.eigenvectors()(0, i);
        const double c1 = solver.eigenvectors()(1, i);
        out.weights(i) = state == BeamState::vacuum
                             ? c0 * c0
                             : (1.0 - s_mod2) * c0 * c0 + s_mod2 * c1 * c1;
    }
    return out;
}

double chain_char_function(const ChainSpectrum& spec, double alpha) {
    double chi = 0.0;
    for (int i = 0; i < spec.eigenvalues.size(); ++i)
        chi += spec.weights(i) * std::cos(alpha * spec.eigenvalues(i));
    return chi;
}

}  // namespace

CharacteristicPdf characteristic_pdf_w(const Model& model, std::size_t detector,
                                       BeamState state, std::span<const double> w_grid,
                                       const CharacteristicPdfOptions& opts) {
    if (detector >= model.lattice.f.size() || model.lattice.f[detector].size() == 0)
        throw std::invalid_argument(
            "characteristic_pdf_w: detector has no smearing function");
    if (opts.alpha_points < 16)
        throw std::invalid_argument("characteristic_pdf_w: alpha grid too small");

    const DetectorParams lp = model.lattice.params(detector);
    const double sigma = *lp.sigma;
    const double s_mod2 = std::norm(*lp.s);

    const ChainSpectrum spec = chain_spectrum(sigma, s_mod2, state, opts.boson_cap);
    const ChainSpectrum check = chain_spectrum(sigma, s_mod2, state, opts.boson_cap + 64);

    const double alpha_max = opts.alpha_max_sigma / sigma;
    const double window_scale = opts.window_sigma / sigma;
    const int n = opts.alpha_points;
    const double d_alpha = 2.0 * alpha_max / (n - 1);

    std::vector<double> chi(static_cast<std::size_t>(n));
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const double alpha = -alpha_max + j * d_alpha;
        chi[static_cast<std::size_t>(j)] = chain_char_function(spec, alpha);
        worst = std::max(worst, std::abs(chi[static_cast<std::size_t>(j)] -
                                         chain_char_function(check, alpha)));
    }
    if (worst > 1e-10)
        throw std::runtime_error(
            "characteristic_pdf_w: characteristic function not converged at this "
            "boson_cap; raise it");

    CharacteristicPdf out;
    out.w.assign(w_grid.begin(), w_grid.end());
    out.density.resize(w_grid.size());
    double most_negative = 0.0;
    for (std::size_t i = 0; i < w_grid.size(); ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double alpha = -alpha_max + j * d_alpha;
            const double window = std::exp(-0.5 * sq(alpha / window_scale));
            const double trapz = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            acc += trapz * window * chi[static_cast<std::size_t>(j)] *
                   std::cos(alpha * w_grid[i]);
        }
        out.density[i] = acc * d_alpha / (2.0 * M_PI);
        most_negative = std::min(most_negative, out.density[i]);
    }
    if (most_negative < -opts.negative_tol)
        throw std::runtime_error(
            "characteristic_pdf_w: reconstruction is negative beyond tolerance "
            "(aliasing); refine the alpha grid");
    return out;
}

std::string oracle_report_json(const Model& model) {
    nlohmann::json report;
    report["lattice"] = {{"grid_points", model.lattice.spec.grid_points},
                         {"half_extent", model.lattice.spec.half_extent},
                         {"n_max", model.basis.n_max},
                         {"dimension", model.basis.dim()}};
    bool all_pass = true;
    auto& identities = report["identities"] = nlohmann::json::array();
    const auto add = [&](const std::string& name, double deviation, double threshold) {
        identities.push_back({{"name", name},
                              {"deviation", deviation},
                              {"threshold", threshold},
                              {"pass", deviation < threshold}});
        all_pass = all_pass && deviation < threshold;
    };

    for (const auto& check : check_commutators(model))
        add(check.name, check.deviation, check.threshold);

    const int k_max = std::min(4, 2 * (model.basis.n_max - 1));
    if (k_max >= 1) {
        for (const auto state : {BeamState::vacuum, BeamState::single_photon}) {
            const char* tag = state == BeamState::vacuum ? " (vacuum)" : " (single photon)";
            for (const auto& cmp : moments_vs_analytic(model, state, k_max))
                add(cmp.name + tag, cmp.relative_error, 1e-10);
        }
    }

    // Joint counting masses against the closed-form single-photon law.
    {
        std::vector<double> P;
        for (std::size_t d = 0; d < model.ops.C.size(); ++d)
            P.push_back(*model.lattice.params(d).P);
        const auto spectrum = counting_spectrum(model, BeamState::single_photon);
        double sum_P = std::accumulate(P.begin(), P.end(), 0.0);
        double worst = 0.0;
        double total = 0.0;
        for (const auto& [outcome, mass] : spectrum) {
            total += mass;
            const int clicks = std::accumulate(outcome.begin(), outcome.end(), 0);
            double expected = 0.0;
            if (clicks == 0) expected = 1.0 - sum_P;
            else if (clicks == 1)
                for (std::size_t d = 0; d < outcome.size(); ++d)
                    if (outcome[d] == 1) expected = P[d];
            worst = std::max(worst, std::abs(mass - expected));
        }
        add("counting spectrum vs closed-form masses", worst, 1e-14);
        add("counting spectrum total mass vs 1", std::abs(total - 1.0), 1e-14);
    }

    // Characteristic-function reconstruction against the closed-form density.
    for (std::size_t d = 0; d < model.lattice.f.size(); ++d) {
        if (model.lattice.f[d].size() == 0) continue;
        const DetectorParams lp = model.lattice.params(d);
        const WavePdf analytic(BeamState::single_photon, *lp.sigma, *lp.s);
        std::vector<double> w_grid;
        for (int i = 0; i <= 80; ++i)
            w_grid.push_back((-4.0 + 0.1 * i) * *lp.sigma);
        const auto rec =
            characteristic_pdf_w(model, d, BeamState::single_photon, w_grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < w_grid.size(); ++i)
            worst = std::max(worst, std::abs(rec.density[i] - analytic.pdf(w_grid[i])));
        add("characteristic-function density, detector " + std::to_string(d + 1), worst,
            1e-4);
    }

    report["all_pass"] = all_pass;
    return report.dump(2);
}

}  // namespace wavecount::gridfock
