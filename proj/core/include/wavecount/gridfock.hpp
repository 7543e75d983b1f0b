#pragma once

#include "wavecount/distributions.hpp"
#include "wavecount/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wavecount::gridfock {

using SparseMat = Eigen::SparseMatrix<double>;

/// G x G lattice of sites on [-L, L]^2. The site basis is exactly complete
/// and orthonormal for the discretized plane, so the continuum operator
/// identities (which only use completeness and disjoint supports) hold as
/// exact matrix equalities.
struct LatticeSpec {
    int grid_points = 4;    // G
    double half_extent = 3.0;  // L
};

struct Lattice {
    LatticeSpec spec;
    double dx = 0.0;       // site spacing
    double cell_area = 0.0;
    std::vector<Vec2> sites;  // row-major, size G^2

    Eigen::VectorXcd phi;              // beam samples, renormalized on the lattice
    std::vector<Eigen::VectorXd> f;    // per detector: masked, unit lattice integral
    std::vector<std::vector<int>> region_sites;  // per detector

    /// Lattice-sum detector scalars (sigma_n, s_n, P_n).
    DetectorParams params(std::size_t detector) const;
};

/// Occupation-number basis over the lattice sites with total photon number
/// at most n_max.
struct FockBasis {
    int n_modes = 0;
    int n_max = 0;
    std::vector<std::vector<std::uint8_t>> states;
    std::map<std::vector<std::uint8_t>, int> index;

    long dim() const { return static_cast<long>(states.size()); }
    int total(int state) const;
    int lookup(const std::vector<std::uint8_t>& occ) const;  // -1 if absent
};

struct OperatorSet {
    std::vector<SparseMat> W;              // smeared-amplitude operators
    std::vector<Eigen::VectorXd> C;        // counting operators (diagonal)
    Eigen::VectorXd N;                     // total photon number (diagonal)
    std::vector<SparseMat> annihilator_f;  // (f_n, phi-hat) smeared annihilators
};

struct Model {
    Lattice lattice;
    FockBasis basis;
    OperatorSet ops;
    Eigen::VectorXcd vacuum;
    Eigen::VectorXcd single_photon;
};

/// Builds lattice, basis, operators and the |0> and |1[phi]> state vectors.
/// Every detector gets both a counting operator (region sites) and, when a
/// smearing function is supplied, a smeared-amplitude operator. Throws when
/// the basis dimension exceeds dim_cap or regions share sites.
Model build_lattice_model(const LatticeSpec& spec, const BeamField& phi,
                          const std::vector<DetectorSpec>& detectors, int n_max,
                          long dim_cap = 20000);

struct IdentityCheck {
    std::string name;
    double deviation = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

/// Frobenius deviation of [W_m, W_n], [C_m, C_n], and
/// [W_m, C_n] - delta_mn (A_n - A_n^dag)/sqrt(2), evaluated on the columns
/// with total photon number < n_max (the truncation shell is excluded; the
/// identities are exact there).
std::vector<IdentityCheck> check_commutators(const Model& model);

struct MomentComparison {
    std::string name;
    double matrix_value = 0.0;
    double analytic_value = 0.0;
    double relative_error = 0.0;
    bool pass = false;
};

/// Operator moments <psi| W_n^k |psi>, <psi| C_n^k |psi> and the mixed
/// <psi| W_1 C_2 |psi> against the closed-form moments with lattice-derived
/// (sigma, s, P). Rejects any power that could touch the truncation shell
/// (the amplitude operator moves the photon number by one per application).
std::vector<MomentComparison> moments_vs_analytic(const Model& model, BeamState state,
                                                  int k_max);

/// Exact joint counting distribution: outcome vector of per-region photon
/// counts with its probability mass.
std::map<std::vector<int>, double> counting_spectrum(const Model& model, BeamState state);

struct CharacteristicPdfOptions {
    int alpha_points = 256;      // grid on [-alpha_max, alpha_max]
    double alpha_max_sigma = 12.0;  // alpha_max = this / sigma_lattice
    double window_sigma = 120.0;    // Gaussian window scale = this / sigma_lattice
    int boson_cap = 320;            // levels kept in the smeared-mode chain
    double negative_tol = 1e-6;     // aliasing alarm threshold
};

struct CharacteristicPdf {
    std::vector<double> w;
    std::vector<double> density;
};

/// Amplitude density reconstructed from the quantum characteristic function
/// <psi| exp(i alpha W_n) |psi>: the exponential is evaluated exactly on the
/// block generated by the smeared mode (a two-mode decomposition of the
/// single-photon state; the truncation cap there is raised until the
/// characteristic function converges, since exp(i alpha W) is not
/// truncation-safe at any fixed total photon number), then inverted by a
/// windowed discrete Fourier transform. Throws when the reconstruction goes
/// negative beyond tolerance (aliasing) or the chain cap is too small.
CharacteristicPdf characteristic_pdf_w(const Model& model, std::size_t detector,
                                       BeamState state, std::span<const double> w_grid,
                                       const CharacteristicPdfOptions& opts = {});

/// JSON report over all oracle identities (commutators, counting spectrum,
/// moments, characteristic-function reconstruction): one entry per identity
/// with its deviation and pass threshold.
std::string oracle_report_json(const Model& model);

}  // namespace wavecount::gridfock
