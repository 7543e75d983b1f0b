#pragma once

#include <complex>
#include <vector>

namespace wavecount {

/// Differential entropy (nats) of the single-photon wave amplitude with
/// parameters (sigma, s). Carries log-length units through sigma.
double differential_entropy_w(double sigma, std::complex<double> s);

/// Binary entropy -P ln P - (1-P) ln(1-P) with 0 ln 0 := 0.
double discrete_entropy_c(double P);

/// Mixed entropy -sum_c integral g_c ln g_c of the wave/count joint law.
double mixed_entropy_wc(double sigma, std::complex<double> s, double P);

/// Mutual information (nats) of the wave/count pair; scale-free, evaluated
/// at sigma = 1. Throws std::domain_error outside the feasible set
/// 1 - P - s^2 >= 0.
double mutual_info_wc(double s, double P);

/// Same quantity at an explicit sigma; must agree with mutual_info_wc for
/// any sigma (mutual information is invariant under scaling one marginal).
double mutual_info_wc_at_sigma(double sigma, double s, double P);

/// Mutual information (nats) of the two-counter pair; closed form.
double mutual_info_cc(double P1, double P2);

struct MiMaximum {
    double s = 0.0;
    double P = 0.0;
    double I = 0.0;
    double boundary_gap = 0.0;  // |P - (1 - s^2)| at the maximizer
};

/// Global maximum of the wave/count mutual information over the feasible
/// (s, P) set: coarse scan, then golden-section refinement along the
/// boundary P = 1 - s^2 and a Nelder-Mead polish in the interior. Verifies
/// (and throws if violated) that the maximizer sits on the boundary curve
/// within 1e-3.
MiMaximum maximize_mi_wc();

struct MiSurfacePoint {
    double s = 0.0;
    double P = 0.0;
    double I = 0.0;  // NaN on infeasible points
    bool feasible = false;
};

/// Mutual information sampled on a uniform (s, P) grid over [0,1]^2;
/// row-major in P, then s. Boundary points count as feasible.
std::vector<MiSurfacePoint> mi_map(int n_s, int n_P);

}  // namespace wavecount
