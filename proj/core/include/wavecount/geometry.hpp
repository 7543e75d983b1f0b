#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wavecount {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Complex samples on a uniform grid; bilinear interpolation, zero outside.
struct GridData {
    Vec2 origin;           // position of sample (0, 0)
    double spacing = 0.0;  // uniform in both directions
    int nx = 0;
    int ny = 0;
    std::vector<std::complex<double>> values;  // row-major, index = iy*nx + ix

    std::complex<double> at(Vec2 p) const;
};

/// Transverse single-photon amplitude phi(x, y), normalized to unit
/// intensity over the plane.
struct BeamField {
    enum class Kind { gaussian_beam, custom_grid };
    Kind kind = Kind::gaussian_beam;
    Vec2 center;
    double waist = 1.0;  // gaussian case, in beam-waist units
    GridData grid;       // custom case

    std::complex<double> operator()(Vec2 p) const;

    static BeamField gaussian(double waist = 1.0, Vec2 center = {});
    static BeamField from_grid(GridData grid);
};

/// Real detector-response test function, normalized to unit integral.
struct SmearingFunction {
    enum class Kind { gaussian, custom_grid };
    Kind kind = Kind::gaussian;
    Vec2 center;
    double width = 1.0;  // gaussian case
    GridData grid;       // custom case (imaginary parts must be zero)

    double operator()(Vec2 p) const;

    static SmearingFunction gaussian(double width, Vec2 center = {});
    static SmearingFunction from_grid(GridData grid);
};

struct DiscRegion {
    Vec2 center;
    double radius = 0.0;
};

struct RectRegion {
    Vec2 center;
    double half_width_x = 0.0;
    double half_width_y = 0.0;
};

/// Active detector surface in the transverse plane. Regions of distinct
/// detectors in one experiment must be pairwise disjoint.
struct DetectorRegion {
    std::variant<DiscRegion, RectRegion> shape;

    bool contains(Vec2 p) const;
    double area() const;

    static DetectorRegion disc(Vec2 center, double radius);
    static DetectorRegion rect(Vec2 center, double half_width_x, double half_width_y);
};

enum class DetectorMode { wave, count };

/// Full geometric description of one detector.
struct DetectorSpec {
    DetectorMode mode = DetectorMode::count;
    DetectorRegion region;
    std::optional<SmearingFunction> smearing;  // required for wave mode
};

/// The scalar parameters that carry the entire measurement statistics:
/// sigma (wave-noise scale), s (beam/smearing overlap), P (counting
/// probability). Fields are unset when not applicable to the detector.
struct DetectorParams {
    std::optional<double> sigma;
    std::optional<std::complex<double>> s;
    std::optional<double> P;
};

/// Tensor-product Gauss-Legendre quadrature on [-R, R]^2; region integrals
/// use boundary-conforming sub-rules so indicator edges are never crossed.
struct QuadratureSpec {
    double half_extent = 6.0;
    int points_per_axis = 96;
    bool check_convergence = true;  // compare against a doubled rule
    double convergence_tol = 1e-8;
};

/// Inner product integral(conj(f) * g) over the truncated plane.
/// Conjugate-symmetric; throws std::runtime_error when the doubled rule
/// disagrees beyond tolerance.
std::complex<double> inner_product(const BeamField& f, const BeamField& g,
                                   const QuadratureSpec& q = {});
std::complex<double> inner_product(const BeamField& f, const SmearingFunction& g,
                                   const QuadratureSpec& q = {});
std::complex<double> inner_product(const SmearingFunction& f, const BeamField& g,
                                   const QuadratureSpec& q = {});
std::complex<double> inner_product(const SmearingFunction& f, const SmearingFunction& g,
                                   const QuadratureSpec& q = {});

/// Integral of a scalar function over a detector region.
double region_integral(const std::function<double(Vec2)>& f,
                       const DetectorRegion& region, const QuadratureSpec& q = {});

struct DetectorParamsOptions {
    /// Minimum fraction of the smearing integral that must fall inside the
    /// region; the masked function is renormalized to unit integral over the
    /// region afterwards.
    double min_support = 1.0 - 1e-6;
};

/// Reduce geometry to (sigma, s, P) for one wave detector: sigma^2 = (f,f)/2,
/// s = (phi,f)/sqrt((f,f)) with f masked to the region and renormalized,
/// P = region intensity of phi.
DetectorParams detector_params(const BeamField& phi, const SmearingFunction& f,
                               const DetectorRegion& region,
                               const QuadratureSpec& q = {},
                               const DetectorParamsOptions& opts = {});

/// Counting detector: only P is defined.
DetectorParams counting_params(const BeamField& phi, const DetectorRegion& region,
                               const QuadratureSpec& q = {});

/// Parameters for a whole detector arrangement.
std::vector<DetectorParams> experiment_params(const BeamField& phi,
                                              const std::vector<DetectorSpec>& detectors,
                                              const QuadratureSpec& q = {});

enum class ExperimentMode { single, wave_wave, count_count, wave_count };

struct ConstraintReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Physical-feasibility constraints of the three two-detector experiments:
/// WW requires sum |s_n|^2 <= 1, CC requires sum P_n <= 1, WC requires
/// 1 - P - |s|^2 >= 0.
ConstraintReport validate_experiment(const std::vector<DetectorParams>& params,
                                     ExperimentMode mode);

}  // namespace wavecount
