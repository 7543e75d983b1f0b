#include "wavecount/geometry.hpp"

#include "wavecount/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace wavecount {

namespace {

double sq(double v) { return v * v; }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::complex<double> GridData::at(Vec2 p) const {
    if (nx < 2 || ny < 2 || spacing <= 0.0) return {0.0, 0.0};
    const double tx = (p.x - origin.x) / spacing;
    const double ty = (p.y - origin.y) / spacing;
    if (tx < 0.0 || ty < 0.0 || tx > nx - 1 || ty > ny - 1) return {0.0, 0.0};
    int ix = static_cast<int>(tx);
    int iy = static_cast<int>(ty);
    if (ix == nx - 1) --ix;
    if (iy == ny - 1) --iy;
    const double ax = tx - ix;
    const double ay = ty - iy;
    const auto v = [&](int i, int j) {
        return values[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) +
                      static_cast<std::size_t>(i)];
    };
    return (1 - ax) * (1 - ay) * v(ix, iy) + ax * (1 - ay) * v(ix + 1, iy) +
           (1 - ax) * ay * v(ix, iy + 1) + ax * ay * v(ix + 1, iy + 1);
}

std::complex<double> BeamField::operator()(Vec2 p) const {
    if (kind == Kind::gaussian_beam) {
        const double r2 = sq(p.x - center.x) + sq(p.y - center.y);
        return std::sqrt(2.0 / M_PI) / waist * std::exp(-r2 / sq(waist));
    }
    return grid.at(p);
}

BeamField BeamField::gaussian(double waist, Vec2 center) {
    if (!(waist > 0.0))
        throw std::invalid_argument("BeamField: waist must be positive");
    BeamField b;
    b.kind = Kind::gaussian_beam;
    b.waist = waist;
    b.center = center;
    return b;
}

BeamField BeamField::from_grid(GridData grid) {
    if (grid.nx < 2 || grid.ny < 2 || grid.spacing <= 0.0 ||
        grid.values.size() != static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny))
        throw std::invalid_argument("BeamField: malformed grid");
    BeamField b;
    b.kind = Kind::custom_grid;
    b.grid = std::move(grid);
    return b;
}

double SmearingFunction::operator()(Vec2 p) const {
    if (kind == Kind::gaussian) {
        const double r2 = sq(p.x - center.x) + sq(p.y - center.y);
        return std::exp(-r2 / sq(width)) / (M_PI * sq(width));
    }
    return grid.at(p).real();
}

SmearingFunction SmearingFunction::gaussian(double width, Vec2 center) {
    if (!(width > 0.0))
        throw std::invalid_argument(
            "SmearingFunction: width must be positive (a point-like response has "
            "divergent vacuum fluctuations)");
    SmearingFunction f;
    f.kind = Kind::gaussian;
    f.width = width;
    f.center = center;
    return f;
}

SmearingFunction SmearingFunction::from_grid(GridData grid) {
    if (grid.nx < 2 || grid.ny < 2 || grid.spacing <= 0.0 ||
        grid.values.size() != static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny))
        throw std::invalid_argument("SmearingFunction: malformed grid");
    for (const auto& v : grid.values)
        if (v.imag() != 0.0)
            throw std::invalid_argument("SmearingFunction: values must be real");
    SmearingFunction f;
    f.kind = Kind::custom_grid;
    f.grid = std::move(grid);
    return f;
}

bool DetectorRegion::contains(Vec2 p) const {
    if (const auto* d = std::get_if<DiscRegion>(&shape))
        return sq(p.x - d->center.x) + sq(p.y - d->center.y) <= sq(d->radius);
    const auto& r = std::get<RectRegion>(shape);
    return std::abs(p.x - r.center.x) <= r.half_width_x &&
           std::abs(p.y - r.center.y) <= r.half_width_y;
}

double DetectorRegion::area() const {
    if (const auto* d = std::get_if<DiscRegion>(&shape))
        return M_PI * sq(d->radius);
    const auto& r = std::get<RectRegion>(shape);
    return 4.0 * r.half_width_x * r.half_width_y;
}

DetectorRegion DetectorRegion::disc(Vec2 center, double radius) {
    if (radius < 0.0) throw std::invalid_argument("DetectorRegion: negative radius");
    return DetectorRegion{DiscRegion{center, radius}};
}

DetectorRegion DetectorRegion::rect(Vec2 center, double half_width_x, double half_width_y) {
    if (half_width_x < 0.0 || half_width_y < 0.0)
        throw std::invalid_argument("DetectorRegion: negative half-width");
    return DetectorRegion{RectRegion{center, half_width_x, half_width_y}};
}

namespace {

using ComplexField = std::function<std::complex<double>(Vec2)>;

std::complex<double> square_integral(const ComplexField& f, double R, int n) {
    const GaussRule rule = gauss_legendre(n, -R, R);
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        std::complex<double> row{0.0, 0.0};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            row += rule.weights[i] * f({rule.nodes[i], rule.nodes[j]});
        sum += rule.weights[j] * row;
    }
    return sum;
}

std::complex<double> disc_integral(const ComplexField& f, const DiscRegion& d, int n) {
    if (d.radius <= 0.0) return {0.0, 0.0};
    const GaussRule radial = gauss_legendre(n, 0.0, d.radius);
    const int n_theta = 2 * n;
    const double dtheta = 2.0 * M_PI / n_theta;
    std::complex<double> sum{0.0, 0.0};
    for (int j = 0; j < n_theta; ++j) {
        const double theta = (j + 0.5) * dtheta;
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        std::complex<double> ray{0.0, 0.0};
        for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
            const double rho = radial.nodes[i];
            ray += radial.weights[i] * rho *
                   f({d.center.x + rho * c, d.center.y + rho * s});
        }
        sum += ray;
    }
    return sum * dtheta;
}

std::complex<double> rect_integral(const ComplexField& f, const RectRegion& r, int n) {
    if (r.half_width_x <= 0.0 || r.half_width_y <= 0.0) return {0.0, 0.0};
    const GaussRule gx = gauss_legendre(n, r.center.x - r.half_width_x, r.center.x + r.half_width_x);
    const GaussRule gy = gauss_legendre(n, r.center.y - r.half_width_y, r.center.y + r.half_width_y);
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t j = 0; j < gy.nodes.size(); ++j) {
        std::complex<double> row{0.0, 0.0};
        for (std::size_t i = 0; i < gx.nodes.size(); ++i)
            row += gx.weights[i] * f({gx.nodes[i], gy.nodes[j]});
        sum += gy.weights[j] * row;
    }
    return sum;
}

std::complex<double> region_integral_impl(const ComplexField& f, const DetectorRegion& region,
                                          int n) {
    if (const auto* d = std::get_if<DiscRegion>(&region.shape))
        return disc_integral(f, *d, n);
    return rect_integral(f, std::get<RectRegion>(region.shape), n);
}

std::complex<double> converged(const std::function<std::complex<double>(int)>& eval,
                               const QuadratureSpec& q, const char* what) {
    const std::complex<double> coarse = eval(q.points_per_axis);
    if (!q.check_convergence) return coarse;
    const std::complex<double> fine = eval(2 * q.points_per_axis);
    const double diff = std::abs(fine - coarse);
    if (diff > q.convergence_tol * std::max(1.0, std::abs(fine))) {
        std::ostringstream os;
        os << what << ": quadrature did not converge (estimate " << fmt(std::abs(coarse))
           << " vs refined " << fmt(std::abs(fine)) << ", difference " << fmt(diff)
           << "); increase points_per_axis or shrink the domain";
        throw std::runtime_error(os.str());
    }
    return fine;
}

std::complex<double> inner_product_impl(const ComplexField& f, const ComplexField& g,
                                        const QuadratureSpec& q) {
    const ComplexField prod = [&](Vec2 p) { return std::conj(f(p)) * g(p); };
    return converged([&](int n) { return square_integral(prod, q.half_extent, n); }, q,
                     "inner_product");
}

ComplexField as_field(const BeamField& b) {
    return [&b](Vec2 p) { return b(p); };
}

ComplexField as_field(const SmearingFunction& f) {
    return [&f](Vec2 p) { return std::complex<double>(f(p), 0.0); };
}

}  // namespace

std::complex<double> inner_product(const BeamField& f, const BeamField& g,
                                   const QuadratureSpec& q) {
    return inner_product_impl(as_field(f), as_field(g), q);
}

std::complex<double> inner_product(const BeamField& f, const SmearingFunction& g,
                                   const QuadratureSpec& q) {
    return inner_product_impl(as_field(f), as_field(g), q);
}

std::complex<double> inner_product(const SmearingFunction& f, const BeamField& g,
                                   const QuadratureSpec& q) {
    return inner_product_impl(as_field(f), as_field(g), q);
}

std::complex<double> inner_product(const SmearingFunction& f, const SmearingFunction& g,
                                   const QuadratureSpec& q) {
    return inner_product_impl(as_field(f), as_field(g), q);
}

double region_integral(const std::function<double(Vec2)>& f, const DetectorRegion& region,
                       const QuadratureSpec& q) {
    const ComplexField cf = [&](Vec2 p) { return std::complex<double>(f(p), 0.0); };
    return converged([&](int n) { return region_integral_impl(cf, region, n); }, q,
                     "region_integral")
        .real();
}

namespace {

double smearing_total_integral(const SmearingFunction& f) {
    if (f.kind == SmearingFunction::Kind::gaussian) return 1.0;
    double sum = 0.0;
    for (const auto& v : f.grid.values) sum += v.real();
    return sum * sq(f.grid.spacing);
}

}  // namespace

DetectorParams detector_params(const BeamField& phi, const SmearingFunction& f,
                               const DetectorRegion& region, const QuadratureSpec& q,
                               const DetectorParamsOptions& opts) {
    DetectorParams out;
    if (region.area() == 0.0) {
        out.s = std::complex<double>(0.0, 0.0);
        out.P = 0.0;
        return out;
    }

    const double total = smearing_total_integral(f);
    if (!(total > 0.0))
        throw std::invalid_argument("detector_params: smearing integral must be positive");
    const double inside =
        region_integral([&](Vec2 p) { return f(p); }, region, q);
    if (inside < opts.min_support * total) {
        std::ostringstream os;
        os << "detector_params: smearing support violation (fraction inside region "
           << fmt(inside / total) << " < required " << fmt(opts.min_support) << ")";
        throw std::invalid_argument(os.str());
    }

    // Masked response, renormalized to unit integral over the region.
    const double norm = inside;
    const double ff =
        region_integral([&](Vec2 p) { return sq(f(p)); }, region, q) / sq(norm);
    const double re =
        region_integral([&](Vec2 p) { return (std::conj(phi(p)) * f(p)).real(); }, region, q);
    const double im =
        region_integral([&](Vec2 p) { return (std::conj(phi(p)) * f(p)).imag(); }, region, q);
    const std::complex<double> phif = std::complex<double>(re, im) / norm;
    const double P =
        region_integral([&](Vec2 p) { return std::norm(phi(p)); }, region, q);

    if (!(ff > 0.0) || !std::isfinite(ff))
        throw std::runtime_error("detector_params: degenerate masked response ((f,f) <= 0)");
    out.sigma = std::sqrt(0.5 * ff);
    out.s = phif / std::sqrt(ff);
    out.P = P;
    if (std::abs(*out.s) > 1.0 + 1e-9)
        throw std::runtime_error("detector_params: |s| > 1, normalization is broken (|s| = " +
                                 fmt(std::abs(*out.s)) + ")");
    if (!std::isfinite(*out.sigma) || !std::isfinite(P))
        throw std::runtime_error("detector_params: non-finite result");
    return out;
}

DetectorParams counting_params(const BeamField& phi, const DetectorRegion& region,
                               const QuadratureSpec& q) {
    DetectorParams out;
    if (region.area() == 0.0) {
        out.P = 0.0;
        return out;
    }
    out.P = region_integral([&](Vec2 p) { return std::norm(phi(p)); }, region, q);
    return out;
}

namespace {

bool regions_overlap(const DetectorRegion& a, const DetectorRegion& b) {
    const auto* da = std::get_if<DiscRegion>(&a.shape);
    const auto* db = std::get_if<DiscRegion>(&b.shape);
    if (da && db) {
        const double d2 = sq(da->center.x - db->center.x) + sq(da->center.y - db->center.y);
        return d2 < sq(da->radius + db->radius);
    }
    if (!da && !db) {
        const auto& ra = std::get<RectRegion>(a.shape);
        const auto& rb = std::get<RectRegion>(b.shape);
        return std::abs(ra.center.x - rb.center.x) < ra.half_width_x + rb.half_width_x &&
               std::abs(ra.center.y - rb.center.y) < ra.half_width_y + rb.half_width_y;
    }
    const DiscRegion& d = da ? *da : std::get<DiscRegion>(b.shape);
    const RectRegion& r = da ? std::get<RectRegion>(b.shape) : std::get<RectRegion>(a.shape);
    const double cx = std::clamp(d.center.x, r.center.x - r.half_width_x, r.center.x + r.half_width_x);
    const double cy = std::clamp(d.center.y, r.center.y - r.half_width_y, r.center.y + r.half_width_y);
    return sq(d.center.x - cx) + sq(d.center.y - cy) < sq(d.radius);
}

}  // namespace

std::vector<DetectorParams> experiment_params(const BeamField& phi,
                                              const std::vector<DetectorSpec>& detectors,
                                              const QuadratureSpec& q) {
    for (std::size_t i = 0; i < detectors.size(); ++i)
        for (std::size_t j = i + 1; j < detectors.size(); ++j)
            if (regions_overlap(detectors[i].region, detectors[j].region))
                throw std::invalid_argument("experiment_params: detector regions " +
                                            std::to_string(i) + " and " + std::to_string(j) +
                                            " overlap; regions must be pairwise disjoint");
    std::vector<DetectorParams> out;
    out.reserve(detectors.size());
    for (const auto& det : detectors) {
        if (det.mode == DetectorMode::wave) {
            if (!det.smearing)
                throw std::invalid_argument(
                    "experiment_params: wave detector requires a smearing function");
            out.push_back(detector_params(phi, *det.smearing, det.region, q));
        } else {
            out.push_back(counting_params(phi, det.region, q));
        }
    }
    return out;
}

ConstraintReport validate_experiment(const std::vector<DetectorParams>& params,
                                     ExperimentMode mode) {
    ConstraintReport report;
    auto violate = [&](const std::string& msg) {
        report.ok = false;
        report.violations.push_back(msg);
    };
    if (params.empty()) {
        violate("no detectors given");
        return report;
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& p = params[i];
        const std::string tag = "detector " + std::to_string(i);
        if (p.sigma && !(*p.sigma > 0.0 && std::isfinite(*p.sigma)))
            violate(tag + ": sigma must be positive (got " + fmt(*p.sigma) + ")");
        if (p.s && std::abs(*p.s) > 1.0 + 1e-9)
            violate(tag + ": |s| exceeds 1 (got " + fmt(std::abs(*p.s)) + ")");
        if (p.P && !(*p.P >= 0.0 && *p.P <= 1.0))
            violate(tag + ": P outside [0, 1] (got " + fmt(*p.P) + ")");
    }

    const double slack = 1e-12;
    switch (mode) {
        case ExperimentMode::single:
            break;
        case ExperimentMode::wave_wave: {
            double sum = 0.0;
            for (std::size_t i = 0; i < params.size(); ++i) {
                if (!params[i].s) {
                    violate("WW mode: detector " + std::to_string(i) + " has no overlap s");
                    return report;
                }
                sum += std::norm(*params[i].s);
            }
            if (sum > 1.0 + slack)
                violate("WW mode: sum of |s_n|^2 = " + fmt(sum) +
                        " exceeds 1 (joint wave density would go negative at w = 0)");
            break;
        }
        case ExperimentMode::count_count: {
            double sum = 0.0;
            for (std::size_t i = 0; i < params.size(); ++i) {
                if (!params[i].P) {
                    violate("CC mode: detector " + std::to_string(i) + " has no counting P");
                    return report;
                }
                sum += *params[i].P;
            }
            if (sum > 1.0 + slack)
                violate("CC mode: sum of P_n = " + fmt(sum) + " exceeds 1");
            break;
        }
        case ExperimentMode::wave_count: {
            if (params.size() != 2) {
                violate("WC mode: expected exactly 2 detectors, got " +
                        std::to_string(params.size()));
                return report;
            }
            const bool first_wave = params[0].s.has_value() && !params[1].s.has_value();
            const bool second_wave = params[1].s.has_value() && !params[0].s.has_value();
            if (!first_wave && !second_wave) {
                violate("WC mode: expected one wave detector (with s) and one counting "
                        "detector (with P only)");
                return report;
            }
            const DetectorParams& wave = first_wave ? params[0] : params[1];
            const DetectorParams& count = first_wave ? params[1] : params[0];
            if (!count.P) {
                violate("WC mode: counting detector has no P");
                return report;
            }
            const double margin = 1.0 - *count.P - std::norm(*wave.s);
            if (margin < -slack)
                violate("WC mode: 1 - P - |s|^2 = " + fmt(margin) +
                        " is negative (mixed density g0 would go negative)");
            break;
        }
    }
    return report;
}

}  // namespace wavecount
