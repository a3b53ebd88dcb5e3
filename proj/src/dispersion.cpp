#include "adl/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "adl/error.hpp"

namespace adl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sin(x)/x and cos(x) as functions of x^2, continued to sinh/cosh for x^2 < 0.
double sinc_of_square(double x2) {
    if (std::abs(x2) < 1e-8) return 1.0 - x2 / 6.0;
    if (x2 > 0.0) {
        const double x = std::sqrt(x2);
        return std::sin(x) / x;
    }
    const double x = std::sqrt(-x2);
    return std::sinh(x) / x;
}

double cos_of_square(double x2) {
    return x2 >= 0.0 ? std::cos(std::sqrt(x2)) : std::cosh(std::sqrt(-x2));
}

double growth(double x2) { return x2 < 0.0 ? std::cosh(std::sqrt(-x2)) : 1.0; }

double bisect(auto&& fn, double lo, double hi, double f_lo_val) {
    double a = lo, b = hi, fa = f_lo_val;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = fn(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return std::abs(fn(a)) <= std::abs(fn(b)) ? a : b;
}

}  // namespace

void PlateSpec::validate() const {
    if (!(thickness_b > 0.0)) throw InvalidArgument("plate thickness must be positive");
    short_set.validate();
    open_set.validate();
}

PlateSpec default_plate() {
    const auto ln = builtin_linbo3();
    return {490e-9, ln.short_set, ln.open_set};
}

LambResidual rayleigh_lamb_residual(double f, double beta, const PlateSpec& plate,
                                    BoundaryCondition bc, Symmetry symmetry) {
    const MaterialSet& m = plate.set(bc);
    const double v_l = effective_longitudinal_velocity(m);
    const double v_s = shear_velocity(m);
    const double h = 0.5 * plate.thickness_b;
    const double w = kTwoPi * f;

    const double k2 = (h * beta) * (h * beta);
    const double p2 = h * h * (w / v_l) * (w / v_l) - k2;
    const double q2 = h * h * (w / v_s) * (w / v_s) - k2;

    const double sp = sinc_of_square(p2), cp = cos_of_square(p2);
    const double sq = sinc_of_square(q2), cq = cos_of_square(q2);
    const double d = q2 - k2;

    double value = 0.0;
    if (symmetry == Symmetry::Antisymmetric)
        value = 4.0 * k2 * q2 * sq * cp + d * d * sp * cq;
    else
        value = d * d * sq * cp + 4.0 * k2 * p2 * sp * cq;

    const double scale = std::abs(q2) + k2;
    const double norm = scale * scale * growth(p2) * growth(q2);
    LambResidual r;
    r.value = norm > 0.0 ? value / norm : value;

    constexpr double kPoleTol = 1e-9;
    const bool cos_q_zero = q2 > 0.0 && std::abs(cq) < kPoleTol;
    const bool sin_p_zero = p2 > 0.0 && std::abs(std::sin(std::sqrt(p2))) < kPoleTol;
    r.tangent_pole = cos_q_zero || sin_p_zero;
    return r;
}

std::vector<double> lamb_roots_at(double beta, const PlateSpec& plate, BoundaryCondition bc,
                                  Symmetry symmetry, double f_lo, double f_max,
                                  int points_per_decade) {
    if (!(f_lo > 0.0) || !(f_max > f_lo))
        throw InvalidArgument("lamb_roots_at: need 0 < f_lo < f_max");
    if (points_per_decade < 10) throw InvalidArgument("lamb_roots_at: scan too coarse");

    auto fn = [&](double f) {
        return rayleigh_lamb_residual(f, beta, plate, bc, symmetry).value;
    };

    const double decades = std::log10(f_max / f_lo);
    const auto n = static_cast<std::size_t>(std::ceil(decades * points_per_decade)) + 1;
    const double ratio = std::pow(f_max / f_lo, 1.0 / static_cast<double>(n - 1));

    std::vector<double> roots;
    double f_prev = f_lo;
    double v_prev = fn(f_prev);
    for (std::size_t i = 1; i < n; ++i) {
        const double f = (i + 1 == n) ? f_max : f_lo * std::pow(ratio, static_cast<double>(i));
        const double v = fn(f);
        if (v == 0.0) {
            roots.push_back(f);
        } else if (v_prev != 0.0 && ((v < 0.0) != (v_prev < 0.0))) {
            roots.push_back(bisect(fn, f_prev, f, v_prev));
        }
        f_prev = f;
        v_prev = v;
    }
    return roots;
}

std::vector<DispersionCurve> solve_branches(const PlateSpec& plate, BoundaryCondition bc,
                                            Symmetry symmetry, double f_max, int n_branches,
                                            int grid, const BranchScanOptions& options) {
    plate.validate();
    if (!(f_max > 0.0)) throw InvalidArgument("solve_branches: f_max must be positive");
    if (n_branches < 1) throw InvalidArgument("solve_branches: need at least one branch");
    if (grid < 2) throw InvalidArgument("solve_branches: beta grid needs two points");

    const double v_s = shear_velocity(plate.set(bc));
    const double beta_max =
        options.beta_max > 0.0 ? options.beta_max : std::numbers::pi / plate.thickness_b;
    const char prefix = symmetry == Symmetry::Antisymmetric ? 'A' : 'S';
    const double step_ratio = std::pow(10.0, 1.0 / options.points_per_decade) - 1.0;

    std::vector<DispersionCurve> curves(static_cast<std::size_t>(n_branches));
    for (int i = 0; i < n_branches; ++i) {
        curves[i].mode_label = fmt::format("{}{}", prefix, i);
        curves[i].bc = bc;
    }
    std::vector<int> omitted(curves.size(), 0);

    for (int j = 0; j < grid; ++j) {
        const double beta = beta_max * static_cast<double>(j) / static_cast<double>(grid - 1);
        const double f_shear = beta * v_s / kTwoPi;
        const double f_lo = beta > 0.0 ? options.low_fraction * f_shear : 1e-4 * f_max;
        if (!(f_lo < f_max)) continue;

        const auto roots =
            lamb_roots_at(beta, plate, bc, symmetry, f_lo, f_max, options.points_per_decade);

        // Branch index per root. Only A0/S0 reach f = 0, so at beta = 0 numbering
        // starts at 1. A0 is the only antisymmetric branch slower than v_s.
        std::vector<std::pair<int, double>> labelled;
        int next = beta > 0.0 ? 0 : 1;
        if (symmetry == Symmetry::Antisymmetric && beta > 0.0) {
            bool have_a0 = false;
            int higher = 1;
            for (double r : roots) {
                if (r < f_shear) {
                    if (!have_a0) labelled.emplace_back(0, r);
                    have_a0 = true;
                } else {
                    labelled.emplace_back(higher++, r);
                }
            }
            if (!have_a0) ++omitted[0];
        } else {
            for (double r : roots) labelled.emplace_back(next++, r);
        }

        for (std::size_t k = 0; k < labelled.size(); ++k) {
            const auto [idx, f] = labelled[k];
            if (idx >= n_branches) break;
            DispersionPoint p;
            p.f = f;
            p.beta = beta;
            if (beta > 0.0) p.vp = kTwoPi * f / beta;
            curves[idx].points.push_back(p);

            const bool close_prev = k > 0 && (f - labelled[k - 1].second) < 2.0 * step_ratio * f;
            const bool close_next =
                k + 1 < labelled.size() && (labelled[k + 1].second - f) < 2.0 * step_ratio * f;
            if (close_prev || close_next) curves[idx].crossing_ambiguity = true;
        }
        const int found = labelled.empty() ? 0 : labelled.back().first + 1;
        for (int idx = std::max(found, beta > 0.0 ? 0 : 1); idx < n_branches; ++idx)
            ++omitted[idx];
    }

    for (std::size_t i = 0; i < curves.size(); ++i) {
        auto& pts = curves[i].points;
        if (omitted[i] > 0)
            curves[i].warnings.push_back(
                fmt::format("{} grid point(s) without a root below f_max omitted", omitted[i]));
        // Group velocity by finite differences of omega(beta) along the branch.
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const std::size_t a = k > 0 ? k - 1 : k;
            const std::size_t b = k + 1 < pts.size() ? k + 1 : k;
            if (a == b || pts[b].beta == pts[a].beta) continue;
            pts[k].vg = kTwoPi * (pts[b].f - pts[a].f) / (pts[b].beta - pts[a].beta);
        }
    }
    return curves;
}

double a1_cutoff(const PlateSpec& plate, BoundaryCondition bc) {
    return shear_velocity(plate.set(bc)) / (2.0 * plate.thickness_b);
}

double a1_freq(double lambda, const PlateSpec& plate, BoundaryCondition bc) {
    if (!(lambda > 0.0)) throw InvalidArgument("a1_freq: wavelength must be positive");
    const double fc = a1_cutoff(plate, bc);
    const double v_l = effective_longitudinal_velocity(plate.set(bc));
    return std::hypot(fc, v_l / lambda);
}

double a1_vp(double f, const PlateSpec& plate, BoundaryCondition bc) {
    const double fc = a1_cutoff(plate, bc);
    if (!(f > fc))
        throw CutoffError(fmt::format("a1_vp: {} Hz is not above the {} cutoff {} Hz", f,
                                      to_string(bc), fc));
    const double r = fc / f;
    return effective_longitudinal_velocity(plate.set(bc)) / std::sqrt(1.0 - r * r);
}

double a1_vg(double f, const PlateSpec& plate, BoundaryCondition bc) {
    const double fc = a1_cutoff(plate, bc);
    if (!(f > fc))
        throw CutoffError(fmt::format("a1_vg: {} Hz is not above the {} cutoff {} Hz", f,
                                      to_string(bc), fc));
    const double r = fc / f;
    return effective_longitudinal_velocity(plate.set(bc)) * std::sqrt(1.0 - r * r);
}

double evanescent_decay(double f, const PlateSpec& plate, BoundaryCondition bc) {
    const double fc = a1_cutoff(plate, bc);
    if (f > fc)
        throw CutoffError(fmt::format("evanescent_decay: {} Hz is above the {} cutoff {} Hz", f,
                                      to_string(bc), fc));
    const double v_l = effective_longitudinal_velocity(plate.set(bc));
    return kTwoPi / v_l * std::sqrt(fc * fc - f * f);
}

std::complex<double> a1_wavenumber(double f, double f_c, double v_l) {
    const double x = f * f - f_c * f_c;
    if (x >= 0.0) return {kTwoPi * std::sqrt(x) / v_l, 0.0};
    return {0.0, -kTwoPi * std::sqrt(-x) / v_l};
}

std::complex<double> a1_wavenumber(double f, const PlateSpec& plate, BoundaryCondition bc) {
    return a1_wavenumber(f, a1_cutoff(plate, bc),
                         effective_longitudinal_velocity(plate.set(bc)));
}

DispersionCurve a1_curve(std::span<const double> lambdas, const PlateSpec& plate,
                         BoundaryCondition bc) {
    DispersionCurve c;
    c.mode_label = "A1";
    c.bc = bc;
    const double v_l = effective_longitudinal_velocity(plate.set(bc));
    const double fc = a1_cutoff(plate, bc);
    for (double lambda : lambdas) {
        DispersionPoint p;
        p.f = a1_freq(lambda, plate, bc);
        p.beta = kTwoPi / lambda;
        p.vp = p.f * lambda;
        p.vg = v_l * std::sqrt(1.0 - (fc / p.f) * (fc / p.f));
        c.points.push_back(p);
    }
    std::sort(c.points.begin(), c.points.end(),
              [](const DispersionPoint& a, const DispersionPoint& b) { return a.f < b.f; });
    return c;
}

double k2_from_velocities(double v_f, double v_m) {
    if (!(v_m > 0.0)) throw InvalidArgument("k2_from_velocities: v_m must be positive");
    if (v_f < v_m) throw InvalidArgument("k2_from_velocities: requires v_f >= v_m");
    return (v_f * v_f - v_m * v_m) / (v_m * v_m);
}

double a1_k2(double lambda, const PlateSpec& plate) {
    return k2_from_velocities(a1_freq(lambda, plate, BoundaryCondition::Open) * lambda,
                              a1_freq(lambda, plate, BoundaryCondition::Short) * lambda);
}

void write_dispersion_csv(std::ostream& os, std::span<const DispersionCurve> curves) {
    os << "f_hz,beta_rad_per_m,beta_imag_rad_per_m,vp_m_per_s,vg_m_per_s,mode,bc\n";
    auto opt = [](const std::optional<double>& v) {
        return v ? fmt::format("{:.17g}", *v) : std::string{};
    };
    for (const auto& c : curves)
        for (const auto& p : c.points)
            os << fmt::format("{:.17g},{:.17g},{:.17g},{},{},{},{}\n", p.f, p.beta, p.beta_imag,
                              opt(p.vp), opt(p.vg), c.mode_label, to_string(c.bc));
}

}  // namespace adl
