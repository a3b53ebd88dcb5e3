#include "adl/loading.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "adl/error.hpp"

namespace adl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUpperBracket = 20e9;

template <class Fn>
double bisect_sign(Fn&& fn, double a, double b) {
    double fa = fn(a);
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
    return 0.5 * (a + b);
}

struct StackWaves {
    double k1 = 0.0;  // LiNbO3 shear wavenumber
    double k2 = 0.0;  // metal shear wavenumber
    double t = 0.0;
    double b = 0.0;
    double metal_amp = 0.0;
};

StackWaves stack_waves(const LayerStack& stack, double f_c) {
    StackWaves w;
    w.t = stack.plate.thickness_b;
    w.b = stack.metal_thickness;
    w.k1 = kTwoPi * f_c / shear_velocity(stack.plate.short_set);
    w.k2 = kTwoPi * f_c / stack.metal.v_s;
    const double s2 = std::sin(w.k2 * w.b);
    w.metal_amp = (w.b > 0.0 && s2 != 0.0) ? std::sin(w.k1 * w.t) / s2 : 0.0;
    return w;
}

double raw_stress(const StackWaves& w, double z) {
    if (z <= w.t) return std::sin(w.k1 * z);
    return w.metal_amp * std::sin(w.k2 * (w.t + w.b - z));
}

}  // namespace

void LayerStack::validate() const {
    plate.validate();
    metal.validate();
    if (!(metal_thickness >= 0.0)) throw InvalidArgument("metal thickness must be >= 0");
}

void TransducerGeometry::validate() const {
    if (!(cell_length > 0.0)) throw InvalidArgument("cell length must be positive");
    if (n_cells < 1) throw InvalidArgument("transducer needs at least one cell");
    if (!(duty > 0.0 && duty < 1.0)) throw InvalidArgument("duty must lie in (0, 1)");
    if (!(aperture > 0.0)) throw InvalidArgument("aperture must be positive");
    if (!(electrode_thickness >= 0.0))
        throw InvalidArgument("electrode thickness must be >= 0");
    electrode.validate();
}

LayerStack electrode_stack(const TransducerGeometry& geom, const PlateSpec& plate) {
    return {plate, geom.electrode, geom.electrode_thickness};
}

double bilayer_cutoff_short(const LayerStack& stack) {
    stack.validate();
    const double t = stack.plate.thickness_b;
    const MaterialSet& ln = stack.plate.short_set;
    const double v1 = shear_velocity(ln);
    const double z1 = ln.rho * v1;
    const double z2 = stack.metal.rho * stack.metal.v_s;
    const double b = stack.metal_thickness;

    // tan(k2 b)/tan(k1 t) = -z1/z2, multiplied through by the cosines.
    auto residual = [&](double f) {
        const double k1 = kTwoPi * f / v1;
        const double k2 = kTwoPi * f / stack.metal.v_s;
        return z1 * std::sin(k1 * t) * std::cos(k2 * b) + z2 * std::cos(k1 * t) * std::sin(k2 * b);
    };

    const double f_hi = v1 / t;
    constexpr int kScan = 20000;
    double f_prev = f_hi / kScan;
    double v_prev = residual(f_prev);
    for (int i = 2; i <= kScan; ++i) {
        const double f = f_hi * i / kScan;
        const double v = residual(f);
        if (v == 0.0) return f;
        if ((v < 0.0) != (v_prev < 0.0)) return bisect_sign(residual, f_prev, f);
        f_prev = f;
        v_prev = v;
    }
    throw SolverFailure(
        fmt::format("no bilayer cutoff below {:.6g} Hz for {:.3g} m of {}", f_hi, b,
                    stack.metal.name));
}

std::vector<StressSample> stress_profile(const LayerStack& stack, double f_c, int samples) {
    if (samples < 2) throw InvalidArgument("stress_profile needs at least two samples");
    const StackWaves w = stack_waves(stack, f_c);
    const double total = w.t + w.b;
    std::vector<StressSample> out(static_cast<std::size_t>(samples));
    double peak = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double z = total * i / (samples - 1);
        out[i] = {z, raw_stress(w, z)};
        peak = std::max(peak, std::abs(out[i].t_xz));
    }
    // Interior maximum of sin(k1 z) may fall between samples.
    if (w.k1 * w.t > std::numbers::pi / 2) peak = std::max(peak, 1.0);
    if (w.b > 0.0 && w.k2 * w.b > std::numbers::pi / 2)
        peak = std::max(peak, std::abs(w.metal_amp));
    if (peak > 0.0)
        for (auto& s : out) s.t_xz /= peak;
    return out;
}

double metal_stress_fraction(const LayerStack& stack, double f_c) {
    if (stack.metal_thickness <= 0.0) return 0.0;
    const StackWaves w = stack_waves(stack, f_c);
    constexpr int kSteps = 20000;
    auto variation = [&](double z0, double z1) {
        double sum = 0.0;
        double prev = raw_stress(w, z0);
        for (int i = 1; i <= kSteps; ++i) {
            const double v = raw_stress(w, z0 + (z1 - z0) * i / kSteps);
            sum += std::abs(v - prev);
            prev = v;
        }
        return sum;
    };
    const double in_ln = variation(0.0, w.t);
    const double in_metal = variation(w.t, w.t + w.b);
    return in_metal / (in_ln + in_metal);
}

double composite_vl_short(const LayerStack& stack) {
    stack.validate();
    const double t = stack.plate.thickness_b;
    const double b = stack.metal_thickness;
    const double rho_ln = stack.plate.short_set.rho;
    const double vl_ln = effective_longitudinal_velocity(stack.plate.short_set);
    const double c_ln = rho_ln * vl_ln * vl_ln;
    const double c_m = stack.metal.rho * stack.metal.v_l * stack.metal.v_l;
    return std::sqrt((t * c_ln + b * c_m) / (t * rho_ln + b * stack.metal.rho));
}

double center_frequency(const TransducerGeometry& geom, const PlateSpec& plate,
                        const std::optional<LayerStack>& loaded,
                        const ShortRegionOverride& override_short) {
    geom.validate();
    plate.validate();
    const double fc_open = a1_cutoff(plate, BoundaryCondition::Open);
    const double vl_open = effective_longitudinal_velocity(plate.open_set);
    double fc_short = a1_cutoff(plate, BoundaryCondition::Short);
    double vl_short = effective_longitudinal_velocity(plate.short_set);
    if (loaded) {
        fc_short = bilayer_cutoff_short(*loaded);
        vl_short = composite_vl_short(*loaded);
    }
    if (override_short.f_c) fc_short = *override_short.f_c;
    if (override_short.v_l) vl_short = *override_short.v_l;

    const double l_open = geom.free_length();
    const double l_short = geom.metallized_length();
    // f / v_p = sqrt(f^2 - f_c^2) / v_l, so the phase condition is monotone in f.
    auto g = [&](double f) {
        const double a = std::sqrt(std::max(0.0, f * f - fc_open * fc_open)) / vl_open;
        const double s = std::sqrt(std::max(0.0, f * f - fc_short * fc_short)) / vl_short;
        return l_open * a + l_short * s - 1.0;
    };
    const double lo = std::max(fc_open, fc_short);
    if (g(lo) >= 0.0 || g(kUpperBracket) <= 0.0)
        throw DesignInfeasible(fmt::format(
            "no center frequency in ({:.4g}, {:.4g}) Hz for cell length {:.4g} m", lo,
            kUpperBracket, geom.cell_length));
    return bisect_sign(g, lo, kUpperBracket);
}

ElectrodeResistance electrode_resistance(const TransducerGeometry& geom) {
    geom.validate();
    if (!(geom.electrode_thickness > 0.0))
        throw InvalidArgument("electrode_resistance needs a positive electrode thickness");
    ElectrodeResistance r;
    r.r_ele = 2.0 * geom.electrode.sheet_resistivity() * geom.aperture /
              (3.0 * geom.electrode_thickness * geom.electrode_width());
    r.r_s = 2.0 * r.r_ele / geom.n_cells;
    return r;
}

void write_design_csv(std::ostream& os, std::span<const DesignRow> rows) {
    auto opt = [](const std::optional<double>& v) {
        return v ? fmt::format("{:.17g}", *v) : std::string{};
    };
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    os << "lambda_um,n_cells,f_center_hz,r_s_ohm,f_c_short_loaded_hz,metal,"
          "f_center_loaded_hz,fbw_3db_frac,delay_us_per_mm,status\n";
    for (const auto& r : rows)
        os << fmt::format("{:.12g},{},{},{:.17g},{:.17g},{},{},{},{},{}\n", r.lambda * 1e6,
                          r.n_cells, opt(r.f_center), r.r_s, r.f_c_short_loaded, r.metal,
                          opt(r.f_center_loaded), opt(r.fbw), opt(r.delay_us_per_mm), quote(r.status));
}

}  // namespace adl
