#include "adl/transducer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "adl/error.hpp"

namespace adl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ShortRegion {
    double f_c;
    double v_l;
};

ShortRegion short_region(const TransducerGeometry& geom, const PlateSpec& plate,
                         DispersionSource source) {
    if (source == DispersionSource::Loaded) {
        const LayerStack stack = electrode_stack(geom, plate);
        return {bilayer_cutoff_short(stack), composite_vl_short(stack)};
    }
    return {a1_cutoff(plate, BoundaryCondition::Short),
            effective_longitudinal_velocity(plate.short_set)};
}

Complex average_wavenumber(double f, double duty, const ShortRegion& sr, double fc_open,
                           double vl_open) {
    return duty * a1_wavenumber(f, sr.f_c, sr.v_l) +
           (1.0 - duty) * a1_wavenumber(f, fc_open, vl_open);
}

Complex array_factor(std::span<const Electrode> els, Complex beta) {
    Complex sum = 0.0;
    double centroid = 0.0;
    for (const auto& e : els) {
        sum += static_cast<double>(e.polarity) * std::exp(Complex(0.0, -1.0) * beta * e.x);
        centroid += e.x;
    }
    centroid /= static_cast<double>(els.size());
    return sum / static_cast<double>(els.size()) *
           std::exp(Complex(0.0, beta.real() * centroid));
}

}  // namespace

std::vector<Electrode> electrode_positions(const TransducerGeometry& geom) {
    geom.validate();
    std::vector<Electrode> out;
    out.reserve(2 * static_cast<std::size_t>(geom.n_cells));
    for (int k = 0; k < 2 * geom.n_cells; ++k)
        out.push_back({(k + 0.25) * geom.cell_length / 2.0, k % 2 == 0 ? 1 : -1});
    return out;
}

Complex average_wavenumber(double f, const TransducerGeometry& geom, const PlateSpec& plate,
                           DispersionSource source) {
    return average_wavenumber(f, geom.duty, short_region(geom, plate, source),
                              a1_cutoff(plate, BoundaryCondition::Open),
                              effective_longitudinal_velocity(plate.open_set));
}

Complex array_response(const TransducerGeometry& geom, const PlateSpec& plate, double f,
                       DispersionSource source) {
    if (f < 0.0) return std::conj(array_response(geom, plate, -f, source));
    const auto els = electrode_positions(geom);
    return array_factor(els, average_wavenumber(f, geom, plate, source));
}

Complex TransducerResponse::admittance_at(std::size_t i) const {
    return {ga[i], ba[i] + kTwoPi * f_grid[i] * c0};
}

Complex TransducerResponse::impedance_at(std::size_t i) const {
    return r_s + 1.0 / admittance_at(i);
}

double default_cell_capacitance(const TransducerGeometry& geom, const PlateSpec& plate) {
    const double eps = std::sqrt(kLinbo3Eps11 * kLinbo3Eps33);
    const double gap = 0.5 * geom.free_length();
    return 2.0 * eps * plate.thickness_b / gap;
}

std::vector<double> hilbert_susceptance(std::span<const double> f_grid,
                                        std::span<const double> g) {
    const std::size_t n = f_grid.size();
    if (g.size() != n) throw InvalidArgument("hilbert_susceptance: size mismatch");
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    std::vector<double> slope(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j)
        slope[j] = (g[j + 1] - g[j]) / (f_grid[j + 1] - f_grid[j]);
    std::vector<double> logd(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = f_grid[i];
        for (std::size_t k = 0; k < n; ++k) logd[k] = k == i ? 0.0 : std::log(std::abs(f_grid[k] - f));
        double sum = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double gf = g[j] + slope[j] * (f - f_grid[j]);
            // The log singularities at u = f cancel between the two adjacent segments.
            sum += slope[j] * (f_grid[j + 1] - f_grid[j]) + gf * (logd[j + 1] - logd[j]);
        }
        out[i] = sum / std::numbers::pi;
    }
    return out;
}

TransducerResponse admittance(const TransducerGeometry& geom, const PlateSpec& plate,
                              std::span<const double> f_grid, const TransducerOptions& options) {
    geom.validate();
    plate.validate();
    if (f_grid.size() < 2) throw ResolutionError("admittance needs at least two grid points");
    for (std::size_t i = 1; i < f_grid.size(); ++i)
        if (!(f_grid[i] > f_grid[i - 1]))
            throw InvalidArgument("admittance: frequency grid must be increasing");

    TransducerResponse r;
    r.f_grid.assign(f_grid.begin(), f_grid.end());
    const ShortRegion sr = short_region(geom, plate, options.source);
    const double fc_open = a1_cutoff(plate, BoundaryCondition::Open);
    const double vl_open = effective_longitudinal_velocity(plate.open_set);

    if (options.f_center) {
        r.f_center = *options.f_center;
    } else {
        std::optional<LayerStack> loaded;
        if (options.source == DispersionSource::Loaded) loaded = electrode_stack(geom, plate);
        r.f_center = center_frequency(geom, plate, loaded);
    }

    // Main lobe between the first nulls: delta beta = +-2 pi / (N Lambda).
    const double fc_hi = std::max(sr.f_c, fc_open);
    const double f0 = r.f_center;
    if (f0 > fc_hi) {
        const double vg_s = sr.v_l * std::sqrt(1.0 - (sr.f_c / f0) * (sr.f_c / f0));
        const double vg_o = vl_open * std::sqrt(1.0 - (fc_open / f0) * (fc_open / f0));
        const double slowness = geom.duty / vg_s + (1.0 - geom.duty) / vg_o;
        const double width = 2.0 / (geom.length() * slowness);
        const auto lo = std::lower_bound(f_grid.begin(), f_grid.end(), f0 - 0.5 * width);
        const auto hi = std::upper_bound(f_grid.begin(), f_grid.end(), f0 + 0.5 * width);
        const auto count = std::distance(lo, hi);
        if (count < options.min_lobe_points)
            throw ResolutionError(fmt::format(
                "{} grid points across the {:.4g} Hz main lobe, need {}", count, width,
                options.min_lobe_points));
    }

    const auto els = electrode_positions(geom);
    r.h.resize(f_grid.size());
    for (std::size_t i = 0; i < f_grid.size(); ++i)
        r.h[i] = array_factor(els, average_wavenumber(f_grid[i], geom.duty, sr, fc_open, vl_open));

    const double c_cell = options.c_cell.value_or(default_cell_capacitance(geom, plate));
    r.c0 = geom.n_cells * c_cell * geom.aperture;
    r.k2 = options.k2.value_or(a1_k2(geom.cell_length, plate));
    r.g0 = 8.0 * r.k2 * r.f_center * r.c0 * geom.n_cells;
    r.ga.resize(f_grid.size());
    for (std::size_t i = 0; i < f_grid.size(); ++i) r.ga[i] = r.g0 * std::norm(r.h[i]);
    r.ba = hilbert_susceptance(f_grid, r.ga);
    r.r_s = geom.electrode_thickness > 0.0 ? electrode_resistance(geom).r_s : 0.0;
    return r;
}

std::optional<double> predicted_fbw(const TransducerGeometry& geom, const PlateSpec& plate,
                                    double f_center, DispersionSource source) {
    const auto els = electrode_positions(geom);
    const ShortRegion sr = short_region(geom, plate, source);
    const double fc_open = a1_cutoff(plate, BoundaryCondition::Open);
    const double vl_open = effective_longitudinal_velocity(plate.open_set);
    auto excess = [&](double f) {
        const double m = std::norm(array_factor(els, average_wavenumber(f, geom.duty, sr, fc_open, vl_open)));
        return m * m - 0.5;
    };
    if (!(excess(f_center) > 0.0)) return std::nullopt;

    auto edge = [&](double dir) -> std::optional<double> {
        const double step = 1e-4 * f_center;
        double inside = f_center;
        for (int k = 1; k <= 5000; ++k) {
            const double f = f_center + dir * step * k;
            if (excess(f) <= 0.0) {
                double a = inside, b = f;
                for (int it = 0; it < 100; ++it) {
                    const double m = 0.5 * (a + b);
                    (excess(m) > 0.0 ? a : b) = m;
                }
                return 0.5 * (a + b);
            }
            inside = f;
        }
        return std::nullopt;
    };
    const auto lo = edge(-1.0);
    const auto hi = edge(1.0);
    if (!lo || !hi) return std::nullopt;
    return (*hi - *lo) / f_center;
}

void write_transducer_csv(std::ostream& os, const TransducerResponse& r) {
    os << "f_hz,re_h,im_h,ga_s,ba_s\n";
    for (std::size_t i = 0; i < r.f_grid.size(); ++i)
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.f_grid[i],
                          r.h[i].real(), r.h[i].imag(), r.ga[i], r.ba[i]);
}

}  // namespace adl
