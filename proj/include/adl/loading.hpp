#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adl/dispersion.hpp"
#include "adl/materials.hpp"

namespace adl {

/// LiNbO3 plate (thickness t) with a metal overlayer of thickness b.
struct LayerStack {
    PlateSpec plate;
    ElectrodeMaterial metal;
    double metal_thickness = 0.0;  // m

    void validate() const;
};

struct TransducerGeometry {
    double cell_length = 0.0;  // Lambda, m
    int n_cells = 1;
    double duty = 0.5;         // metallized fraction of each cell
    double aperture = 0.0;     // W_a, m
    double electrode_thickness = 0.0;  // m
    ElectrodeMaterial electrode;

    void validate() const;
    double metallized_length() const { return duty * cell_length; }
    double free_length() const { return (1.0 - duty) * cell_length; }
    double electrode_width() const { return 0.5 * duty * cell_length; }
    double length() const { return n_cells * cell_length; }
};

/// Electrode stack matching a transducer geometry on the given plate.
LayerStack electrode_stack(const TransducerGeometry& geom, const PlateSpec& plate);

/// Thickness-shear cutoff of the metallized bilayer. Throws SolverFailure when
/// no root lies in (0, v_s/t].
double bilayer_cutoff_short(const LayerStack& stack);

struct StressSample {
    double z = 0.0;  // m, from the free LiNbO3 surface
    double t_xz = 0.0;
};

/// Piecewise-sine T_xz(z) across the stack at cutoff, max |T_xz| = 1.
std::vector<StressSample> stress_profile(const LayerStack& stack, double f_c, int samples);

/// Share of the total variation of T_xz(z) that lies inside the metal.
double metal_stress_fraction(const LayerStack& stack, double f_c);

/// Rule-of-mixtures longitudinal velocity of the metallized stack.
double composite_vl_short(const LayerStack& stack);

/// Short-region A1 parameters, optionally replaced by user supplied values.
struct ShortRegionOverride {
    std::optional<double> f_c;
    std::optional<double> v_l;
};

/// Solves f L_open / v_f(f) + f L_short / v_m(f) = 1 on (max cutoff, 20 GHz).
/// With `loaded`, the metallized region uses the bilayer cutoff and composite
/// velocity. Throws DesignInfeasible when there is no root.
double center_frequency(const TransducerGeometry& geom, const PlateSpec& plate,
                        const std::optional<LayerStack>& loaded = std::nullopt,
                        const ShortRegionOverride& override_short = {});

struct ElectrodeResistance {
    double r_ele = 0.0;  // Ohm, one electrode
    double r_s = 0.0;    // Ohm, transducer series resistance
};

ElectrodeResistance electrode_resistance(const TransducerGeometry& geom);

struct DesignRow {
    double lambda = 0.0;
    int n_cells = 0;
    std::optional<double> f_center;
    double r_s = 0.0;
    double f_c_short_loaded = 0.0;
    std::string metal;
    std::optional<double> f_center_loaded;
    std::optional<double> fbw;
    std::optional<double> delay_us_per_mm;
    std::string status = "ok";
};

void write_design_csv(std::ostream& os, std::span<const DesignRow> rows);

}  // namespace adl
