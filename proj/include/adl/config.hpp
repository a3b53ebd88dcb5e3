#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adl/network.hpp"

namespace adl {

struct GridConfig {
    double f_start = 4.0e9;  // Hz
    double f_stop = 6.5e9;   // Hz
    int n_points = 1251;

    std::vector<double> frequencies() const;
};

struct DispersionConfig {
    double f_max = 12e9;  // Hz
    int n_branches = 2;
    int beta_points = 200;
    std::vector<double> lambdas;  // m, decoupled-model samples
};

struct ExtractionConfig {
    int window = 51;
    int order = 3;
    std::optional<double> f_eval;  // Hz
    double noise_floor_db = 80.0;
};

/// Parameters shared by every design of a sweep. Lengths in SI units.
struct DesignBlock {
    double lambda = 2.4e-6;
    int n_cells = 4;
    double duty = 0.5;
    double aperture = 50e-6;
    double gap_lg = 20e-6;
    std::string metal = "Al";
    double metal_thickness = 30e-9;
    double pl_db_per_us = 0.0;
    double gamma_tt = 0.2;
    double feedthrough_c = 0.0;
    bool electrical_loading = true;
    bool mass_loading = false;
    std::optional<double> c_cell;
    std::optional<double> k2;
    /// Reference impedance for synthesis; empty means conjugate-matched ports.
    std::optional<double> z_ref;
};

struct SweepConfig {
    std::vector<double> lambdas;  // m
    std::vector<int> n_cells;
    std::vector<double> gaps;  // m
    std::vector<std::string> metals;
};

struct RunConfig {
    PlateSpec plate = default_plate();
    std::vector<ElectrodeMaterial> electrodes;  // overrides of the built-ins
    DesignBlock design;
    SweepConfig sweep;
    GridConfig grid;
    DispersionConfig dispersion;
    ExtractionConfig extraction;

    /// Built-in or overridden electrode by name.
    ElectrodeMaterial electrode(const std::string& name) const;
    /// Concrete design for one sweep point.
    AdlDesign make_design(double lambda, int n_cells, const std::string& metal,
                          double gap_lg) const;
    void validate() const;
};

/// Defaults: 490 nm plate, Al electrodes, a single Lambda = 2.4 um, N = 4,
/// 20 um gap design, 1251-point 4.0-6.5 GHz grid.
RunConfig default_config();

/// Reads an INI file ([section] / key = value). Lengths in um, frequencies in GHz.
RunConfig load_config(std::istream& is);
RunConfig load_config(const std::filesystem::path& path);

/// Writes every setting, including the built-in materials, in load_config's format.
void write_config(std::ostream& os, const RunConfig& config);

/// Comma-separated numbers; an empty string gives an empty list.
std::vector<double> parse_list(const std::string& text);

}  // namespace adl
