#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "adl/dispersion.hpp"
#include "adl/loading.hpp"

namespace adl {

using Complex = std::complex<double>;

struct Electrode {
    double x = 0.0;  // center, m
    int polarity = 1;
};

/// 2N electrodes at (k + 1/4) Lambda/2 with alternating polarity.
std::vector<Electrode> electrode_positions(const TransducerGeometry& geom);

/// Which short-region parameters feed the averaged wavenumber.
enum class DispersionSource { Massless, Loaded };

/// Duty-weighted average of the metallized and free A1 wavenumbers.
Complex average_wavenumber(double f, const TransducerGeometry& geom, const PlateSpec& plate,
                           DispersionSource source = DispersionSource::Massless);

/// Normalized delta-function array factor, phase referenced to the electrode
/// centroid. |h| = 1 at perfect synchronism and decays below cutoff.
Complex array_response(const TransducerGeometry& geom, const PlateSpec& plate, double f,
                       DispersionSource source = DispersionSource::Massless);

struct TransducerOptions {
    DispersionSource source = DispersionSource::Massless;
    std::optional<double> c_cell;  // F/m of aperture per cell
    std::optional<double> k2;
    std::optional<double> f_center;  // Hz
    int min_lobe_points = 64;
};

struct TransducerResponse {
    std::vector<double> f_grid;
    std::vector<Complex> h;
    std::vector<double> ga;  // S
    std::vector<double> ba;  // S
    double c0 = 0.0;         // F
    double r_s = 0.0;        // Ohm
    double g0 = 0.0;         // S, conductance scale
    double k2 = 0.0;
    double f_center = 0.0;

    /// Radiation plus static admittance, without series resistance.
    Complex admittance_at(std::size_t i) const;
    /// Port impedance r_s + 1/Y.
    Complex impedance_at(std::size_t i) const;
};

/// Default parallel-plate capacitance per cell per unit aperture.
double default_cell_capacitance(const TransducerGeometry& geom, const PlateSpec& plate);

/// Principal-value Hilbert transform (1/pi) PV int g(u)/(u - f) du of a
/// piecewise-linear sampled function.
std::vector<double> hilbert_susceptance(std::span<const double> f_grid,
                                        std::span<const double> g);

/// Throws ResolutionError when fewer than `min_lobe_points` grid points fall
/// across the main lobe.
TransducerResponse admittance(const TransducerGeometry& geom, const PlateSpec& plate,
                              std::span<const double> f_grid,
                              const TransducerOptions& options = {});

/// 3-dB fractional width of |h|^4 (identical transmit and receive arrays)
/// around f_center; empty when an edge is not found within +-f_center/2.
std::optional<double> predicted_fbw(const TransducerGeometry& geom, const PlateSpec& plate,
                                    double f_center,
                                    DispersionSource source = DispersionSource::Massless);

void write_transducer_csv(std::ostream& os, const TransducerResponse& r);

}  // namespace adl
