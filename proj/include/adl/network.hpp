#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "adl/transducer.hpp"

namespace adl {

using SMatrix = Eigen::Matrix2cd;

/// Two-port scattering parameters over a frequency grid, referenced to
/// per-port complex (power-wave) impedances.
struct TwoPortNetwork {
    std::vector<double> f_grid;  // Hz
    std::vector<SMatrix> s;
    Complex z_ref_1{50.0, 0.0};
    Complex z_ref_2{50.0, 0.0};

    std::size_t size() const { return f_grid.size(); }
    Complex s11(std::size_t i) const { return s[i](0, 0); }
    Complex s12(std::size_t i) const { return s[i](0, 1); }
    Complex s21(std::size_t i) const { return s[i](1, 0); }
    Complex s22(std::size_t i) const { return s[i](1, 1); }
    void validate() const;
};

struct AdlDesign {
    TransducerGeometry tx;
    TransducerGeometry rx;
    double gap_lg = 0.0;        // m
    double pl_db_per_us = 0.0;  // dB/us
    /// Optional (f Hz, dB/us) table, linearly interpolated; replaces pl_db_per_us.
    std::vector<std::pair<double, double>> pl_table;
    double gamma_tt = 0.2;
    double feedthrough_c = 0.0;  // F
    /// Include the electrode series resistance in the port impedance.
    bool electrical_loading = true;
    TransducerOptions transducer;

    void validate() const;
    /// Gap plus half of each transducer length (midpoint phase centers).
    double path_length() const;
    double pl_at(double f) const;
};

struct DelaySpec {
    double path_length = 0.0;  // m
    PlateSpec plate;
    /// Model group delay path_length / v_g,open(f).
    double group_delay_at(double f) const;
};

DelaySpec delay_spec(const AdlDesign& design, const PlateSpec& plate);

enum class ReferenceMode {
    Matched,  // conj of each port impedance at its center frequency
    Fixed,
};

struct SynthesisOptions {
    ReferenceMode reference = ReferenceMode::Fixed;
    Complex z1{50.0, 0.0};
    Complex z2{50.0, 0.0};
};

struct Synthesis {
    TwoPortNetwork net;
    TransducerResponse tx;
    TransducerResponse rx;
    std::vector<std::string> warnings;
};

Synthesis synthesize_detailed(const AdlDesign& design, const PlateSpec& plate,
                              std::span<const double> f_grid,
                              const SynthesisOptions& options = {});

TwoPortNetwork synthesize(const AdlDesign& design, const PlateSpec& plate,
                          std::span<const double> f_grid, const SynthesisOptions& options = {});

/// Power-wave renormalization to new port reference impedances.
TwoPortNetwork renormalize(const TwoPortNetwork& net, Complex z_new_1, Complex z_new_2);

/// Single-point conversions between S (power waves) and Y.
Eigen::Matrix2cd s_to_y(const SMatrix& s, Complex z1, Complex z2);
SMatrix y_to_s(const Eigen::Matrix2cd& y, Complex z1, Complex z2);

double max_singular_value(const SMatrix& s);

struct MatchResult {
    Complex z1;
    Complex z2;
    double f = 0.0;  // Hz, where the match was computed
    bool fallback = false;  // one-port conjugate match used
};

MatchResult conjugate_match(const TwoPortNetwork& net);

}  // namespace adl
