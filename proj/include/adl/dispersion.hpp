#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adl/materials.hpp"

namespace adl {

enum class Symmetry { Symmetric, Antisymmetric };

struct PlateSpec {
    double thickness_b = 0.0;  // m
    MaterialSet short_set;
    MaterialSet open_set;

    const MaterialSet& set(BoundaryCondition bc) const {
        return bc == BoundaryCondition::Short ? short_set : open_set;
    }
    void validate() const;
};

/// 490 nm Z-cut LiNbO3 with the built-in constants.
PlateSpec default_plate();

struct DispersionPoint {
    double f = 0.0;          // Hz
    double beta = 0.0;       // rad/m, propagating part
    double beta_imag = 0.0;  // 1/m, evanescent decay
    std::optional<double> vp;
    std::optional<double> vg;
};

struct DispersionCurve {
    std::string mode_label;
    BoundaryCondition bc = BoundaryCondition::Short;
    std::vector<DispersionPoint> points;
    bool crossing_ambiguity = false;
    std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// Exact isotropic Rayleigh-Lamb equations
// ---------------------------------------------------------------------------

struct LambResidual {
    /// Dimensionless, pole-free determinant of the frequency equation. Zero on a
    /// branch, finite everywhere else.
    double value = 0.0;
    /// True where the tangent-ratio form of the equation is singular.
    bool tangent_pole = false;
};

/// Residual of the Rayleigh-Lamb frequency equation for a plate of thickness b.
///
/// The tangent ratio tan(q b/2)/tan(p b/2) = -(...)^{+-1} is cross-multiplied so
/// the returned value has no poles; the transverse wavenumbers p, q may be
/// imaginary, in which case sin/cos continue analytically to sinh/cosh. Every
/// zero of the value is a zero of the original equation except the trivial
/// p = 0 (antisymmetric) and q = 0 (symmetric) factors, which are divided out.
/// Even in beta.
LambResidual rayleigh_lamb_residual(double f, double beta, const PlateSpec& plate,
                                    BoundaryCondition bc, Symmetry symmetry);

struct BranchScanOptions {
    double beta_max = 0.0;  // rad/m; 0 selects pi/b (b/lambda = 0.5)
    int points_per_decade = 2000;
    /// Scan starts this fraction of beta*v_s/(2 pi) below the shear line.
    double low_fraction = 1e-4;
};

/// Lowest n_branches branches on a uniform beta grid of `grid` points from 0 to
/// beta_max. Branch 0 is A0/S0, which has no point at beta = 0.
std::vector<DispersionCurve> solve_branches(const PlateSpec& plate, BoundaryCondition bc,
                                            Symmetry symmetry, double f_max, int n_branches,
                                            int grid, const BranchScanOptions& options = {});

/// All roots in f of the residual at fixed beta in (f_lo, f_max], ascending.
std::vector<double> lamb_roots_at(double beta, const PlateSpec& plate, BoundaryCondition bc,
                                  Symmetry symmetry, double f_lo, double f_max,
                                  int points_per_decade = 2000);

// ---------------------------------------------------------------------------
// Decoupled A1 model: f^2 = f_c^2 + (v_l / lambda)^2, f_c = v_s / (2b)
// ---------------------------------------------------------------------------

double a1_cutoff(const PlateSpec& plate, BoundaryCondition bc);
double a1_freq(double lambda, const PlateSpec& plate, BoundaryCondition bc);
/// Throws CutoffError for f <= f_c.
double a1_vp(double f, const PlateSpec& plate, BoundaryCondition bc);
double a1_vg(double f, const PlateSpec& plate, BoundaryCondition bc);
/// Imaginary wavenumber below cutoff; throws CutoffError for f > f_c.
double evanescent_decay(double f, const PlateSpec& plate, BoundaryCondition bc);

/// Decoupled-model wavenumber with the exp(-j beta x) convention: real above
/// cutoff, -j * decay below it.
std::complex<double> a1_wavenumber(double f, double f_c, double v_l);
std::complex<double> a1_wavenumber(double f, const PlateSpec& plate, BoundaryCondition bc);

/// Sampled decoupled A1 curve at the given wavelengths.
DispersionCurve a1_curve(std::span<const double> lambdas, const PlateSpec& plate,
                         BoundaryCondition bc);

/// k^2 = (v_f^2 - v_m^2) / v_m^2 from open (v_f) and short (v_m) phase velocities.
double k2_from_velocities(double v_f, double v_m);

/// k^2 of the decoupled model at a common wavelength.
double a1_k2(double lambda, const PlateSpec& plate);

void write_dispersion_csv(std::ostream& os, std::span<const DispersionCurve> curves);

}  // namespace adl
