#pragma once

#include <optional>
#include <string>

namespace adl {

enum class BoundaryCondition { Short, Open };

const char* to_string(BoundaryCondition bc);

/// Isotropicized elastic constants and density for one electrical boundary
/// condition of the piezoelectric plate.
struct MaterialSet {
    std::string name;
    double c11 = 0.0;  // Pa
    double c44 = 0.0;  // Pa
    double rho = 0.0;  // kg/m^3
    /// Tabulated longitudinal velocity that replaces sqrt(c11/rho) downstream.
    std::optional<double> v_l_override;

    /// Throws InvalidArgument unless c11 > c44 > 0 and rho > 0.
    void validate() const;
};

struct ElectrodeMaterial {
    std::string name;
    double rho = 0.0;                // kg/m^3
    double v_s = 0.0;                // m/s
    double v_l = 0.0;                // m/s
    double resistivity = 0.0;        // Ohm*m, bulk
    double resistivity_scale = 1.0;  // thin-film multiplier

    void validate() const;
    double sheet_resistivity() const { return resistivity * resistivity_scale; }
};

struct LithiumNiobate {
    MaterialSet short_set;
    MaterialSet open_set;
};

/// Z-cut LiNbO3 constants for the electrically short (c^E) and open (c^S) cases.
LithiumNiobate builtin_linbo3();

ElectrodeMaterial builtin_aluminum();
ElectrodeMaterial builtin_gold();
ElectrodeMaterial builtin_molybdenum();

/// Looks up Al, Au or Mo (case-insensitive). Throws InvalidArgument otherwise.
ElectrodeMaterial builtin_electrode(const std::string& name);

double longitudinal_velocity(const MaterialSet& m);
double shear_velocity(const MaterialSet& m);

/// Longitudinal velocity used by the dispersion models: the override when set,
/// sqrt(c11/rho) otherwise.
double effective_longitudinal_velocity(const MaterialSet& m);

/// Reduced scalar piezoelectric stiffening c^S = c^E + e^2/eps.
double stiffen(double c_e, double e_eff, double eps_eff);

// Clamped permittivities of LiNbO3, F/m.
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;
inline constexpr double kLinbo3Eps11 = 44.0 * kVacuumPermittivity;
inline constexpr double kLinbo3Eps33 = 29.0 * kVacuumPermittivity;

}  // namespace adl
