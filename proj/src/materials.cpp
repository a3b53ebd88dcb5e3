#include "adl/materials.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "adl/error.hpp"

namespace adl {

const char* to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::Short ? "short" : "open";
}

void MaterialSet::validate() const {
    if (!(c44 > 0.0) || !(c11 > c44))
        throw InvalidArgument("material '" + name + "': requires c11 > c44 > 0");
    if (!(rho > 0.0))
        throw InvalidArgument("material '" + name + "': requires rho > 0");
    if (v_l_override && !(*v_l_override > 0.0))
        throw InvalidArgument("material '" + name + "': v_l_override must be positive");
}

void ElectrodeMaterial::validate() const {
    if (!(rho > 0.0) || !(v_s > 0.0) || !(v_l > 0.0) || !(resistivity > 0.0) ||
        !(resistivity_scale > 0.0))
        throw InvalidArgument("electrode '" + name + "': all constants must be positive");
    if (!(v_l > v_s))
        throw InvalidArgument("electrode '" + name + "': requires v_l > v_s");
}

LithiumNiobate builtin_linbo3() {
    LithiumNiobate ln;
    ln.short_set = {"LiNbO3 (short)", 2.03e11, 0.60e11, 4700.0, std::nullopt};
    ln.open_set = {"LiNbO3 (open)", 2.19e11, 0.95e11, 4700.0, 6795.0};
    return ln;
}

// Handbook bulk values; thin-film resistivity multiplier 3 for all metals.
ElectrodeMaterial builtin_aluminum() { return {"Al", 2700.0, 3100.0, 6420.0, 2.65e-8, 3.0}; }
ElectrodeMaterial builtin_gold() { return {"Au", 19300.0, 1200.0, 3240.0, 2.44e-8, 3.0}; }
ElectrodeMaterial builtin_molybdenum() { return {"Mo", 10200.0, 3350.0, 6250.0, 5.34e-8, 3.0}; }

ElectrodeMaterial builtin_electrode(const std::string& name) {
    std::string key = name;
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (key == "al" || key == "aluminum" || key == "aluminium") return builtin_aluminum();
    if (key == "au" || key == "gold") return builtin_gold();
    if (key == "mo" || key == "molybdenum") return builtin_molybdenum();
    throw InvalidArgument("unknown electrode material '" + name + "'");
}

double longitudinal_velocity(const MaterialSet& m) { return std::sqrt(m.c11 / m.rho); }

double shear_velocity(const MaterialSet& m) { return std::sqrt(m.c44 / m.rho); }

double effective_longitudinal_velocity(const MaterialSet& m) {
    return m.v_l_override ? *m.v_l_override : longitudinal_velocity(m);
}

double stiffen(double c_e, double e_eff, double eps_eff) {
    if (!(eps_eff > 0.0)) throw InvalidArgument("stiffen: permittivity must be positive");
    return c_e + e_eff * e_eff / eps_eff;
}

}  // namespace adl
