#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "adl/config.hpp"
#include "adl/error.hpp"
#include "adl/materials.hpp"
#include "approx.hpp"
#include "support.hpp"

using namespace adl;
using adl::test::Approx;

TEST_CASE("builtin LiNbO3 constants") {
    const auto ln = builtin_linbo3();
    CHECK(ln.short_set.c11 == 2.03e11);
    CHECK(ln.short_set.c44 == 0.60e11);
    CHECK(ln.short_set.rho == 4700.0);
    CHECK(ln.open_set.c11 == 2.19e11);
    CHECK(ln.open_set.c44 == 0.95e11);
    CHECK(ln.open_set.rho == 4700.0);
    CHECK(ln.short_set.c11 > ln.short_set.c44);
    CHECK(ln.open_set.c11 > ln.open_set.c44);
    CHECK_NOTHROW(ln.short_set.validate());
    CHECK_NOTHROW(ln.open_set.validate());
}

TEST_CASE("bulk velocities") {
    const auto ln = builtin_linbo3();
    CHECK(longitudinal_velocity(ln.short_set) == Approx(6572.0).epsilon(1.0 / 6572.0));
    CHECK(longitudinal_velocity(ln.open_set) == Approx(6826.0).epsilon(1e-4));
    CHECK(shear_velocity(ln.short_set) == Approx(3573.0).epsilon(1e-4));
    CHECK(shear_velocity(ln.open_set) == Approx(4496.0).epsilon(1e-4));

    MaterialSet m = ln.short_set;
    const double v = longitudinal_velocity(m);
    m.c11 *= 4.0;
    CHECK(longitudinal_velocity(m) == Approx(2.0 * v));
    m = ln.short_set;
    m.rho *= 4.0;
    CHECK(shear_velocity(m) == Approx(0.5 * shear_velocity(ln.short_set)));

    CHECK(longitudinal_velocity(ln.open_set) >= longitudinal_velocity(ln.short_set));
    CHECK(shear_velocity(ln.open_set) >= shear_velocity(ln.short_set));
}

TEST_CASE("open-set longitudinal velocity uses the tabulated override") {
    const auto ln = builtin_linbo3();
    CHECK(effective_longitudinal_velocity(ln.open_set) == 6795.0);
    CHECK(effective_longitudinal_velocity(ln.short_set) == longitudinal_velocity(ln.short_set));
}

TEST_CASE("invalid material sets are rejected") {
    MaterialSet m{"bad", 1e11, 2e11, 4700.0, std::nullopt};
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
    m = {"bad", 2e11, 1e11, 0.0, std::nullopt};
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
    m = {"bad", 2e11, 0.0, 4700.0, std::nullopt};
    CHECK_THROWS_AS(m.validate(), InvalidArgument);
}

TEST_CASE("electrode materials") {
    for (const auto& e : {builtin_aluminum(), builtin_gold(), builtin_molybdenum()}) {
        CHECK_NOTHROW(e.validate());
        CHECK(e.v_l > e.v_s);
        CHECK(e.resistivity_scale == 3.0);
    }
    CHECK(builtin_aluminum().rho == 2700.0);
    CHECK(builtin_aluminum().resistivity == 2.65e-8);
    CHECK(builtin_aluminum().sheet_resistivity() == Approx(3.0 * 2.65e-8));
    CHECK(builtin_electrode("au").name == "Au");
    CHECK(builtin_electrode("Molybdenum").name == "Mo");
    CHECK_THROWS_AS(builtin_electrode("Pt"), InvalidArgument);
    ElectrodeMaterial e = builtin_aluminum();
    e.v_l = e.v_s;
    CHECK_THROWS_AS(e.validate(), InvalidArgument);
}

TEST_CASE("reduced piezoelectric stiffening") {
    CHECK(stiffen(0.60e11, 3.7, 3.92e-10) == Approx(0.949e11).epsilon(1e-3));
    CHECK(stiffen(0.60e11, 3.7, 3.92e-10) == Approx(0.95e11).epsilon(0.01));
    CHECK(stiffen(1.23e11, 0.0, 1e-10) == 1.23e11);
    CHECK_THROWS_AS(stiffen(1e11, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(stiffen(1e11, 1.0, -1e-10), InvalidArgument);

    test::Random rng(7);
    for (int i = 0; i < 200; ++i) {
        const double c = rng.uniform(1e10, 3e11);
        const double e1 = rng.uniform(-5.0, 5.0);
        const double e2 = std::abs(e1) + rng.uniform(0.0, 2.0);
        const double eps = rng.uniform(1e-11, 1e-9);
        CHECK(stiffen(c, e1, eps) >= c);
        CHECK(stiffen(c, e2, eps) >= stiffen(c, e1, eps));
    }
}

TEST_CASE("built-in constants survive a config round trip bit-exactly") {
    const RunConfig original = default_config();
    std::ostringstream os;
    write_config(os, original);
    std::istringstream is(os.str());
    const RunConfig back = load_config(is);

    const auto same_set = [](const MaterialSet& a, const MaterialSet& b) {
        return a.name == b.name && a.c11 == b.c11 && a.c44 == b.c44 && a.rho == b.rho &&
               a.v_l_override == b.v_l_override;
    };
    CHECK(same_set(back.plate.short_set, original.plate.short_set));
    CHECK(same_set(back.plate.open_set, original.plate.open_set));
    for (const auto& name : {"Al", "Au", "Mo"}) {
        const auto a = builtin_electrode(name);
        const auto b = back.electrode(name);
        CHECK(a.rho == b.rho);
        CHECK(a.v_s == b.v_s);
        CHECK(a.v_l == b.v_l);
        CHECK(a.resistivity == b.resistivity);
        CHECK(a.resistivity_scale == b.resistivity_scale);
    }
}
