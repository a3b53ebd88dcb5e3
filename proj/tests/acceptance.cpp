// Acceptance checks. Run without arguments for all criteria or pass criterion
// numbers to run a subset. One PASS/FAIL line per criterion; the exit code is
// nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "adl/dispersion.hpp"
#include "adl/extraction.hpp"
#include "adl/loading.hpp"
#include "adl/materials.hpp"
#include "adl/network.hpp"
#include "adl/touchstone.hpp"
#include "support.hpp"

using namespace adl;
using namespace adl::test;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const double kBidirectionalDb = 20.0 * std::log10(2.0);

// 1. Cutoff frequencies of the 490 nm film.
Outcome cutoffs() {
    Outcome o;
    const PlateSpec plate = default_plate();
    const auto t0 = Clock::now();
    constexpr int kReps = 1000;
    double fs = 0.0, fo = 0.0;
    for (int i = 0; i < kReps; ++i) {
        fs = a1_cutoff(plate, BoundaryCondition::Short);
        fo = a1_cutoff(plate, BoundaryCondition::Open);
    }
    const double per_call = seconds_since(t0) / kReps;
    o.check(rel(fs, 3.64e9) < 0.005, fmt::format("short {:.4f} GHz vs 3.64 (+-0.5%)", fs * 1e-9));
    o.check(rel(fo, 4.59e9) < 0.005, fmt::format("open {:.4f} GHz vs 4.59 (+-0.5%)", fo * 1e-9));
    o.check(per_call < 1e-3, fmt::format("{:.2e} s per evaluation (< 1 ms)", per_call));
    return o;
}

// 2. Exact Rayleigh-Lamb A1 branch vs the decoupled model for b/lambda <= 0.25.
Outcome full_vs_decoupled() {
    Outcome o;
    const PlateSpec plate = default_plate();
    const auto t0 = Clock::now();
    for (auto bc : {BoundaryCondition::Short, BoundaryCondition::Open}) {
        const auto curves = solve_branches(plate, bc, Symmetry::Antisymmetric, 15e9, 2, 200);
        const auto& a1 = curves.at(1);
        double worst = 0.0, worst_ratio = 0.0;
        int compared = 0;
        for (const auto& p : a1.points) {
            const double ratio = p.beta * plate.thickness_b / (2.0 * kPi);
            if (ratio > 0.25 + 1e-12) continue;
            const double model = p.beta > 0.0 ? a1_freq(2.0 * kPi / p.beta, plate, bc)
                                              : a1_cutoff(plate, bc);
            const double d = std::abs(p.f - model) / model;
            ++compared;
            if (d > worst) {
                worst = d;
                worst_ratio = ratio;
            }
        }
        o.check(compared > 90 && worst < 0.02,
                fmt::format("{}: max deviation {:.2f}% at b/lambda = {:.3f} over {} points (< 2%)",
                            to_string(bc), worst * 100.0, worst_ratio, compared));
    }
    const double t = seconds_since(t0);
    o.check(t < 10.0, fmt::format("{:.2f} s (< 10 s)", t));
    return o;
}

// 3. k^2 from a velocity pair.
Outcome k2_bookkeeping() {
    Outcome o;
    const double k2 = k2_from_velocities(12520.0, 11700.0);
    o.check(std::abs(k2 - 0.145) <= 0.001, fmt::format("k2 = {:.4f} (0.145 +- 0.001)", k2));
    return o;
}

// 4. Center frequency at Lambda = 2.4 um and the Lambda ordering.
Outcome center_frequency_map() {
    Outcome o;
    const PlateSpec plate = default_plate();
    const double f24 = center_frequency(group_a_geometry(4, 2.4e-6), plate);
    o.check(rel(f24, 5.03e9) < 0.02, fmt::format("Lambda 2.4 um: {:.4f} GHz (5.03 +- 2%)", f24 * 1e-9));

    double prev = 0.0;
    bool decreasing = true;
    for (int i = 0; i <= 120; ++i) {
        const double lambda = (2.0 + 1.2 * i / 120.0) * 1e-6;
        const double f = center_frequency(group_a_geometry(4, lambda), plate);
        if (i > 0 && !(f < prev)) decreasing = false;
        prev = f;
    }
    o.check(decreasing, "strictly decreasing over 2.0-3.2 um (121 samples)");

    const double fd = center_frequency(group_a_geometry(4, 2.0e-6), plate);
    const double fa = f24;
    const double fc = center_frequency(group_a_geometry(4, 2.8e-6), plate);
    const double fb = center_frequency(group_a_geometry(4, 3.2e-6), plate);
    o.check(fd > fa && fa > fc && fc > fb,
            fmt::format("D {:.3f} > A {:.3f} > C {:.3f} > B {:.3f} GHz", fd * 1e-9, fa * 1e-9,
                        fc * 1e-9, fb * 1e-9));
    return o;
}

// 5. Electrode series resistance of the Group A transducer.
Outcome electrical_loading() {
    Outcome o;
    const auto r = electrode_resistance(group_a_geometry());
    o.check(std::abs(r.r_s - 74.0) <= 1.0, fmt::format("R_s = {:.2f} Ohm (74 +- 1)", r.r_s));
    return o;
}

// 6. Internal consistency of the published propagation table.
Outcome table_identities() {
    Outcome o;
    struct Row {
        char group;
        double vg, pl_us, pl_um, delay_per_mm;
    };
    const Row rows[] = {{'A', 3289, 71.0, 0.0216, 0.304},
                        {'B', 2304, 75.1, 0.0326, 0.434},
                        {'C', 2696, 69.8, 0.0259, 0.371},
                        {'D', 3472, 45.5, 0.0131, 0.288},
                        {'E', 3528, 79.7, 0.0226, 0.283}};
    for (const auto& r : rows) {
        const double pl_us = pl_db_per_us_from(r.pl_um, r.vg);
        const double delay = delay_us_per_mm(r.vg);
        o.check(rel(pl_us, r.pl_us) < 0.01 && rel(delay, r.delay_per_mm) < 0.01,
                fmt::format("{}: {:.2f} dB/us vs {}, {:.4f} us/mm vs {}", r.group, pl_us, r.pl_us,
                            delay, r.delay_per_mm));
    }
    return o;
}

// 7. Bidirectional floor and injected path loss.
Outcome bidirectional_floor() {
    Outcome o;
    const PlateSpec plate = default_plate();
    const auto grid = linspace(4.0e9, 6.5e9, 1251);
    double worst = 0.0;
    int count = 0;
    for (double lambda : {2.0e-6, 2.4e-6, 2.8e-6, 3.2e-6})
        for (int n : {2, 4, 8})
            for (double gap : {20e-6, 160e-6}) {
                const auto net = synthesize(lossless(group_a_design(gap, n, lambda)), plate, grid, matched());
                const auto il = insertion_loss_db(net);
                const double il_min = *std::min_element(il.begin(), il.end());
                worst = std::max(worst, std::abs(il_min - kBidirectionalDb));
                ++count;
            }
    o.check(worst < 1e-4, fmt::format("{} lossless matched designs: max |IL_min - {:.4f}| = {:.2e} dB",
                                      count, kBidirectionalDb, worst));

    const AdlDesign base = lossless(group_a_design(20e-6));
    AdlDesign lossy = base;
    lossy.pl_db_per_us = 71.0;
    const auto ref = band_metrics(synthesize(base, plate, grid, matched()), 51);
    const auto att = band_metrics(synthesize(lossy, plate, grid, matched()), 51);
    const double f0 = center_frequency(base.tx, plate);
    const double injected = 71.0 * base.path_length() / a1_vg(f0, plate, BoundaryCondition::Open) * 1e6;
    const double delta = att.il_avg - ref.il_avg;
    o.check(std::abs(delta - injected) <= 0.3,
            fmt::format("average IL rises {:.3f} dB vs injected {:.3f} dB (+-0.3)", delta, injected));
    return o;
}

// 8. 3-dB bandwidth scaling with the number of cells.
Outcome fbw_scaling() {
    Outcome o;
    const PlateSpec plate = default_plate();
    const auto grid = linspace(4.0e9, 6.5e9, 2501);
    double fbw[3];
    const int ns[3] = {2, 4, 8};
    for (int k = 0; k < 3; ++k) {
        const auto net = synthesize(lossless(group_a_design(20e-6, ns[k])), plate, grid, matched());
        fbw[k] = band_metrics(net, 51).fbw_3db;
    }
    const double r1 = fbw[0] / fbw[1];
    const double r2 = fbw[1] / fbw[2];
    o.check(std::abs(r1 - 2.0) / 2.0 <= 0.15 && std::abs(r2 - 2.0) / 2.0 <= 0.15,
            fmt::format("FBW {:.2f}% / {:.2f}% / {:.2f}% (reference 21 / 10 / 4.8), ratios {:.3f} "
                        "and {:.3f} (2 +- 15%)",
                        fbw[0] * 100, fbw[1] * 100, fbw[2] * 100, r1, r2));
    return o;
}

// 9. Propagation extraction round trips.
Outcome extraction_round_trip() {
    Outcome o;
    const PlateSpec plate = default_plate();
    const auto t0 = Clock::now();
    constexpr double kPl = 71.0;

    {
        const auto grid = linspace(4.0e9, 6.5e9, 1251);
        std::vector<FamilyMember> family;
        for (double gap : {20e-6, 40e-6, 80e-6, 160e-6, 240e-6, 320e-6}) {
            AdlDesign d = group_a_design(gap);
            d.gamma_tt = 0.2;
            d.pl_db_per_us = kPl;
            family.push_back({synthesize(d, plate, grid, matched()), gap});
        }
        const double f0 = center_frequency(group_a_geometry(), plate);
        const double f_eval = grid[static_cast<std::size_t>(std::lround((f0 - grid.front()) / (grid[1] - grid[0])))];
        const auto fit = fit_propagation(family, f_eval);
        const double vg = a1_vg(f_eval, plate, BoundaryCondition::Open);
        o.check(rel(fit.vg, vg) < 0.02,
                fmt::format("six gaps: vg {:.1f} vs {:.1f} m/s (2%)", fit.vg, vg));
        o.check(rel(fit.pl_db_per_us, kPl) < 0.05,
                fmt::format("PL {:.2f} vs {:.1f} dB/us (5%)", fit.pl_db_per_us, kPl));
    }
    {
        const auto grid = linspace(4.5e9, 5.5e9, 2001);
        std::vector<FamilyMember> family;
        for (double gap : {20e-6, 320e-6}) {
            AdlDesign d = group_a_design(gap);
            d.pl_db_per_us = kPl;
            family.push_back({synthesize(d, plate, grid, matched()), gap});
        }
        const double f_eval = grid[1069];  // 5.0345 GHz
        FitOptions opt;
        opt.window = 1;
        const auto fit = fit_propagation(family, f_eval, opt);
        const double vg = a1_vg(f_eval, plate, BoundaryCondition::Open);
        o.check(rel(fit.vg, vg) < 1e-6 && rel(fit.pl_db_per_us, kPl) < 1e-6,
                fmt::format("two gaps: vg rel err {:.1e}, PL rel err {:.1e} (1e-6)", rel(fit.vg, vg),
                            rel(fit.pl_db_per_us, kPl)));
    }
    const double t = seconds_since(t0);
    o.check(t < 5.0, fmt::format("{:.2f} s (< 5 s)", t));
    return o;
}

// 10. Property suites.
Outcome properties() {
    Outcome o;
    Random rng(20240917);

    double sg_err = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const int window = 2 * rng.integer(1, 50) + 1;
        const int order = rng.integer(0, std::min(5, window - 1));
        const int n = rng.integer(window, window + 150);
        std::vector<double> y(static_cast<std::size_t>(n));
        for (auto& v : y) v = rng.normal();
        const auto a = savgol(y, window, order);
        const auto b = savgol_oracle(y, window, order);
        for (int i = 0; i < n; ++i) sg_err = std::max(sg_err, std::abs(a[i] - b[i]));
    }
    o.check(sg_err < 1e-12, fmt::format("savgol vs least-squares oracle {:.1e} (1e-12)", sg_err));

    const PlateSpec plate = default_plate();
    const auto grid = linspace(4.0e9, 6.5e9, 626);
    std::vector<TwoPortNetwork> nets;
    for (int trial = 0; trial < 6; ++trial) {
        AdlDesign d = group_a_design(rng.uniform(20e-6, 320e-6), 4 + 2 * (trial % 2));
        d.gamma_tt = rng.uniform(0.0, 0.6);
        d.pl_db_per_us = rng.uniform(0.0, 100.0);
        d.feedthrough_c = trial % 3 == 0 ? rng.uniform(0.0, 5e-15) : 0.0;
        SynthesisOptions opt;
        if (trial % 2 == 0) opt = matched();
        nets.push_back(synthesize(d, plate, grid, opt));
    }

    double id_err = 0.0, rt_err = 0.0, sv_max = 0.0;
    for (const auto& net : nets) {
        const auto same = renormalize(net, net.z_ref_1, net.z_ref_2);
        const Complex za = rng.complex_in_disk(1.0) * 200.0 + Complex(250.0, 0.0);
        const Complex zb = rng.complex_in_disk(1.0) * 80.0 + Complex(100.0, 0.0);
        const auto back = renormalize(renormalize(net, za, zb), net.z_ref_1, net.z_ref_2);
        for (std::size_t i = 0; i < net.size(); ++i) {
            id_err = std::max(id_err, max_abs_diff(same.s[i], net.s[i]));
            rt_err = std::max(rt_err, max_abs_diff(back.s[i], net.s[i]));
            sv_max = std::max(sv_max, max_singular_value(net.s[i]));
        }
    }
    o.check(id_err < 1e-12, fmt::format("renormalize identity {:.1e} (1e-12)", id_err));
    o.check(rt_err < 1e-12, fmt::format("renormalize round trip {:.1e} (1e-12)", rt_err));
    o.check(sv_max <= 1.0 + 1e-9, fmt::format("max singular value {:.12f} (<= 1 + 1e-9)", sv_max));

    double vv_err = 0.0;
    for (auto bc : {BoundaryCondition::Short, BoundaryCondition::Open}) {
        const double fc = a1_cutoff(plate, bc);
        const double vl = effective_longitudinal_velocity(plate.set(bc));
        for (int i = 0; i < 500; ++i) {
            const double f = fc * (1.0 + std::pow(10.0, rng.uniform(-8.0, 1.0)));
            vv_err = std::max(vv_err, std::abs(a1_vg(f, plate, bc) * a1_vp(f, plate, bc) / (vl * vl) - 1.0));
        }
    }
    o.check(vv_err < 1e-12, fmt::format("vg*vp = v_l^2 rel err {:.1e}", vv_err));

    bool bytes_equal = true, values_equal = true;
    for (const auto& net : nets) {
        const auto at50 = renormalize(net, 50.0, 50.0);
        std::ostringstream first;
        touchstone_write(first, at50);
        std::istringstream in(first.str());
        const auto read = touchstone_read(in);
        std::ostringstream second;
        touchstone_write(second, read);
        bytes_equal = bytes_equal && first.str() == second.str();
        for (std::size_t i = 0; i < at50.size(); ++i)
            values_equal = values_equal && read.f_grid[i] == at50.f_grid[i] && read.s[i] == at50.s[i];
    }
    o.check(bytes_equal && values_equal, "Touchstone write/read/write byte-exact and value-exact");
    return o;
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "cutoff frequencies", cutoffs},
        {2, "full vs decoupled dispersion", full_vs_decoupled},
        {3, "k2 bookkeeping", k2_bookkeeping},
        {4, "center frequency", center_frequency_map},
        {5, "electrical loading", electrical_loading},
        {6, "propagation table identities", table_identities},
        {7, "bidirectional floor", bidirectional_floor},
        {8, "FBW scaling", fbw_scaling},
        {9, "extraction round trip", extraction_round_trip},
        {10, "property suites", properties},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : all) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::cout << fmt::format("criterion {:>2} {}  {}: {}\n", c.id, o.pass ? "PASS" : "FAIL",
                                 c.title, o.detail);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
