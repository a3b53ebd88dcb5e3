#include "adl/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

#include <fmt/format.h>

#include "adl/error.hpp"
#include "adl/extraction.hpp"
#include "adl/touchstone.hpp"

namespace adl {
namespace fs = std::filesystem;

namespace {

std::ostream& out(const CommandContext& ctx) { return ctx.out ? *ctx.out : std::cout; }
std::ostream& err(const CommandContext& ctx) { return ctx.err ? *ctx.err : std::cerr; }

std::ofstream open_output(const CommandContext& ctx, const std::string& name) {
    fs::create_directories(ctx.out_dir);
    const fs::path p = ctx.out_dir / name;
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
    if (ctx.verbose) err(ctx) << "writing " << p.string() << '\n';
    return os;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string design_name(double lambda, int n, const std::string& metal, double gap) {
    return fmt::format("adl_lambda{:g}um_n{}_{}_lg{:g}um", lambda * 1e6, n, lower(metal), gap * 1e6);
}

}  // namespace

int cmd_dispersion(const CommandContext& ctx) {
    const RunConfig& cfg = ctx.config;
    if (cfg.dispersion.lambdas.empty()) {
        out(ctx) << "dispersion: empty wavelength list, nothing to do\n";
        return 0;
    }
    const PlateSpec& plate = cfg.plate;
    int status = 0;

    std::vector<DispersionCurve> curves;
    for (auto bc : {BoundaryCondition::Short, BoundaryCondition::Open}) {
        for (auto sym : {Symmetry::Antisymmetric, Symmetry::Symmetric}) {
            try {
                auto c = solve_branches(plate, bc, sym, cfg.dispersion.f_max,
                                        cfg.dispersion.n_branches, cfg.dispersion.beta_points);
                for (auto& curve : c) {
                    for (const auto& w : curve.warnings)
                        err(ctx) << fmt::format("{} {}: {}\n", curve.mode_label, to_string(bc), w);
                    if (curve.points.empty()) {
                        err(ctx) << fmt::format("{} {}: no roots found\n", curve.mode_label,
                                                to_string(bc));
                        status = 1;
                    }
                    curves.push_back(std::move(curve));
                }
            } catch (const std::exception& e) {
                err(ctx) << fmt::format("{} branches failed: {}\n", to_string(bc), e.what());
                status = 1;
            }
        }
    }
    {
        auto os = open_output(ctx, "dispersion_full.csv");
        write_dispersion_csv(os, curves);
    }

    {
        auto os = open_output(ctx, "dispersion_a1_model.csv");
        os << "lambda_um,f_short_hz,vp_short_m_per_s,vg_short_m_per_s,f_open_hz,vp_open_m_per_s,"
              "vg_open_m_per_s,k2\n";
        for (double lambda : cfg.dispersion.lambdas) {
            const double fs_ = a1_freq(lambda, plate, BoundaryCondition::Short);
            const double fo = a1_freq(lambda, plate, BoundaryCondition::Open);
            os << fmt::format("{:.12g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                              lambda * 1e6, fs_, fs_ * lambda,
                              a1_vg(fs_, plate, BoundaryCondition::Short), fo, fo * lambda,
                              a1_vg(fo, plate, BoundaryCondition::Open), a1_k2(lambda, plate));
        }
    }

    {
        auto os = open_output(ctx, "dispersion_cutoffs.csv");
        os << "bc,f_c_model_hz,f_c_solved_hz\n";
        for (auto bc : {BoundaryCondition::Short, BoundaryCondition::Open}) {
            std::string solved;
            for (const auto& c : curves)
                if (c.mode_label == "A1" && c.bc == bc && !c.points.empty() &&
                    c.points.front().beta == 0.0)
                    solved = fmt::format("{:.17g}", c.points.front().f);
            const double model = a1_cutoff(plate, bc);
            os << fmt::format("{},{:.17g},{}\n", to_string(bc), model, solved);
            out(ctx) << fmt::format("A1 cutoff ({}): {:.4f} GHz\n", to_string(bc), model * 1e-9);
        }
    }
    return status;
}

int cmd_design(const CommandContext& ctx) {
    const RunConfig& cfg = ctx.config;
    std::vector<DesignRow> rows;
    for (const auto& metal : cfg.sweep.metals) {
        for (double lambda : cfg.sweep.lambdas) {
            for (int n : cfg.sweep.n_cells) {
                const AdlDesign d = cfg.make_design(lambda, n, metal, cfg.design.gap_lg);
                DesignRow r;
                r.lambda = lambda;
                r.n_cells = n;
                r.metal = d.tx.electrode.name;
                const LayerStack stack = electrode_stack(d.tx, cfg.plate);
                std::vector<std::string> problems;
                try {
                    r.f_c_short_loaded = bilayer_cutoff_short(stack);
                } catch (const SolverFailure& e) {
                    problems.emplace_back(e.what());
                }
                if (d.tx.electrode_thickness > 0.0) r.r_s = electrode_resistance(d.tx).r_s;
                try {
                    r.f_center = center_frequency(d.tx, cfg.plate);
                    r.fbw = predicted_fbw(d.tx, cfg.plate, *r.f_center);
                    r.delay_us_per_mm =
                        delay_us_per_mm(a1_vg(*r.f_center, cfg.plate, BoundaryCondition::Open));
                } catch (const DesignInfeasible& e) {
                    problems.push_back(std::string("massless: ") + e.what());
                }
                try {
                    r.f_center_loaded = center_frequency(d.tx, cfg.plate, stack);
                } catch (const std::exception& e) {
                    problems.push_back(std::string("loaded: ") + e.what());
                }
                if (!problems.empty()) {
                    r.status = "infeasible: " + problems.front();
                    for (std::size_t i = 1; i < problems.size(); ++i) r.status += "; " + problems[i];
                }
                rows.push_back(r);
            }
        }
    }
    if (rows.empty()) {
        out(ctx) << "design: empty sweep, nothing to do\n";
        return 0;
    }
    auto os = open_output(ctx, "design.csv");
    write_design_csv(os, rows);
    out(ctx) << fmt::format("design: {} rows\n", rows.size());
    return 0;
}

int cmd_synth(const CommandContext& ctx) {
    const RunConfig& cfg = ctx.config;
    const auto grid = cfg.grid.frequencies();
    int written = 0;
    for (const auto& metal : cfg.sweep.metals)
        for (double lambda : cfg.sweep.lambdas)
            for (int n : cfg.sweep.n_cells)
                for (double gap : cfg.sweep.gaps) {
                    const AdlDesign d = cfg.make_design(lambda, n, metal, gap);
                    SynthesisOptions opt;
                    if (cfg.design.z_ref) {
                        opt.reference = ReferenceMode::Fixed;
                        opt.z1 = opt.z2 = Complex(*cfg.design.z_ref, 0.0);
                    } else {
                        opt.reference = ReferenceMode::Matched;
                    }
                    const Synthesis syn = synthesize_detailed(d, cfg.plate, grid, opt);
                    for (const auto& w : syn.warnings) err(ctx) << w << '\n';

                    NetworkMeta meta;
                    meta.lg_m = gap;
                    meta.lambda_m = lambda;
                    meta.n_cells = n;
                    if (opt.reference == ReferenceMode::Matched) {
                        meta.z_match_1 = syn.net.z_ref_1;
                        meta.z_match_2 = syn.net.z_ref_2;
                    } else {
                        const MatchResult m = conjugate_match(syn.net);
                        meta.z_match_1 = m.z1;
                        meta.z_match_2 = m.z2;
                    }
                    meta.extra["g0_s"] = fmt::format("{:.17g}", syn.tx.g0);
                    meta.extra["k2"] = fmt::format("{:.17g}", syn.tx.k2);
                    meta.extra["f_center_hz"] = fmt::format("{:.17g}", syn.tx.f_center);
                    meta.extra["pl_db_per_us"] = fmt::format("{:.17g}", d.pl_db_per_us);
                    meta.extra["gamma_tt"] = fmt::format("{:.17g}", d.gamma_tt);

                    const std::string base = design_name(lambda, n, metal, gap);
                    fs::create_directories(ctx.out_dir);
                    const fs::path s2p = ctx.out_dir / (base + ".s2p");
                    touchstone_write(syn.net, s2p);
                    write_meta(meta, meta_path(s2p));
                    {
                        auto os = open_output(ctx, base + "_transducer.csv");
                        write_transducer_csv(os, syn.tx);
                    }
                    if (ctx.verbose) err(ctx) << "wrote " << s2p.string() << '\n';
                    ++written;
                }
    out(ctx) << fmt::format("synth: {} networks\n", written);
    return 0;
}

int cmd_extract(const CommandContext& ctx, const ExtractArgs& args) {
    const RunConfig& cfg = ctx.config;
    const int window = args.window.value_or(cfg.extraction.window);
    std::vector<NamedMetrics> metrics;
    std::vector<FamilyMember> family;
    std::vector<std::string> failures;

    for (std::size_t i = 0; i < args.files.size(); ++i) {
        const fs::path& path = args.files[i];
        try {
            TwoPortNetwork net = touchstone_read(path);
            std::optional<double> lg;
            if (i < args.gaps.size()) lg = args.gaps[i];
            if (fs::exists(meta_path(path))) {
                const NetworkMeta meta = read_meta(meta_path(path));
                if (meta.lg_m) {
                    if (lg && std::abs(*lg - *meta.lg_m) > 1e-12)
                        err(ctx) << fmt::format(
                            "warning: {}: sidecar gap {:g} um overrides --gaps {:g} um\n",
                            path.string(), *meta.lg_m * 1e6, *lg * 1e6);
                    lg = meta.lg_m;
                }
            }
            if (args.match) {
                const MatchResult m = conjugate_match(net);
                if (m.fallback && ctx.verbose)
                    err(ctx) << path.string() << ": simultaneous match unavailable, one-port match used\n";
                net = renormalize(net, m.z1, m.z2);
            }
            metrics.push_back({path.filename().string(),
                               band_metrics(net, window, cfg.extraction.order)});
            if (lg) family.push_back({std::move(net), *lg});
        } catch (const std::exception& e) {
            failures.push_back(fmt::format("{}: {}", path.string(), e.what()));
        }
    }

    {
        auto os = open_output(ctx, "band_metrics.csv");
        write_band_metrics_csv(os, metrics);
    }

    std::set<double> gaps;
    for (const auto& m : family) gaps.insert(m.lg);
    if (gaps.size() >= 2) {
        FitOptions fo;
        fo.window = window;
        fo.order = cfg.extraction.order;
        fo.noise_floor_db = cfg.extraction.noise_floor_db;
        double f_eval = 0.0;
        if (args.f_eval) f_eval = *args.f_eval;
        else if (cfg.extraction.f_eval) f_eval = *cfg.extraction.f_eval;
        else {
            for (const auto& m : metrics) f_eval += m.metrics.f_center;
            f_eval /= static_cast<double>(metrics.size());
        }
        try {
            const PropagationFit fit = fit_propagation(family, f_eval, fo);
            {
                auto os = open_output(ctx, "propagation.csv");
                write_fit_csv(os, std::span<const PropagationFit>(&fit, 1));
            }
            out(ctx) << fmt::format(
                "propagation at {:.4f} GHz: vg = {:.1f} m/s, PL = {:.3f} dB/us ({:.5f} dB/um){}\n",
                f_eval * 1e-9, fit.vg, fit.pl_db_per_us, fit.pl_db_per_um,
                fit.negative_pl ? " [negative PL: noise]" : "");
            const auto wide = wideband_fit(family, {}, fo);
            auto os = open_output(ctx, "wideband.csv");
            write_wideband_csv(os, wide);
        } catch (const std::exception& e) {
            failures.push_back(fmt::format("propagation fit: {}", e.what()));
        }
    } else {
        out(ctx) << "propagation: not computed (needs two or more distinct gap lengths)\n";
    }

    out(ctx) << fmt::format("extract: {} file(s) analysed, {} failure(s)\n", metrics.size(),
                            failures.size());
    for (const auto& f : failures) out(ctx) << "  failed: " << f << '\n';
    return failures.empty() ? 0 : 1;
}

int cmd_match(const CommandContext& ctx, const std::vector<fs::path>& files) {
    auto os = open_output(ctx, "match.csv");
    os << "file,f_hz,z1_re_ohm,z1_im_ohm,z2_re_ohm,z2_im_ohm,fallback\n";
    int status = 0;
    for (const auto& path : files) {
        try {
            const MatchResult m = conjugate_match(touchstone_read(path));
            os << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n",
                              path.filename().string(), m.f, m.z1.real(), m.z1.imag(),
                              m.z2.real(), m.z2.imag(), m.fallback ? 1 : 0);
            out(ctx) << fmt::format("{}: z1 = {:.2f}{:+.2f}j, z2 = {:.2f}{:+.2f}j at {:.4f} GHz\n",
                                    path.filename().string(), m.z1.real(), m.z1.imag(),
                                    m.z2.real(), m.z2.imag(), m.f * 1e-9);
        } catch (const std::exception& e) {
            err(ctx) << path.string() << ": " << e.what() << '\n';
            status = 1;
        }
    }
    return status;
}

}  // namespace adl
