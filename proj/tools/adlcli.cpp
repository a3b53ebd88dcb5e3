#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adl/commands.hpp"
#include "adl/config.hpp"
#include "adl/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"A1-mode Lamb-wave delay line design and extraction"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool verbose = false;
    app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--verbose", verbose, "progress on stderr");

    auto* disp = app.add_subcommand("dispersion", "Rayleigh-Lamb branches and the A1 model");
    auto* design = app.add_subcommand("design", "center frequency / resistance design table");
    auto* synth = app.add_subcommand("synth", "synthesize .s2p networks for the sweep");

    auto* extract = app.add_subcommand("extract", "band metrics and propagation fits");
    std::vector<std::string> extract_files;
    std::string gaps_text;
    std::optional<int> window;
    std::optional<double> f_eval_ghz;
    bool match = false;
    extract->add_option("files", extract_files, ".s2p files")->required()->check(CLI::ExistingFile);
    extract->add_option("--gaps", gaps_text, "gap lengths in um, comma separated");
    extract->add_option("--window", window, "Savitzky-Golay window (points)");
    extract->add_option("--f-eval", f_eval_ghz, "fit frequency in GHz");
    extract->add_flag("--match", match, "conjugate-match each file before analysis");

    auto* matchcmd = app.add_subcommand("match", "simultaneous conjugate-match impedances");
    std::vector<std::string> match_files;
    matchcmd->add_option("files", match_files, ".s2p files")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        adl::CommandContext ctx;
        ctx.config = config_path.empty() ? adl::default_config() : adl::load_config(config_path);
        ctx.out_dir = out_dir;
        ctx.verbose = verbose;

        if (*disp) return adl::cmd_dispersion(ctx);
        if (*design) return adl::cmd_design(ctx);
        if (*synth) return adl::cmd_synth(ctx);
        if (*extract) {
            adl::ExtractArgs args;
            for (const auto& f : extract_files) args.files.emplace_back(f);
            for (double g : adl::parse_list(gaps_text)) args.gaps.push_back(g * 1e-6);
            args.window = window;
            if (f_eval_ghz) args.f_eval = *f_eval_ghz * 1e9;
            args.match = match;
            return adl::cmd_extract(ctx, args);
        }
        if (*matchcmd) {
            std::vector<std::filesystem::path> files(match_files.begin(), match_files.end());
            return adl::cmd_match(ctx, files);
        }
    } catch (const adl::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
