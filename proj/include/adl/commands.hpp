#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "adl/config.hpp"

namespace adl {

struct CommandContext {
    RunConfig config = default_config();
    std::filesystem::path out_dir = ".";
    bool verbose = false;
    std::ostream* out = nullptr;  // summary, defaults to std::cout
    std::ostream* err = nullptr;  // diagnostics, defaults to std::cerr
};

struct ExtractArgs {
    std::vector<std::filesystem::path> files;
    std::vector<double> gaps;  // m, positional fallback when no sidecar
    std::optional<int> window;
    std::optional<double> f_eval;  // Hz
    bool match = false;
};

// Each returns the process exit code.
int cmd_dispersion(const CommandContext& ctx);
int cmd_design(const CommandContext& ctx);
int cmd_synth(const CommandContext& ctx);
int cmd_extract(const CommandContext& ctx, const ExtractArgs& args);
int cmd_match(const CommandContext& ctx, const std::vector<std::filesystem::path>& files);

}  // namespace adl
