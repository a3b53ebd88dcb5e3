#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "adl/network.hpp"

namespace adl {

/// Writes Touchstone v1 with "# Hz S RI R 50". Networks with other reference
/// impedances are renormalized to 50 Ohm first.
void touchstone_write(std::ostream& os, const TwoPortNetwork& net);
void touchstone_write(const TwoPortNetwork& net, const std::filesystem::path& path);

/// Parses a two-port Touchstone v1 file. Throws ParseError with the offending
/// line number.
TwoPortNetwork touchstone_read(std::istream& is);
TwoPortNetwork touchstone_read(const std::filesystem::path& path);

/// key=value sidecar stored next to a .s2p file with the .meta extension.
struct NetworkMeta {
    std::optional<double> lg_m;
    std::optional<double> lambda_m;
    std::optional<int> n_cells;
    std::optional<Complex> z_match_1;
    std::optional<Complex> z_match_2;
    std::map<std::string, std::string> extra;
};

std::filesystem::path meta_path(const std::filesystem::path& s2p);
void write_meta(std::ostream& os, const NetworkMeta& meta);
void write_meta(const NetworkMeta& meta, const std::filesystem::path& path);
NetworkMeta read_meta(std::istream& is);
NetworkMeta read_meta(const std::filesystem::path& path);

}  // namespace adl
