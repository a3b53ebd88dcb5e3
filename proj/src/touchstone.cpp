#include "adl/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "adl/error.hpp"

namespace adl {
namespace {

enum class DataFormat { RI, MA, DB };

struct Options {
    double unit = 1e9;
    DataFormat format = DataFormat::MA;
    double r = 50.0;
};

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, std::size_t line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError(fmt::format("line {}: '{}' is not a number", line, tok), line);
    return v;
}

Options parse_options(const std::vector<std::string>& toks, std::size_t line) {
    Options o;
    for (std::size_t i = 1; i < toks.size(); ++i) {
        const std::string t = upper(toks[i]);
        if (t == "HZ") o.unit = 1.0;
        else if (t == "KHZ") o.unit = 1e3;
        else if (t == "MHZ") o.unit = 1e6;
        else if (t == "GHZ") o.unit = 1e9;
        else if (t == "S") continue;
        else if (t == "Y" || t == "Z" || t == "H" || t == "G")
            throw ParseError(fmt::format("line {}: only S parameters are supported", line), line);
        else if (t == "RI") o.format = DataFormat::RI;
        else if (t == "MA") o.format = DataFormat::MA;
        else if (t == "DB") o.format = DataFormat::DB;
        else if (t == "R") {
            if (i + 1 >= toks.size())
                throw ParseError(fmt::format("line {}: missing reference resistance", line), line);
            o.r = parse_number(toks[++i], line);
            if (!(o.r > 0.0))
                throw ParseError(fmt::format("line {}: reference must be positive", line), line);
        } else {
            throw ParseError(fmt::format("line {}: unknown option '{}'", line, toks[i]), line);
        }
    }
    return o;
}

Complex decode(double a, double b, DataFormat fmt) {
    constexpr double kDeg = std::numbers::pi / 180.0;
    switch (fmt) {
        case DataFormat::RI: return {a, b};
        case DataFormat::MA: return std::polar(a, b * kDeg);
        case DataFormat::DB: return std::polar(std::pow(10.0, a / 20.0), b * kDeg);
    }
    return {};
}

std::string format_complex(Complex z) { return fmt::format("{:.17g},{:.17g}", z.real(), z.imag()); }

Complex parse_complex(const std::string& v, const std::string& key) {
    const auto comma = v.find(',');
    if (comma == std::string::npos) throw InvalidArgument("meta: " + key + " needs re,im");
    try {
        return {std::stod(v.substr(0, comma)), std::stod(v.substr(comma + 1))};
    } catch (const std::exception&) {
        throw InvalidArgument("meta: bad complex value for " + key);
    }
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

void touchstone_write(std::ostream& os, const TwoPortNetwork& net) {
    net.validate();
    const Complex z50{50.0, 0.0};
    const TwoPortNetwork& out =
        (net.z_ref_1 == z50 && net.z_ref_2 == z50) ? net : renormalize(net, z50, z50);
    os << "# Hz S RI R 50\n";
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& s = out.s[i];
        os << fmt::format("{:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g}\n",
                          out.f_grid[i], s(0, 0).real(), s(0, 0).imag(), s(1, 0).real(),
                          s(1, 0).imag(), s(0, 1).real(), s(0, 1).imag(), s(1, 1).real(),
                          s(1, 1).imag());
    }
}

void touchstone_write(const TwoPortNetwork& net, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    touchstone_write(os, net);
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

TwoPortNetwork touchstone_read(std::istream& is) {
    std::optional<Options> opts;
    TwoPortNetwork net;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        if (const auto bang = raw.find('!'); bang != std::string::npos) raw.erase(bang);
        const auto toks = split_ws(raw);
        if (toks.empty()) continue;
        if (toks[0][0] == '#') {
            if (toks[0] != "#")
                throw ParseError(fmt::format("line {}: malformed option line", line_no), line_no);
            if (!net.f_grid.empty())
                throw ParseError(fmt::format("line {}: option line after data", line_no), line_no);
            // Only the first option line counts.
            if (!opts) opts = parse_options(toks, line_no);
            continue;
        }
        if (!opts) opts = Options{};
        if (toks.size() != 9)
            throw ParseError(fmt::format("line {}: expected 9 columns, found {}", line_no, toks.size()),
                             line_no);
        double v[9];
        for (int k = 0; k < 9; ++k) v[k] = parse_number(toks[k], line_no);
        const double f = v[0] * opts->unit;
        if (!net.f_grid.empty() && !(f > net.f_grid.back()))
            throw ParseError(fmt::format("line {}: frequencies must increase", line_no), line_no);
        SMatrix s;
        s(0, 0) = decode(v[1], v[2], opts->format);
        s(1, 0) = decode(v[3], v[4], opts->format);
        s(0, 1) = decode(v[5], v[6], opts->format);
        s(1, 1) = decode(v[7], v[8], opts->format);
        net.f_grid.push_back(f);
        net.s.push_back(s);
    }
    if (net.f_grid.empty()) throw ParseError("no data lines", line_no);
    const double r = opts ? opts->r : 50.0;
    net.z_ref_1 = net.z_ref_2 = Complex{r, 0.0};
    return net;
}

TwoPortNetwork touchstone_read(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return touchstone_read(is);
}

std::filesystem::path meta_path(const std::filesystem::path& s2p) {
    auto p = s2p;
    p.replace_extension(".meta");
    return p;
}

void write_meta(std::ostream& os, const NetworkMeta& meta) {
    if (meta.lg_m) os << fmt::format("lg_m={:.17g}\n", *meta.lg_m);
    if (meta.lambda_m) os << fmt::format("lambda_m={:.17g}\n", *meta.lambda_m);
    if (meta.n_cells) os << fmt::format("n_cells={}\n", *meta.n_cells);
    if (meta.z_match_1) os << "z_match_1=" << format_complex(*meta.z_match_1) << '\n';
    if (meta.z_match_2) os << "z_match_2=" << format_complex(*meta.z_match_2) << '\n';
    for (const auto& [k, v] : meta.extra) os << k << '=' << v << '\n';
}

void write_meta(const NetworkMeta& meta, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_meta(os, meta);
}

NetworkMeta read_meta(std::istream& is) {
    NetworkMeta m;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(fmt::format("meta line {}: expected key=value", line_no), line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "lg_m") m.lg_m = parse_number(val, line_no);
        else if (key == "lambda_m") m.lambda_m = parse_number(val, line_no);
        else if (key == "n_cells") m.n_cells = static_cast<int>(parse_number(val, line_no));
        else if (key == "z_match_1") m.z_match_1 = parse_complex(val, key);
        else if (key == "z_match_2") m.z_match_2 = parse_complex(val, key);
        else m.extra[key] = val;
    }
    return m;
}

NetworkMeta read_meta(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_meta(is);
}

}  // namespace adl
