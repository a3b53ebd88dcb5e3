#include "adl/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "adl/error.hpp"

namespace adl {
namespace {

using Section = std::map<std::string, std::string>;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

class SectionReader {
public:
    SectionReader(std::string name, Section values)
        : name_(std::move(name)), values_(std::move(values)) {}

    std::optional<std::string> text(const std::string& key) {
        used_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return trim(it->second);
    }

    std::optional<double> number(const std::string& key) {
        const auto t = text(key);
        if (!t) return std::nullopt;
        try {
            std::size_t pos = 0;
            const double v = std::stod(*t, &pos);
            if (pos != t->size()) throw std::invalid_argument(*t);
            return v;
        } catch (const std::exception&) {
            throw InvalidArgument(fmt::format("[{}] {}: '{}' is not a number", name_, key, *t));
        }
    }

    std::optional<int> integer(const std::string& key) {
        const auto v = number(key);
        if (!v) return std::nullopt;
        if (*v != static_cast<double>(static_cast<int>(*v)))
            throw InvalidArgument(fmt::format("[{}] {}: expected an integer", name_, key));
        return static_cast<int>(*v);
    }

    std::optional<bool> flag(const std::string& key) {
        const auto t = text(key);
        if (!t) return std::nullopt;
        const std::string v = lower(*t);
        if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
        if (v == "false" || v == "no" || v == "off" || v == "0") return false;
        throw InvalidArgument(fmt::format("[{}] {}: '{}' is not a boolean", name_, key, *t));
    }

    std::optional<std::vector<double>> list(const std::string& key) {
        const auto t = text(key);
        if (!t) return std::nullopt;
        try {
            return parse_list(*t);
        } catch (const InvalidArgument& e) {
            throw InvalidArgument(fmt::format("[{}] {}: {}", name_, key, e.what()));
        }
    }

    std::optional<std::vector<std::string>> words(const std::string& key) {
        const auto t = text(key);
        if (!t) return std::nullopt;
        std::vector<std::string> out;
        std::stringstream ss(*t);
        for (std::string item; std::getline(ss, item, ',');)
            if (!trim(item).empty()) out.push_back(trim(item));
        return out;
    }

    void finish() const {
        for (const auto& [k, v] : values_)
            if (!used_.count(k)) throw InvalidArgument(fmt::format("[{}] unknown key '{}'", name_, k));
    }

private:
    std::string name_;
    Section values_;
    std::set<std::string> used_;
};

void read_material(SectionReader& r, MaterialSet& m) {
    if (auto v = r.text("name")) m.name = *v;
    if (auto v = r.number("c11")) m.c11 = *v;
    if (auto v = r.number("c44")) m.c44 = *v;
    if (auto v = r.number("rho")) m.rho = *v;
    if (auto t = r.text("v_l_override"); t && lower(*t) == "none")
        m.v_l_override.reset();
    else if (auto v = r.number("v_l_override"))
        m.v_l_override = *v;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string join(const std::vector<double>& v, double scale) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i] * scale);
    return out;
}

std::vector<int> to_ints(const std::vector<double>& v, const char* what) {
    std::vector<int> out;
    for (double x : v) {
        if (x != static_cast<double>(static_cast<int>(x)))
            throw InvalidArgument(fmt::format("{}: expected integers", what));
        out.push_back(static_cast<int>(x));
    }
    return out;
}

std::vector<double> scaled(std::vector<double> v, double k) {
    for (auto& x : v) x *= k;
    return v;
}

}  // namespace

std::vector<double> GridConfig::frequencies() const {
    if (n_points < 2) return n_points == 1 ? std::vector<double>{f_start} : std::vector<double>{};
    std::vector<double> f(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i)
        f[i] = f_start + (f_stop - f_start) * static_cast<double>(i) / (n_points - 1);
    return f;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidArgument(fmt::format("'{}' is not a number", item));
        }
    }
    return out;
}

ElectrodeMaterial RunConfig::electrode(const std::string& name) const {
    for (const auto& e : electrodes)
        if (lower(e.name) == lower(name)) return e;
    return builtin_electrode(name);
}

AdlDesign RunConfig::make_design(double lambda, int n_cells, const std::string& metal,
                                 double gap_lg) const {
    TransducerGeometry g;
    g.cell_length = lambda;
    g.n_cells = n_cells;
    g.duty = design.duty;
    g.aperture = design.aperture;
    g.electrode_thickness = design.metal_thickness;
    g.electrode = electrode(metal);

    AdlDesign d;
    d.tx = g;
    d.rx = g;
    d.gap_lg = gap_lg;
    d.pl_db_per_us = design.pl_db_per_us;
    d.gamma_tt = design.gamma_tt;
    d.feedthrough_c = design.feedthrough_c;
    d.electrical_loading = design.electrical_loading;
    d.transducer.source = design.mass_loading ? DispersionSource::Loaded : DispersionSource::Massless;
    d.transducer.c_cell = design.c_cell;
    d.transducer.k2 = design.k2;
    return d;
}

void RunConfig::validate() const {
    plate.validate();
    for (const auto& e : electrodes) e.validate();
    if (!(grid.f_stop > grid.f_start) || !(grid.f_start > 0.0))
        throw InvalidArgument("[grid] needs 0 < f_start_ghz < f_stop_ghz");
    if (grid.n_points < 2) throw InvalidArgument("[grid] n_points must be >= 2");
    if (dispersion.n_branches < 1 || dispersion.beta_points < 2 || !(dispersion.f_max > 0.0))
        throw InvalidArgument("[dispersion] needs n_branches >= 1, beta_points >= 2, f_max_ghz > 0");
    if (extraction.window < 1 || extraction.order < 0)
        throw InvalidArgument("[extraction] window must be >= 1 and order >= 0");
    for (const auto& m : sweep.metals) (void)electrode(m);
    for (double l : sweep.lambdas)
        for (int n : sweep.n_cells)
            for (const auto& m : sweep.metals)
                for (double g : sweep.gaps) make_design(l, n, m, g).validate();
}

RunConfig default_config() {
    RunConfig c;
    c.sweep.lambdas = {c.design.lambda};
    c.sweep.n_cells = {c.design.n_cells};
    c.sweep.gaps = {c.design.gap_lg};
    c.sweep.metals = {c.design.metal};
    for (double l = 1.0; l <= 10.0 + 1e-9; l += 0.25) c.dispersion.lambdas.push_back(l * 1e-6);
    return c;
}

RunConfig load_config(std::istream& is) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ParseError(fmt::format("config line {}: {}", e.line(), e.message()), e.line());
    }

    RunConfig c = default_config();
    std::map<std::string, SectionReader> sections;
    for (const auto& [name, child] : tree) {
        if (child.empty() && !child.data().empty())
            throw InvalidArgument(fmt::format("config key '{}' outside a section", name));
        Section values;
        for (const auto& [k, v] : child) values[k] = v.data();
        sections.emplace(lower(name), SectionReader(name, std::move(values)));
    }

    if (auto it = sections.find("plate"); it != sections.end()) {
        if (auto v = it->second.number("thickness_um")) c.plate.thickness_b = *v * 1e-6;
    }
    if (auto it = sections.find("material.short"); it != sections.end())
        read_material(it->second, c.plate.short_set);
    if (auto it = sections.find("material.open"); it != sections.end())
        read_material(it->second, c.plate.open_set);

    for (auto& [name, r] : sections) {
        if (name.rfind("electrode.", 0) != 0) continue;
        const std::string metal = name.substr(10);
        ElectrodeMaterial e;
        try {
            e = builtin_electrode(metal);
        } catch (const InvalidArgument&) {
            e.name = metal;
        }
        if (auto v = r.text("name")) e.name = *v;
        if (auto v = r.number("rho")) e.rho = *v;
        if (auto v = r.number("v_s")) e.v_s = *v;
        if (auto v = r.number("v_l")) e.v_l = *v;
        if (auto v = r.number("resistivity")) e.resistivity = *v;
        if (auto v = r.number("resistivity_scale")) e.resistivity_scale = *v;
        c.electrodes.push_back(e);
    }

    if (auto it = sections.find("design"); it != sections.end()) {
        auto& r = it->second;
        auto& d = c.design;
        if (auto v = r.number("lambda_um")) d.lambda = *v * 1e-6;
        if (auto v = r.integer("n_cells")) d.n_cells = *v;
        if (auto v = r.number("duty")) d.duty = *v;
        if (auto v = r.number("aperture_um")) d.aperture = *v * 1e-6;
        if (auto v = r.number("gap_um")) d.gap_lg = *v * 1e-6;
        if (auto v = r.text("metal")) d.metal = *v;
        if (auto v = r.number("metal_thickness_um")) d.metal_thickness = *v * 1e-6;
        if (auto v = r.number("pl_db_per_us")) d.pl_db_per_us = *v;
        if (auto v = r.number("gamma_tt")) d.gamma_tt = *v;
        if (auto v = r.number("feedthrough_ff")) d.feedthrough_c = *v * 1e-15;
        if (auto v = r.flag("electrical_loading")) d.electrical_loading = *v;
        if (auto v = r.flag("mass_loading")) d.mass_loading = *v;
        if (auto v = r.number("c_cell_f_per_m")) d.c_cell = *v;
        if (auto v = r.number("k2")) d.k2 = *v;
        if (auto v = r.text("z_ref_ohm")) {
            if (lower(*v) == "matched") d.z_ref.reset();
            else d.z_ref = *r.number("z_ref_ohm");
        }
    }
    c.sweep.lambdas = {c.design.lambda};
    c.sweep.n_cells = {c.design.n_cells};
    c.sweep.gaps = {c.design.gap_lg};
    c.sweep.metals = {c.design.metal};

    if (auto it = sections.find("sweep"); it != sections.end()) {
        auto& r = it->second;
        if (auto v = r.list("lambda_um")) c.sweep.lambdas = scaled(*v, 1e-6);
        if (auto v = r.list("n_cells")) c.sweep.n_cells = to_ints(*v, "[sweep] n_cells");
        if (auto v = r.list("gap_um")) c.sweep.gaps = scaled(*v, 1e-6);
        if (auto v = r.words("metal")) c.sweep.metals = *v;
    }
    if (auto it = sections.find("grid"); it != sections.end()) {
        auto& r = it->second;
        if (auto v = r.number("f_start_ghz")) c.grid.f_start = *v * 1e9;
        if (auto v = r.number("f_stop_ghz")) c.grid.f_stop = *v * 1e9;
        if (auto v = r.integer("n_points")) c.grid.n_points = *v;
    }
    if (auto it = sections.find("dispersion"); it != sections.end()) {
        auto& r = it->second;
        if (auto v = r.number("f_max_ghz")) c.dispersion.f_max = *v * 1e9;
        if (auto v = r.integer("n_branches")) c.dispersion.n_branches = *v;
        if (auto v = r.integer("beta_points")) c.dispersion.beta_points = *v;
        if (auto v = r.list("lambda_um")) c.dispersion.lambdas = scaled(*v, 1e-6);
    }
    if (auto it = sections.find("extraction"); it != sections.end()) {
        auto& r = it->second;
        if (auto v = r.integer("window")) c.extraction.window = *v;
        if (auto v = r.integer("order")) c.extraction.order = *v;
        if (auto v = r.number("f_eval_ghz")) c.extraction.f_eval = *v * 1e9;
        if (auto v = r.number("noise_floor_db")) c.extraction.noise_floor_db = *v;
    }

    static const std::set<std::string> kKnown = {"plate",  "material.short", "material.open",
                                                 "design", "sweep",          "grid",
                                                 "dispersion", "extraction"};
    for (auto& [name, r] : sections) {
        if (!kKnown.count(name) && name.rfind("electrode.", 0) != 0)
            throw InvalidArgument(fmt::format("unknown config section [{}]", name));
        r.finish();
    }
    c.validate();
    return c;
}

void write_config(std::ostream& os, const RunConfig& c) {
    os << "[plate]\nthickness_um = " << num(c.plate.thickness_b * 1e6) << "\n";
    for (const auto& [section, m] : {std::pair{"material.short", &c.plate.short_set},
                                     std::pair{"material.open", &c.plate.open_set}}) {
        os << "\n[" << section << "]\nname = " << m->name << "\nc11 = " << num(m->c11)
           << "\nc44 = " << num(m->c44) << "\nrho = " << num(m->rho) << "\nv_l_override = "
           << (m->v_l_override ? num(*m->v_l_override) : std::string("none")) << "\n";
    }
    std::vector<ElectrodeMaterial> metals = {builtin_aluminum(), builtin_gold(), builtin_molybdenum()};
    for (const auto& e : c.electrodes) {
        auto it = std::find_if(metals.begin(), metals.end(),
                               [&](const ElectrodeMaterial& m) { return lower(m.name) == lower(e.name); });
        if (it != metals.end()) *it = e;
        else metals.push_back(e);
    }
    for (const auto& e : metals)
        os << "\n[electrode." << e.name << "]\nname = " << e.name << "\nrho = " << num(e.rho)
           << "\nv_s = " << num(e.v_s) << "\nv_l = " << num(e.v_l) << "\nresistivity = "
           << num(e.resistivity) << "\nresistivity_scale = " << num(e.resistivity_scale) << "\n";

    const auto& d = c.design;
    os << "\n[design]\nlambda_um = " << num(d.lambda * 1e6) << "\nn_cells = " << d.n_cells
       << "\nduty = " << num(d.duty) << "\naperture_um = " << num(d.aperture * 1e6)
       << "\ngap_um = " << num(d.gap_lg * 1e6) << "\nmetal = " << d.metal
       << "\nmetal_thickness_um = " << num(d.metal_thickness * 1e6)
       << "\npl_db_per_us = " << num(d.pl_db_per_us) << "\ngamma_tt = " << num(d.gamma_tt)
       << "\nfeedthrough_ff = " << num(d.feedthrough_c * 1e15)
       << "\nelectrical_loading = " << (d.electrical_loading ? "true" : "false")
       << "\nmass_loading = " << (d.mass_loading ? "true" : "false") << "\n";
    if (d.c_cell) os << "c_cell_f_per_m = " << num(*d.c_cell) << "\n";
    if (d.k2) os << "k2 = " << num(*d.k2) << "\n";
    os << "z_ref_ohm = " << (d.z_ref ? num(*d.z_ref) : std::string("matched")) << "\n";

    std::vector<double> cells(c.sweep.n_cells.begin(), c.sweep.n_cells.end());
    std::string metals_list;
    for (std::size_t i = 0; i < c.sweep.metals.size(); ++i)
        metals_list += (i ? ", " : "") + c.sweep.metals[i];
    os << "\n[sweep]\nlambda_um = " << join(c.sweep.lambdas, 1e6) << "\nn_cells = " << join(cells, 1.0)
       << "\ngap_um = " << join(c.sweep.gaps, 1e6) << "\nmetal = " << metals_list << "\n";
    os << "\n[grid]\nf_start_ghz = " << num(c.grid.f_start * 1e-9) << "\nf_stop_ghz = "
       << num(c.grid.f_stop * 1e-9) << "\nn_points = " << c.grid.n_points << "\n";
    os << "\n[dispersion]\nf_max_ghz = " << num(c.dispersion.f_max * 1e-9)
       << "\nn_branches = " << c.dispersion.n_branches << "\nbeta_points = " << c.dispersion.beta_points
       << "\nlambda_um = " << join(c.dispersion.lambdas, 1e6) << "\n";
    os << "\n[extraction]\nwindow = " << c.extraction.window << "\norder = " << c.extraction.order
       << "\nnoise_floor_db = " << num(c.extraction.noise_floor_db) << "\n";
    if (c.extraction.f_eval) os << "f_eval_ghz = " << num(*c.extraction.f_eval * 1e-9) << "\n";
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config " + path.string());
    return load_config(is);
}

}  // namespace adl
