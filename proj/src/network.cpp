#include "adl/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "adl/error.hpp"

namespace adl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kJ{0.0, 1.0};

void check_reference(Complex z, const char* what) {
    if (!(z.real() > 0.0))
        throw InvalidArgument(fmt::format("{}: reference impedance needs a positive real part", what));
}

Eigen::Matrix2cd diag(Complex a, Complex b) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

std::size_t nearest_index(std::span<const double> grid, double f) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (std::abs(grid[i] - f) < std::abs(grid[best] - f)) best = i;
    return best;
}

Complex port_impedance(const TransducerResponse& r, std::size_t i, bool with_rs) {
    return (with_rs ? r.r_s : 0.0) + 1.0 / r.admittance_at(i);
}

}  // namespace

void TwoPortNetwork::validate() const {
    if (s.size() != f_grid.size()) throw InvalidArgument("network grid and S sizes differ");
    check_reference(z_ref_1, "network");
    check_reference(z_ref_2, "network");
}

void AdlDesign::validate() const {
    tx.validate();
    rx.validate();
    if (!(gap_lg >= 0.0)) throw InvalidArgument("gap length must be >= 0");
    if (!(gamma_tt >= 0.0 && gamma_tt < 1.0)) throw InvalidArgument("gamma_tt must lie in [0, 1)");
    if (!(feedthrough_c >= 0.0)) throw InvalidArgument("feedthrough capacitance must be >= 0");
    for (std::size_t i = 1; i < pl_table.size(); ++i)
        if (!(pl_table[i].first > pl_table[i - 1].first))
            throw InvalidArgument("loss table frequencies must be increasing");
}

double AdlDesign::path_length() const { return gap_lg + 0.5 * (tx.length() + rx.length()); }

double AdlDesign::pl_at(double f) const {
    if (pl_table.empty()) return pl_db_per_us;
    if (f <= pl_table.front().first) return pl_table.front().second;
    if (f >= pl_table.back().first) return pl_table.back().second;
    const auto hi = std::lower_bound(pl_table.begin(), pl_table.end(), f,
                                     [](const auto& p, double x) { return p.first < x; });
    const auto lo = hi - 1;
    const double w = (f - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

double DelaySpec::group_delay_at(double f) const {
    return path_length / a1_vg(f, plate, BoundaryCondition::Open);
}

DelaySpec delay_spec(const AdlDesign& design, const PlateSpec& plate) {
    return {design.path_length(), plate};
}

Eigen::Matrix2cd s_to_y(const SMatrix& s, Complex z1, Complex z2) {
    check_reference(z1, "s_to_y");
    check_reference(z2, "s_to_y");
    const Eigen::Matrix2cd g = diag(z1, z2);
    const Eigen::Matrix2cd gc = diag(std::conj(z1), std::conj(z2));
    const Eigen::Matrix2cd f = diag(0.5 / std::sqrt(z1.real()), 0.5 / std::sqrt(z2.real()));
    const Eigen::Matrix2cd f_inv = diag(2.0 * std::sqrt(z1.real()), 2.0 * std::sqrt(z2.real()));
    const Eigen::Matrix2cd sp = f_inv * s * f;
    return (sp * g + gc).inverse() * (Eigen::Matrix2cd::Identity() - sp);
}

SMatrix y_to_s(const Eigen::Matrix2cd& y, Complex z1, Complex z2) {
    check_reference(z1, "y_to_s");
    check_reference(z2, "y_to_s");
    const Eigen::Matrix2cd g = diag(z1, z2);
    const Eigen::Matrix2cd gc = diag(std::conj(z1), std::conj(z2));
    const Eigen::Matrix2cd f = diag(0.5 / std::sqrt(z1.real()), 0.5 / std::sqrt(z2.real()));
    const Eigen::Matrix2cd f_inv = diag(2.0 * std::sqrt(z1.real()), 2.0 * std::sqrt(z2.real()));
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    return f * (id - gc * y) * (id + g * y).inverse() * f_inv;
}

double max_singular_value(const SMatrix& s) {
    Eigen::JacobiSVD<SMatrix> svd(s);
    return svd.singularValues()(0);
}

Synthesis synthesize_detailed(const AdlDesign& design, const PlateSpec& plate,
                              std::span<const double> f_grid, const SynthesisOptions& options) {
    design.validate();
    plate.validate();
    if (options.reference == ReferenceMode::Fixed) {
        check_reference(options.z1, "synthesize");
        check_reference(options.z2, "synthesize");
    }

    Synthesis out;
    const double fc_open = a1_cutoff(plate, BoundaryCondition::Open);
    const double fc_short = a1_cutoff(plate, BoundaryCondition::Short);
    TransducerOptions topt = design.transducer;
    if (!f_grid.empty() && f_grid.back() < std::min(fc_open, fc_short)) {
        out.warnings.emplace_back("frequency grid lies below both cutoffs: empty passband");
        topt.min_lobe_points = 0;
    }
    out.tx = admittance(design.tx, plate, f_grid, topt);
    out.rx = admittance(design.rx, plate, f_grid, topt);

    const bool rs = design.electrical_loading;
    Complex zr1 = options.z1, zr2 = options.z2;
    if (options.reference == ReferenceMode::Matched) {
        zr1 = std::conj(port_impedance(out.tx, nearest_index(f_grid, out.tx.f_center), rs));
        zr2 = std::conj(port_impedance(out.rx, nearest_index(f_grid, out.rx.f_center), rs));
        check_reference(zr1, "synthesize");
        check_reference(zr2, "synthesize");
    }

    const double ell = design.path_length();
    const double vl_open = effective_longitudinal_velocity(plate.open_set);
    const double g2 = design.gamma_tt * design.gamma_tt;

    auto port = [&](const TransducerResponse& r, std::size_t i, Complex zr, Complex& gamma,
                    double& conversion, Complex& phase) {
        const Complex y = r.admittance_at(i);
        const Complex z = port_impedance(r, i, rs);
        gamma = (z - std::conj(zr)) / (z + zr);
        const double ra = (1.0 / y).real();
        const double eta = z.real() > 0.0 ? ra / z.real() : 0.0;
        conversion = std::sqrt(std::max(0.0, (1.0 - std::norm(gamma)) * eta));
        const double mag = std::abs(r.h[i]);
        phase = mag > 0.0 ? r.h[i] / mag : Complex(1.0, 0.0);
    };

    TwoPortNetwork& net = out.net;
    net.f_grid.assign(f_grid.begin(), f_grid.end());
    net.z_ref_1 = zr1;
    net.z_ref_2 = zr2;
    net.s.resize(f_grid.size());
    for (std::size_t i = 0; i < f_grid.size(); ++i) {
        const double f = f_grid[i];
        Complex g1, g2p, u1, u2;
        double t1 = 0.0, t2 = 0.0;
        port(out.tx, i, zr1, g1, t1, u1);
        port(out.rx, i, zr2, g2p, t2, u2);

        const Complex beta = a1_wavenumber(f, fc_open, vl_open);
        const Complex ph = std::exp(-kJ * beta * ell);
        const double vg = f > fc_open ? vl_open * std::sqrt(1.0 - (fc_open / f) * (fc_open / f)) : 0.0;
        const double pl = design.pl_at(f);
        double a = 1.0;
        if (vg > 0.0)
            a = std::pow(10.0, -pl * (ell / vg) * 1e6 / 20.0);
        else if (pl > 0.0)
            a = 0.0;
        const Complex tts = (1.0 + g2 * a * a * ph * ph) / (1.0 + g2);
        const Complex s21 = 0.5 * t1 * t2 * u1 * u2 * a * ph * tts;

        SMatrix s;
        s << g1, s21, s21, g2p;
        if (design.feedthrough_c > 0.0) {
            const Complex yc = kJ * kTwoPi * f * design.feedthrough_c;
            Eigen::Matrix2cd y = s_to_y(s, zr1, zr2);
            y(0, 0) += yc;
            y(1, 1) += yc;
            y(0, 1) -= yc;
            y(1, 0) -= yc;
            s = y_to_s(y, zr1, zr2);
            const Complex avg = 0.5 * (s(0, 1) + s(1, 0));
            s(0, 1) = avg;
            s(1, 0) = avg;
        }
        net.s[i] = s;
    }
    return out;
}

TwoPortNetwork synthesize(const AdlDesign& design, const PlateSpec& plate,
                          std::span<const double> f_grid, const SynthesisOptions& options) {
    return synthesize_detailed(design, plate, f_grid, options).net;
}

TwoPortNetwork renormalize(const TwoPortNetwork& net, Complex z_new_1, Complex z_new_2) {
    net.validate();
    check_reference(z_new_1, "renormalize");
    check_reference(z_new_2, "renormalize");

    auto coeffs = [](Complex z, Complex zn) {
        const double k = 1.0 / (2.0 * std::sqrt(z.real() * zn.real()));
        struct {
            Complex p, q, m, n;
        } c{(zn + std::conj(z)) * k, (z - zn) * k, (std::conj(z) - std::conj(zn)) * k,
            (z + std::conj(zn)) * k};
        return c;
    };
    const auto c1 = coeffs(net.z_ref_1, z_new_1);
    const auto c2 = coeffs(net.z_ref_2, z_new_2);
    const Eigen::Matrix2cd p = diag(c1.p, c2.p);
    const Eigen::Matrix2cd q = diag(c1.q, c2.q);
    const Eigen::Matrix2cd m = diag(c1.m, c2.m);
    const Eigen::Matrix2cd n = diag(c1.n, c2.n);

    TwoPortNetwork out;
    out.f_grid = net.f_grid;
    out.z_ref_1 = z_new_1;
    out.z_ref_2 = z_new_2;
    out.s.resize(net.s.size());
    for (std::size_t i = 0; i < net.s.size(); ++i)
        out.s[i] = (m + n * net.s[i]) * (p + q * net.s[i]).inverse();
    return out;
}

MatchResult conjugate_match(const TwoPortNetwork& net) {
    net.validate();
    if (net.size() == 0) throw InvalidArgument("conjugate_match: empty network");
    std::size_t best = 0;
    for (std::size_t i = 1; i < net.size(); ++i)
        if (std::abs(net.s21(i)) > std::abs(net.s21(best))) best = i;
    if (!(std::abs(net.s21(best)) > 0.0))
        throw InvalidArgument("conjugate_match: no transmission passband");

    constexpr double kZ0 = 50.0;
    TwoPortNetwork point;
    point.f_grid = {net.f_grid[best]};
    point.s = {net.s[best]};
    point.z_ref_1 = net.z_ref_1;
    point.z_ref_2 = net.z_ref_2;
    const SMatrix s = renormalize(point, kZ0, kZ0).s[0];

    const Complex s11 = s(0, 0), s12 = s(0, 1), s21 = s(1, 0), s22 = s(1, 1);
    const Complex delta = s11 * s22 - s12 * s21;
    const double b1 = 1.0 + std::norm(s11) - std::norm(s22) - std::norm(delta);
    const double b2 = 1.0 + std::norm(s22) - std::norm(s11) - std::norm(delta);
    const Complex c1 = s11 - delta * std::conj(s22);
    const Complex c2 = s22 - delta * std::conj(s11);
    const double d1 = b1 * b1 - 4.0 * std::norm(c1);
    const double d2 = b2 * b2 - 4.0 * std::norm(c2);

    auto to_z = [&](Complex gamma) { return kZ0 * (1.0 + gamma) / (1.0 - gamma); };
    auto root = [](double b, Complex c, double d) -> Complex {
        if (std::abs(c) == 0.0) return 0.0;
        const double sign = b >= 0.0 ? 1.0 : -1.0;
        return (b - sign * std::sqrt(d)) / (2.0 * c);
    };

    MatchResult r;
    r.f = net.f_grid[best];
    if (d1 >= 0.0 && d2 >= 0.0) {
        const Complex gs = root(b1, c1, d1);
        const Complex gl = root(b2, c2, d2);
        if (std::abs(gs) < 1.0 && std::abs(gl) < 1.0) {
            r.z1 = to_z(gs);
            r.z2 = to_z(gl);
            if (r.z1.real() > 0.0 && r.z2.real() > 0.0) return r;
        }
    }
    r.fallback = true;
    r.z1 = std::conj(to_z(s11));
    r.z2 = std::conj(to_z(s22));
    if (!(r.z1.real() > 0.0 && r.z2.real() > 0.0))
        throw InvalidArgument("conjugate_match: port impedance has no positive real part");
    return r;
}

}  // namespace adl
