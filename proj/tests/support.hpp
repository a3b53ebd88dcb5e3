#pragma once

// Shared fixtures and independent reference computations for the test suites.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adl/network.hpp"

namespace adl::test {

inline constexpr double kPi = std::numbers::pi;

// Raw constants, kept separate from the library tables on purpose.
inline constexpr double kRhoLn = 4700.0;
inline constexpr double kC11Short = 2.03e11;
inline constexpr double kC44Short = 0.60e11;
inline constexpr double kC44Open = 0.95e11;
inline constexpr double kVlOpenTable = 6795.0;
inline constexpr double kThickness = 490e-9;

inline TransducerGeometry group_a_geometry(int n_cells = 4, double lambda = 2.4e-6) {
    TransducerGeometry g;
    g.cell_length = lambda;
    g.n_cells = n_cells;
    g.duty = 0.5;
    g.aperture = 50e-6;
    g.electrode_thickness = 30e-9;
    g.electrode = builtin_aluminum();
    return g;
}

inline AdlDesign group_a_design(double gap, int n_cells = 4, double lambda = 2.4e-6) {
    AdlDesign d;
    d.tx = d.rx = group_a_geometry(n_cells, lambda);
    d.gap_lg = gap;
    d.gamma_tt = 0.0;
    return d;
}

/// Lossless: no series resistance, no path loss, no echoes, no feedthrough.
inline AdlDesign lossless(AdlDesign d) {
    d.electrical_loading = false;
    d.pl_db_per_us = 0.0;
    d.gamma_tt = 0.0;
    d.feedthrough_c = 0.0;
    return d;
}

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

inline SynthesisOptions matched() {
    SynthesisOptions o;
    o.reference = ReferenceMode::Matched;
    return o;
}

/// Antisymmetric / symmetric Rayleigh-Lamb determinant in complex arithmetic,
/// divided by p (antisymmetric) or q (symmetric) so that it is real.
inline double lamb_oracle(double f, double beta, double v_l, double v_s, double b, bool antisym) {
    using C = std::complex<double>;
    const double h = b / 2.0;
    const double w = 2.0 * kPi * f;
    const C p = std::sqrt(C(w * w / (v_l * v_l) - beta * beta, 0.0));
    const C q = std::sqrt(C(w * w / (v_s * v_s) - beta * beta, 0.0));
    const double k2 = beta * beta;
    const C sp = std::abs(p) > 0.0 ? std::sin(p * h) / p : C(h);
    const C sq = std::abs(q) > 0.0 ? std::sin(q * h) / q : C(h);
    C v;
    if (antisym)
        v = 4.0 * k2 * q * q * sq * std::cos(p * h) + (q * q - k2) * (q * q - k2) * sp * std::cos(q * h);
    else
        v = (q * q - k2) * (q * q - k2) * sq * std::cos(p * h) + 4.0 * k2 * p * p * sp * std::cos(q * h);
    return v.real();
}

/// Savitzky-Golay by a fresh least-squares fit at every point. Window rule:
/// centered, truncated at the ends, widened inward to order + 1 samples.
inline std::vector<double> savgol_oracle(std::span<const double> y, int window, int order) {
    const int w = window % 2 == 0 ? window + 1 : window;
    const int h = w / 2;
    const int n = static_cast<int>(y.size());
    std::vector<double> out(y.size());
    for (int i = 0; i < n; ++i) {
        int lo = std::max(0, i - h), hi = std::min(n - 1, i + h);
        while (hi - lo < order) {
            if (lo > 0) --lo;
            else ++hi;
        }
        const int m = hi - lo + 1;
        Eigen::MatrixXd a(m, order + 1);
        Eigen::VectorXd rhs(m);
        for (int r = 0; r < m; ++r) {
            const double x = static_cast<double>(lo + r - i) / std::max(1, h);
            for (int c = 0; c <= order; ++c) a(r, c) = std::pow(x, c);
            rhs(r) = y[lo + r];
        }
        const Eigen::VectorXd coef = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
        out[i] = coef(0);
    }
    return out;
}

/// Deterministic random source for the property checks.
class Random {
public:
    explicit Random(std::uint64_t seed) : gen_(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(gen_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
    Complex complex_in_disk(double radius) {
        const double r = radius * std::sqrt(uniform(0.0, 1.0));
        return std::polar(r, uniform(-kPi, kPi));
    }

private:
    std::mt19937_64 gen_;
};

inline double max_abs_diff(const SMatrix& a, const SMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace adl::test
