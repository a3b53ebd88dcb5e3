#include "adl/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "adl/error.hpp"

namespace adl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMagFloor = 1e-10;

// Row of the least-squares pseudo-inverse that yields the fitted value at offset 0.
Eigen::VectorXd savgol_weights(int first, int last, int order) {
    const int m = last - first + 1;
    const double scale = std::max(std::abs(first), std::abs(last));
    Eigen::MatrixXd v(m, order + 1);
    for (int r = 0; r < m; ++r) {
        const double x = scale > 0 ? (first + r) / scale : 0.0;
        double p = 1.0;
        for (int c = 0; c <= order; ++c) {
            v(r, c) = p;
            p *= x;
        }
    }
    const Eigen::MatrixXd pinv = v.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(m, m));
    return pinv.row(0).transpose();
}

double interp(std::span<const double> x, std::span<const double> y, double at) {
    if (at <= x.front()) return y.front();
    if (at >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    const double w = (at - x[j - 1]) / (x[j] - x[j - 1]);
    return y[j - 1] + w * (y[j] - y[j - 1]);
}

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};

Line ols(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Line l;
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (l.intercept + l.slope * x[i]);
        ss_res += e * e;
    }
    l.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return l;
}

// Smoothed delay and loss curves of one family member on its own grid.
struct Prepared {
    std::vector<double> f;
    std::vector<double> tau;
    std::vector<bool> valid;
    std::vector<double> il_raw;
    std::vector<double> il;
};

std::vector<double> smooth_segments(std::span<const double> y, const std::vector<bool>& valid,
                                    int window, int order) {
    std::vector<double> out(y.begin(), y.end());
    std::size_t i = 0;
    while (i < y.size()) {
        if (!valid[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < y.size() && valid[j]) ++j;
        const int len = static_cast<int>(j - i);
        int w = std::min(savgol_window(window), len % 2 == 1 ? len : len - 1);
        if (w >= 1) {
            const auto s = savgol(y.subspan(i, j - i), w, std::min(order, w - 1));
            std::copy(s.begin(), s.end(), out.begin() + static_cast<std::ptrdiff_t>(i));
        }
        i = j;
    }
    return out;
}

Prepared prepare(const TwoPortNetwork& net, int window, int order) {
    Prepared p;
    const GroupDelay gd = group_delay(net);
    p.f = gd.f;
    p.valid = gd.valid;
    p.tau = smooth_segments(gd.tau, gd.valid, window, order);
    p.il_raw = insertion_loss_db(net);
    const int w = savgol_window(window);
    p.il = savgol(p.il_raw, w, std::min(order, w - 1));
    return p;
}

void check_family(std::span<const FamilyMember> family) {
    if (family.size() < 2) throw InvalidArgument("propagation fit needs at least two networks");
    std::vector<double> gaps;
    for (const auto& m : family) {
        if (m.net.f_grid != family.front().net.f_grid)
            throw InvalidArgument("propagation fit needs a common frequency grid");
        gaps.push_back(m.lg);
    }
    std::sort(gaps.begin(), gaps.end());
    if (std::unique(gaps.begin(), gaps.end()) - gaps.begin() < 2)
        throw InvalidArgument("propagation fit needs at least two distinct gap lengths");
}

std::optional<PropagationFit> fit_at(std::span<const Prepared> prepared,
                                     std::span<const FamilyMember> family, double f_eval,
                                     const FitOptions& options) {
    const auto& grid = prepared.front().f;
    if (f_eval < grid.front() || f_eval > grid.back())
        throw InvalidArgument(fmt::format("f_eval {} Hz outside the grid", f_eval));
    const auto it = std::lower_bound(grid.begin(), grid.end(), f_eval);
    const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    const std::size_t lo = (hi > 0 && grid[hi] != f_eval) ? hi - 1 : hi;

    std::vector<double> x, tau_us, il;
    for (std::size_t k = 0; k < prepared.size(); ++k) {
        const auto& p = prepared[k];
        if (!p.valid[lo] || !p.valid[hi]) return std::nullopt;
        if (p.il_raw[lo] > options.noise_floor_db || p.il_raw[hi] > options.noise_floor_db)
            return std::nullopt;
        x.push_back(family[k].lg * 1e6);
        tau_us.push_back(interp(p.f, p.tau, f_eval) * 1e6);
        il.push_back(interp(p.f, p.il, f_eval));
    }
    const Line d = ols(x, tau_us);
    const Line l = ols(x, il);
    PropagationFit fit;
    fit.f = f_eval;
    fit.vg = 1.0 / d.slope;
    fit.pl_db_per_um = l.slope;
    fit.pl_db_per_us = pl_db_per_us_from(l.slope, fit.vg);
    fit.intercept_il_db = l.intercept;
    fit.intercept_delay = d.intercept * 1e-6;
    fit.r_squared_delay = d.r2;
    fit.r_squared_il = l.r2;
    fit.negative_pl = l.slope < 0.0;
    return fit;
}

}  // namespace

int savgol_window(int window) {
    if (window < 1) throw InvalidArgument("savgol window must be >= 1");
    return window % 2 == 0 ? window + 1 : window;
}

std::vector<double> savgol(std::span<const double> values, int window, int order) {
    const int w = savgol_window(window);
    if (order < 0 || order >= w) throw InvalidArgument("savgol order must lie in [0, window)");
    const int n = static_cast<int>(values.size());
    if (n < w) throw InvalidArgument(fmt::format("savgol: series of {} shorter than window {}", n, w));
    if (w == 1) return {values.begin(), values.end()};

    const int h = w / 2;
    const Eigen::VectorXd centre = savgol_weights(-h, h, order);
    std::vector<double> out(values.size());
    for (int i = 0; i < n; ++i) {
        int lo = std::max(0, i - h);
        int hi = std::min(n - 1, i + h);
        if (lo == i - h && hi == i + h) {
            double acc = 0.0;
            for (int k = 0; k < w; ++k) acc += centre(k) * values[lo + k];
            out[i] = acc;
            continue;
        }
        while (hi - lo < order) {
            if (lo > 0) --lo;
            else ++hi;
        }
        const Eigen::VectorXd wts = savgol_weights(lo - i, hi - i, order);
        double acc = 0.0;
        for (int k = 0; k <= hi - lo; ++k) acc += wts(k) * values[lo + k];
        out[i] = acc;
    }
    return out;
}

std::vector<double> insertion_loss_db(const TwoPortNetwork& net) {
    std::vector<double> il(net.size());
    for (std::size_t i = 0; i < net.size(); ++i)
        il[i] = -20.0 * std::log10(std::max(std::abs(net.s21(i)), kMagFloor));
    return il;
}

GroupDelay group_delay(const TwoPortNetwork& net) {
    net.validate();
    const std::size_t n = net.size();
    GroupDelay gd;
    gd.f = net.f_grid;
    gd.tau.assign(n, std::numeric_limits<double>::quiet_NaN());
    gd.valid.assign(n, false);
    for (std::size_t i = 1; i < n; ++i)
        if (!(net.f_grid[i] > net.f_grid[i - 1]))
            throw InvalidArgument("group_delay: frequency grid must be increasing");

    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(net.s21(i)));
    const double strong = peak * 0.1;  // within 20 dB of the peak

    std::vector<bool> present(n);
    for (std::size_t i = 0; i < n; ++i) present[i] = std::abs(net.s21(i)) > 0.0;

    // Unwrapped phase increments, taken from the ratio of neighbours so that no
    // absolute phase (and its rounding) accumulates.
    std::vector<double> step(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        if (!present[i] || !present[i - 1]) continue;
        step[i] = std::arg(net.s21(i) * std::conj(net.s21(i - 1)));
        if (std::abs(step[i]) > 0.9 * std::numbers::pi && std::abs(net.s21(i)) >= strong &&
            std::abs(net.s21(i - 1)) >= strong)
            throw ResolutionError(fmt::format(
                "phase step of {:.3f} rad at {:.6g} Hz: grid too coarse to unwrap", step[i],
                net.f_grid[i]));
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!present[i]) continue;
        const bool left = i > 0 && present[i - 1];
        const bool right = i + 1 < n && present[i + 1];
        if (!left && !right) continue;
        const std::size_t a = left ? i - 1 : i;
        const std::size_t b = right ? i + 1 : i;
        const double dphi = (left ? step[i] : 0.0) + (right ? step[i + 1] : 0.0);
        gd.tau[i] = -dphi / (kTwoPi * (net.f_grid[b] - net.f_grid[a]));
        gd.valid[i] = true;
    }
    return gd;
}

BandMetrics band_metrics(const TwoPortNetwork& net, int smoothing_window, int order) {
    net.validate();
    const int w = savgol_window(smoothing_window);
    const auto raw = insertion_loss_db(net);
    const auto il = savgol(raw, w, std::min(order, w - 1));
    const std::size_t n = il.size();

    std::size_t best = static_cast<std::size_t>(std::min_element(il.begin(), il.end()) - il.begin());
    // A flat optimum is represented by the middle of its plateau.
    std::size_t p_lo = best, p_hi = best;
    constexpr double kFlat = 1e-12;
    while (p_lo > 0 && il[p_lo - 1] <= il[best] + kFlat) --p_lo;
    while (p_hi + 1 < n && il[p_hi + 1] <= il[best] + kFlat) ++p_hi;

    const double threshold = il[best] + 3.0;
    std::size_t lo = best, hi = best;
    while (lo > 0 && il[lo - 1] < threshold) --lo;
    while (hi + 1 < n && il[hi + 1] < threshold) ++hi;
    const bool lower_cut = lo == 0;
    const bool upper_cut = hi + 1 == n;
    if (lower_cut || upper_cut) {
        const auto edge = lower_cut && upper_cut ? BandTruncated::Edge::Both
                          : lower_cut            ? BandTruncated::Edge::Lower
                                                 : BandTruncated::Edge::Upper;
        throw BandTruncated(
            fmt::format("3-dB band reaches the {} end of the grid",
                        edge == BandTruncated::Edge::Both    ? "lower and upper"
                        : edge == BandTruncated::Edge::Lower ? "lower"
                                                             : "upper"),
            edge);
    }

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double t = (threshold - il[inside]) / (il[outside] - il[inside]);
        return net.f_grid[inside] + t * (net.f_grid[outside] - net.f_grid[inside]);
    };

    BandMetrics m;
    m.window = w;
    m.f_center = 0.5 * (net.f_grid[p_lo] + net.f_grid[p_hi]);
    m.f_lo = crossing(lo, lo - 1);
    m.f_hi = crossing(hi, hi + 1);
    m.fbw_3db = (m.f_hi - m.f_lo) / m.f_center;
    m.il_min = *std::min_element(raw.begin() + static_cast<std::ptrdiff_t>(lo),
                                 raw.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    double sum = 0.0;
    m.rl_min_inband = std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i <= hi; ++i) {
        sum += il[i];
        const double rl = -20.0 * std::log10(std::max(std::abs(net.s11(i)), kMagFloor));
        m.rl_min_inband = std::min(m.rl_min_inband, rl);
    }
    m.il_avg = sum / static_cast<double>(hi - lo + 1);
    return m;
}

PropagationFit fit_propagation(std::span<const FamilyMember> family, double f_eval,
                               const FitOptions& options) {
    check_family(family);
    std::vector<Prepared> prepared;
    for (const auto& m : family) prepared.push_back(prepare(m.net, options.window, options.order));
    const auto fit = fit_at(prepared, family, f_eval, options);
    if (!fit)
        throw InvalidArgument(
            fmt::format("no usable delay or loss data at {} Hz for the propagation fit", f_eval));
    return *fit;
}

std::vector<WidebandPoint> wideband_fit(std::span<const FamilyMember> family,
                                        std::span<const double> f_grid,
                                        const FitOptions& options) {
    check_family(family);
    std::vector<Prepared> prepared;
    for (const auto& m : family) prepared.push_back(prepare(m.net, options.window, options.order));
    const auto& grid = family.front().net.f_grid;
    const std::span<const double> targets = f_grid.empty() ? std::span<const double>(grid) : f_grid;

    std::vector<WidebandPoint> out;
    out.reserve(targets.size());
    for (double f : targets) {
        WidebandPoint p;
        p.f = f;
        if (const auto fit = fit_at(prepared, family, f, options)) {
            p.present = true;
            p.fit = *fit;
        }
        out.push_back(p);
    }
    return out;
}

double pl_db_per_us_from(double pl_db_per_um, double vg) { return pl_db_per_um * vg; }

double delay_us_per_mm(double vg) { return 1e3 / vg; }

void write_fit_csv(std::ostream& os, std::span<const PropagationFit> fits) {
    os << "f_hz,vg_m_per_s,pl_db_per_us,pl_db_per_um,intercept_db,r2_delay,r2_il\n";
    for (const auto& f : fits)
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", f.f, f.vg,
                          f.pl_db_per_us, f.pl_db_per_um, f.intercept_il_db, f.r_squared_delay,
                          f.r_squared_il);
}

void write_wideband_csv(std::ostream& os, std::span<const WidebandPoint> points) {
    os << "f_hz,vg_m_per_s,pl_db_per_us,pl_db_per_um,intercept_db,r2_delay,r2_il\n";
    for (const auto& p : points) {
        if (!p.present) {
            os << fmt::format("{:.17g},,,,,,\n", p.f);
            continue;
        }
        const auto& f = p.fit;
        os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", p.f, f.vg,
                          f.pl_db_per_us, f.pl_db_per_um, f.intercept_il_db, f.r_squared_delay,
                          f.r_squared_il);
    }
}

void write_band_metrics_csv(std::ostream& os, std::span<const NamedMetrics> rows) {
    os << "file,f_center_hz,il_min_db,il_avg_db,fbw_3db,rl_min_inband_db,window_points\n";
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        os << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", r.file, m.f_center,
                          m.il_min, m.il_avg, m.fbw_3db, m.rl_min_inband, m.window);
    }
}

}  // namespace adl
