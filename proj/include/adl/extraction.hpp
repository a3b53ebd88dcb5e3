#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adl/network.hpp"

namespace adl {

/// Even windows round up to the next odd size.
int savgol_window(int window);

/// Savitzky-Golay smoothing. Points near the ends use the truncated window,
/// widened inward when it has fewer than order + 1 samples.
std::vector<double> savgol(std::span<const double> values, int window, int order);

struct GroupDelay {
    std::vector<double> f;    // Hz
    std::vector<double> tau;  // s
    std::vector<bool> valid;  // false at zero-magnitude gaps
};

/// tau = -d(arg s21)/d omega from the unwrapped phase. Throws ResolutionError
/// when an in-band phase step approaches pi.
GroupDelay group_delay(const TwoPortNetwork& net);

/// Insertion loss -20 log10 |s21| in dB, with |s21| floored at 1e-10.
std::vector<double> insertion_loss_db(const TwoPortNetwork& net);

struct BandMetrics {
    double f_center = 0.0;  // Hz
    double il_min = 0.0;    // dB, raw curve in band
    double il_avg = 0.0;    // dB, mean of the smoothed curve over the 3-dB band
    double fbw_3db = 0.0;
    double rl_min_inband = 0.0;  // dB
    double f_lo = 0.0;
    double f_hi = 0.0;
    int window = 1;  // odd window actually used
};

/// Throws BandTruncated when a 3-dB edge is missing from the grid.
BandMetrics band_metrics(const TwoPortNetwork& net, int smoothing_window, int order = 3);

struct FamilyMember {
    TwoPortNetwork net;
    double lg = 0.0;  // m
};

struct PropagationFit {
    double f = 0.0;  // Hz
    double vg = 0.0;  // m/s
    double pl_db_per_um = 0.0;
    double pl_db_per_us = 0.0;
    double intercept_il_db = 0.0;
    double intercept_delay = 0.0;  // s
    double r_squared_delay = 0.0;
    double r_squared_il = 0.0;
    bool negative_pl = false;
};

struct FitOptions {
    int window = 51;
    int order = 3;
    double noise_floor_db = 80.0;  // IL above this marks a point absent
};

/// Line fits of delay and loss against gap length at f_eval.
PropagationFit fit_propagation(std::span<const FamilyMember> family, double f_eval,
                               const FitOptions& options = {});

struct WidebandPoint {
    double f = 0.0;
    bool present = false;
    PropagationFit fit;
};

/// fit_propagation at every requested frequency (the common grid when empty).
std::vector<WidebandPoint> wideband_fit(std::span<const FamilyMember> family,
                                        std::span<const double> f_grid = {},
                                        const FitOptions& options = {});

/// m/s equals um/us, so the conversion is a plain product.
double pl_db_per_us_from(double pl_db_per_um, double vg);
double delay_us_per_mm(double vg);

void write_fit_csv(std::ostream& os, std::span<const PropagationFit> fits);
void write_wideband_csv(std::ostream& os, std::span<const WidebandPoint> points);

struct NamedMetrics {
    std::string file;
    BandMetrics metrics;
};

void write_band_metrics_csv(std::ostream& os, std::span<const NamedMetrics> rows);

}  // namespace adl
