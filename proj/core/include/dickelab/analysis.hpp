// analysis.hpp — record post-processing: spectral peaks, crossings, fits

#pragma once

#include <optional>
#include <vector>

#include "dickelab/errors.hpp"

namespace dickelab {

// Angular frequency of the dominant oscillation in a uniformly sampled
// record: discrete Fourier peak refined by quadratic interpolation of the
// log magnitude. Throws NumericalError when no non-DC peak exists.
double dominant_frequency(const std::vector<double>& times, const std::vector<double>& values);

// First time the record reaches `threshold`, linearly interpolated between
// the bracketing samples; nullopt if never reached.
std::optional<double> first_crossing_time(const std::vector<double>& times,
                                          const std::vector<double>& values, double threshold);

// Exponential decay rate -d ln v / dt over the initial e-fold (samples with
// v >= v0/e), via least squares on ln v. Throws if fewer than two usable
// samples.
double initial_decay_rate(const std::vector<double>& times, const std::vector<double>& values);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 1.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Least squares on log(metric) vs log(N); exponent = slope.
LinearFit log_log_fit(const std::vector<double>& n, const std::vector<double>& metric);

} // namespace dickelab
