#include "dickelab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace dickelab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

std::complex<double> dtft(const std::vector<double>& v, double omega_per_sample) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i] * std::exp(std::complex<double>(0.0, -omega_per_sample * double(i)));
    }
    return acc;
}

} // namespace

double dominant_frequency(const std::vector<double>& times, const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 8 || times.size() != n) {
        throw NumericalError("record too short for frequency extraction");
    }
    const double dt = (times.back() - times.front()) / double(n - 1);

    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / double(n);
    std::vector<double> detrended(n);
    for (std::size_t i = 0; i < n; ++i) detrended[i] = values[i] - mean;

    const std::size_t k_max = n / 2;
    std::vector<double> mag(k_max + 1, 0.0);
    double best = 0.0;
    std::size_t best_k = 0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        mag[k] = std::abs(dtft(detrended, 2.0 * kPi * double(k) / double(n)));
        if (mag[k] > best) {
            best = mag[k];
            best_k = k;
        }
    }
    if (best_k == 0 || best <= 0.0) {
        throw NumericalError("no oscillation peak found in record");
    }

    double delta = 0.0;
    if (best_k > 1 && best_k < k_max) {
        const double lm = std::log(std::max(mag[best_k - 1], 1e-300));
        const double lc = std::log(std::max(mag[best_k], 1e-300));
        const double lp = std::log(std::max(mag[best_k + 1], 1e-300));
        const double denom = lm - 2.0 * lc + lp;
        if (std::abs(denom) > 1e-12) {
            delta = 0.5 * (lm - lp) / denom;
            delta = std::clamp(delta, -0.5, 0.5);
        }
    }
    return 2.0 * kPi * (double(best_k) + delta) / (double(n) * dt);
}

std::optional<double> first_crossing_time(const std::vector<double>& times,
                                          const std::vector<double>& values, double threshold) {
    if (times.size() != values.size() || times.empty()) {
        throw NumericalError("crossing search needs a non-empty record");
    }
    if (values.front() >= threshold) return times.front();
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] >= threshold) {
            const double f = (threshold - values[i - 1]) / (values[i] - values[i - 1]);
            return times[i - 1] + f * (times[i] - times[i - 1]);
        }
    }
    return std::nullopt;
}

double initial_decay_rate(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size() || values.empty() || values.front() <= 0.0) {
        throw NumericalError("decay-rate fit needs a positive initial value");
    }
    const double floor = values.front() / std::exp(1.0);
    std::vector<double> t, lnv;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] <= 0.0) break;
        t.push_back(times[i]);
        lnv.push_back(std::log(values[i]));
        if (values[i] < floor) break;
    }
    if (t.size() < 2) {
        throw NumericalError("record does not resolve the first e-fold of decay");
    }
    return -linear_fit(t, lnv).slope;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw NumericalError("linear fit needs at least two points");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw NumericalError("linear fit needs distinct x values");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ss_res = std::max(0.0, syy - fit.slope * sxy);
    fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    fit.slope_stderr = (n > 2) ? std::sqrt(ss_res / (double(n) - 2.0) / sxx) : 0.0;
    return fit;
}

LinearFit log_log_fit(const std::vector<double>& n, const std::vector<double>& metric) {
    if (n.size() != metric.size()) throw NumericalError("sample size mismatch");
    std::vector<double> lx(n.size()), ly(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] <= 0.0 || metric[i] <= 0.0) {
            throw NumericalError("log-log fit needs positive samples");
        }
        lx[i] = std::log(n[i]);
        ly[i] = std::log(metric[i]);
    }
    return linear_fit(lx, ly);
}

} // namespace dickelab
