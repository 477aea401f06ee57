#include "dickelab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

namespace dickelab {

namespace {

constexpr int kFullTensorCap = 15;
constexpr int kCollectiveCap = 4096;

ModelSpec with_count(const ModelSpec& base, int n) {
    ModelSpec spec = base;
    std::visit(
        [&](auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DickeSpec> || std::is_same_v<T, TavisCummingsSpec> ||
                          std::is_same_v<T, DrivenBatterySpec>) {
                s.n_tls = n;
            } else if constexpr (std::is_same_v<T, SupertransferSpec>) {
                s.n_donors = n;
                s.m_acceptors = n;
            } else {
                throw ModelError(std::string("family ") + family_name(ModelSpec{s}) +
                                 " has no ensemble count to sweep");
            }
        },
        spec);
    return spec;
}

bool collective_capable(const ModelSpec& base) {
    return std::holds_alternative<DickeSpec>(base) ||
           std::holds_alternative<TavisCummingsSpec>(base) ||
           std::holds_alternative<DrivenBatterySpec>(base) ||
           std::holds_alternative<SupertransferSpec>(base);
}

std::string default_observable(SweepMetric metric) {
    switch (metric) {
        case SweepMetric::charging_half_time: return "stored_energy";
        case SweepMetric::transfer_half_time: return "acceptor_population";
        case SweepMetric::initial_decay_rate: return "P_excited";
        case SweepMetric::oscillation_frequency: return "photon_number";
    }
    throw ModelError("unknown sweep metric");
}

double extract_metric(SweepMetric metric, const std::vector<double>& times,
                      const std::vector<double>& values) {
    switch (metric) {
        case SweepMetric::charging_half_time:
        case SweepMetric::transfer_half_time: {
            const double peak = *std::max_element(values.begin(), values.end());
            if (peak <= 0.0) throw NumericalError("record never becomes positive");
            const auto t = first_crossing_time(times, values, 0.5 * peak);
            if (!t) throw NumericalError("record never reaches half its maximum");
            return *t;
        }
        case SweepMetric::initial_decay_rate:
            return initial_decay_rate(times, values);
        case SweepMetric::oscillation_frequency:
            return dominant_frequency(times, values);
    }
    throw ModelError("unknown sweep metric");
}

} // namespace

const char* metric_name(SweepMetric metric) {
    switch (metric) {
        case SweepMetric::charging_half_time: return "charging_half_time";
        case SweepMetric::transfer_half_time: return "transfer_half_time";
        case SweepMetric::initial_decay_rate: return "initial_decay_rate";
        case SweepMetric::oscillation_frequency: return "oscillation_frequency";
    }
    return "?";
}

const char* label_name(ScalingLabel label) {
    switch (label) {
        case ScalingLabel::sqrt_n: return "sqrt_N";
        case ScalingLabel::linear_n: return "linear_N";
        case ScalingLabel::n_squared: return "N_squared";
        case ScalingLabel::other: return "other";
    }
    return "?";
}

ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& samples) {
    ScalingFit fit;
    fit.samples = samples;
    std::sort(fit.samples.begin(), fit.samples.end());
    std::vector<double> n, v;
    for (const auto& [x, y] : fit.samples) {
        n.push_back(x);
        v.push_back(y);
    }
    const LinearFit lf = log_log_fit(n, v);
    fit.exponent = lf.slope;
    fit.exponent_stderr = lf.slope_stderr;
    fit.r_squared = lf.r_squared;
    return fit;
}

ScalingLabel classify_exponent(const ScalingFit& fit) {
    if (fit.r_squared < 0.98) return ScalingLabel::other;
    const double mag = std::abs(fit.exponent);
    const double targets[] = {0.5, 1.0, 2.0};
    const ScalingLabel labels[] = {ScalingLabel::sqrt_n, ScalingLabel::linear_n,
                                   ScalingLabel::n_squared};
    double best_dist = 1e300;
    ScalingLabel best = ScalingLabel::other;
    for (int i = 0; i < 3; ++i) {
        const double d = std::abs(mag - targets[i]);
        if (d < best_dist) {
            best_dist = d;
            best = labels[i];
        }
    }
    return best_dist <= 0.15 ? best : ScalingLabel::other;
}

ScalingFit run_sweep(const SweepRequest& req) {
    if (std::set<int>(req.n_values.begin(), req.n_values.end()).size() < 3) {
        throw ModelError("a sweep needs at least 3 distinct n_values");
    }
    const bool collective = collective_capable(req.base_model);
    const int cap = collective ? kCollectiveCap : kFullTensorCap;
    for (int n : req.n_values) {
        if (n < 1) throw ModelError("n_values must be positive");
        if (n > cap) {
            throw CapacityError("N = " + std::to_string(n) + " exceeds the sweep cap of " +
                                std::to_string(cap));
        }
    }
    const std::string observable =
        req.observable.empty() ? default_observable(req.metric) : req.observable;

    auto run_point = [&](int n) -> double {
        EvolutionRequest er = req.run_template;
        er.model = with_count(req.base_model, n);
        er.reduction = collective ? Reduction::collective_spin : Reduction::full_tensor;
        er.observables = {observable};
        const Trajectory traj = evolve(er);
        return extract_metric(req.metric, traj.times, traj.column(observable));
    };

    std::vector<std::pair<double, double>> samples(req.n_values.size());
    std::vector<int> failed;
    const int threads = std::max(1, req.max_threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < req.n_values.size(); ++i) {
            try {
                samples[i] = {double(req.n_values[i]), run_point(req.n_values[i])};
            } catch (const NumericalError&) {
                failed.push_back(req.n_values[i]);
            }
        }
    } else {
        std::vector<std::future<double>> futures;
        futures.reserve(req.n_values.size());
        for (int n : req.n_values) {
            futures.push_back(std::async(std::launch::async, run_point, n));
        }
        for (std::size_t i = 0; i < futures.size(); ++i) {
            try {
                samples[i] = {double(req.n_values[i]), futures[i].get()};
            } catch (const NumericalError&) {
                failed.push_back(req.n_values[i]);
            }
        }
    }
    if (!failed.empty()) {
        std::string msg = "metric '" + std::string(metric_name(req.metric)) +
                          "' unavailable within t_max for N =";
        for (int n : failed) msg += " " + std::to_string(n);
        throw SweepError(msg, failed);
    }
    return fit_power_law(samples);
}

} // namespace dickelab
