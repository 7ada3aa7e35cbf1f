#include "dicke2/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dicke2 {

namespace {

using Coords = std::array<double, 8>;

Coords axpy(const Coords& y, double h, const Coords& k) {
    Coords out;
    for (int i = 0; i < 8; ++i) out[i] = y[i] + h * k[i];
    return out;
}

Coords rhs(const Coords& y, const ModelParams& p) {
    return to_coords(eom_rhs(from_coords(y), p));
}

// Dormand-Prince 5(4) coefficients.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

struct StepResult {
    Coords y;
    Coords k_last;  // FSAL: derivative at the new point
    double error;   // scaled error norm
};

StepResult dp45_step(const Coords& y, const Coords& k1, double h, const ModelParams& p,
                     const IntegrationControls& c) {
    const Coords k2 = rhs(axpy(y, h * kA21, k1), p);
    Coords tmp;
    for (int i = 0; i < 8; ++i) tmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    const Coords k3 = rhs(tmp, p);
    for (int i = 0; i < 8; ++i) tmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    const Coords k4 = rhs(tmp, p);
    for (int i = 0; i < 8; ++i)
        tmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    const Coords k5 = rhs(tmp, p);
    for (int i = 0; i < 8; ++i)
        tmp[i] = y[i] +
                 h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] + kA65 * k5[i]);
    const Coords k6 = rhs(tmp, p);

    StepResult r;
    for (int i = 0; i < 8; ++i)
        r.y[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB5 * k5[i] + kB6 * k6[i]);
    r.k_last = rhs(r.y, p);

    double err_sq = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                              kE6 * k6[i] + kE7 * r.k_last[i]);
        const double scale = c.abs_tol + c.rel_tol * std::max(std::abs(y[i]), std::abs(r.y[i]));
        err_sq += (e / scale) * (e / scale);
    }
    r.error = std::sqrt(err_sq / 8.0);
    return r;
}

}  // namespace

Trajectory integrate(const MeanFieldState& initial, const ModelParams& params,
                     const std::vector<double>& sample_times, const IntegrationControls& c) {
    params.validate();
    if (sample_times.size() < 2) throw DomainError("integrate: need at least two sample times");
    for (std::size_t i = 1; i < sample_times.size(); ++i) {
        if (!(sample_times[i] > sample_times[i - 1]))
            throw DomainError("integrate: sample times must be strictly ascending");
    }

    const double norm1_ref = initial.s1.norm();
    const double norm2_ref = initial.s2.norm();

    Trajectory traj;
    traj.times.reserve(sample_times.size());
    traj.states.reserve(sample_times.size());
    traj.observables.reserve(sample_times.size());

    auto record = [&](double t, const Coords& y) {
        const MeanFieldState s = from_coords(y);
        traj.times.push_back(t);
        traj.states.push_back(s);
        traj.observables.push_back(observables(s, params));
        double drift = 0.0;
        if (norm1_ref > 0.0) drift = std::abs(s.s1.norm() - norm1_ref) / norm1_ref;
        if (norm2_ref > 0.0)
            drift = std::max(drift, std::abs(s.s2.norm() - norm2_ref) / norm2_ref);
        traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    };

    double t = sample_times.front();
    Coords y = to_coords(initial);
    Coords k1 = rhs(y, params);
    record(t, y);

    double h = std::min(c.initial_step, c.max_step);
    std::size_t next_sample = 1;
    std::size_t steps = 0;

    while (next_sample < sample_times.size()) {
        if (++steps > c.max_steps) throw NumericalError("integrate: step budget exhausted");
        const double t_target = sample_times[next_sample];
        double h_step = c.adaptive ? std::min(h, c.max_step) : c.initial_step;
        bool clamped = false;
        if (t + h_step >= t_target) {
            h_step = t_target - t;
            clamped = true;
        }

        const StepResult step = dp45_step(y, k1, h_step, params, c);
        const bool accept = !c.adaptive || step.error <= 1.0;
        if (accept) {
            t = clamped ? t_target : t + h_step;
            y = step.y;
            k1 = step.k_last;
            if (clamped) {
                record(t, y);
                ++next_sample;
            }
        }
        if (c.adaptive) {
            const double err = std::max(step.error, 1e-10);
            const double factor = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            // Grow from the natural step, not one shortened to land on a sample.
            const double basis = (accept && clamped) ? std::max(h, h_step) : h_step;
            h = std::min(basis * factor, c.max_step);
            if (h < c.min_step)
                throw NumericalError(
                    "integrate: step size underflow (problem appears stiff at t=" +
                    std::to_string(t) + ")");
        }
        if (traj.max_norm_drift > 10.0 * c.norm_tol)
            throw NumericalError(
                "integrate: spin-norm drift exceeded 10x norm_tol; tighten rel_tol/abs_tol");
    }
    return traj;
}

Trajectory integrate(const MeanFieldState& initial, const ModelParams& params, double t_final,
                     std::size_t n_samples, const IntegrationControls& controls) {
    if (!(t_final > 0.0)) throw DomainError("integrate: t_final must be > 0");
    if (n_samples < 2) n_samples = 2;
    std::vector<double> times(n_samples + 1);
    for (std::size_t i = 0; i <= n_samples; ++i)
        times[i] = t_final * static_cast<double>(i) / static_cast<double>(n_samples);
    return integrate(initial, params, times, controls);
}

std::optional<LimitCycleEstimate> detect_limit_cycle(const std::vector<double>& times,
                                                     const std::vector<double>& values,
                                                     double amp_tol,
                                                     std::size_t resample_points) {
    if (times.size() != values.size() || times.size() < 16) return std::nullopt;
    const double t0 = times.front();
    const double t1 = times.back();
    if (!(t1 > t0)) return std::nullopt;

    // Uniform resampling by linear interpolation.
    const std::size_t n = std::max<std::size_t>(resample_points, 64);
    std::vector<double> v(n);
    const double dt = (t1 - t0) / static_cast<double>(n - 1);
    std::size_t src = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + dt * static_cast<double>(i);
        while (src + 2 < times.size() && times[src + 1] < t) ++src;
        const double w = (t - times[src]) / (times[src + 1] - times[src]);
        v[i] = values[src] + w * (values[src + 1] - values[src]);
    }

    auto half_peak_to_peak = [&](std::size_t lo, std::size_t hi) {
        double mn = v[lo], mx = v[lo];
        for (std::size_t i = lo; i < hi; ++i) {
            mn = std::min(mn, v[i]);
            mx = std::max(mx, v[i]);
        }
        return 0.5 * (mx - mn);
    };

    const double amplitude = half_peak_to_peak(0, n);
    if (amplitude < amp_tol) return std::nullopt;

    // Monotone window-over-window amplitude decay means a spiral, not a cycle.
    const std::size_t quarter = n / 4;
    bool decaying = true;
    double prev = half_peak_to_peak(0, quarter);
    for (int q = 1; q < 4; ++q) {
        const double cur = half_peak_to_peak(static_cast<std::size_t>(q) * quarter,
                                             (q == 3) ? n : static_cast<std::size_t>(q + 1) * quarter);
        if (!(cur < prev * (1.0 - 1e-3))) decaying = false;
        prev = cur;
    }
    if (decaying) return std::nullopt;

    // Autocorrelation of the mean-removed signal.
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    for (double& x : v) x -= mean;

    // Biased estimator (divide by n): the linear taper makes the first
    // harmonic peak dominate, so the argmax is well-defined for periodic
    // signals.
    const std::size_t max_lag = n / 2;
    std::vector<double> ac(max_lag + 1, 0.0);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        double sum = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) sum += v[i] * v[i + lag];
        ac[lag] = sum / static_cast<double>(n);
    }

    // Skip the lag-0 peak: start searching after the first negative value.
    std::size_t start = 1;
    while (start < max_lag && ac[start] > 0.0) ++start;
    if (start >= max_lag) return std::nullopt;
    std::size_t peak = start;
    for (std::size_t lag = start; lag <= max_lag; ++lag) {
        if (ac[lag] > ac[peak]) peak = lag;
    }
    if (peak == start || peak == max_lag || ac[peak] <= 0.0) return std::nullopt;

    // Parabolic refinement of the peak position.
    const double y0 = ac[peak - 1], y1 = ac[peak], y2 = ac[peak + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    double shift = 0.0;
    if (denom != 0.0) shift = 0.5 * (y0 - y2) / denom;
    shift = std::clamp(shift, -0.5, 0.5);

    LimitCycleEstimate est;
    est.period = (static_cast<double>(peak) + shift) * dt;
    est.amplitude = amplitude;
    return est;
}

AttractorVerdict classify_attractor(const Trajectory& traj,
                                    const std::vector<FixedPointRecord>& fixed_points,
                                    const ModelParams& params, const AttractorControls& c) {
    if (traj.times.size() < 8) throw DomainError("classify_attractor: trajectory too short");
    const double t0 = traj.times.front();
    const double t1 = traj.times.back();
    const double window_start = t1 - c.trailing_fraction * (t1 - t0);
    std::size_t first = 0;
    while (first + 1 < traj.times.size() && traj.times[first] < window_start) ++first;
    if (traj.times.size() - first < 4)
        throw DomainError("classify_attractor: trailing window has too few samples");

    const double fp_tol = c.fp_tol_per_n1 * params.n1;
    const double amp_tol = c.amp_tol_per_n1 * params.n1;

    AttractorVerdict verdict;
    verdict.transient_end = traj.times[first];

    // Fixed-point capture: the trailing window must stay within fp_tol of a
    // stable fixed point.
    double best = std::numeric_limits<double>::infinity();
    for (const FixedPointRecord& fp : fixed_points) {
        if (!fp.exists) continue;
        if (classify_stability(fp, params, c.stability).verdict != Verdict::stable) continue;
        double worst = 0.0;
        for (std::size_t i = first; i < traj.states.size(); ++i)
            worst = std::max(worst, distance(traj.states[i], fp.state));
        if (worst < fp_tol && worst < best) {
            best = worst;
            verdict.kind = AttractorVerdict::Kind::fixed_point;
            verdict.label = fp.label;
            // Earliest time after which the trajectory stays captured.
            std::size_t k = traj.states.size();
            while (k > 0 && distance(traj.states[k - 1], fp.state) < fp_tol) --k;
            verdict.transient_end = (k < traj.times.size()) ? traj.times[k] : t1;
        }
    }
    if (verdict.kind == AttractorVerdict::Kind::fixed_point) return verdict;

    std::vector<double> tail_t(traj.times.begin() + static_cast<std::ptrdiff_t>(first),
                               traj.times.end());
    std::vector<double> tail_s1x;
    tail_s1x.reserve(tail_t.size());
    for (std::size_t i = first; i < traj.states.size(); ++i)
        tail_s1x.push_back(traj.states[i].s1.x);

    if (auto cycle = detect_limit_cycle(tail_t, tail_s1x, amp_tol, c.resample_points)) {
        verdict.kind = AttractorVerdict::Kind::limit_cycle;
        verdict.period = cycle->period;
        verdict.amplitude = cycle->amplitude;
    }
    return verdict;
}

MeanFieldState perturbed_fixed_point(const FixedPointRecord& fp, complexd delta_a) {
    if (!fp.exists) throw DomainError("perturbed_fixed_point: fixed point does not exist");
    MeanFieldState s = fp.state;
    s.a += delta_a;
    return s;
}

}  // namespace dicke2
