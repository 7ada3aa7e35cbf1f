#pragma once

#include <optional>
#include <vector>

#include "dicke2/model.hpp"
#include "dicke2/stability.hpp"
#include "dicke2/steady_state.hpp"

namespace dicke2 {

struct IntegrationControls {
    double rel_tol{1e-11};
    double abs_tol{1e-13};
    double initial_step{1e-4};
    double max_step{0.1};
    double min_step{1e-14};      // below this the problem is reported as stiff
    double norm_tol{1e-8};       // allowed relative drift of |S_l|
    bool adaptive{true};         // fixed steps of size initial_step when false
    std::size_t max_steps{50'000'000};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<MeanFieldState> states;
    std::vector<DerivedObservables> observables;

    // max_t | |S_l(t)| - N_l/2 | / (N_l/2), worst ensemble
    double max_norm_drift{0.0};
};

// Dormand-Prince 5(4) integration of the mean-field equations, sampled at
// the given ascending times (sample_times.front() is the initial time).
// Throws NumericalError on step-size underflow or when the spin-norm drift
// exceeds 10x norm_tol.
Trajectory integrate(const MeanFieldState& initial, const ModelParams& params,
                     const std::vector<double>& sample_times,
                     const IntegrationControls& controls = {});

// Convenience wrapper: n_samples+1 uniform samples on [0, t_final].
Trajectory integrate(const MeanFieldState& initial, const ModelParams& params, double t_final,
                     std::size_t n_samples = 2000, const IntegrationControls& controls = {});

struct LimitCycleEstimate {
    double period{0.0};
    double amplitude{0.0};  // half peak-to-peak of S1x over the window
};

struct AttractorControls {
    double trailing_fraction{0.2};  // window used for the verdict
    double fp_tol_per_n1{1e-4};     // fixed-point capture distance, in units of N1
    double amp_tol_per_n1{1e-3};    // minimum cycle amplitude, in units of N1
    std::size_t resample_points{2048};
    StabilityOptions stability{};
};

struct AttractorVerdict {
    enum class Kind { fixed_point, limit_cycle, undecided };
    Kind kind{Kind::undecided};
    std::optional<PhaseLabel> label;       // fixed_point only
    std::optional<double> period;          // limit_cycle only
    std::optional<double> amplitude;       // limit_cycle only
    double transient_end{0.0};
};

// Period/amplitude of a near-periodic signal via the dominant autocorrelation
// peak with parabolic refinement. Returns nullopt when the amplitude is below
// amp_tol or decays monotonically across the window (a spiral, not a cycle).
std::optional<LimitCycleEstimate> detect_limit_cycle(const std::vector<double>& times,
                                                     const std::vector<double>& values,
                                                     double amp_tol,
                                                     std::size_t resample_points = 2048);

// Classify the tail of a trajectory against the stable fixed points.
AttractorVerdict classify_attractor(const Trajectory& traj,
                                    const std::vector<FixedPointRecord>& fixed_points,
                                    const ModelParams& params,
                                    const AttractorControls& controls = {});

// The fixed-point state with the field amplitude displaced by delta_a.
MeanFieldState perturbed_fixed_point(const FixedPointRecord& fp, complexd delta_a);

}  // namespace dicke2
