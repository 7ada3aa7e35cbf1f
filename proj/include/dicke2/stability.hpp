#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "dicke2/model.hpp"
#include "dicke2/steady_state.hpp"

namespace dicke2 {

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Spectrum = std::array<complexd, 8>;

// Jacobian of eom_rhs in the real coordinates
// (Re a, Im a, S1x, S1y, S1z, S2x, S2y, S2z).
Mat8 jacobian(const MeanFieldState& state, const ModelParams& params);

// All eigenvalues of a real 8x8 matrix, sorted by descending real part
// (ties by descending imaginary part). Throws NumericalError if the QR
// iteration fails to converge.
Spectrum eigenvalues(const Mat8& matrix);

enum class Verdict { stable, unstable, marginal };

std::string to_string(Verdict verdict);

struct StabilityOptions {
    double eps_stab{1e-9};  // margin for calling a real part negative/positive
    double eps_zero{1e-8};  // box around 0 for the two conservation zero modes
};

struct StabilityReport {
    Spectrum eigenvalues{};          // full spectrum, descending real part
    Verdict verdict{Verdict::marginal};
    int zero_modes_excluded{0};      // spin-norm conservation zero modes
    int precession_modes_excluded{0};  // symmetric-precession neutral pair
    complexd leading{0.0, 0.0};      // largest-real-part non-excluded eigenvalue
};

// Spectrum-based classification of a fixed point. Two kinds of structural
// neutral modes are excluded before the verdict: up to two zero modes from
// the spin-norm conservation laws, and up to one exactly-neutral oscillatory
// pair at +-i Omega with Omega = sqrt(omega_a^2 + (2 lambda Re a_ss)^2). The
// pair exists at every fixed point: both ensembles precess about local fields
// of equal magnitude and the symmetric combination never drives the staggered
// spin the cavity couples to. The verdict is stable if every remaining real
// part is < -eps_stab, unstable if any is > +eps_stab, marginal otherwise.
// Requires fp.exists.
StabilityReport classify_stability(const FixedPointRecord& fp, const ModelParams& params,
                                   const StabilityOptions& opts = {});

struct ScanRow {
    double lambda{0.0};
    PhaseLabel label{PhaseLabel::zfo_n_minus};
    bool exists{false};
    Verdict verdict{Verdict::marginal};
    complexd leading{0.0, 0.0};
    int zero_modes{0};
};

// Per-lambda classification of all eight fixed points over an ascending grid.
// Non-existing branches appear with exists = false.
std::vector<ScanRow> bifurcation_scan(const ModelParams& params,
                                      const std::vector<double>& lambda_grid,
                                      const StabilityOptions& opts = {});

// Leading non-excluded real part of a fixed-point branch at given lambda;
// helper for threshold bracketing.
double leading_real_part(const ModelParams& params, PhaseLabel label, double lambda,
                         const StabilityOptions& opts = {});

// Bisection refinement of the lambda at which the leading real part of the
// branch crosses zero, given a bracketing interval [lo, hi].
double refine_threshold_crossing(const ModelParams& params, PhaseLabel label, double lo,
                                 double hi, double rel_tol = 1e-10,
                                 const StabilityOptions& opts = {});

}  // namespace dicke2
