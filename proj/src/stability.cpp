#include "dicke2/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace dicke2 {

Mat8 jacobian(const MeanFieldState& s, const ModelParams& p) {
    const double x = s.a.real();  // (a + a*)/2
    const double lam = p.lambda;
    Mat8 j = Mat8::Zero();

    // d(Re a)/dt = -kappa Re a + omega_c Im a
    j(0, 0) = -p.kappa;
    j(0, 1) = p.omega_c;
    // d(Im a)/dt = -omega_c Re a - kappa Im a - lambda (S1x - S2x)
    j(1, 0) = -p.omega_c;
    j(1, 1) = -p.kappa;
    j(1, 2) = -lam;
    j(1, 5) = lam;

    // Ensemble 1: dS1y/dt = omega_a S1x - 2 lambda Re(a) S1z
    j(2, 3) = -p.omega_a;
    j(3, 0) = -2.0 * lam * s.s1.z;
    j(3, 2) = p.omega_a;
    j(3, 4) = -2.0 * lam * x;
    j(4, 0) = 2.0 * lam * s.s1.y;
    j(4, 3) = 2.0 * lam * x;

    // Ensemble 2: opposite coupling sign
    j(5, 6) = -p.omega_a;
    j(6, 0) = 2.0 * lam * s.s2.z;
    j(6, 5) = p.omega_a;
    j(6, 7) = 2.0 * lam * x;
    j(7, 0) = -2.0 * lam * s.s2.y;
    j(7, 6) = -2.0 * lam * x;

    return j;
}

Spectrum eigenvalues(const Mat8& matrix) {
    if (!matrix.allFinite()) throw NumericalError("eigenvalues: matrix has non-finite entries");
    Eigen::EigenSolver<Mat8> solver(matrix, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalues: QR iteration did not converge");
    Spectrum out;
    for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    std::sort(out.begin(), out.end(), [](const complexd& a, const complexd& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return out;
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::stable: return "stable";
        case Verdict::unstable: return "unstable";
        case Verdict::marginal: return "marginal";
    }
    return "?";
}

StabilityReport classify_stability(const FixedPointRecord& fp, const ModelParams& params,
                                   const StabilityOptions& opts) {
    if (!fp.exists) throw DomainError("classify_stability: fixed point does not exist");
    StabilityReport report;
    report.eigenvalues = eigenvalues(jacobian(fp.state, params));

    // Exclude up to two conservation-law zero modes: among eigenvalues inside
    // the eps_zero box take the two of smallest modulus.
    std::array<bool, 8> excluded{};
    for (int pass = 0; pass < 2; ++pass) {
        int best = -1;
        double best_mod = opts.eps_zero;
        for (int i = 0; i < 8; ++i) {
            const auto& ev = report.eigenvalues[static_cast<std::size_t>(i)];
            if (excluded[static_cast<std::size_t>(i)]) continue;
            if (std::abs(ev.real()) >= opts.eps_zero || std::abs(ev.imag()) >= opts.eps_zero)
                continue;
            if (std::abs(ev) <= best_mod) {
                best = i;
                best_mod = std::abs(ev);
            }
        }
        if (best < 0) break;
        excluded[static_cast<std::size_t>(best)] = true;
        ++report.zero_modes_excluded;
    }

    // Exclude the symmetric-precession pair at +-i Omega. Both ensembles see
    // local fields (+-2 lambda Re a, 0, omega_a) of equal magnitude, so the
    // symmetric tangent fluctuation precesses undamped: it produces no
    // staggered-spin response for the cavity to damp. Candidates must be
    // neutral to eps_zero and sit at the precession frequency; the smallest
    // |Re| wins so a weakly damped mode that drifts close to Omega at strong
    // coupling is never mistaken for it.
    const double drive = 2.0 * params.lambda * fp.state.a.real();
    const double omega_prec = std::hypot(params.omega_a, drive);
    const double im_tol = 1e-6 * std::max(1.0, omega_prec);
    for (int pass = 0; pass < 2 && omega_prec > opts.eps_zero; ++pass) {
        int best = -1;
        double best_re = opts.eps_zero;
        for (int i = 0; i < 8; ++i) {
            const auto& ev = report.eigenvalues[static_cast<std::size_t>(i)];
            if (excluded[static_cast<std::size_t>(i)]) continue;
            if (std::abs(ev.real()) >= opts.eps_zero) continue;
            if (std::abs(std::abs(ev.imag()) - omega_prec) > im_tol) continue;
            if (std::abs(ev.real()) <= best_re) {
                best = i;
                best_re = std::abs(ev.real());
            }
        }
        if (best < 0) break;
        excluded[static_cast<std::size_t>(best)] = true;
        ++report.precession_modes_excluded;
    }

    double max_re = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 8; ++i) {
        if (excluded[static_cast<std::size_t>(i)]) continue;
        const auto& ev = report.eigenvalues[static_cast<std::size_t>(i)];
        if (ev.real() > max_re || (ev.real() == max_re && ev.imag() > report.leading.imag())) {
            max_re = ev.real();
            report.leading = ev;
        }
    }

    if (max_re < -opts.eps_stab)
        report.verdict = Verdict::stable;
    else if (max_re > opts.eps_stab)
        report.verdict = Verdict::unstable;
    else
        report.verdict = Verdict::marginal;
    return report;
}

std::vector<ScanRow> bifurcation_scan(const ModelParams& params,
                                      const std::vector<double>& lambda_grid,
                                      const StabilityOptions& opts) {
    for (std::size_t i = 1; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid[i] > lambda_grid[i - 1]))
            throw DomainError("bifurcation_scan: lambda grid must be strictly ascending");
    }
    std::vector<ScanRow> rows;
    rows.reserve(lambda_grid.size() * 8);
    for (double lambda : lambda_grid) {
        ModelParams p = params;
        p.lambda = lambda;
        for (const FixedPointRecord& fp : all_fixed_points(p)) {
            ScanRow row;
            row.lambda = lambda;
            row.label = fp.label;
            row.exists = fp.exists;
            if (fp.exists) {
                const StabilityReport report = classify_stability(fp, p, opts);
                row.verdict = report.verdict;
                row.leading = report.leading;
                row.zero_modes = report.zero_modes_excluded;
            } else {
                row.leading = complexd(std::numeric_limits<double>::quiet_NaN(),
                                       std::numeric_limits<double>::quiet_NaN());
            }
            rows.push_back(row);
        }
    }
    return rows;
}

double leading_real_part(const ModelParams& params, PhaseLabel label, double lambda,
                         const StabilityOptions& opts) {
    ModelParams p = params;
    p.lambda = lambda;
    const auto fps = all_fixed_points(p);
    const FixedPointRecord& fp = find_fixed_point(fps, label);
    if (!fp.exists) throw DomainError("leading_real_part: branch does not exist at this lambda");
    return classify_stability(fp, p, opts).leading.real();
}

double refine_threshold_crossing(const ModelParams& params, PhaseLabel label, double lo,
                                 double hi, double rel_tol, const StabilityOptions& opts) {
    double f_lo = leading_real_part(params, label, lo, opts);
    double f_hi = leading_real_part(params, label, hi, opts);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw DomainError("refine_threshold_crossing: interval does not bracket a sign change");
    while ((hi - lo) > rel_tol * std::max(std::abs(lo), std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = leading_real_part(params, label, mid, opts);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_hi > 0.0)) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace dicke2
