#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dicke2/model.hpp"

namespace dicke2 {

using SparseC = Eigen::SparseMatrix<complexd>;
using DenseC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultDimBudget = 4096;

// Truncated Fock space (0..n_max) times two collective spin sectors with
// j_l = N_l/2. Each ensemble stays in its maximal-spin sector, so the spin
// factors have dimension N_l + 1.
struct HilbertSpec {
    int n_max{0};
    int N1{1};
    int N2{1};

    std::size_t dim() const {
        return static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(N1 + 1) *
               static_cast<std::size_t>(N2 + 1);
    }
    // Basis |n> |j1, m1 = i1 - j1> |j2, m2 = i2 - j2>.
    std::size_t index(int n, int i1, int i2) const {
        return (static_cast<std::size_t>(n) * static_cast<std::size_t>(N1 + 1) +
                static_cast<std::size_t>(i1)) *
                   static_cast<std::size_t>(N2 + 1) +
               static_cast<std::size_t>(i2);
    }
    void validate(std::size_t dim_budget = kDefaultDimBudget) const;
};

// Kronecker-product embeddings of the field and ladder operators.
struct OperatorSet {
    HilbertSpec spec;
    SparseC a, a_dag, n_phot;
    SparseC s1z, s1p, s1m;
    SparseC s2z, s2p, s2m;

    SparseC s1x() const { return ((s1p + s1m) * complexd(0.5)).pruned(); }
    SparseC s1y() const { return ((s1p - s1m) * complexd(0.0, -0.5)).pruned(); }
    SparseC s2x() const { return ((s2p + s2m) * complexd(0.5)).pruned(); }
    SparseC s2y() const { return ((s2p - s2m) * complexd(0.0, -0.5)).pruned(); }
};

OperatorSet build_operators(const HilbertSpec& spec,
                            std::size_t dim_budget = kDefaultDimBudget);

// H = omega_c a^dag a + omega_a (S1z + S2z) + lambda (a^dag + a)(S1x - S2x).
SparseC hamiltonian(const ModelParams& params, const OperatorSet& ops);

// i [rho, H] + kappa (2 a rho a^dag - a^dag a rho - rho a^dag a).
DenseC lindblad_rhs(const DenseC& rho, const SparseC& H, const OperatorSet& ops, double kappa);

// Parity operator exp(i pi (a^dag a + S1z + j1 + S2z + j2)): diagonal signs.
SparseC parity_operator(const HilbertSpec& spec);

// Tr(op rho).
complexd expectation(const SparseC& op, const DenseC& rho);

struct ObservableSample {
    double t{0.0};
    complexd exp_a;
    double n_phot{0.0};
    double s1x{0.0}, s1y{0.0}, s1z{0.0};
    double s2x{0.0}, s2y{0.0}, s2z{0.0};
    double sz_total{0.0};
    double dsx{0.0};
};

struct EvolveControls {
    std::size_t n_samples{200};
    double trace_tol{1e-6};      // hard error beyond this trace drift
    double cutoff_warn{1e-6};    // top Fock level population warning level
    double cutoff_fail{1e-3};    // hard error level
};

struct EvolveResult {
    DenseC rho_final;
    std::vector<ObservableSample> samples;
    double max_trace_drift{0.0};
    double max_herm_dev{0.0};
    double max_top_population{0.0};
    bool truncation_warning{false};
};

// Fixed-step RK4 integration of the master equation. t_final is rounded to a
// whole number of dt steps. Throws NumericalError when the trace drifts
// beyond trace_tol or the photon cutoff saturates past cutoff_fail.
EvolveResult evolve_master(const DenseC& rho0, const ModelParams& params,
                           const HilbertSpec& spec, double t_final, double dt,
                           const EvolveControls& controls = {});

// SU(2) coherent state |theta, phi> on a (2j+1)-dimensional spin factor:
// <S_z> = j cos(theta), <S_x> = j sin(theta) cos(phi).
VectorC coherent_spin_state(double j, double theta, double phi);

// Truncated field coherent state, coefficients e^(-|alpha|^2/2) alpha^n / sqrt(n!).
VectorC coherent_field_state(int n_max, complexd alpha);

// |f> x |s1> x |s2> in the HilbertSpec basis ordering.
VectorC product_state(const HilbertSpec& spec, const VectorC& field, const VectorC& spin1,
                      const VectorC& spin2);

// Trace over both spin factors.
DenseC partial_trace_field(const DenseC& rho, const HilbertSpec& spec);

struct QFunctionGrid {
    std::vector<double> re_axis;
    std::vector<double> im_axis;
    Eigen::MatrixXd values;  // values(i, k) = Q(re_axis[k] + i*im_axis[i])
};

// Q(alpha) = <alpha| rho_field |alpha> / pi on a rectangular grid.
QFunctionGrid husimi_q(const DenseC& rho_field, const std::vector<double>& re_axis,
                       const std::vector<double>& im_axis);

// Square grid covering |Re alpha|, |Im alpha| <= 3 + 3 sqrt(nbar).
QFunctionGrid husimi_q_auto(const DenseC& rho_field, int points_per_axis = 101);

// Riemann-sum normalization of the grid (should be ~1 for a wide enough grid).
double q_grid_integral(const QFunctionGrid& grid);

struct Lobe {
    double weight{0.0};      // sum of Q over the component
    complexd centroid{0.0};  // Q-weighted mean alpha
    std::size_t cells{0};
};

struct LobeReport {
    int count{0};
    std::vector<Lobe> lobes;  // sorted by descending weight
};

// Connected components (4-neighbor) of {Q > threshold_fraction * max Q}.
LobeReport count_q_lobes(const QFunctionGrid& grid, double threshold_fraction);

}  // namespace dicke2
