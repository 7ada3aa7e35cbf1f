#pragma once

#include <array>
#include <complex>
#include <utility>

#include "dicke2/errors.hpp"

namespace dicke2 {

using complexd = std::complex<double>;

// Cartesian components of one collective spin.
struct Spin3 {
    double x{0.0};
    double y{0.0};
    double z{0.0};

    double norm() const;

    Spin3& operator+=(const Spin3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Spin3& operator-=(const Spin3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Spin3& operator*=(double c) { x *= c; y *= c; z *= c; return *this; }

    friend Spin3 operator+(Spin3 a, const Spin3& b) { return a += b; }
    friend Spin3 operator-(Spin3 a, const Spin3& b) { return a -= b; }
    friend Spin3 operator*(double c, Spin3 a) { return a *= c; }
    friend double dot(const Spin3& a, const Spin3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
};

// Model parameters. All rates and frequencies are in units of the cavity
// decay rate kappa, time in 1/kappa. n1 and n2 are the ensemble sizes N1, N2;
// the collective spin lengths are N_l/2. The default normalization is n1 = 1
// with n2 given as a ratio; raw counts work the same way.
struct ModelParams {
    double omega_c{1.0};  // cavity frequency
    double omega_a{1.0};  // atomic transition frequency
    double kappa{1.0};    // cavity decay rate
    double lambda{0.0};   // atom-field coupling
    double n1{1.0};       // first ensemble size N1
    double n2{0.0};       // second ensemble size N2, restricted to n2 <= n1

    // Throws DomainError naming the violated constraint.
    void validate() const;

    static ModelParams from_ratio(double omega_c, double omega_a, double kappa,
                                  double lambda, double n2_over_n1, double n1 = 1.0);

    double spin_length_1() const { return 0.5 * n1; }
    double spin_length_2() const { return 0.5 * n2; }
};

// Mean-field phase-space point: complex cavity amplitude plus two collective
// spins (8 real degrees of freedom).
struct MeanFieldState {
    complexd a{0.0, 0.0};
    Spin3 s1;
    Spin3 s2;
};

// Time derivative of a MeanFieldState; same layout.
using StateDerivative = MeanFieldState;

struct DerivedObservables {
    Spin3 total_spin;      // S1 + S2
    Spin3 staggered_spin;  // S1 - S2
    double energy{0.0};
    double photon_number{0.0};  // |a|^2
};

// Equations of motion:
//   da/dt     = -(i omega_c + kappa) a - i lambda (S1x - S2x)
//   dSl_x/dt  = -omega_a Sl_y
//   dSl_y/dt  =  omega_a Sl_x + (-1)^l lambda (a* + a) Sl_z
//   dSl_z/dt  =  (-1)^(l+1) lambda (a* + a) Sl_y
// with l = 1, 2. Ensemble 1 couples with -lambda(a*+a) in dS1_y/dt.
StateDerivative eom_rhs(const MeanFieldState& state, const ModelParams& params);

// E0 = omega_c |a|^2 + omega_a (S1z + S2z) + lambda (a + a*) (S1x - S2x)
double energy(const MeanFieldState& state, const ModelParams& params);

DerivedObservables observables(const MeanFieldState& state, const ModelParams& params);

// Z2 involution commuting with the flow: a -> -a, Sl_x -> -Sl_x, Sl_y -> -Sl_y.
MeanFieldState parity_transform(const MeanFieldState& state);

// Thermodynamic-limit scaling: N_l -> c N_l, S_l -> c S_l, a -> sqrt(c) a,
// lambda -> lambda / sqrt(c). Throws DomainError for c <= 0.
std::pair<MeanFieldState, ModelParams> scale_transform(const MeanFieldState& state,
                                                       const ModelParams& params, double c);

// Real coordinates (Re a, Im a, S1x, S1y, S1z, S2x, S2y, S2z).
std::array<double, 8> to_coords(const MeanFieldState& state);
MeanFieldState from_coords(const std::array<double, 8>& coords);

// Euclidean distance in the 8 real coordinates.
double distance(const MeanFieldState& lhs, const MeanFieldState& rhs);

// Euclidean norm of a derivative in the 8 real coordinates.
double derivative_norm(const StateDerivative& deriv);

}  // namespace dicke2
