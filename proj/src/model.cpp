#include "dicke2/model.hpp"

#include <cmath>
#include <string>

namespace dicke2 {

double Spin3::norm() const { return std::sqrt(x * x + y * y + z * z); }

void ModelParams::validate() const {
    auto fail = [](const std::string& what) { throw DomainError("invalid parameters: " + what); };
    // omega_a = 0 is a valid parameter for the flow itself; the steady-state
    // enumeration refuses it separately because its classification needs
    // omega_a != 0.
    if (!(omega_c > 0.0)) fail("omega_c must be > 0");
    if (!(omega_a >= 0.0)) fail("omega_a must be >= 0");
    if (!(kappa >= 0.0)) fail("kappa must be >= 0");
    if (!(lambda >= 0.0)) fail("lambda must be >= 0");
    if (!(n1 > 0.0)) fail("n1 must be > 0");
    if (!(n2 >= 0.0)) fail("n2 must be >= 0");
    if (!(n2 <= n1)) fail("n2 must not exceed n1");
}

ModelParams ModelParams::from_ratio(double omega_c, double omega_a, double kappa,
                                    double lambda, double n2_over_n1, double n1) {
    ModelParams p{omega_c, omega_a, kappa, lambda, n1, n2_over_n1 * n1};
    p.validate();
    return p;
}

StateDerivative eom_rhs(const MeanFieldState& state, const ModelParams& params) {
    const double field_re2 = 2.0 * state.a.real();  // a* + a
    const double drive = params.lambda * field_re2;
    const double dsx = state.s1.x - state.s2.x;

    StateDerivative d;
    d.a = -(complexd(0.0, params.omega_c) + params.kappa) * state.a - complexd(0.0, params.lambda) * dsx;

    d.s1.x = -params.omega_a * state.s1.y;
    d.s1.y = params.omega_a * state.s1.x - drive * state.s1.z;
    d.s1.z = drive * state.s1.y;

    d.s2.x = -params.omega_a * state.s2.y;
    d.s2.y = params.omega_a * state.s2.x + drive * state.s2.z;
    d.s2.z = -drive * state.s2.y;
    return d;
}

double energy(const MeanFieldState& state, const ModelParams& params) {
    const double field_re2 = 2.0 * state.a.real();
    return params.omega_c * std::norm(state.a) + params.omega_a * (state.s1.z + state.s2.z) +
           params.lambda * field_re2 * (state.s1.x - state.s2.x);
}

DerivedObservables observables(const MeanFieldState& state, const ModelParams& params) {
    DerivedObservables obs;
    obs.total_spin = state.s1 + state.s2;
    obs.staggered_spin = state.s1 - state.s2;
    obs.energy = energy(state, params);
    obs.photon_number = std::norm(state.a);
    return obs;
}

MeanFieldState parity_transform(const MeanFieldState& state) {
    MeanFieldState out = state;
    out.a = -state.a;
    out.s1.x = -state.s1.x;
    out.s1.y = -state.s1.y;
    out.s2.x = -state.s2.x;
    out.s2.y = -state.s2.y;
    return out;
}

std::pair<MeanFieldState, ModelParams> scale_transform(const MeanFieldState& state,
                                                       const ModelParams& params, double c) {
    if (!(c > 0.0)) throw DomainError("scale_transform: scale factor must be > 0");
    const double root = std::sqrt(c);
    MeanFieldState scaled = state;
    scaled.a *= root;
    scaled.s1 *= c;
    scaled.s2 *= c;
    ModelParams scaled_params = params;
    scaled_params.n1 *= c;
    scaled_params.n2 *= c;
    scaled_params.lambda /= root;
    return {scaled, scaled_params};
}

std::array<double, 8> to_coords(const MeanFieldState& s) {
    return {s.a.real(), s.a.imag(), s.s1.x, s.s1.y, s.s1.z, s.s2.x, s.s2.y, s.s2.z};
}

MeanFieldState from_coords(const std::array<double, 8>& c) {
    MeanFieldState s;
    s.a = complexd(c[0], c[1]);
    s.s1 = {c[2], c[3], c[4]};
    s.s2 = {c[5], c[6], c[7]};
    return s;
}

double distance(const MeanFieldState& lhs, const MeanFieldState& rhs) {
    const auto a = to_coords(lhs);
    const auto b = to_coords(rhs);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sum);
}

double derivative_norm(const StateDerivative& deriv) {
    const auto c = to_coords(deriv);
    double sum = 0.0;
    for (double v : c) sum += v * v;
    return std::sqrt(sum);
}

}  // namespace dicke2
