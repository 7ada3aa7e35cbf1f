#include "dicke2/steady_state.hpp"

#include <cmath>
#include <limits>

namespace dicke2 {

std::string to_string(PhaseLabel label, bool equal_ensembles) {
    switch (label) {
        case PhaseLabel::zfo_n_plus: return "+zFo-N";
        case PhaseLabel::zfo_n_minus: return "-zFo-N";
        case PhaseLabel::zfi_n_plus: return "+zFi-N";
        case PhaseLabel::zfi_n_minus: return "-zFi-N";
        case PhaseLabel::xfo_sr_plus: return "+xFo-SR";
        case PhaseLabel::xfo_sr_minus: return "-xFo-SR";
        case PhaseLabel::xfi_sr_plus: return equal_ensembles ? "+xaF-SR" : "+xFi-SR";
        case PhaseLabel::xfi_sr_minus: return equal_ensembles ? "-xaF-SR" : "-xFi-SR";
    }
    return "?";
}

std::optional<PhaseLabel> parse_phase_label(std::string_view text) {
    for (PhaseLabel label : all_phase_labels) {
        if (text == to_string(label, false) || text == to_string(label, true)) return label;
    }
    return std::nullopt;
}

CriticalCouplings critical_couplings(const ModelParams& p) {
    p.validate();
    const double num = p.omega_a * (p.omega_c * p.omega_c + p.kappa * p.kappa);
    CriticalCouplings c;
    const double diff = p.n1 - p.n2;
    c.xfo = diff > 0.0 ? std::sqrt(num / (diff * p.omega_c))
                       : std::numeric_limits<double>::infinity();
    c.xfi = std::sqrt(num / ((p.n1 + p.n2) * p.omega_c));
    return c;
}

namespace {

MeanFieldState normal_state(const ModelParams& p, double sign1, double sign2) {
    MeanFieldState s;
    s.s1 = {0.0, 0.0, sign1 * 0.5 * p.n1};
    s.s2 = {0.0, 0.0, sign2 * 0.5 * p.n2};
    return s;
}

FixedPointRecord make_record(PhaseLabel label, const ModelParams& p, MeanFieldState state,
                             bool exists) {
    return FixedPointRecord{label, state, exists, energy(state, p)};
}

// Field amplitude a_ss = lambda (S1x - S2x) / (-omega_c + i kappa).
complexd steady_field(const ModelParams& p, double dsx) {
    return p.lambda * dsx / complexd(-p.omega_c, p.kappa);
}

// One superradiant branch. ferro selects xFo (spins parallel in x, S_lz of
// opposite sign) versus xFi (spins antiparallel in x, both S_lz negative);
// sign is the Z2 parity branch of S1x.
FixedPointRecord sr_record(const ModelParams& p, bool ferro, double sign, double lambda_c) {
    const PhaseLabel label = ferro ? (sign > 0 ? PhaseLabel::xfo_sr_plus : PhaseLabel::xfo_sr_minus)
                                   : (sign > 0 ? PhaseLabel::xfi_sr_plus : PhaseLabel::xfi_sr_minus);
    const bool exists = std::isfinite(lambda_c) && p.lambda >= lambda_c;
    if (!exists) {
        // Placeholder state: the parent normal state the branch bifurcates from.
        MeanFieldState parent = ferro ? normal_state(p, -1.0, +1.0) : normal_state(p, -1.0, -1.0);
        return FixedPointRecord{label, parent, false, energy(parent, p)};
    }
    const double ratio = lambda_c / p.lambda;
    const double ratio4 = ratio * ratio * ratio * ratio;
    const double j1 = 0.5 * p.n1;
    const double j2 = 0.5 * p.n2;
    const double s1x = sign * j1 * std::sqrt(std::max(0.0, 1.0 - ratio4));
    const double s2x = (ferro ? 1.0 : -1.0) * (p.n1 > 0.0 ? p.n2 / p.n1 : 0.0) * s1x;
    const double s1z = -std::sqrt(std::max(0.0, j1 * j1 - s1x * s1x));
    const double s2z = (ferro ? 1.0 : -1.0) * std::sqrt(std::max(0.0, j2 * j2 - s2x * s2x));

    MeanFieldState s;
    s.a = steady_field(p, s1x - s2x);
    s.s1 = {s1x, 0.0, s1z};
    s.s2 = {s2x, 0.0, s2z};
    return make_record(label, p, s, true);
}

}  // namespace

std::vector<FixedPointRecord> normal_fixed_points(const ModelParams& p) {
    p.validate();
    std::vector<FixedPointRecord> out;
    out.reserve(4);
    out.push_back(make_record(PhaseLabel::zfo_n_plus, p, normal_state(p, +1.0, +1.0), true));
    out.push_back(make_record(PhaseLabel::zfo_n_minus, p, normal_state(p, -1.0, -1.0), true));
    out.push_back(make_record(PhaseLabel::zfi_n_plus, p, normal_state(p, +1.0, -1.0), true));
    out.push_back(make_record(PhaseLabel::zfi_n_minus, p, normal_state(p, -1.0, +1.0), true));
    return out;
}

std::vector<FixedPointRecord> superradiant_fixed_points(const ModelParams& p) {
    p.validate();
    if (p.omega_a == 0.0)
        throw UnsupportedParameterError(
            "fixed-point classification requires omega_a != 0 (steady states assume S_ly = 0)");
    const CriticalCouplings c = critical_couplings(p);
    std::vector<FixedPointRecord> out;
    out.reserve(4);
    out.push_back(sr_record(p, true, +1.0, c.xfo));
    out.push_back(sr_record(p, true, -1.0, c.xfo));
    out.push_back(sr_record(p, false, +1.0, c.xfi));
    out.push_back(sr_record(p, false, -1.0, c.xfi));
    return out;
}

std::vector<FixedPointRecord> all_fixed_points(const ModelParams& p) {
    std::vector<FixedPointRecord> out = normal_fixed_points(p);
    std::vector<FixedPointRecord> sr = superradiant_fixed_points(p);
    out.insert(out.end(), sr.begin(), sr.end());
    return out;
}

const FixedPointRecord& find_fixed_point(const std::vector<FixedPointRecord>& records,
                                         PhaseLabel label) {
    for (const auto& r : records) {
        if (r.label == label) return r;
    }
    throw DomainError("fixed-point label not present in record list");
}

}  // namespace dicke2
