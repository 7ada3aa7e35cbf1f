#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dicke2/model.hpp"

namespace dicke2 {

// The eight mean-field fixed-point classes. Normal (N) states have a vacuum
// field and spins along +-z; superradiant (SR) states carry a macroscopic
// field with x-ferromagnetic (xFo) or x-ferrimagnetic (xFi) spin ordering.
enum class PhaseLabel {
    zfo_n_plus,
    zfo_n_minus,
    zfi_n_plus,
    zfi_n_minus,
    xfo_sr_plus,
    xfo_sr_minus,
    xfi_sr_plus,
    xfi_sr_minus,
};

inline constexpr std::array<PhaseLabel, 8> all_phase_labels = {
    PhaseLabel::zfo_n_plus,  PhaseLabel::zfo_n_minus, PhaseLabel::zfi_n_plus,
    PhaseLabel::zfi_n_minus, PhaseLabel::xfo_sr_plus, PhaseLabel::xfo_sr_minus,
    PhaseLabel::xfi_sr_plus, PhaseLabel::xfi_sr_minus,
};

// "+zFo-N", "-xFi-SR", ... With equal_ensembles the xFi branches cross over
// into x-antiferromagnetic order and are reported as "+xaF-SR"/"-xaF-SR".
std::string to_string(PhaseLabel label, bool equal_ensembles = false);
std::optional<PhaseLabel> parse_phase_label(std::string_view text);

inline bool is_superradiant(PhaseLabel label) {
    return label == PhaseLabel::xfo_sr_plus || label == PhaseLabel::xfo_sr_minus ||
           label == PhaseLabel::xfi_sr_plus || label == PhaseLabel::xfi_sr_minus;
}

struct CriticalCouplings {
    double xfo{0.0};  // +infinity when n2 == n1
    double xfi{0.0};
};

// lambda_c^(xFo/xFi) = sqrt(omega_a (omega_c^2 + kappa^2) / ((n1 -+ n2) omega_c)).
// The xFo threshold diverges as n2 -> n1.
CriticalCouplings critical_couplings(const ModelParams& params);

struct FixedPointRecord {
    PhaseLabel label{PhaseLabel::zfo_n_minus};
    MeanFieldState state;
    bool exists{false};
    double energy{0.0};
};

// The four field-vacuum fixed points (always exist).
std::vector<FixedPointRecord> normal_fixed_points(const ModelParams& params);

// The four superradiant branches; below-threshold branches are returned with
// exists = false so downstream grids keep a fixed schema.
std::vector<FixedPointRecord> superradiant_fixed_points(const ModelParams& params);

// All eight records in a fixed label order. The closed-form classification
// requires omega_a != 0; that edge throws UnsupportedParameterError.
std::vector<FixedPointRecord> all_fixed_points(const ModelParams& params);

const FixedPointRecord& find_fixed_point(const std::vector<FixedPointRecord>& records,
                                         PhaseLabel label);

}  // namespace dicke2
