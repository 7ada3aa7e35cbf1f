#pragma once

#include <string>
#include <vector>

#include "dicke2/stability.hpp"
#include "dicke2/steady_state.hpp"

namespace dicke2 {

struct AxisSpec {
    std::string name;  // one of: n2_over_n1, lambda, omega_c, omega_a, kappa, n1, n2
    double min{0.0};
    double max{1.0};
    int count{2};

    std::vector<double> values() const;
};

struct GridSpec {
    AxisSpec axis1;  // e.g. n2_over_n1 in [0, 1]
    AxisSpec axis2;  // e.g. lambda
    ModelParams base;

    void validate() const;
};

// base with one named parameter replaced.
ModelParams apply_axis(const ModelParams& base, const std::string& axis, double value);

struct CellEntry {
    PhaseLabel label{PhaseLabel::zfo_n_minus};
    bool exists{false};
    bool stable{false};
    Verdict verdict{Verdict::marginal};
    double sx{0.0};    // total spin x
    double sz{0.0};    // total spin z
    double dsx{0.0};   // staggered spin x
    double energy{0.0};
    double nphot{0.0};
    MeanFieldState state;
};

struct PhaseCell {
    double x1{0.0};
    double x2{0.0};
    int n_fixed_points{0};
    std::vector<CellEntry> entries;  // all 8 labels, fixed order
};

// Fixed points + stability on every grid cell, row-major in (axis1, axis2),
// deterministic regardless of the worker count.
std::vector<PhaseCell> phase_diagram(const GridSpec& grid, int jobs = 1,
                                     const StabilityOptions& opts = {});

// All fixed-point observables against lambda at fixed remaining parameters.
std::vector<PhaseCell> line_cut(const ModelParams& params,
                                const std::vector<double>& lambda_grid, int jobs = 1,
                                const StabilityOptions& opts = {});

enum class SurfaceQuantity { sx, sz, dsx, e0, nphot };

std::string to_string(SurfaceQuantity q);

// Matrix of one steady-state quantity for one label over the grid; cells where
// the branch does not exist hold NaN. Rows follow axis2, columns axis1.
Eigen::MatrixXd surface(const std::vector<PhaseCell>& cells, const GridSpec& grid,
                        SurfaceQuantity quantity, PhaseLabel label);

struct BoundaryEstimate {
    double x1{0.0};           // axis1 value (column)
    double lambda_4_to_6{0.0};  // NaN when the transition is absent in range
    double lambda_6_to_8{0.0};
};

// Region boundaries read off the n_fixed_points transitions, assuming axis2
// is the coupling axis.
std::vector<BoundaryEstimate> extract_boundaries(const std::vector<PhaseCell>& cells,
                                                 const GridSpec& grid);

}  // namespace dicke2
