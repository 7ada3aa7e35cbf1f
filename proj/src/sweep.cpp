#include "dicke2/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace dicke2 {

std::vector<double> AxisSpec::values() const {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] =
            min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

void GridSpec::validate() const {
    for (const AxisSpec* axis : {&axis1, &axis2}) {
        if (axis->count < 2) throw DomainError("grid axis needs count >= 2");
        if (!(axis->min < axis->max)) throw DomainError("grid axis needs min < max");
    }
}

ModelParams apply_axis(const ModelParams& base, const std::string& axis, double value) {
    ModelParams p = base;
    if (axis == "n2_over_n1")
        p.n2 = value * p.n1;
    else if (axis == "lambda")
        p.lambda = value;
    else if (axis == "omega_c")
        p.omega_c = value;
    else if (axis == "omega_a")
        p.omega_a = value;
    else if (axis == "kappa")
        p.kappa = value;
    else if (axis == "n1")
        p.n1 = value;
    else if (axis == "n2")
        p.n2 = value;
    else
        throw DomainError("unknown sweep axis: " + axis);
    return p;
}

namespace {

PhaseCell evaluate_cell(const ModelParams& params, double x1, double x2,
                        const StabilityOptions& opts) {
    PhaseCell cell;
    cell.x1 = x1;
    cell.x2 = x2;
    const auto fps = all_fixed_points(params);
    cell.entries.reserve(fps.size());
    for (const FixedPointRecord& fp : fps) {
        CellEntry e;
        e.label = fp.label;
        e.exists = fp.exists;
        e.state = fp.state;
        if (fp.exists) {
            ++cell.n_fixed_points;
            const DerivedObservables obs = observables(fp.state, params);
            e.sx = obs.total_spin.x;
            e.sz = obs.total_spin.z;
            e.dsx = obs.staggered_spin.x;
            e.energy = obs.energy;
            e.nphot = obs.photon_number;
            const StabilityReport report = classify_stability(fp, params, opts);
            e.verdict = report.verdict;
            e.stable = report.verdict == Verdict::stable;
        } else {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            e.sx = e.sz = e.dsx = e.energy = e.nphot = nan;
        }
        cell.entries.push_back(e);
    }
    return cell;
}

// Deterministic parallel map: slot i always receives the result for index i.
void parallel_fill(std::size_t total, int jobs, const std::function<void(std::size_t)>& work) {
    const int workers = std::max(1, jobs);
    if (workers == 1 || total < 2) {
        for (std::size_t i = 0; i < total; ++i) work(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) work(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

std::vector<PhaseCell> phase_diagram(const GridSpec& grid, int jobs,
                                     const StabilityOptions& opts) {
    grid.validate();
    const std::vector<double> v1 = grid.axis1.values();
    const std::vector<double> v2 = grid.axis2.values();
    std::vector<PhaseCell> cells(v1.size() * v2.size());
    parallel_fill(cells.size(), jobs, [&](std::size_t idx) {
        const std::size_t i = idx / v2.size();
        const std::size_t k = idx % v2.size();
        ModelParams p = apply_axis(grid.base, grid.axis1.name, v1[i]);
        p = apply_axis(p, grid.axis2.name, v2[k]);
        cells[idx] = evaluate_cell(p, v1[i], v2[k], opts);
    });
    return cells;
}

std::vector<PhaseCell> line_cut(const ModelParams& params,
                                const std::vector<double>& lambda_grid, int jobs,
                                const StabilityOptions& opts) {
    std::vector<PhaseCell> cells(lambda_grid.size());
    parallel_fill(cells.size(), jobs, [&](std::size_t idx) {
        ModelParams p = params;
        p.lambda = lambda_grid[idx];
        cells[idx] = evaluate_cell(p, p.n1 > 0.0 ? p.n2 / p.n1 : 0.0, lambda_grid[idx], opts);
    });
    return cells;
}

std::string to_string(SurfaceQuantity q) {
    switch (q) {
        case SurfaceQuantity::sx: return "sx";
        case SurfaceQuantity::sz: return "sz";
        case SurfaceQuantity::dsx: return "dsx";
        case SurfaceQuantity::e0: return "e0";
        case SurfaceQuantity::nphot: return "nphot";
    }
    return "?";
}

Eigen::MatrixXd surface(const std::vector<PhaseCell>& cells, const GridSpec& grid,
                        SurfaceQuantity quantity, PhaseLabel label) {
    const auto n1 = static_cast<std::size_t>(grid.axis1.count);
    const auto n2 = static_cast<std::size_t>(grid.axis2.count);
    if (cells.size() != n1 * n2) throw DomainError("surface: cell list does not match grid");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n2), static_cast<Eigen::Index>(n1));
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t k = 0; k < n2; ++k) {
            const PhaseCell& cell = cells[i * n2 + k];
            double value = std::numeric_limits<double>::quiet_NaN();
            for (const CellEntry& e : cell.entries) {
                if (e.label != label) continue;
                if (!e.exists) break;
                switch (quantity) {
                    case SurfaceQuantity::sx: value = e.sx; break;
                    case SurfaceQuantity::sz: value = e.sz; break;
                    case SurfaceQuantity::dsx: value = e.dsx; break;
                    case SurfaceQuantity::e0: value = e.energy; break;
                    case SurfaceQuantity::nphot: value = e.nphot; break;
                }
                break;
            }
            out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = value;
        }
    return out;
}

std::vector<BoundaryEstimate> extract_boundaries(const std::vector<PhaseCell>& cells,
                                                 const GridSpec& grid) {
    const auto n1 = static_cast<std::size_t>(grid.axis1.count);
    const auto n2 = static_cast<std::size_t>(grid.axis2.count);
    if (cells.size() != n1 * n2)
        throw DomainError("extract_boundaries: cell list does not match grid");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<BoundaryEstimate> out;
    out.reserve(n1);
    for (std::size_t i = 0; i < n1; ++i) {
        BoundaryEstimate b;
        b.x1 = cells[i * n2].x1;
        b.lambda_4_to_6 = nan;
        b.lambda_6_to_8 = nan;
        for (std::size_t k = 1; k < n2; ++k) {
            const PhaseCell& lo = cells[i * n2 + k - 1];
            const PhaseCell& hi = cells[i * n2 + k];
            const double mid = 0.5 * (lo.x2 + hi.x2);
            if (lo.n_fixed_points == 4 && hi.n_fixed_points >= 6) b.lambda_4_to_6 = mid;
            if (lo.n_fixed_points == 4 && hi.n_fixed_points == 8) b.lambda_6_to_8 = mid;
            if (lo.n_fixed_points == 6 && hi.n_fixed_points == 8) b.lambda_6_to_8 = mid;
        }
        out.push_back(b);
    }
    return out;
}

}  // namespace dicke2
