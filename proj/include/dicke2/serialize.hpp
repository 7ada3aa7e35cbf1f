#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dicke2/dynamics.hpp"
#include "dicke2/quantum.hpp"
#include "dicke2/stability.hpp"
#include "dicke2/steady_state.hpp"
#include "dicke2/sweep.hpp"

namespace dicke2 {

using json = nlohmann::json;

// Shortest round-trippable decimal form of a double ("nan" for NaN, "inf").
std::string format_double(double value);

json to_json(const ModelParams& params);
json to_json(const FixedPointRecord& record, const ModelParams& params);
json to_json(const std::vector<FixedPointRecord>& records, const ModelParams& params);
json to_json(const StabilityReport& report);
json to_json(const AttractorVerdict& verdict, const ModelParams& params);

// CSV writers. Every file starts with '# key: value' metadata lines; the
// timestamp line is omitted when reproducible is true.
struct MetaBlock {
    std::string tool;
    std::string command;
    const ModelParams* params{nullptr};
    bool reproducible{false};

    std::string render() const;
};

std::string trajectory_csv(const Trajectory& traj, const MetaBlock& meta);
std::string scan_csv(const std::vector<ScanRow>& rows, const ModelParams& params,
                     const MetaBlock& meta);
std::string phase_diagram_csv(const std::vector<PhaseCell>& cells, const GridSpec& grid,
                              const MetaBlock& meta);
std::string line_cut_csv(const std::vector<PhaseCell>& cells, const ModelParams& params,
                         const MetaBlock& meta);
std::string observables_csv(const std::vector<ObservableSample>& samples,
                            const MetaBlock& meta);
std::string q_function_csv(const QFunctionGrid& grid, const MetaBlock& meta);

// Gnuplot-ready matrix (rows = axis2 / Im alpha, columns = axis1 / Re alpha).
std::string gnuplot_matrix(const Eigen::MatrixXd& values, const std::vector<double>& axis1,
                           const std::vector<double>& axis2);
std::string gnuplot_matrix(const QFunctionGrid& grid);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace dicke2
