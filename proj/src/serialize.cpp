#include "dicke2/serialize.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

namespace dicke2 {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    // %.17g always round-trips; prefer the shorter %.15g form when it does.
    std::snprintf(buf, sizeof(buf), "%.15g", value);
    if (std::strtod(buf, nullptr) != value) std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

json to_json(const ModelParams& p) {
    return json{{"omega_c", p.omega_c}, {"omega_a", p.omega_a}, {"kappa", p.kappa},
                {"lambda", p.lambda},   {"n1", p.n1},           {"n2", p.n2}};
}

json to_json(const FixedPointRecord& r, const ModelParams& params) {
    const bool equal = params.n2 == params.n1;
    json j{{"label", to_string(r.label, equal)},
           {"exists", r.exists},
           {"a_re", r.state.a.real()},
           {"a_im", r.state.a.imag()},
           {"s1x", r.state.s1.x},
           {"s1y", r.state.s1.y},
           {"s1z", r.state.s1.z},
           {"s2x", r.state.s2.x},
           {"s2y", r.state.s2.y},
           {"s2z", r.state.s2.z},
           {"energy", r.energy}};
    return j;
}

json to_json(const std::vector<FixedPointRecord>& records, const ModelParams& params) {
    json out = json::array();
    for (const auto& r : records) out.push_back(to_json(r, params));
    return out;
}

json to_json(const StabilityReport& report) {
    json evs = json::array();
    for (const auto& ev : report.eigenvalues)
        evs.push_back(json{{"re", ev.real()}, {"im", ev.imag()}});
    return json{{"eigenvalues", evs},
                {"verdict", to_string(report.verdict)},
                {"zero_modes_excluded", report.zero_modes_excluded},
                {"leading_re", report.leading.real()},
                {"leading_im", report.leading.imag()}};
}

json to_json(const AttractorVerdict& verdict, const ModelParams& params) {
    json j;
    switch (verdict.kind) {
        case AttractorVerdict::Kind::fixed_point: j["kind"] = "fixed_point"; break;
        case AttractorVerdict::Kind::limit_cycle: j["kind"] = "limit_cycle"; break;
        case AttractorVerdict::Kind::undecided: j["kind"] = "undecided"; break;
    }
    j["label"] = verdict.label ? json(to_string(*verdict.label, params.n2 == params.n1))
                               : json(nullptr);
    j["period"] = verdict.period ? json(*verdict.period) : json(nullptr);
    j["amplitude"] = verdict.amplitude ? json(*verdict.amplitude) : json(nullptr);
    j["transient_end"] = verdict.transient_end;
    return j;
}

std::string MetaBlock::render() const {
    std::ostringstream out;
    out << "# generated-by: " << (tool.empty() ? "dicke2" : tool) << "\n";
    if (!command.empty()) out << "# command: " << command << "\n";
    if (params) {
        out << "# params: omega_c=" << format_double(params->omega_c)
            << " omega_a=" << format_double(params->omega_a)
            << " kappa=" << format_double(params->kappa)
            << " lambda=" << format_double(params->lambda) << " n1=" << format_double(params->n1)
            << " n2=" << format_double(params->n2) << "\n";
    }
    if (!reproducible) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[64];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        out << "# timestamp: " << buf << "\n";
    }
    return out.str();
}

std::string trajectory_csv(const Trajectory& traj, const MetaBlock& meta) {
    std::ostringstream out;
    out << meta.render();
    out << "t,re_a,im_a,s1x,s1y,s1z,s2x,s2y,s2z,energy,norm1,norm2\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const MeanFieldState& s = traj.states[i];
        out << format_double(traj.times[i]) << ',' << format_double(s.a.real()) << ','
            << format_double(s.a.imag()) << ',' << format_double(s.s1.x) << ','
            << format_double(s.s1.y) << ',' << format_double(s.s1.z) << ','
            << format_double(s.s2.x) << ',' << format_double(s.s2.y) << ','
            << format_double(s.s2.z) << ',' << format_double(traj.observables[i].energy) << ','
            << format_double(s.s1.norm()) << ',' << format_double(s.s2.norm()) << '\n';
    }
    return out.str();
}

std::string scan_csv(const std::vector<ScanRow>& rows, const ModelParams& params,
                     const MetaBlock& meta) {
    const bool equal = params.n2 == params.n1;
    std::ostringstream out;
    out << meta.render();
    out << "lambda,label,verdict,re_lead,im_lead,n_zero_modes\n";
    for (const ScanRow& row : rows) {
        out << format_double(row.lambda) << ',' << to_string(row.label, equal) << ','
            << (row.exists ? to_string(row.verdict) : std::string("absent")) << ','
            << format_double(row.leading.real()) << ',' << format_double(row.leading.imag())
            << ',' << row.zero_modes << '\n';
    }
    return out.str();
}

namespace {

void cell_rows(std::ostream& out, const PhaseCell& cell, bool equal) {
    for (const CellEntry& e : cell.entries) {
        out << format_double(cell.x1) << ',' << format_double(cell.x2) << ','
            << to_string(e.label, equal) << ',' << (e.exists ? 1 : 0) << ','
            << (e.stable ? 1 : 0) << ',' << format_double(e.sx) << ',' << format_double(e.sz)
            << ',' << format_double(e.dsx) << ',' << format_double(e.energy) << ','
            << format_double(e.nphot) << '\n';
    }
}

}  // namespace

std::string phase_diagram_csv(const std::vector<PhaseCell>& cells, const GridSpec& grid,
                              const MetaBlock& meta) {
    std::ostringstream out;
    out << meta.render();
    out << "# grid: " << grid.axis1.name << "[" << format_double(grid.axis1.min) << ","
        << format_double(grid.axis1.max) << ";" << grid.axis1.count << "] x " << grid.axis2.name
        << "[" << format_double(grid.axis2.min) << "," << format_double(grid.axis2.max) << ";"
        << grid.axis2.count << "]\n";
    out << grid.axis1.name << ',' << grid.axis2.name << ",label,exists,stable,sx,sz,dsx,e0,nphot\n";
    const bool equal = grid.base.n2 == grid.base.n1 && grid.axis1.name != "n2_over_n1" &&
                       grid.axis2.name != "n2_over_n1";
    for (const PhaseCell& cell : cells) cell_rows(out, cell, equal);
    return out.str();
}

std::string line_cut_csv(const std::vector<PhaseCell>& cells, const ModelParams& params,
                         const MetaBlock& meta) {
    std::ostringstream out;
    out << meta.render();
    out << "n2_over_n1,lambda,label,exists,stable,sx,sz,dsx,e0,nphot\n";
    for (const PhaseCell& cell : cells) cell_rows(out, cell, params.n2 == params.n1);
    return out.str();
}

std::string observables_csv(const std::vector<ObservableSample>& samples,
                            const MetaBlock& meta) {
    std::ostringstream out;
    out << meta.render();
    out << "t,re_exp_a,im_exp_a,n_phot,s1x,s1y,s1z,s2x,s2y,s2z,s_z_total,dsx\n";
    for (const ObservableSample& s : samples) {
        out << format_double(s.t) << ',' << format_double(s.exp_a.real()) << ','
            << format_double(s.exp_a.imag()) << ',' << format_double(s.n_phot) << ','
            << format_double(s.s1x) << ',' << format_double(s.s1y) << ','
            << format_double(s.s1z) << ',' << format_double(s.s2x) << ','
            << format_double(s.s2y) << ',' << format_double(s.s2z) << ','
            << format_double(s.sz_total) << ',' << format_double(s.dsx) << '\n';
    }
    return out.str();
}

std::string q_function_csv(const QFunctionGrid& grid, const MetaBlock& meta) {
    std::ostringstream out;
    out << meta.render();
    out << "re_alpha,im_alpha,q\n";
    for (std::size_t i = 0; i < grid.im_axis.size(); ++i)
        for (std::size_t k = 0; k < grid.re_axis.size(); ++k)
            out << format_double(grid.re_axis[k]) << ',' << format_double(grid.im_axis[i]) << ','
                << format_double(grid.values(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(k)))
                << '\n';
    return out.str();
}

std::string gnuplot_matrix(const Eigen::MatrixXd& values, const std::vector<double>& axis1,
                           const std::vector<double>& axis2) {
    std::ostringstream out;
    out << format_double(static_cast<double>(axis1.size()));
    for (double x : axis1) out << ' ' << format_double(x);
    out << '\n';
    for (std::size_t r = 0; r < axis2.size(); ++r) {
        out << format_double(axis2[r]);
        for (std::size_t c = 0; c < axis1.size(); ++c)
            out << ' '
                << format_double(values(static_cast<Eigen::Index>(r),
                                        static_cast<Eigen::Index>(c)));
        out << '\n';
    }
    return out.str();
}

std::string gnuplot_matrix(const QFunctionGrid& grid) {
    return gnuplot_matrix(grid.values, grid.re_axis, grid.im_axis);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot open output file: " + path);
    out << content;
}

}  // namespace dicke2
