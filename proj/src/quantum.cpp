#include "dicke2/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dicke2 {

namespace {

using Triplet = Eigen::Triplet<complexd>;

// One-factor operator entries: (row, col, value) on a small factor space.
struct FactorOp {
    int dim{0};
    std::vector<Triplet> entries;
};

FactorOp photon_lowering(int n_max) {
    FactorOp op{n_max + 1, {}};
    for (int n = 1; n <= n_max; ++n)
        op.entries.emplace_back(n - 1, n, complexd(std::sqrt(static_cast<double>(n))));
    return op;
}

FactorOp photon_number(int n_max) {
    FactorOp op{n_max + 1, {}};
    for (int n = 1; n <= n_max; ++n)
        op.entries.emplace_back(n, n, complexd(static_cast<double>(n)));
    return op;
}

// <j, m+1 | S_+ | j, m> = sqrt((j - m)(j + m + 1)), index i = m + j.
FactorOp spin_raising(int n_levels) {
    const double j = 0.5 * static_cast<double>(n_levels - 1);
    FactorOp op{n_levels, {}};
    for (int i = 0; i + 1 < n_levels; ++i) {
        const double m = static_cast<double>(i) - j;
        op.entries.emplace_back(i + 1, i, complexd(std::sqrt((j - m) * (j + m + 1.0))));
    }
    return op;
}

FactorOp spin_z(int n_levels) {
    const double j = 0.5 * static_cast<double>(n_levels - 1);
    FactorOp op{n_levels, {}};
    for (int i = 0; i < n_levels; ++i) {
        const double m = static_cast<double>(i) - j;
        if (m != 0.0) op.entries.emplace_back(i, i, complexd(m));
    }
    return op;
}

enum class Factor { field, spin1, spin2 };

SparseC embed(const HilbertSpec& spec, const FactorOp& op, Factor which) {
    const std::size_t dim = spec.dim();
    std::vector<Triplet> triplets;
    triplets.reserve(op.entries.size() * dim / static_cast<std::size_t>(op.dim));
    for (const auto& e : op.entries) {
        switch (which) {
            case Factor::field:
                for (int i1 = 0; i1 <= spec.N1; ++i1)
                    for (int i2 = 0; i2 <= spec.N2; ++i2)
                        triplets.emplace_back(
                            static_cast<int>(spec.index(e.row(), i1, i2)),
                            static_cast<int>(spec.index(e.col(), i1, i2)), e.value());
                break;
            case Factor::spin1:
                for (int n = 0; n <= spec.n_max; ++n)
                    for (int i2 = 0; i2 <= spec.N2; ++i2)
                        triplets.emplace_back(
                            static_cast<int>(spec.index(n, e.row(), i2)),
                            static_cast<int>(spec.index(n, e.col(), i2)), e.value());
                break;
            case Factor::spin2:
                for (int n = 0; n <= spec.n_max; ++n)
                    for (int i1 = 0; i1 <= spec.N1; ++i1)
                        triplets.emplace_back(
                            static_cast<int>(spec.index(n, i1, e.row())),
                            static_cast<int>(spec.index(n, i1, e.col())), e.value());
                break;
        }
    }
    SparseC out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    out.setFromTriplets(triplets.begin(), triplets.end());
    out.makeCompressed();
    return out;
}

}  // namespace

void HilbertSpec::validate(std::size_t dim_budget) const {
    if (n_max < 0) throw DomainError("HilbertSpec: n_max must be >= 0");
    if (N1 < 1 || N2 < 0) throw DomainError("HilbertSpec: need N1 >= 1 and N2 >= 0");
    if (dim() > dim_budget)
        throw ResourceError("HilbertSpec: dimension " + std::to_string(dim()) +
                            " exceeds budget " + std::to_string(dim_budget));
}

OperatorSet build_operators(const HilbertSpec& spec, std::size_t dim_budget) {
    spec.validate(dim_budget);
    OperatorSet ops;
    ops.spec = spec;
    ops.a = embed(spec, photon_lowering(spec.n_max), Factor::field);
    ops.a_dag = ops.a.adjoint();
    ops.n_phot = embed(spec, photon_number(spec.n_max), Factor::field);
    ops.s1p = embed(spec, spin_raising(spec.N1 + 1), Factor::spin1);
    ops.s1m = ops.s1p.adjoint();
    ops.s1z = embed(spec, spin_z(spec.N1 + 1), Factor::spin1);
    ops.s2p = embed(spec, spin_raising(spec.N2 + 1), Factor::spin2);
    ops.s2m = ops.s2p.adjoint();
    ops.s2z = embed(spec, spin_z(spec.N2 + 1), Factor::spin2);
    return ops;
}

SparseC hamiltonian(const ModelParams& params, const OperatorSet& ops) {
    params.validate();
    SparseC h = complexd(params.omega_c) * ops.n_phot +
                complexd(params.omega_a) * (ops.s1z + ops.s2z);
    if (params.lambda != 0.0) {
        const SparseC dsx = (ops.s1x() - ops.s2x()).eval();
        const SparseC field = (ops.a_dag + ops.a).eval();
        h = h + complexd(params.lambda) * (field * dsx).eval();
    }
    h.makeCompressed();
    return h;
}

DenseC lindblad_rhs(const DenseC& rho, const SparseC& H, const OperatorSet& ops, double kappa) {
    const complexd i_unit(0.0, 1.0);
    DenseC h_rho = H * rho;
    DenseC out = i_unit * (rho * H - h_rho);
    if (kappa != 0.0) {
        DenseC a_rho = ops.a * rho;
        out.noalias() += complexd(2.0 * kappa) * (a_rho * ops.a_dag);
        out.noalias() -= complexd(kappa) * (ops.n_phot * rho);
        out.noalias() -= complexd(kappa) * (rho * ops.n_phot);
    }
    return out;
}

SparseC parity_operator(const HilbertSpec& spec) {
    std::vector<Triplet> triplets;
    triplets.reserve(spec.dim());
    for (int n = 0; n <= spec.n_max; ++n)
        for (int i1 = 0; i1 <= spec.N1; ++i1)
            for (int i2 = 0; i2 <= spec.N2; ++i2) {
                const double sign = ((n + i1 + i2) % 2 == 0) ? 1.0 : -1.0;
                triplets.emplace_back(static_cast<int>(spec.index(n, i1, i2)),
                                      static_cast<int>(spec.index(n, i1, i2)), complexd(sign));
            }
    SparseC out(static_cast<Eigen::Index>(spec.dim()), static_cast<Eigen::Index>(spec.dim()));
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

complexd expectation(const SparseC& op, const DenseC& rho) {
    complexd sum(0.0, 0.0);
    for (int k = 0; k < op.outerSize(); ++k)
        for (SparseC::InnerIterator it(op, k); it; ++it)
            sum += it.value() * rho(it.col(), it.row());
    return sum;
}

namespace {

double top_level_population(const DenseC& rho, const HilbertSpec& spec) {
    double pop = 0.0;
    for (int i1 = 0; i1 <= spec.N1; ++i1)
        for (int i2 = 0; i2 <= spec.N2; ++i2) {
            const auto idx = static_cast<Eigen::Index>(spec.index(spec.n_max, i1, i2));
            pop += rho(idx, idx).real();
        }
    return pop;
}

ObservableSample sample_observables(double t, const DenseC& rho, const OperatorSet& ops) {
    ObservableSample s;
    s.t = t;
    s.exp_a = expectation(ops.a, rho);
    s.n_phot = expectation(ops.n_phot, rho).real();
    s.s1x = expectation(ops.s1x(), rho).real();
    s.s1y = expectation(ops.s1y(), rho).real();
    s.s1z = expectation(ops.s1z, rho).real();
    s.s2x = expectation(ops.s2x(), rho).real();
    s.s2y = expectation(ops.s2y(), rho).real();
    s.s2z = expectation(ops.s2z, rho).real();
    s.sz_total = s.s1z + s.s2z;
    s.dsx = s.s1x - s.s2x;
    return s;
}

}  // namespace

namespace {

// CSR view of a sparse operator for the hot master-equation products; Eigen's
// generic sparse*dense path is too slow for the RK4 inner loop.
struct CsrMatrix {
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<complexd> val;
    int n{0};

    static CsrMatrix from(const SparseC& m) {
        Eigen::SparseMatrix<complexd, Eigen::RowMajor> rm(m);
        rm.makeCompressed();
        CsrMatrix out;
        out.n = static_cast<int>(rm.rows());
        out.row_ptr.assign(rm.outerIndexPtr(), rm.outerIndexPtr() + rm.rows() + 1);
        out.col.assign(rm.innerIndexPtr(), rm.innerIndexPtr() + rm.nonZeros());
        out.val.assign(rm.valuePtr(), rm.valuePtr() + rm.nonZeros());
        return out;
    }

    // out = this * rho, both dense column-major.
    void multiply(const DenseC& rho, DenseC& out) const {
        const int cols = static_cast<int>(rho.cols());
#pragma omp parallel for schedule(static)
        for (int c = 0; c < cols; ++c) {
            const complexd* src = rho.data() + static_cast<std::ptrdiff_t>(c) * n;
            complexd* dst = out.data() + static_cast<std::ptrdiff_t>(c) * n;
            for (int i = 0; i < n; ++i) {
                complexd acc(0.0, 0.0);
                for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
                    acc += val[static_cast<std::size_t>(k)] * src[col[static_cast<std::size_t>(k)]];
                dst[i] = acc;
            }
        }
    }
};

}  // namespace

EvolveResult evolve_master(const DenseC& rho0, const ModelParams& params,
                           const HilbertSpec& spec, double t_final, double dt,
                           const EvolveControls& controls) {
    params.validate();
    spec.validate();
    if (!(dt > 0.0)) throw DomainError("evolve_master: dt must be > 0");
    if (!(t_final > 0.0)) throw DomainError("evolve_master: t_final must be > 0");
    const auto dim = static_cast<Eigen::Index>(spec.dim());
    if (rho0.rows() != dim || rho0.cols() != dim)
        throw DomainError("evolve_master: rho0 dimension mismatch");

    const OperatorSet ops = build_operators(spec);
    const SparseC H = hamiltonian(params, ops);

    // Effective generator: rhs(rho) = G rho + (G rho)^dag + 2 kappa a rho a^dag,
    // valid for Hermitian rho (all RK4 stages stay Hermitian).
    SparseC G = (complexd(0.0, -1.0) * H).eval();
    if (params.kappa != 0.0) G = G - complexd(params.kappa) * ops.n_phot;
    G.makeCompressed();
    const CsrMatrix g_csr = CsrMatrix::from(G);
    const double two_kappa = 2.0 * params.kappa;
    const int spin_dim = (spec.N1 + 1) * (spec.N2 + 1);

    DenseC g_rho(dim, dim);
    auto rhs = [&](const DenseC& rho) -> DenseC {
        g_csr.multiply(rho, g_rho);
        DenseC out = g_rho;
        out += g_rho.adjoint();
        if (two_kappa != 0.0) {
            // 2 kappa a rho a^dag, using the photon-shift structure of a: the
            // (n, m) photon block of the result is 2k sqrt((n+1)(m+1)) times
            // the (n+1, m+1) block of rho; handled column-wise for locality.
            const int d = static_cast<int>(dim);
#pragma omp parallel for schedule(static)
            for (int c = 0; c < d; ++c) {
                const int n_col = c / spin_dim;
                if (n_col >= spec.n_max) continue;
                complexd* dst = out.data() + static_cast<std::ptrdiff_t>(c) * d;
                const complexd* src =
                    rho.data() + static_cast<std::ptrdiff_t>(c + spin_dim) * d;
                const double col_amp =
                    two_kappa * std::sqrt(static_cast<double>(n_col + 1));
                for (int nb = 0; nb < spec.n_max; ++nb) {
                    const double amp = col_amp * std::sqrt(static_cast<double>(nb + 1));
                    const int r0 = nb * spin_dim;
                    for (int r = r0; r < r0 + spin_dim; ++r)
                        dst[r] += amp * src[r + spin_dim];
                }
            }
        }
        return out;
    };

    auto n_steps = static_cast<std::size_t>(std::llround(t_final / dt));
    if (n_steps == 0) n_steps = 1;
    const std::size_t stride =
        std::max<std::size_t>(1, n_steps / std::max<std::size_t>(1, controls.n_samples));

    EvolveResult result;
    result.rho_final = rho0;
    DenseC& rho = result.rho_final;

    auto check_and_sample = [&](double t) {
        const double trace_drift = std::abs(rho.trace().real() - 1.0) +
                                   std::abs(rho.trace().imag());
        result.max_trace_drift = std::max(result.max_trace_drift, trace_drift);
        const double herm = (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
        result.max_herm_dev = std::max(result.max_herm_dev, herm);
        const double top = top_level_population(rho, spec);
        result.max_top_population = std::max(result.max_top_population, top);
        result.samples.push_back(sample_observables(t, rho, ops));
        if (trace_drift > controls.trace_tol)
            throw NumericalError("evolve_master: trace drift " + std::to_string(trace_drift) +
                                 " exceeds tolerance; reduce dt");
        if (top > controls.cutoff_fail)
            throw NumericalError("evolve_master: photon cutoff saturated (population " +
                                 std::to_string(top) + " at n_max); increase n_max");
        if (top > controls.cutoff_warn) result.truncation_warning = true;
    };

    check_and_sample(0.0);

    DenseC k1, k2, k3, k4;
    for (std::size_t step = 1; step <= n_steps; ++step) {
        k1 = rhs(rho);
        k2 = rhs(rho + (0.5 * dt) * k1);
        k3 = rhs(rho + (0.5 * dt) * k2);
        k4 = rhs(rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (step % stride == 0 || step == n_steps) {
            check_and_sample(dt * static_cast<double>(step));
            // Strip accumulated anti-Hermitian round-off; left in place it
            // couples to ||H|| and sources a slow trace creep. The deviation
            // is recorded above before it is removed.
            rho = (0.5 * (rho + rho.adjoint().eval())).eval();
        }
    }
    return result;
}

VectorC coherent_spin_state(double j, double theta, double phi) {
    // j = 0 is the trivial one-level factor used when an ensemble is absent.
    const int levels = static_cast<int>(std::lround(2.0 * j)) + 1;
    if (levels < 1 || j < 0.0 || std::abs(2.0 * j - std::lround(2.0 * j)) > 1e-12)
        throw DomainError("coherent_spin_state: j must be a non-negative half-integer");
    const double cos_half = std::cos(0.5 * theta);
    const double sin_half = std::sin(0.5 * theta);
    VectorC state(levels);
    for (int i = 0; i < levels; ++i) {
        const double m = static_cast<double>(i) - j;
        const double log_binom =
            std::lgamma(2.0 * j + 1.0) - std::lgamma(j + m + 1.0) - std::lgamma(j - m + 1.0);
        const double mag = std::exp(0.5 * log_binom) * std::pow(cos_half, j + m) *
                           std::pow(sin_half, j - m);
        state(i) = mag * std::exp(complexd(0.0, -m * phi));
    }
    state.normalize();
    return state;
}

VectorC coherent_field_state(int n_max, complexd alpha) {
    if (n_max < 0) throw DomainError("coherent_field_state: n_max must be >= 0");
    VectorC state(n_max + 1);
    state(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= n_max; ++n)
        state(n) = state(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    return state;
}

VectorC product_state(const HilbertSpec& spec, const VectorC& field, const VectorC& spin1,
                      const VectorC& spin2) {
    if (field.size() != spec.n_max + 1 || spin1.size() != spec.N1 + 1 ||
        spin2.size() != spec.N2 + 1)
        throw DomainError("product_state: factor dimension mismatch");
    VectorC psi(static_cast<Eigen::Index>(spec.dim()));
    for (int n = 0; n <= spec.n_max; ++n)
        for (int i1 = 0; i1 <= spec.N1; ++i1)
            for (int i2 = 0; i2 <= spec.N2; ++i2)
                psi(static_cast<Eigen::Index>(spec.index(n, i1, i2))) =
                    field(n) * spin1(i1) * spin2(i2);
    return psi;
}

DenseC partial_trace_field(const DenseC& rho, const HilbertSpec& spec) {
    const auto dim = static_cast<Eigen::Index>(spec.dim());
    if (rho.rows() != dim || rho.cols() != dim)
        throw DomainError("partial_trace_field: dimension mismatch");
    DenseC out = DenseC::Zero(spec.n_max + 1, spec.n_max + 1);
    for (int n = 0; n <= spec.n_max; ++n)
        for (int m = 0; m <= spec.n_max; ++m) {
            complexd sum(0.0, 0.0);
            for (int i1 = 0; i1 <= spec.N1; ++i1)
                for (int i2 = 0; i2 <= spec.N2; ++i2)
                    sum += rho(static_cast<Eigen::Index>(spec.index(n, i1, i2)),
                               static_cast<Eigen::Index>(spec.index(m, i1, i2)));
            out(n, m) = sum;
        }
    return out;
}

QFunctionGrid husimi_q(const DenseC& rho_field, const std::vector<double>& re_axis,
                       const std::vector<double>& im_axis) {
    const int n_max = static_cast<int>(rho_field.rows()) - 1;
    if (n_max < 0 || rho_field.rows() != rho_field.cols())
        throw DomainError("husimi_q: invalid field density matrix");
    QFunctionGrid grid;
    grid.re_axis = re_axis;
    grid.im_axis = im_axis;
    grid.values.resize(static_cast<Eigen::Index>(im_axis.size()),
                       static_cast<Eigen::Index>(re_axis.size()));
    for (std::size_t i = 0; i < im_axis.size(); ++i) {
        for (std::size_t k = 0; k < re_axis.size(); ++k) {
            const complexd alpha(re_axis[k], im_axis[i]);
            const VectorC coh = coherent_field_state(n_max, alpha);
            const complexd q = coh.dot(rho_field * coh);  // <alpha| rho |alpha>
            grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                q.real() / std::numbers::pi;
        }
    }
    return grid;
}

QFunctionGrid husimi_q_auto(const DenseC& rho_field, int points_per_axis) {
    const int n_max = static_cast<int>(rho_field.rows()) - 1;
    double nbar = 0.0;
    for (int n = 0; n <= n_max; ++n) nbar += n * rho_field(n, n).real();
    const double half_width = 3.0 + 3.0 * std::sqrt(std::max(0.0, nbar));
    std::vector<double> axis(static_cast<std::size_t>(points_per_axis));
    for (int i = 0; i < points_per_axis; ++i)
        axis[static_cast<std::size_t>(i)] =
            -half_width + 2.0 * half_width * static_cast<double>(i) /
                              static_cast<double>(points_per_axis - 1);
    return husimi_q(rho_field, axis, axis);
}

double q_grid_integral(const QFunctionGrid& grid) {
    if (grid.re_axis.size() < 2 || grid.im_axis.size() < 2) return 0.0;
    const double dre = grid.re_axis[1] - grid.re_axis[0];
    const double dim_ = grid.im_axis[1] - grid.im_axis[0];
    return grid.values.sum() * dre * dim_;
}

LobeReport count_q_lobes(const QFunctionGrid& grid, double threshold_fraction) {
    const double qmax = grid.values.maxCoeff();
    const double threshold = threshold_fraction * qmax;
    const auto rows = grid.values.rows();
    const auto cols = grid.values.cols();
    Eigen::MatrixXi visited = Eigen::MatrixXi::Zero(rows, cols);

    LobeReport report;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> stack;
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index k = 0; k < cols; ++k) {
            if (visited(i, k) || grid.values(i, k) <= threshold) continue;
            Lobe lobe;
            complexd weighted(0.0, 0.0);
            stack.clear();
            stack.emplace_back(i, k);
            visited(i, k) = 1;
            while (!stack.empty()) {
                const auto [r, c] = stack.back();
                stack.pop_back();
                const double q = grid.values(r, c);
                lobe.weight += q;
                lobe.cells += 1;
                weighted += q * complexd(grid.re_axis[static_cast<std::size_t>(c)],
                                         grid.im_axis[static_cast<std::size_t>(r)]);
                const std::pair<Eigen::Index, Eigen::Index> nbrs[4] = {
                    {r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
                for (const auto& [nr, nc] : nbrs) {
                    if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
                    if (visited(nr, nc) || grid.values(nr, nc) <= threshold) continue;
                    visited(nr, nc) = 1;
                    stack.emplace_back(nr, nc);
                }
            }
            lobe.centroid = weighted / lobe.weight;
            report.lobes.push_back(lobe);
        }
    }
    std::sort(report.lobes.begin(), report.lobes.end(),
              [](const Lobe& a, const Lobe& b) { return a.weight > b.weight; });
    report.count = static_cast<int>(report.lobes.size());
    return report;
}

}  // namespace dicke2
