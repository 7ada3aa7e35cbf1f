#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dicke2/quantum.hpp"

using namespace dicke2;

TEST_SUITE_BEGIN("quantum");

namespace {

double op_norm(const SparseC& m) { return DenseC(m).cwiseAbs().maxCoeff(); }

SparseC commutator(const SparseC& a, const SparseC& b) {
    return ((a * b - b * a).eval()).pruned();
}

// S_l^2 as a sparse matrix.
SparseC spin_squared(const SparseC& sx, const SparseC& sy, const SparseC& sz) {
    return ((sx * sx + sy * sy + sz * sz).eval()).pruned();
}

DenseC random_hermitian_unit_trace(std::mt19937& rng, Eigen::Index dim) {
    std::normal_distribution<double> dist(0.0, 1.0);
    DenseC m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = complexd(dist(rng), dist(rng));
    DenseC h = 0.5 * (m + m.adjoint().eval());
    h -= ((h.trace() - 1.0) / static_cast<double>(dim)) * DenseC::Identity(dim, dim);
    return h;
}

ModelParams quantum_params(double lambda, int N1, int N2) {
    ModelParams p;
    p.omega_c = 1.0;
    p.omega_a = 1.0;
    p.kappa = 1.0;
    p.lambda = lambda;
    p.n1 = N1;
    p.n2 = N2;
    return p;
}

}  // namespace

TEST_CASE("dimension bookkeeping and budget") {
    CHECK(HilbertSpec{10, 4, 3}.dim() == 220);
    CHECK(HilbertSpec{0, 1, 0}.dim() == 2);
    CHECK_THROWS_AS(build_operators(HilbertSpec{1000, 4, 3}), ResourceError);
    CHECK_THROWS_AS(build_operators(HilbertSpec{-1, 4, 3}), DomainError);
}

TEST_CASE("spin-1/2 limit of the ladder construction") {
    const HilbertSpec spec{0, 1, 0};
    const OperatorSet ops = build_operators(spec);
    const DenseC s1z(ops.s1z);
    CHECK(s1z(spec.index(0, 0, 0), spec.index(0, 0, 0)).real() == doctest::Approx(-0.5));
    CHECK(s1z(spec.index(0, 1, 0), spec.index(0, 1, 0)).real() == doctest::Approx(0.5));
}

TEST_CASE("ladder commutators and photon number") {
    const HilbertSpec spec{3, 2, 1};
    const OperatorSet ops = build_operators(spec);

    CHECK(op_norm(commutator(ops.s1z, ops.s1p) - ops.s1p) <= 1e-12);
    CHECK(op_norm((commutator(ops.s1p, ops.s1m) - 2.0 * ops.s1z).pruned()) <= 1e-12);
    CHECK(op_norm(commutator(ops.s2z, ops.s2p) - ops.s2p) <= 1e-12);
    CHECK(op_norm((commutator(ops.s2p, ops.s2m) - 2.0 * ops.s2z).pruned()) <= 1e-12);

    // a^dag a is diagonal with entries 0..n_max on the photon factor.
    const DenseC n_mat(ops.a_dag * ops.a);
    for (int n = 0; n <= spec.n_max; ++n)
        for (int i1 = 0; i1 <= spec.N1; ++i1)
            for (int i2 = 0; i2 <= spec.N2; ++i2) {
                const auto idx = static_cast<Eigen::Index>(spec.index(n, i1, i2));
                CHECK(n_mat(idx, idx).real() == doctest::Approx(n).epsilon(1e-12));
            }
    CHECK(op_norm((ops.n_phot - (ops.a_dag * ops.a).eval()).pruned()) <= 1e-12);
}

TEST_CASE("hamiltonian structure") {
    const HilbertSpec spec{3, 2, 1};
    const OperatorSet ops = build_operators(spec);

    SUBCASE("decoupled limit is diagonal with the expected ground energy") {
        const SparseC h = hamiltonian(quantum_params(0.0, 2, 1), ops);
        const DenseC hd(h);
        for (Eigen::Index r = 0; r < hd.rows(); ++r)
            for (Eigen::Index c = 0; c < hd.cols(); ++c)
                if (r != c) CHECK(std::abs(hd(r, c)) <= 1e-14);
        double min_diag = 1e300;
        for (Eigen::Index r = 0; r < hd.rows(); ++r)
            min_diag = std::min(min_diag, hd(r, r).real());
        CHECK(min_diag == doctest::Approx(-0.5 * (2 + 1)).epsilon(1e-14));
    }
    SUBCASE("hermitian and conserves each ensemble's total spin") {
        const SparseC h = hamiltonian(quantum_params(1.3, 2, 1), ops);
        CHECK(op_norm((h - SparseC(h.adjoint())).pruned()) <= 1e-12);
        const SparseC s1sq = spin_squared(ops.s1x(), ops.s1y(), ops.s1z);
        const SparseC s2sq = spin_squared(ops.s2x(), ops.s2y(), ops.s2z);
        CHECK(op_norm(commutator(h, s1sq)) <= 1e-10);
        CHECK(op_norm(commutator(h, s2sq)) <= 1e-10);

        // The total spin S^2 is not conserved.
        SparseC cross = (ops.s1x() * ops.s2x() + ops.s1y() * ops.s2y() +
                         (ops.s1z * ops.s2z).eval())
                            .eval();
        const SparseC total_sq = (s1sq + s2sq + 2.0 * cross).eval();
        CHECK(op_norm(commutator(h, total_sq)) > 0.1 * 1.3);
    }
}

TEST_CASE("lindblad right-hand side identities") {
    const HilbertSpec spec{3, 2, 1};
    const OperatorSet ops = build_operators(spec);
    const SparseC h = hamiltonian(quantum_params(0.8, 2, 1), ops);
    std::mt19937 rng(7);

    for (int trial = 0; trial < 50; ++trial) {
        const DenseC rho = random_hermitian_unit_trace(rng, static_cast<Eigen::Index>(spec.dim()));
        const DenseC drho = lindblad_rhs(rho, h, ops, 1.0);
        CHECK(std::abs(drho.trace()) <= 1e-12 * static_cast<double>(spec.dim()));
        CHECK((drho - drho.adjoint().eval()).cwiseAbs().maxCoeff() <= 1e-12);
    }

    SUBCASE("dissipator annihilates a vacuum-field product state") {
        const SparseC h0(static_cast<Eigen::Index>(spec.dim()),
                         static_cast<Eigen::Index>(spec.dim()));
        const VectorC psi = product_state(spec, coherent_field_state(spec.n_max, 0.0),
                                          coherent_spin_state(1.0, 1.1, 0.4),
                                          coherent_spin_state(0.5, 2.0, 0.0));
        const DenseC rho = psi * psi.adjoint();
        CHECK(lindblad_rhs(rho, h0, ops, 1.0).cwiseAbs().maxCoeff() <= 1e-14);
    }

    SUBCASE("ensemble spin magnitudes are flow invariants") {
        const DenseC rho = random_hermitian_unit_trace(rng, static_cast<Eigen::Index>(spec.dim()));
        const DenseC drho = lindblad_rhs(rho, h, ops, 1.0);
        const SparseC s1sq = spin_squared(ops.s1x(), ops.s1y(), ops.s1z);
        const SparseC s2sq = spin_squared(ops.s2x(), ops.s2y(), ops.s2z);
        CHECK(std::abs(expectation(s1sq, drho)) <= 1e-10);
        CHECK(std::abs(expectation(s2sq, drho)) <= 1e-10);
    }
}

TEST_CASE("coherent spin states") {
    SUBCASE("poles") {
        const VectorC down = coherent_spin_state(1.5, std::numbers::pi, 0.0);
        CHECK(std::abs(down(0)) == doctest::Approx(1.0).epsilon(1e-14));
        const VectorC up = coherent_spin_state(1.5, 0.0, 0.0);
        CHECK(std::abs(up(3)) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("equator points along x") {
        const HilbertSpec spec{0, 3, 0};
        const OperatorSet ops = build_operators(spec);
        const VectorC psi = product_state(spec, coherent_field_state(0, 0.0),
                                          coherent_spin_state(1.5, std::numbers::pi / 2, 0.0),
                                          coherent_spin_state(0.0, 0.0, 0.0));
        const DenseC rho = psi * psi.adjoint();
        CHECK(expectation(ops.s1x(), rho).real() == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(std::abs(expectation(ops.s1y(), rho)) <= 1e-12);
        CHECK(std::abs(expectation(ops.s1z, rho)) <= 1e-12);
    }
    SUBCASE("random angles reproduce the classical direction") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> theta_dist(0.1, std::numbers::pi - 0.1);
        std::uniform_real_distribution<double> phi_dist(0.0, 2.0 * std::numbers::pi);
        const HilbertSpec spec{0, 4, 0};
        const OperatorSet ops = build_operators(spec);
        for (int trial = 0; trial < 20; ++trial) {
            const double j = 2.0;
            const double theta = theta_dist(rng);
            const double phi = phi_dist(rng);
            const VectorC psi = product_state(spec, coherent_field_state(0, 0.0),
                                              coherent_spin_state(j, theta, phi),
                                              coherent_spin_state(0.0, 0.0, 0.0));
            CHECK(std::abs(psi.norm() - 1.0) <= 1e-14);
            const DenseC rho = psi * psi.adjoint();
            CHECK(expectation(ops.s1x(), rho).real() ==
                  doctest::Approx(j * std::sin(theta) * std::cos(phi)).epsilon(1e-12));
            CHECK(expectation(ops.s1y(), rho).real() ==
                  doctest::Approx(j * std::sin(theta) * std::sin(phi)).epsilon(1e-12));
            CHECK(expectation(ops.s1z, rho).real() ==
                  doctest::Approx(j * std::cos(theta)).epsilon(1e-12));
        }
    }
    SUBCASE("invalid spin length") {
        CHECK_THROWS_AS(coherent_spin_state(0.7, 1.0, 0.0), DomainError);
    }
}

TEST_CASE("damped cavity decays at rate 2 kappa") {
    const HilbertSpec spec{3, 2, 1};
    const ModelParams p = quantum_params(0.0, 2, 1);
    VectorC fock1 = VectorC::Zero(spec.n_max + 1);
    fock1(1) = 1.0;
    const VectorC psi = product_state(spec, fock1, coherent_spin_state(1.0, std::numbers::pi, 0.0),
                                      coherent_spin_state(0.5, std::numbers::pi, 0.0));
    const DenseC rho0 = psi * psi.adjoint();
    EvolveControls c;
    c.n_samples = 40;
    const EvolveResult res = evolve_master(rho0, p, spec, 2.0, 0.001, c);
    for (const auto& s : res.samples) {
        CHECK(std::abs(s.n_phot - std::exp(-2.0 * s.t)) <= 1e-6);
    }
    // fitted decay constant within 1%
    const auto& last = res.samples.back();
    const double fitted = -std::log(last.n_phot) / last.t;
    CHECK(std::abs(fitted - 2.0) <= 0.02);
}

TEST_CASE("evolution preserves trace, hermiticity, and spin sectors") {
    const HilbertSpec spec{6, 2, 1};
    const ModelParams p = quantum_params(1.2, 2, 1);
    const VectorC psi = product_state(spec, coherent_field_state(spec.n_max, 0.0),
                                      coherent_spin_state(1.0, std::numbers::pi, 0.0),
                                      coherent_spin_state(0.5, std::numbers::pi, 0.0));
    const DenseC rho0 = psi * psi.adjoint();
    EvolveControls c;
    c.n_samples = 50;
    c.cutoff_fail = 0.05;  // truncation accuracy is not what this test pins
    const EvolveResult res = evolve_master(rho0, p, spec, 10.0, 0.002, c);
    CHECK(res.max_trace_drift <= 1e-10);
    CHECK(res.max_herm_dev <= 1e-10);

    const OperatorSet ops = build_operators(spec);
    const SparseC s1sq = spin_squared(ops.s1x(), ops.s1y(), ops.s1z);
    CHECK(expectation(s1sq, res.rho_final).real() == doctest::Approx(2.0).epsilon(1e-8));

    // The total spin magnitude does vary for lambda > 0.
    const SparseC s2sq = spin_squared(ops.s2x(), ops.s2y(), ops.s2z);
    SparseC cross = (ops.s1x() * ops.s2x() + ops.s1y() * ops.s2y() +
                     (ops.s1z * ops.s2z).eval())
                        .eval();
    const SparseC total_sq = (s1sq + s2sq + 2.0 * cross).eval();
    double min_tot = 1e300, max_tot = -1e300;
    DenseC rho = rho0;
    for (int seg = 0; seg < 5; ++seg) {
        const EvolveResult r = evolve_master(rho, p, spec, 2.0, 0.002, c);
        rho = r.rho_final;
        const double v = expectation(total_sq, rho).real();
        min_tot = std::min(min_tot, v);
        max_tot = std::max(max_tot, v);
    }
    CHECK(max_tot - min_tot > 1e-3);
}

TEST_CASE("matches the reference lindblad_rhs and halving dt changes little") {
    const HilbertSpec spec{4, 2, 1};
    const ModelParams p = quantum_params(1.2, 2, 1);
    const OperatorSet ops = build_operators(spec);
    const SparseC h = hamiltonian(p, ops);
    const VectorC psi = product_state(spec, coherent_field_state(spec.n_max, 0.3),
                                      coherent_spin_state(1.0, 2.6, 0.3),
                                      coherent_spin_state(0.5, 2.8, 0.0));
    const DenseC rho0 = psi * psi.adjoint();

    // One hand-stepped RK4 with the public lindblad_rhs against evolve_master.
    const double dt = 0.002;
    DenseC rho_ref = rho0;
    for (int step = 0; step < 50; ++step) {
        const DenseC k1 = lindblad_rhs(rho_ref, h, ops, p.kappa);
        const DenseC k2 = lindblad_rhs(rho_ref + (0.5 * dt) * k1, h, ops, p.kappa);
        const DenseC k3 = lindblad_rhs(rho_ref + (0.5 * dt) * k2, h, ops, p.kappa);
        const DenseC k4 = lindblad_rhs(rho_ref + dt * k3, h, ops, p.kappa);
        rho_ref += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    EvolveControls c;
    c.n_samples = 1;
    const EvolveResult res = evolve_master(rho0, p, spec, 50 * dt, dt, c);
    CHECK((res.rho_final - rho_ref).cwiseAbs().maxCoeff() <= 1e-12);

    const EvolveResult res_half = evolve_master(rho0, p, spec, 50 * dt, 0.5 * dt, c);
    CHECK(std::abs(expectation(ops.n_phot, res.rho_final).real() -
                   expectation(ops.n_phot, res_half.rho_final).real()) < 1e-6);
}

TEST_CASE("short-time field Ehrenfest relation for near-classical spins") {
    const HilbertSpec spec{4, 8, 6};
    const ModelParams p = quantum_params(0.4, 8, 6);
    const OperatorSet ops = build_operators(spec);
    const SparseC h = hamiltonian(p, ops);
    const VectorC psi = product_state(spec, coherent_field_state(spec.n_max, 0.2),
                                      coherent_spin_state(4.0, 2.0, 0.7),
                                      coherent_spin_state(3.0, 2.4, 0.1));
    const DenseC rho = psi * psi.adjoint();
    const DenseC drho = lindblad_rhs(rho, h, ops, p.kappa);

    const complexd da_quantum = expectation(ops.a, drho);
    const complexd a_mean = expectation(ops.a, rho);
    const double dsx_mean = expectation(ops.s1x(), rho).real() -
                            expectation(ops.s2x(), rho).real();
    const complexd da_meanfield =
        -(complexd(0.0, p.omega_c) + p.kappa) * a_mean - complexd(0.0, p.lambda) * dsx_mean;
    CHECK(std::abs(da_quantum - da_meanfield) <= 0.05 * std::abs(da_meanfield));
}

TEST_CASE("parity commutes with the evolution") {
    const HilbertSpec spec{3, 2, 1};
    const ModelParams p = quantum_params(1.1, 2, 1);
    const SparseC parity = parity_operator(spec);
    VectorC psi = product_state(spec, coherent_field_state(spec.n_max, 0.4),
                                coherent_spin_state(1.0, 1.9, 0.8),
                                coherent_spin_state(0.5, 2.4, 0.2));
    psi.normalize();  // the truncated coherent factor loses a little weight
    const DenseC rho0 = psi * psi.adjoint();
    const DenseC rho0_mirror = parity * rho0 * parity;

    EvolveControls c;
    c.n_samples = 1;
    c.cutoff_fail = 0.1;  // tiny toy space; parity covariance is the point
    const DenseC evolved = evolve_master(rho0, p, spec, 1.0, 0.001, c).rho_final;
    const DenseC evolved_mirror = evolve_master(rho0_mirror, p, spec, 1.0, 0.001, c).rho_final;
    CHECK((evolved_mirror - parity * evolved * parity).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("partial trace over the spins") {
    const HilbertSpec spec{3, 2, 1};
    VectorC field = coherent_field_state(spec.n_max, complexd(0.7, -0.2));
    field.normalize();
    const VectorC s1 = coherent_spin_state(1.0, 1.2, 0.5);
    const VectorC s2 = coherent_spin_state(0.5, 0.8, 0.0);
    const VectorC psi = product_state(spec, field, s1, s2);
    const DenseC rho = psi * psi.adjoint();

    const DenseC rho_f = partial_trace_field(rho, spec);
    const DenseC expected = (field * field.adjoint()).eval();
    CHECK((rho_f - expected).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(rho_f.trace().real() - 1.0) <= 1e-12);

    const auto dim = static_cast<Eigen::Index>(spec.dim());
    const DenseC mixed = DenseC::Identity(dim, dim) / static_cast<double>(dim);
    const DenseC mixed_f = partial_trace_field(mixed, spec);
    for (int n = 0; n <= spec.n_max; ++n)
        CHECK(mixed_f(n, n).real() == doctest::Approx(1.0 / (spec.n_max + 1)).epsilon(1e-12));
}

TEST_CASE("husimi function of reference field states") {
    const int n_max = 12;
    SUBCASE("vacuum") {
        DenseC rho = DenseC::Zero(n_max + 1, n_max + 1);
        rho(0, 0) = 1.0;
        const QFunctionGrid grid = husimi_q(rho, {0.0, 0.5, 1.0}, {0.0});
        CHECK(grid.values(0, 0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
        CHECK(grid.values(0, 1) ==
              doctest::Approx(std::exp(-0.25) / std::numbers::pi).epsilon(1e-12));
        CHECK(grid.values(0, 2) ==
              doctest::Approx(std::exp(-1.0) / std::numbers::pi).epsilon(1e-12));

        const QFunctionGrid full = husimi_q_auto(rho, 61);
        CHECK(q_grid_integral(full) == doctest::Approx(1.0).epsilon(1e-3));
        const LobeReport lobes = count_q_lobes(full, 0.5);
        CHECK(lobes.count == 1);
        CHECK(std::abs(lobes.lobes[0].centroid) <= 0.1);
    }
    SUBCASE("coherent state peaks at its amplitude") {
        const complexd beta(1.2, 0.4);
        const VectorC coh = coherent_field_state(n_max, beta);
        const DenseC rho = coh * coh.adjoint();
        const QFunctionGrid grid = husimi_q(rho, {1.2}, {0.4});
        CHECK(grid.values(0, 0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-6));
    }
    SUBCASE("parity-symmetric mixture shows two lobes") {
        const double beta = 2.2;
        const int big_n = 16;
        const VectorC plus = coherent_field_state(big_n, beta);
        const VectorC minus = coherent_field_state(big_n, -beta);
        const DenseC rho = 0.5 * (plus * plus.adjoint()) + 0.5 * (minus * minus.adjoint());
        const QFunctionGrid grid = husimi_q_auto(rho, 101);
        CHECK(q_grid_integral(grid) == doctest::Approx(1.0).epsilon(1e-3));
        const LobeReport lobes = count_q_lobes(grid, 0.5);
        REQUIRE(lobes.count == 2);
        const double spacing = grid.re_axis[1] - grid.re_axis[0];
        CHECK(std::abs(lobes.lobes[0].centroid + lobes.lobes[1].centroid) <= 2.0 * spacing);
        CHECK(std::abs(std::abs(lobes.lobes[0].centroid.real()) - beta) <= 2.0 * spacing);
        CHECK(grid.values.minCoeff() >= -1e-12);
    }
}

TEST_CASE("cutoff robustness of accepted runs") {
    // Widening the Fock space by 4 levels changes <a^dag a>(t_final) by
    // less than 1e-4 when the original cutoff was adequate.
    const ModelParams p = quantum_params(0.7, 2, 1);
    EvolveControls c;
    c.n_samples = 1;
    double nphot[2];
    int idx = 0;
    for (int n_max : {8, 12}) {
        const HilbertSpec spec{n_max, 2, 1};
        const VectorC psi = product_state(spec, coherent_field_state(n_max, 0.0),
                                          coherent_spin_state(1.0, std::numbers::pi, 0.0),
                                          coherent_spin_state(0.5, std::numbers::pi, 0.0));
        const EvolveResult res = evolve_master(psi * psi.adjoint(), p, spec, 5.0, 0.002, c);
        CHECK(res.max_top_population <= 1e-6);
        nphot[idx++] = res.samples.back().n_phot;
    }
    CHECK(std::abs(nphot[0] - nphot[1]) < 1e-4);
}

TEST_CASE("evolution error reporting") {
    const HilbertSpec spec{3, 2, 1};
    SUBCASE("cutoff saturation") {
        // A coherent state with |alpha|^2 = 4 puts ~20% of its weight at the
        // top of a 4-level Fock space.
        const VectorC psi = product_state(spec, coherent_field_state(spec.n_max, 2.0),
                                          coherent_spin_state(1.0, std::numbers::pi, 0.0),
                                          coherent_spin_state(0.5, std::numbers::pi, 0.0));
        DenseC rho = psi * psi.adjoint();
        rho /= rho.trace().real();  // renormalize the truncated state
        CHECK_THROWS_AS(
            evolve_master(rho, quantum_params(0.0, 2, 1), spec, 1.0, 0.001, {}),
            NumericalError);
    }
    SUBCASE("bad arguments") {
        const DenseC rho = DenseC::Identity(4, 4);
        CHECK_THROWS_AS(evolve_master(rho, quantum_params(1.0, 2, 1), spec, 1.0, 0.001, {}),
                        DomainError);
    }
}

TEST_SUITE_END();
