#pragma once

#include <random>

#include "dicke2/model.hpp"

namespace dicke2::testing {

// Deterministic random states/parameters for property tests.
class StateSampler {
  public:
    explicit StateSampler(unsigned seed = 20240117) : rng_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }

    // Unconstrained phase-space point (norms are not spin-sphere projected).
    MeanFieldState state(double scale = 1.0) {
        MeanFieldState s;
        s.a = complexd(uniform(-scale, scale), uniform(-scale, scale));
        s.s1 = {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
        s.s2 = {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
        return s;
    }

    // Point with |S_l| = N_l/2, arbitrary directions, plus a random field.
    MeanFieldState on_sphere(const ModelParams& p) {
        MeanFieldState s = state();
        auto project = [this](Spin3 v, double radius) {
            double n = v.norm();
            if (n == 0.0) {
                v = {0.0, 0.0, 1.0};
                n = 1.0;
            }
            return (radius / n) * v;
        };
        s.s1 = project(s.s1, 0.5 * p.n1);
        s.s2 = project(s.s2, 0.5 * p.n2);
        return s;
    }

    ModelParams params() {
        ModelParams p;
        p.omega_c = uniform(0.3, 2.5);
        p.omega_a = uniform(0.3, 2.5);
        p.kappa = uniform(0.0, 2.0);
        p.lambda = uniform(0.0, 3.0);
        p.n1 = uniform(0.5, 3.0);
        p.n2 = uniform(0.0, 1.0) * p.n1;
        return p;
    }

  private:
    std::mt19937 rng_;
};

}  // namespace dicke2::testing
