#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "netdiff/diffusion.hpp"

using namespace netdiff;
using testutil::power_apply;
using testutil::random_matrix;
using testutil::random_vector;
using testutil::random_with_sigma;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
    Eigen::MatrixXd m(2, 2);
    m << a, b, c, d;
    return m;
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

} // namespace

TEST_CASE("step applies one multiply-accumulate") {
    CHECK((step(Eigen::MatrixXd::Zero(2, 2), vec2(5, 5), vec2(1, 2)) - vec2(1, 2))
              .norm() == 0.0);
    CHECK((step(Eigen::MatrixXd::Identity(2, 2), vec2(1, 2), vec2(0, 0)) - vec2(1, 2))
              .norm() == 0.0);
    const Eigen::VectorXd y = step(mat2(0, 0.5, 0.5, 0), vec2(2, 0), vec2(1, 1));
    CHECK(y(0) == doctest::Approx(1.0));
    CHECK(y(1) == doctest::Approx(2.0));
    CHECK_THROWS_AS(step(Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(3),
                         Eigen::VectorXd::Zero(2)),
                    DimensionError);
}

TEST_CASE("run_fixed iterates the recurrence") {
    SUBCASE("single step") {
        const DiffusionModel model(mat2(0.1, 0.2, 0.3, 0.4), vec2(1, -1));
        const Trajectory traj = run_fixed(model, vec2(2, 2), 1);
        CHECK(traj.step_count() == 1);
        CHECK((traj.final_state() - step(model.a, vec2(2, 2), model.z)).norm() == 0.0);
    }
    SUBCASE("scalar geometric accumulation") {
        Eigen::MatrixXd a(1, 1);
        a << 0.5;
        Eigen::VectorXd one(1), zero(1);
        one << 1;
        zero << 0;
        const Trajectory traj = run_fixed(DiffusionModel(a, one), zero, 3);
        CHECK(traj.states.size() == 4);
        CHECK(traj.final_state()(0) == doctest::Approx(1.75)); // 1 + 0.5 + 0.25
    }
    SUBCASE("matches the time-unrolled closed form") {
        Rng rng(404);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 1 + static_cast<int>(rng.uniform_below(10));
            const Eigen::MatrixXd a = random_with_sigma(rng, n, 0.2 + 0.7 * rng.uniform());
            const Eigen::VectorXd z = random_vector(rng, n);
            const Eigen::VectorXd y0 = random_vector(rng, n);
            const long t = 1 + static_cast<long>(rng.uniform_below(30));
            const Trajectory traj = run_fixed(DiffusionModel(a, z), y0, t);
            // Closed form: A^t y0 + [sum_{i=1..t} A^{i-1}] z.
            const Eigen::VectorXd closed =
                power_apply(a, t, y0) + neumann_partial_sum(a, z, t - 1);
            CHECK((traj.final_state() - closed).lpNorm<Eigen::Infinity>() <= 1e-10);
        }
    }
    SUBCASE("long horizon converges to the resolvent") {
        Rng rng(405);
        const Eigen::MatrixXd a = random_with_sigma(rng, 6, 0.7);
        const Eigen::VectorXd z = random_vector(rng, 6);
        const DiffusionModel model(a, z);
        const Trajectory traj = run_fixed(model, random_vector(rng, 6), 2000);
        CHECK((traj.final_state() - solve_resolvent(a, z)).lpNorm<Eigen::Infinity>() <=
              1e-10);
    }
}

TEST_CASE("run_dynamic on degenerate sequences") {
    Rng rng(406);
    const Eigen::MatrixXd a = random_with_sigma(rng, 4, 0.6);
    const Eigen::VectorXd z = random_vector(rng, 4);
    const Eigen::VectorXd y0 = random_vector(rng, 4);

    SUBCASE("all cross-sections identical reduces to run_fixed") {
        const std::vector<Eigen::MatrixXd> seq(7, a);
        const Trajectory dyn = run_dynamic(seq, z, y0);
        const Trajectory fixed = run_fixed(DiffusionModel(a, z), y0, 7);
        CHECK(dyn.states.size() == 8);
        for (std::size_t i = 0; i < dyn.states.size(); ++i)
            CHECK((dyn.states[i] - fixed.states[i]).norm() == 0.0);
    }
    SUBCASE("single matrix is one step") {
        const Trajectory dyn = run_dynamic({a}, z, y0);
        CHECK(dyn.step_count() == 1);
        CHECK((dyn.final_state() - step(a, y0, z)).norm() == 0.0);
    }
    SUBCASE("empty sequence is rejected") {
        CHECK_THROWS_AS(run_dynamic({}, z, y0), DomainError);
    }
}

TEST_CASE("unroll_dynamic base cases") {
    Rng rng(407);
    const Eigen::VectorXd z = random_vector(rng, 3);
    const Eigen::VectorXd y = random_vector(rng, 3);
    const Eigen::MatrixXd a1 = random_matrix(rng, 3, 3);
    const Eigen::MatrixXd a2 = random_matrix(rng, 3, 3);

    SUBCASE("k = 1 is the recurrence itself") {
        CHECK((unroll_dynamic({a1}, z, y) - (a1 * y + z)).lpNorm<Eigen::Infinity>() <
              1e-14);
    }
    SUBCASE("k = 2 expansion: A_t A_{t-1} y + (I + A_t) z") {
        const Eigen::VectorXd expected = a2 * (a1 * y) + z + a2 * z;
        CHECK((unroll_dynamic({a1, a2}, z, y) - expected).lpNorm<Eigen::Infinity>() <
              1e-13);
    }
}

TEST_CASE("unroll_dynamic equals the iterated dynamics (module oracle)") {
    Rng rng(408);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_below(10));
        const int k = 1 + static_cast<int>(rng.uniform_below(15));
        std::vector<Eigen::MatrixXd> seq;
        for (int i = 0; i < k; ++i)
            seq.push_back(random_with_sigma(rng, n, 0.1 + 0.85 * rng.uniform()));
        const Eigen::VectorXd z = random_vector(rng, n);
        const Eigen::VectorXd y_past = random_vector(rng, n);
        const Eigen::VectorXd closed = unroll_dynamic(seq, z, y_past);
        const Eigen::VectorXd iterated = run_dynamic(seq, z, y_past).final_state();
        CHECK((closed - iterated).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
}

TEST_CASE("equilibrium solves the fixed point and guards divergence") {
    SUBCASE("zero weights return the forcing") {
        const Eigen::VectorXd y =
            equilibrium(DiffusionModel(Eigen::MatrixXd::Zero(2, 2), vec2(3, 4)));
        CHECK((y - vec2(3, 4)).norm() == 0.0);
    }
    SUBCASE("symmetric dyad") {
        const Eigen::VectorXd y =
            equilibrium(DiffusionModel(mat2(0, 0.5, 0.5, 0), vec2(1, 1)));
        CHECK(y(0) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(y(1) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("divergent model refused with the radius in the diagnostic") {
        try {
            equilibrium(DiffusionModel(mat2(0, 1, 1, 0), vec2(1, 1)));
            FAIL("expected DivergentModelError");
        } catch (const DivergentModelError& e) {
            CHECK(e.rho == doctest::Approx(1.0));
            CHECK(std::string(e.what()).find("spectral radius") != std::string::npos);
        }
    }
    SUBCASE("unguarded algebraic solve on request") {
        Eigen::MatrixXd a(1, 1);
        a << 1.5;
        Eigen::VectorXd one(1);
        one << 1;
        const Eigen::VectorXd y =
            equilibrium(DiffusionModel(a, one), /*allow_nonconvergent=*/true);
        CHECK(y(0) == doctest::Approx(-2.0)); // (1 - 1.5) x = 1
    }
    SUBCASE("fixed-point residual over random contractive models") {
        Rng rng(409);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 1 + static_cast<int>(rng.uniform_below(30));
            const Eigen::MatrixXd a = random_with_sigma(rng, n, 0.9 * rng.uniform());
            const Eigen::VectorXd z = random_vector(rng, n);
            const Eigen::VectorXd y = equilibrium(DiffusionModel(a, z));
            CHECK((a * y + z - y).lpNorm<Eigen::Infinity>() <= 1e-9);
        }
    }
}

TEST_CASE("geometric memory decay toward equilibrium") {
    Rng rng(410);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(14));
        const double sigma = 0.3 + 0.55 * rng.uniform();
        const Eigen::MatrixXd a = random_with_sigma(rng, n, sigma);
        const Eigen::VectorXd z = random_vector(rng, n, -0.5, 0.5);
        const Eigen::VectorXd y0 = random_vector(rng, n, -0.5, 0.5);
        const Eigen::VectorXd y_star = equilibrium(DiffusionModel(a, z));
        const Trajectory traj = run_fixed(DiffusionModel(a, z), y0, 100);
        const double base = (y0 - y_star).norm();
        for (long k = 0; k <= 100; ++k) {
            const double bound = std::pow(sigma, static_cast<double>(k)) * base + 1e-12;
            CHECK((traj.states[static_cast<std::size_t>(k)] - y_star).norm() <= bound);
        }
    }
}

TEST_CASE("long contractive sequences forget the initial condition") {
    Rng rng(411);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(6));
        const int t = 120;
        std::vector<Eigen::MatrixXd> seq;
        double sigma_max_seen = 0.0;
        for (int i = 0; i < t; ++i) {
            const double s = 0.3 + 0.5 * rng.uniform(); // bounded by 0.8
            sigma_max_seen = std::max(sigma_max_seen, s);
            seq.push_back(random_with_sigma(rng, n, s));
        }
        const Eigen::VectorXd z = random_vector(rng, n, -0.5, 0.5);
        const Eigen::VectorXd y0a = random_vector(rng, n, -0.5, 0.5);
        const Eigen::VectorXd y0b = random_vector(rng, n, -0.5, 0.5);
        const double diff = (run_dynamic(seq, z, y0a).final_state() -
                             run_dynamic(seq, z, y0b).final_state())
                                .norm();
        const double bound =
            std::pow(sigma_max_seen, t) * (y0a - y0b).norm() + 1e-12;
        CHECK(diff <= bound);
    }
}

TEST_CASE("estimate_drift is the backward difference") {
    Rng rng(412);
    const Eigen::MatrixXd a = random_matrix(rng, 3, 3);
    CHECK(estimate_drift(a, a).lpNorm<Eigen::Infinity>() == 0.0);

    Eigen::MatrixXd prev = a, now = a;
    prev(1, 2) = 0.6;
    now(1, 2) = 0.5;
    const DriftMatrix d = estimate_drift(prev, now);
    CHECK(d(1, 2) == doctest::Approx(0.1));
    CHECK(d(0, 0) == 0.0);

    // Two binary graphs differing in exactly 3 cells, scaled by alpha.
    Eigen::MatrixXd g1 = Eigen::MatrixXd::Zero(4, 4), g2 = g1;
    g1(0, 1) = g1(2, 3) = 1.0;
    g2(0, 1) = g2(1, 0) = g2(3, 2) = 1.0;
    const double alpha = 0.25;
    const DriftMatrix dg = estimate_drift(alpha * g1, alpha * g2);
    int nonzero = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (dg(i, j) != 0.0) {
                ++nonzero;
                CHECK(std::abs(dg(i, j)) == doctest::Approx(alpha));
            }
    CHECK(nonzero == 3);

    CHECK_THROWS_AS(estimate_drift(Eigen::MatrixXd::Zero(2, 2),
                                   Eigen::MatrixXd::Zero(3, 3)),
                    DimensionError);
}

TEST_CASE("perturbative solution") {
    SUBCASE("zero drift reproduces the equilibrium bit for bit") {
        Rng rng(413);
        const Eigen::MatrixXd a = random_with_sigma(rng, 5, 0.6);
        const Eigen::VectorXd z = random_vector(rng, 5);
        const PerturbativeSolution sol =
            perturbative(a, Eigen::MatrixXd::Zero(5, 5), z);
        const Eigen::VectorXd eq = equilibrium(DiffusionModel(a, z));
        for (int i = 0; i < 5; ++i) CHECK(sol.y(i) == eq(i));
    }
    SUBCASE("hand instance: resolvent plus first-order correction") {
        const Eigen::MatrixXd a = mat2(0, 0.5, 0.25, 0);
        const Eigen::MatrixXd d = mat2(0, 0.1, 0, 0);
        const PerturbativeSolution sol = perturbative(a, d, vec2(1, 1));
        CHECK(sol.y(0) == doctest::Approx(12.0 / 7.0).epsilon(1e-12));
        CHECK(sol.y(1) == doctest::Approx(10.0 / 7.0 + 0.025).epsilon(1e-12));
        CHECK(sol.correction(0) == doctest::Approx(0.0));
        CHECK(sol.correction(1) == doctest::Approx(0.025));
        // Truncated second-order term A^2 D z = A * (0, 0.025).
        CHECK(sol.second_order_magnitude == doctest::Approx(0.0125));
        CHECK(sol.slow_regime == true);
    }
    SUBCASE("output is linear in the forcing") {
        Rng rng(414);
        const Eigen::MatrixXd a = random_with_sigma(rng, 4, 0.5);
        const Eigen::MatrixXd d = 0.05 * random_matrix(rng, 4, 4);
        const Eigen::VectorXd z = random_vector(rng, 4);
        const Eigen::VectorXd y1 = perturbative(a, d, z).y;
        const Eigen::VectorXd y3 = perturbative(a, d, Eigen::VectorXd(3.0 * z)).y;
        CHECK((y3 - 3.0 * y1).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    SUBCASE("regime warning when drift rivals the weights") {
        Rng rng(415);
        const Eigen::MatrixXd a = random_with_sigma(rng, 4, 0.2);
        const Eigen::MatrixXd d = random_with_sigma(rng, 4, 0.5);
        const PerturbativeSolution sol = perturbative(a, d, random_vector(rng, 4));
        CHECK(sol.slow_regime == false);
        CHECK(std::string(sol.regime_note()).find("sigma(D) >= sigma(A)") !=
              std::string::npos);
    }
}

// Drift sequence whose higher-order couplings vanish identically: A is a
// nilpotent two-hop chain feeding vertex 0 and the drift direction extends
// the chain, so any product with a drift factor left-multiplied into a
// weight factor is zero and every product of four or more factors is zero
// outright. The iterated dynamics then admit an exact finite expansion
//   y_T = (I + A + A^2) z + eps A Dhat z + 2 eps^2 A Dhat^2 z,
// making the equilibrium error Theta(eps) while the perturbative solution
// captures the eps term exactly and errs only at Theta(eps^2).
TEST_CASE("halving a linear drift halves the perturbative/equilibrium error ratio") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
    a(0, 1) = 0.30;
    a(0, 2) = 0.20;
    a(0, 3) = 0.10;
    a(1, 3) = 0.40;
    Eigen::MatrixXd dhat = Eigen::MatrixXd::Zero(4, 4);
    dhat(1, 2) = 1.0;
    dhat(2, 3) = 1.0; // sigma_max(dhat) = 1, so sigma_max(eps * dhat) = eps
    Eigen::VectorXd z(4);
    z << 1.0, 0.7, 0.9, 1.1;

    const int t = 8;
    double eps = 0.04;
    double previous_ratio = 1.0;
    bool first = true;
    for (int halving = 0; halving < 5; ++halving, eps *= 0.5) {
        std::vector<Eigen::MatrixXd> seq;
        for (int k = t - 1; k >= 0; --k) seq.push_back(a + (eps * k) * dhat);

        const Eigen::VectorXd y0 = Eigen::VectorXd::Constant(4, 0.3);
        const Eigen::VectorXd y_exact = run_dynamic(seq, z, y0).final_state();
        const Eigen::VectorXd y_eq = equilibrium(DiffusionModel(a, z));
        const DriftMatrix d = estimate_drift(seq[seq.size() - 2], seq.back());
        const Eigen::VectorXd y_pert = perturbative(a, d, z).y;

        const double err_eq = (y_eq - y_exact).norm();
        const double err_pert = (y_pert - y_exact).norm();
        REQUIRE(err_eq > 0.0);
        const double ratio = err_pert / err_eq;
        if (!first) {
            CHECK(ratio < previous_ratio);       // monotone toward zero
            CHECK(ratio < 0.6 * previous_ratio); // and roughly halving
        }
        first = false;
        previous_ratio = ratio;
    }
    CHECK(previous_ratio < 0.005); // two orders below the starting ratio
}

TEST_CASE("ode_equilibrium solves A x = -z and reports stability") {
    SUBCASE("negative identity") {
        const OdeFixedPoint fp =
            ode_equilibrium(DiffusionModel(-Eigen::MatrixXd::Identity(2, 2), vec2(1, 2)));
        CHECK(fp.state(0) == doctest::Approx(1.0));
        CHECK(fp.state(1) == doctest::Approx(2.0));
        CHECK(fp.stable);
        CHECK(fp.max_eig_real_part == doctest::Approx(-1.0));
    }
    SUBCASE("diagonal solve componentwise") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
        a(0, 0) = -1.0;
        a(1, 1) = -2.0;
        const OdeFixedPoint fp = ode_equilibrium(DiffusionModel(a, vec2(1, 2)));
        CHECK(fp.state(0) == doctest::Approx(1.0));
        CHECK(fp.state(1) == doctest::Approx(1.0));
    }
    SUBCASE("residual on random nonsingular systems, stability flagged") {
        Rng rng(416);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 1 + static_cast<int>(rng.uniform_below(12));
            // Shift away from singularity; the sign of the shift sets stability.
            const bool stable_side = rng.bernoulli(0.5);
            const Eigen::MatrixXd a =
                random_with_sigma(rng, n, 0.4) +
                (stable_side ? -1.5 : 1.5) * Eigen::MatrixXd::Identity(n, n);
            const Eigen::VectorXd z = random_vector(rng, n);
            const OdeFixedPoint fp = ode_equilibrium(DiffusionModel(a, z));
            CHECK((a * fp.state + z).lpNorm<Eigen::Infinity>() <= 1e-10);
            CHECK(fp.stable == stable_side);
        }
    }
    SUBCASE("singular A is rejected") {
        CHECK_THROWS_AS(
            ode_equilibrium(DiffusionModel(Eigen::MatrixXd::Zero(2, 2), vec2(1, 1))),
            SingularSystemError);
    }
}
