#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "metriclab/convex.hpp"

using namespace metriclab;
using Catch::Approx;

TEST_CASE("modulus maximizer: Schwarz extremal on the unit circle", "[convex]") {
    // maximize Re f'(0) over polynomials with f(0)=0, |f|<=1 on |w|=1: f = w
    std::vector<int> exps = {1, 2, 3, 4};
    CVec u = CVec::Zero(4);
    u[0] = 1.0; // objective Re c_1
    detail::ModulusMaximizer solver(exps, 0.0, u, {1.0});
    auto out = solver.solve(64);
    REQUIRE(out.value == Approx(1.0).margin(1e-7));
    REQUIRE(out.value <= 1.0);
    REQUIRE(out.diag.certified_sup > 0.0);
    REQUIRE(out.diag.duality_gap < 1e-6);
}

TEST_CASE("modulus maximizer: off-center disc problem", "[convex]") {
    // maximize Re f'(a) with f(a)=0: extremal is the Moebius factor, value 1/(1-a^2)
    const double a = 0.4;
    const int d = 14;
    std::vector<int> exps;
    for (int k = 1; k <= d; ++k) exps.push_back(k);
    CVec u(d);
    for (int k = 1; k <= d; ++k) u[k - 1] = std::conj(double(k) * std::pow(a, k - 1));
    detail::ModulusMaximizer solver(exps, a, u, {1.0});
    auto out = solver.solve(16 * d);
    double want = 1.0 / (1.0 - a * a);
    REQUIRE(out.value <= want + 1e-9);
    REQUIRE(out.value >= want - 1e-6);
}

TEST_CASE("profile maximizer: quarter-circle profile linear problem", "[convex]") {
    // max rho_1 * 0.6 + rho_2 * 0.8 subject to the ball profile l1 constraint;
    // optimum is the Euclidean norm of the weight vector
    detail::RadialProfile prof;
    prof.at = [](double t) -> std::array<double, 2> {
        double phi = t * M_PI / 2;
        return {std::cos(phi), std::sin(phi)};
    };
    prof.lipschitz = M_PI / 2 * 1.01;
    std::vector<std::array<int, 2>> alphas = {{1, 0}, {0, 1}};
    Eigen::VectorXd w(2);
    w << 0.6, 0.8;
    detail::ProfileL1Maximizer solver(alphas, w, {0.0, 0.0}, prof,
                                      {{{0.0, 1.0}, {0.0, 1.0}}});
    auto out = solver.solve(257);
    REQUIRE(out.value == Approx(1.0).margin(2e-7)); // sqrt(0.36+0.64)
    REQUIRE(out.value <= 1.0);
}

TEST_CASE("solver failure surfaces as an exception", "[convex]") {
    std::vector<int> exps = {1};
    CVec u = CVec::Ones(1);
    SolverOptions opt;
    opt.newton_cap = 1;
    detail::ModulusMaximizer solver(exps, 0.0, u, {1.0}, opt);
    REQUIRE_THROWS_AS(solver.solve(16), SolverFailure);
}
