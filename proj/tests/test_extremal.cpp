#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "metriclab/extremal.hpp"

using namespace metriclab;
using Catch::Approx;

TEST_CASE("exact invariant metrics on the homogeneous domains", "[extremal]") {
    REQUIRE(carath_exact(DomainSpec::disc(), make_point({0.0}), make_direction({1.0})) == Approx(1.0));
    REQUIRE(carath_exact(DomainSpec::ball(2), make_point({0.0, 0.0}), make_direction({1.0, 0.0})) ==
            Approx(1.0));
    REQUIRE(carath_exact(DomainSpec::polydisc(2), make_point({0.0, 0.0}), make_direction({1.0, 1.0})) ==
            Approx(1.0));
    REQUIRE(kobayashi_exact(DomainSpec::polydisc(2), make_point({0.0, 0.5}), make_direction({1.0, 1.0})) ==
            Approx(4.0 / 3.0));
    REQUIRE(kobayashi_exact(DomainSpec::ball(2), make_point({0.0, 0.0}), make_direction({0.0, 2.0})) ==
            Approx(2.0));
    REQUIRE(kobayashi_exact(DomainSpec::disc(), make_point({0.5}), make_direction({1.0})) ==
            Approx(4.0 / 3.0));
    // C = K on these domains
    auto pts = sample_interior(DomainSpec::ball(2, 0.8), 4, 3);
    for (auto& p : pts) {
        Direction v = make_direction({cdouble(0.4, 0.3), cdouble(-0.7, 0.2)});
        REQUIRE(carath_exact(DomainSpec::ball(2), p, v) ==
                Approx(kobayashi_exact(DomainSpec::ball(2), p, v)).epsilon(1e-12));
    }
}

TEST_CASE("degree-one lower bounds reach the linear extremals", "[extremal][solver]") {
    auto lb = carath_lower_bound(DomainSpec::ball(2), make_point({0.0, 0.0}),
                                 make_direction({1.0, 0.0}), 1, 8);
    REQUIRE(lb.value >= 1.0 - 1e-6);
    REQUIRE(lb.value <= 1.0 + 1e-12);

    auto le = carath_lower_bound(DomainSpec::ellipsoid(2), make_point({0.0, 0.0}),
                                 make_direction({0.0, 1.0}), 1, 8);
    REQUIRE(le.value >= 1.0 - 1e-6);
    REQUIRE(le.value <= 1.0 + 1e-12);

    auto lr = carath_lower_bound(DomainSpec::reinhardt_quartic(), make_point({0.0, 0.0}),
                                 make_direction({1.0, 0.0}), 1, 8);
    REQUIRE(lr.value >= 1.0 - 1e-6);
}

TEST_CASE("one-dimensional lower bound matches the disc closed form", "[extremal][solver]") {
    // direct route on the disc at an interior point; extremal is the Moebius
    // factor, approached by degree-d candidates at rate |z|^d
    Point z = make_point({0.5});
    auto lb = carath_lower_bound(DomainSpec::disc(), z, make_direction({1.0}), 21, 336);
    double want = 1.0 / (1.0 - 0.25);
    REQUIRE(lb.value <= want + 1e-9);
    REQUIRE(lb.value >= want - 2e-6);
    // degree-truncated honesty on the annulus: value stays below the Kobayashi upper bound
    Point a = make_point({0.7});
    auto ub = kobayashi_upper_bound(DomainSpec::annulus(0.5), a, make_direction({1.0}));
    auto lba = carath_lower_bound(DomainSpec::annulus(0.5), a, make_direction({1.0}), 10, 80);
    REQUIRE(lba.value <= ub + 1e-9);
    REQUIRE(lba.value > 0.0);
}

TEST_CASE("bracket soundness against exact values", "[extremal]") {
    auto mi = ck_interval(DomainSpec::ball(2), make_point({0.3, 0.1}), make_direction({0.2, 1.0}), 3, 24);
    REQUIRE(mi.lower_exact);
    REQUIRE(mi.width() == Approx(0.0).margin(1e-12));
    // optimization route never exceeds the exact value
    Point z = make_point({0.2, 0.1});
    Direction v = make_direction({1.0, 0.5});
    auto lb = carath_lower_bound(DomainSpec::ball(2), z, v, 2, 16);
    REQUIRE(lb.value <= carath_exact(DomainSpec::ball(2), z, v) + 1e-9);
}

TEST_CASE("kobayashi upper bound examples", "[extremal]") {
    REQUIRE(kobayashi_upper_bound(DomainSpec::ball(2), make_point({0.0, 0.0}),
                                  make_direction({1.0, 0.0})) == Approx(1.0).epsilon(1e-6));
    REQUIRE(kobayashi_upper_bound(DomainSpec::polydisc(2), make_point({0.0, 0.0}),
                                  make_direction({1.0, 0.0})) == Approx(1.0).epsilon(1e-6));
    REQUIRE(kobayashi_upper_bound(DomainSpec::annulus(0.5), make_point({0.75}),
                                  make_direction({1.0})) == Approx(4.0).epsilon(1e-6));
    // ellipsoid tangential slice: largest affine radius is (1 - a^2)^{1/4}
    double a = 0.75;
    REQUIRE(kobayashi_upper_bound(DomainSpec::ellipsoid(2), make_point({a, 0.0}),
                                  make_direction({0.0, 1.0})) ==
            Approx(std::pow(1.0 - a * a, -0.25)).epsilon(1e-6));
}

TEST_CASE("C <= K across the catalog", "[extremal][solver]") {
    for (const char* name : {"disc", "ball:2", "polydisc:2", "ellipsoid:2",
                             "reinhardt-quartic", "annulus:0.5", "burns-shnider"}) {
        auto spec = DomainSpec::parse(name);
        auto pts = sample_interior(spec, 3, 41);
        SeededRng rng(17);
        for (auto& p : pts) {
            CVec vv(spec.dim);
            for (int i = 0; i < spec.dim; ++i) vv[i] = cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1));
            if (vv.norm() == 0.0) vv[0] = 1.0;
            Direction v{vv};
            auto mi = ck_interval(spec, p, v, 3, 24);
            REQUIRE(mi.lower <= mi.upper + 1e-9);
        }
    }
}

TEST_CASE("inclusion reverses the Caratheodory metric: ball vs polydisc", "[extremal]") {
    auto pts = sample_interior(DomainSpec::ball(2, 0.9), 6, 5);
    Direction v = make_direction({cdouble(0.8, 0.1), cdouble(-0.2, 0.55)});
    for (auto& p : pts) {
        double cb = carath_exact(DomainSpec::ball(2), p, v);
        double cp = carath_exact(DomainSpec::polydisc(2), p, v);
        REQUIRE(cb >= cp - 1e-9);
    }
}

TEST_CASE("degree monotonicity of the lower bound", "[extremal][solver]") {
    Point z = make_point({0.25, 0.2});
    Direction v = make_direction({0.6, 1.0});
    double prev = 0.0;
    for (int d = 1; d <= 4; ++d) {
        auto lb = carath_lower_bound(DomainSpec::ellipsoid(2), z, v, d, 129);
        REQUIRE(lb.value >= prev - 1e-6);
        prev = lb.value;
    }
}

TEST_CASE("homogeneity of all metric evaluations", "[extremal][solver]") {
    Point z = make_point({0.3, 0.2});
    Direction v = make_direction({cdouble(0.5, 0.2), cdouble(-0.3, 0.9)});
    Direction v3{v.coords * 3.7};
    REQUIRE(carath_exact(DomainSpec::ball(2), z, v3) ==
            Approx(3.7 * carath_exact(DomainSpec::ball(2), z, v)).epsilon(1e-10));
    REQUIRE(kobayashi_upper_bound(DomainSpec::ellipsoid(2), z, v3) ==
            Approx(3.7 * kobayashi_upper_bound(DomainSpec::ellipsoid(2), z, v)).epsilon(1e-10));
    auto l1 = carath_lower_bound(DomainSpec::ellipsoid(2), z, v, 2, 64);
    auto l3 = carath_lower_bound(DomainSpec::ellipsoid(2), z, v3, 2, 64);
    REQUIRE(l3.value == Approx(3.7 * l1.value).epsilon(1e-10));
    auto ks = build_kernel_series(DomainSpec::ball(2), 10);
    auto g = metric_at(ks, z);
    REQUIRE(g.length(v3.coords) == Approx(3.7 * g.length(v.coords)).epsilon(1e-10));
}

TEST_CASE("Lu constant: exact paths", "[extremal]") {
    auto fan = curvature_fan(2, 8);
    auto b2 = build_kernel_series(DomainSpec::ball(2), 8);
    auto pts = sample_interior(DomainSpec::ball(2, 0.8), 9, 13);
    auto lu = lu_lower_bound(DomainSpec::ball(2), b2, pts, fan, 1, 8);
    REQUIRE(lu.exact_path);
    REQUIRE(lu.value == Approx(1.0 / std::sqrt(3.0)).margin(1e-9));

    auto pd = build_kernel_series(DomainSpec::polydisc(2), 8);
    std::vector<Point> ppts = {make_point({0.0, 0.0}), make_point({0.2, 0.1})};
    std::vector<Direction> pfan = {make_direction({1.0, 0.0}), make_direction({1.0, 1.0}),
                                   make_direction({0.0, 1.0}), make_direction({1.0, cdouble(0, 1)})};
    auto lup = lu_lower_bound(DomainSpec::polydisc(2), pd, ppts, pfan, 1, 8);
    REQUIRE(lup.value == Approx(1.0 / std::sqrt(2.0)).margin(1e-9));
    // the supremum is attained along coordinate axes
    int nz = 0;
    for (int i = 0; i < 2; ++i)
        if (std::abs(lup.witness_direction.coords[i]) > 1e-12) ++nz;
    REQUIRE(nz == 1);

    // one-dimensional ball under the same bookkeeping
    auto d1 = build_kernel_series(DomainSpec::disc(), 8);
    std::vector<Point> dpts = {make_point({0.0}), make_point({0.4})};
    std::vector<Direction> dfan = {make_direction({1.0})};
    auto lud = lu_lower_bound(DomainSpec::disc(), d1, dpts, dfan, 1, 8);
    REQUIRE(lud.value == Approx(1.0 / std::sqrt(2.0)).margin(1e-9));
}

TEST_CASE("Lu constant: optimization path on the ball", "[extremal][solver]") {
    auto b2 = build_kernel_series(DomainSpec::ball(2), 14);
    std::vector<Point> pts = {make_point({0.0, 0.0}), make_point({0.25, 0.1})};
    auto fan = curvature_fan(2, 6);
    auto lu = lu_lower_bound(DomainSpec::ball(2), b2, pts, fan, 2, 32, /*use_exact_paths=*/false);
    REQUIRE_FALSE(lu.exact_path);
    REQUIRE(lu.value >= 1.0 / std::sqrt(3.0) - 1e-2);
    REQUIRE(lu.value <= 1.0 + 1e-9);
}

TEST_CASE("Hermitian fit residual separates ball from polydisc", "[extremal]") {
    auto fan = hermitian_fit_fan(2);
    double rb = hermitian_fit_residual(DomainSpec::ball(2), make_point({0.0, 0.0}), fan);
    REQUIRE(rb < 1e-10);
    double rp = hermitian_fit_residual(DomainSpec::polydisc(2), make_point({0.0, 0.0}), fan);
    REQUIRE(rp > 0.05);
    // dimension one: every norm-square on a line is Hermitian
    auto fan1 = hermitian_fit_fan(1);
    double rd = hermitian_fit_residual(DomainSpec::disc(), make_point({0.3}), fan1);
    REQUIRE(rd < 1e-10);
}

TEST_CASE("Kaehler residual of metric grids", "[extremal]") {
    auto ks = build_kernel_series(DomainSpec::ball(2), 14);
    Point center = make_point({cdouble(0.15, 0.05), cdouble(-0.1, 0.1)});
    auto grid = build_metric_grid(ks, center, 0.01, 1);
    REQUIRE(kahler_residual(grid) < 1e-3);

    HermitianForm id{CMat::Identity(2, 2)};
    auto cgrid = build_metric_grid([&](const Point&) { return id; }, center, 0.01, 1);
    REQUIRE(kahler_residual(cgrid) == 0.0);

    // Hermitian-fitted Caratheodory field on the ball is the closed form
    auto cfield = [&](const Point& p) { return bergman_metric_closed_form(DomainSpec::ball(2), p); };
    auto fgrid = build_metric_grid(cfield, center, 0.01, 1);
    REQUIRE(kahler_residual(fgrid) < 1e-3);

    REQUIRE_THROWS_AS(build_metric_grid(ks, center, 0.01, 0), ConfigFailure);
}

TEST_CASE("coincidence scan on the ball boundary region", "[extremal]") {
    // C = K identically on the ball: every direction is coincident
    std::vector<Direction> fan;
    SeededRng rng(3);
    for (int i = 0; i < 12; ++i) {
        CVec v(2);
        v << cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1)),
             cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1));
        fan.emplace_back(v);
    }
    auto rep = coincidence_scan(DomainSpec::ball(2), make_point({0.9, 0.0}), fan, 5e-2, 0.1, 1, 8);
    REQUIRE(rep.fraction_coincident == 1.0);

    // no coincident directions -> empty tangential share
    std::vector<Direction> normal_fan = {make_direction({1.0, 0.0})};
    auto rep2 = coincidence_scan(DomainSpec::ball(2), make_point({0.9, 0.0}), normal_fan, 5e-2, 0.1, 1, 8);
    REQUIRE(rep2.tangential_fraction == 0.0);
}

TEST_CASE("coincidence scan finds tangential directions on the ellipsoid", "[extremal][solver]") {
    // near (0.75, 0) the tangential slice candidates certify C within a few
    // percent of the affine-disc Kobayashi bound
    std::vector<Direction> fan;
    fan.push_back(make_direction({0.0, 1.0}));
    fan.push_back(make_direction({0.02, 1.0}));
    fan.push_back(make_direction({cdouble(0.0, 0.02), 1.0}));
    fan.push_back(make_direction({1.0, 0.0})); // normal direction, not expected to certify
    FrameOptions fo;
    fo.near_threshold_factor = 0.35;
    auto rep = coincidence_scan(DomainSpec::ellipsoid(2), make_point({0.75, 0.0}), fan, 5e-2, 0.1,
                                21, 513, fo);
    REQUIRE(rep.coincident >= 3);
    REQUIRE(rep.fraction_coincident > 0.0);
    REQUIRE(rep.tangential == rep.coincident);
}
