#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "metriclab/domain.hpp"

using namespace metriclab;
using Catch::Approx;

namespace {

// independent oracle for the ellipsoid monomial norms:
// ||z^a w^b||^2 = pi^2/(p(a+1)) * B((b+1)/p, a+2)
double ellipsoid_norm_beta(int p, int a, int b) {
    double lb = std::lgamma((b + 1.0) / p) + std::lgamma(a + 2.0) - std::lgamma((b + 1.0) / p + a + 2.0);
    return M_PI * M_PI / (p * (a + 1.0)) * std::exp(lb);
}

} // namespace

TEST_CASE("canonical text round-trips", "[domain]") {
    for (const char* t : {"disc", "ball:2", "ball:3", "polydisc:2", "ellipsoid:2",
                          "reinhardt-quartic", "annulus:0.5", "burns-shnider"}) {
        auto spec = DomainSpec::parse(t);
        REQUIRE(spec.canonical_text() == t);
    }
    REQUIRE(DomainSpec::parse("disc*0.5").scale == Approx(0.5));
    REQUIRE_THROWS_AS(DomainSpec::parse("annulus:1.5"), ConfigFailure);
    REQUIRE_THROWS_AS(DomainSpec::parse("annulus:0"), ConfigFailure);
    REQUIRE_THROWS_AS(DomainSpec::parse("ellipsoid:1"), ConfigFailure);
    REQUIRE_THROWS_AS(DomainSpec::parse("tube:3"), ConfigFailure);
}

TEST_CASE("membership", "[domain]") {
    REQUIRE(contains(DomainSpec::ball(2), make_point({0.0, 0.0})));
    REQUIRE_FALSE(contains(DomainSpec::annulus(0.5), make_point({0.3})));
    // 0.81 + 0.7^4 = 1.0501 > 1
    REQUIRE_FALSE(contains(DomainSpec::ellipsoid(2), make_point({0.9, 0.7})));
    REQUIRE(contains(DomainSpec::ellipsoid(2), make_point({0.9, 0.6})));
    REQUIRE(contains(DomainSpec::burns_shnider(), make_point({std::exp(-M_PI / 2.0), 0.5})));
    REQUIRE_FALSE(contains(DomainSpec::burns_shnider(), make_point({0.5, 0.9})));
    REQUIRE_THROWS_AS(contains(DomainSpec::ball(2), make_point({0.1})), DimensionMismatch);
}

TEST_CASE("boundary distance closed forms", "[domain]") {
    REQUIRE(boundary_distance(DomainSpec::ball(2), make_point({0.0, 0.0})) == Approx(1.0));
    REQUIRE(boundary_distance(DomainSpec::annulus(0.5), make_point({0.75})) == Approx(0.25));
    REQUIRE(boundary_distance(DomainSpec::polydisc(2), make_point({0.2, -0.7})) == Approx(0.3));
    REQUIRE_THROWS_AS(boundary_distance(DomainSpec::disc(), make_point({1.2})), OutsideDomain);
}

TEST_CASE("boundary distance by profile minimization", "[domain]") {
    REQUIRE(boundary_distance(DomainSpec::ellipsoid(2), make_point({0.0, 0.0})) == Approx(1.0).epsilon(1e-9));
    REQUIRE(boundary_distance(DomainSpec::ellipsoid(2), make_point({0.75, 0.0})) == Approx(0.25).epsilon(1e-9));
    REQUIRE(boundary_distance(DomainSpec::ellipsoid(2), make_point({0.0, 0.85})) == Approx(0.15).epsilon(1e-8));
    // quartic from the origin: nearest profile point is (r*, 0)
    REQUIRE(boundary_distance(DomainSpec::reinhardt_quartic(), make_point({0.0, 0.0})) ==
            Approx(0.7861513777574233).epsilon(1e-9));
    REQUIRE(inradius(DomainSpec::burns_shnider()) == Approx(0.1646657).epsilon(1e-4));
}

TEST_CASE("boundary frame on the ball and polydisc", "[domain]") {
    auto fb = boundary_frame(DomainSpec::ball(2), make_point({0.9, 0.0}));
    REQUIRE(std::abs(fb.foot.coords[0] - cdouble(1.0)) < 1e-12);
    CVec v(2);
    v << cdouble(0.3, 0.1), cdouble(-0.2, 0.8);
    CVec tv = fb.tangential * v, nv = fb.normal * v;
    REQUIRE(std::abs(tv[0]) < 1e-12);
    REQUIRE(std::abs(tv[1] - v[1]) < 1e-12);
    REQUIRE(std::abs(nv[0] - v[0]) < 1e-12);
    REQUIRE(std::abs(nv[1]) < 1e-12);

    auto fp = boundary_frame(DomainSpec::polydisc(2), make_point({0.95, 0.0}));
    REQUIRE(std::abs(fp.foot.coords[0] - cdouble(1.0)) < 1e-12);
    REQUIRE(std::abs((fp.tangential * v)[1] - v[1]) < 1e-12);

    // dimension one: no complex tangent directions
    auto fd = boundary_frame(DomainSpec::disc(), make_point({0.8}));
    REQUIRE(std::abs(fd.foot.coords[0] - cdouble(1.0)) < 1e-12);
    REQUIRE(fd.tangential.cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE(std::abs(fd.normal(0, 0) - cdouble(1.0)) < 1e-14);
}

TEST_CASE("boundary frame projector identities", "[domain]") {
    for (const char* t : {"ball:2", "ellipsoid:2", "reinhardt-quartic"}) {
        auto spec = DomainSpec::parse(t);
        CVec z(2);
        z << 0.88, 0.1;
        if (spec.kind == DomainKind::ReinhardtQuartic) z << 0.7, 0.1;
        auto fr = boundary_frame(spec, Point(z));
        const auto& P = fr.tangential;
        const auto& Q = fr.normal;
        REQUIRE((P + Q - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE((P * P - P).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE((Q * Q - Q).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE((P * Q).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(std::abs(Q.trace().real() - 1.0) < 1e-12); // rank one
    }
}

TEST_CASE("frame ambiguity detection", "[domain]") {
    REQUIRE_THROWS_AS(boundary_frame(DomainSpec::annulus(0.5), make_point({0.75}),
                                     FrameOptions{1.5, 1e-9}),
                      AmbiguousFoot);
    REQUIRE_THROWS_AS(boundary_frame(DomainSpec::polydisc(2), make_point({0.9, 0.9}),
                                     FrameOptions{1.0, 1e-9}),
                      AmbiguousFoot);
    REQUIRE_THROWS_AS(boundary_frame(DomainSpec::ball(2), make_point({0.0, 0.0}),
                                     FrameOptions{2.0, 1e-9}),
                      AmbiguousFoot);
}

TEST_CASE("interior sampling: determinism and membership", "[domain]") {
    for (const char* t : {"disc", "ball:2", "polydisc:2", "ellipsoid:2", "reinhardt-quartic",
                          "annulus:0.5", "burns-shnider"}) {
        auto spec = DomainSpec::parse(t);
        auto pts = sample_interior(spec, 10, 7);
        REQUIRE(pts.size() == 10);
        for (auto& p : pts) {
            REQUIRE(contains(spec, p));
            REQUIRE(boundary_distance(spec, p) > 0.0);
        }
        auto again = sample_interior(spec, 10, 7);
        for (std::size_t i = 0; i < pts.size(); ++i)
            REQUIRE((pts[i].coords - again[i].coords).norm() == 0.0);
    }
    auto ann = sample_interior(DomainSpec::annulus(0.5), 5, 1);
    for (auto& p : ann) {
        REQUIRE(std::abs(p.coords[0]) > 0.5);
        REQUIRE(std::abs(p.coords[0]) < 1.0);
    }
}

TEST_CASE("boundary sampling lands on the defining surface", "[domain]") {
    auto d = sample_boundary(DomainSpec::disc(), 8, 0);
    for (auto& p : d) REQUIRE(std::abs(std::abs(p.coords[0]) - 1.0) < 1e-12);

    auto a = sample_boundary(DomainSpec::annulus(0.5), 8, 0);
    for (auto& p : a) {
        double r = std::abs(p.coords[0]);
        REQUIRE((std::abs(r - 0.5) < 1e-12 || std::abs(r - 1.0) < 1e-12));
    }

    auto e = sample_boundary(DomainSpec::ellipsoid(2), 16, 3);
    for (auto& p : e) {
        double v = std::norm(p.coords[0]) + std::pow(std::abs(p.coords[1]), 4.0);
        REQUIRE(std::abs(v - 1.0) < 1e-12);
    }

    auto b = sample_boundary(DomainSpec::ball(3), 8, 5);
    for (auto& p : b) REQUIRE(std::abs(p.coords.norm() - 1.0) < 1e-12);

    auto bs = sample_boundary(DomainSpec::burns_shnider(), 12, 2);
    for (auto& p : bs) {
        double r = std::abs(p.coords[0]);
        double v = std::sin(std::log(r)) + std::norm(p.coords[1]);
        REQUIRE(std::abs(v) < 1e-12);
    }
}

TEST_CASE("monomial norms: closed forms", "[domain]") {
    REQUIRE(monomial_norm(DomainSpec::disc(), {0}) == Approx(M_PI).epsilon(1e-14));
    REQUIRE(monomial_norm(DomainSpec::annulus(0.5), {-1}) == Approx(2.0 * M_PI * std::log(2.0)).epsilon(1e-14));
    REQUIRE(monomial_norm(DomainSpec::polydisc(2), {1, 0}) == Approx(M_PI * M_PI / 2.0).epsilon(1e-14));
    // ball volume at alpha = 0
    REQUIRE(monomial_norm(DomainSpec::ball(2), {0, 0}) == Approx(M_PI * M_PI / 2.0).epsilon(1e-14));
    REQUIRE(monomial_norm(DomainSpec::ball(2), {1, 2}) ==
            Approx(M_PI * M_PI * 2.0 / 120.0).epsilon(1e-13)); // pi^2 1!2!/(2+3)!
    REQUIRE_THROWS_AS(monomial_norm(DomainSpec::disc(), {-1}), InvalidExponent);
    REQUIRE_THROWS_AS(monomial_norm(DomainSpec::ellipsoid(2), {0, -1}), InvalidExponent);
}

TEST_CASE("monomial norms: quadrature against the Beta-function oracle", "[domain]") {
    for (auto [a, b] : {std::pair{0, 0}, {1, 0}, {0, 1}, {2, 3}, {5, 5}, {0, 9}}) {
        double got = monomial_norm(DomainSpec::ellipsoid(2), {a, b});
        REQUIRE(got == Approx(ellipsoid_norm_beta(2, a, b)).epsilon(1e-10));
    }
    for (auto [a, b] : {std::pair{0, 0}, {3, 1}}) {
        double got = monomial_norm(DomainSpec::ellipsoid(3), {a, b});
        REQUIRE(got == Approx(ellipsoid_norm_beta(3, a, b)).epsilon(1e-10));
    }
    // quartic volume, integrated by hand: 2 pi^2 (phi/2 - phi^2/4 - phi^3/6)
    double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double vol = 2.0 * M_PI * M_PI * (phi / 2.0 - phi * phi / 4.0 - phi * phi * phi / 6.0);
    REQUIRE(monomial_norm(DomainSpec::reinhardt_quartic(), {0, 0}) == Approx(vol).epsilon(1e-10));
    // Burns-Shnider norms are finite for Laurent exponents in z
    REQUIRE(std::isfinite(monomial_norm(DomainSpec::burns_shnider(), {-10, 2})));
    REQUIRE(monomial_norm(DomainSpec::burns_shnider(), {-10, 2}) > 0.0);
}

TEST_CASE("monomial norms: strictly decreasing in each exponent", "[domain]") {
    for (const char* t : {"disc", "ball:2", "polydisc:2"}) {
        auto spec = DomainSpec::parse(t);
        int n = spec.dim;
        for (int i = 0; i < n; ++i) {
            std::vector<int> alpha(n, 0);
            double prev = monomial_norm(spec, alpha);
            for (int k = 1; k <= 10; ++k) {
                alpha[i] = k;
                double cur = monomial_norm(spec, alpha);
                REQUIRE(cur > 0.0);
                REQUIRE(cur < prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("monomial norms: scaling law", "[domain]") {
    // ||z^a||^2 on s*Omega = s^(2|a|+2n) ||z^a||^2 on Omega
    double base = monomial_norm(DomainSpec::disc(), {3});
    double scaled = monomial_norm(DomainSpec::disc(0.5), {3});
    REQUIRE(scaled == Approx(base * std::pow(0.5, 8)).epsilon(1e-13));
    double ab = monomial_norm(DomainSpec::ball(2), {1, 1});
    double as = monomial_norm(DomainSpec::ball(2, 0.5), {1, 1});
    REQUIRE(as == Approx(ab * std::pow(0.5, 8)).epsilon(1e-13));
}

TEST_CASE("allowed exponent enumeration", "[domain]") {
    auto ann = allowed_exponents(DomainSpec::annulus(0.5), 3);
    REQUIRE(ann.size() == 7); // -3..3
    auto bs = allowed_exponents(DomainSpec::burns_shnider(), 2);
    // (k,m): |k|+m<=2 -> k=-2..2 with m=0; k=-1..1 with m=1; k=0,m=2
    REQUIRE(bs.size() == 5 + 3 + 1);
    auto b2 = allowed_exponents(DomainSpec::ball(2), 2);
    REQUIRE(b2.size() == 6);
}
