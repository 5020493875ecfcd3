#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metriclab/errors.hpp"
#include "metriclab/quadrature.hpp"
#include "metriclab/rng.hpp"

namespace metriclab {

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct InvalidExponent : Error {
    explicit InvalidExponent(const std::string& msg) : Error(msg) {}
};

enum class DomainKind {
    Disc,
    Ball,
    Polydisc,
    Ellipsoid,
    ReinhardtQuartic,
    Annulus,
    BurnsShnider,
};

/// One of the seven catalog domains, optionally dilated by a positive factor
/// (z in scale*Omega iff z/scale in Omega). The dilation is not part of the
/// canonical CLI surface; it exists so the covariance laws g_{r Omega}(r z) =
/// g_Omega(z)/r^2 can be exercised against an independently built domain.
struct DomainSpec {
    DomainKind kind = DomainKind::Disc;
    int dim = 1;
    int ell_p = 2;           // Ellipsoid exponent p >= 2
    double inner_radius = 0.5; // Annulus hole radius, in (0,1)
    double scale = 1.0;

    static DomainSpec disc(double scale = 1.0) { return {DomainKind::Disc, 1, 2, 0.5, scale}; }
    static DomainSpec ball(int n, double scale = 1.0) {
        if (n < 1) throw ConfigFailure("ball: dimension must be >= 1");
        return {DomainKind::Ball, n, 2, 0.5, scale};
    }
    static DomainSpec polydisc(int n) {
        if (n < 1) throw ConfigFailure("polydisc: dimension must be >= 1");
        return {DomainKind::Polydisc, n, 2, 0.5, 1.0};
    }
    static DomainSpec ellipsoid(int p) {
        if (p < 2) throw ConfigFailure("ellipsoid: p must be an integer >= 2");
        return {DomainKind::Ellipsoid, 2, p, 0.5, 1.0};
    }
    static DomainSpec reinhardt_quartic() { return {DomainKind::ReinhardtQuartic, 2, 2, 0.5, 1.0}; }
    static DomainSpec annulus(double r, double scale = 1.0) {
        if (!(r > 0.0 && r < 1.0)) throw ConfigFailure("annulus: radius must satisfy 0 < r < 1");
        return {DomainKind::Annulus, 1, 2, r, scale};
    }
    static DomainSpec burns_shnider() { return {DomainKind::BurnsShnider, 2, 2, 0.5, 1.0}; }

    bool operator==(const DomainSpec& o) const {
        return kind == o.kind && dim == o.dim && ell_p == o.ell_p &&
               inner_radius == o.inner_radius && scale == o.scale;
    }

    std::string canonical_text() const {
        std::ostringstream os;
        switch (kind) {
            case DomainKind::Disc: os << "disc"; break;
            case DomainKind::Ball: os << "ball:" << dim; break;
            case DomainKind::Polydisc: os << "polydisc:" << dim; break;
            case DomainKind::Ellipsoid: os << "ellipsoid:" << ell_p; break;
            case DomainKind::ReinhardtQuartic: os << "reinhardt-quartic"; break;
            case DomainKind::Annulus: os << "annulus:" << inner_radius; break;
            case DomainKind::BurnsShnider: os << "burns-shnider"; break;
        }
        if (scale != 1.0) os << "*" << scale;
        return os.str();
    }

    /// Parses the canonical text form, e.g. "ball:2", "annulus:0.5",
    /// "reinhardt-quartic". An optional "*<factor>" suffix selects a dilated
    /// copy (used internally; accepted here for config round-trips).
    static DomainSpec parse(const std::string& text) {
        std::string body = text;
        double scl = 1.0;
        if (auto star = body.find('*'); star != std::string::npos) {
            try {
                scl = std::stod(body.substr(star + 1));
            } catch (...) {
                throw ConfigFailure("domain spec: bad scale suffix in '" + text + "'");
            }
            if (!(scl > 0.0)) throw ConfigFailure("domain spec: scale must be positive");
            body = body.substr(0, star);
        }
        std::string name = body, arg;
        if (auto colon = body.find(':'); colon != std::string::npos) {
            name = body.substr(0, colon);
            arg = body.substr(colon + 1);
        }
        auto int_arg = [&](const char* what) {
            try {
                std::size_t pos = 0;
                int v = std::stoi(arg, &pos);
                if (pos != arg.size()) throw std::invalid_argument("trail");
                return v;
            } catch (...) {
                throw ConfigFailure(std::string("domain spec: ") + what + " wants an integer argument, got '" + arg + "'");
            }
        };
        if (name == "disc") {
            if (!arg.empty()) throw ConfigFailure("domain spec: disc takes no argument");
            return disc(scl);
        }
        if (name == "ball") return ball(int_arg("ball"), scl);
        if (name == "polydisc") {
            if (scl != 1.0) throw ConfigFailure("domain spec: polydisc does not support a scale");
            return polydisc(int_arg("polydisc"));
        }
        if (name == "ellipsoid") {
            if (scl != 1.0) throw ConfigFailure("domain spec: ellipsoid does not support a scale");
            return ellipsoid(int_arg("ellipsoid"));
        }
        if (name == "reinhardt-quartic") {
            if (!arg.empty() || scl != 1.0) throw ConfigFailure("domain spec: reinhardt-quartic takes no argument");
            return reinhardt_quartic();
        }
        if (name == "annulus") {
            double r;
            try {
                std::size_t pos = 0;
                r = std::stod(arg, &pos);
                if (pos != arg.size()) throw std::invalid_argument("trail");
            } catch (...) {
                throw ConfigFailure("domain spec: annulus wants a real argument, got '" + arg + "'");
            }
            return annulus(r, scl);
        }
        if (name == "burns-shnider") {
            if (!arg.empty() || scl != 1.0) throw ConfigFailure("domain spec: burns-shnider takes no argument");
            return burns_shnider();
        }
        throw ConfigFailure("domain spec: unknown domain '" + text + "'");
    }
};

struct Point {
    CVec coords;
    Point() = default;
    explicit Point(CVec c) : coords(std::move(c)) {
        if (coords.size() < 1) throw DimensionMismatch("point: needs at least one coordinate");
    }
    int dim() const { return static_cast<int>(coords.size()); }
};

struct Direction {
    CVec coords;
    Direction() = default;
    explicit Direction(CVec c) : coords(std::move(c)) {
        if (coords.size() < 1) throw DimensionMismatch("direction: needs at least one coordinate");
        if (coords.norm() == 0.0) throw DimensionMismatch("direction: must be nonzero");
    }
    int dim() const { return static_cast<int>(coords.size()); }
};

inline Point make_point(std::initializer_list<cdouble> cs) {
    CVec v(static_cast<int>(cs.size()));
    int i = 0;
    for (auto c : cs) v[i++] = c;
    return Point(v);
}
inline Direction make_direction(std::initializer_list<cdouble> cs) {
    CVec v(static_cast<int>(cs.size()));
    int i = 0;
    for (auto c : cs) v[i++] = c;
    return Direction(v);
}

namespace detail {

constexpr double kBurnsShniderInnerRadius = 0.04321391826377224; // e^{-pi}

inline void check_dim(const DomainSpec& spec, const CVec& z, const char* who) {
    if (static_cast<int>(z.size()) != spec.dim)
        throw DimensionMismatch(std::string(who) + ": point dimension " +
                                std::to_string(z.size()) + " does not match domain dimension " +
                                std::to_string(spec.dim));
}

// Defining inequality value for the unscaled domain; negative inside.
inline double defining_value(const DomainSpec& spec, const CVec& w) {
    switch (spec.kind) {
        case DomainKind::Disc:
        case DomainKind::Ball:
            return w.squaredNorm() - 1.0;
        case DomainKind::Polydisc: {
            double m = 0.0;
            for (int i = 0; i < w.size(); ++i) m = std::max(m, std::abs(w[i]));
            return m - 1.0;
        }
        case DomainKind::Ellipsoid:
            return std::norm(w[0]) + std::pow(std::abs(w[1]), 2.0 * spec.ell_p) - 1.0;
        case DomainKind::ReinhardtQuartic: {
            double t = std::norm(w[0]);
            return t * t + t + std::norm(w[1]) - 1.0;
        }
        case DomainKind::Annulus: {
            double r = std::abs(w[0]);
            return std::max(spec.inner_radius - r, r - 1.0);
        }
        case DomainKind::BurnsShnider: {
            double r = std::abs(w[0]);
            double ring = std::max(kBurnsShniderInnerRadius - r, r - 1.0);
            if (r <= 0.0) return 1.0;
            return std::max(ring, std::sin(std::log(r)) + std::norm(w[1]));
        }
    }
    return 1.0;
}

// --- radial profile of the moduli curve for the two-dimensional domains ---
//
// t in [0,1] parameterizes the curve (r1(t), r2(t)) of boundary moduli,
// endpoints included. `lipschitz` bounds |d(r1,r2)/dt| from above.
struct RadialProfile {
    std::function<std::array<double, 2>(double)> at;
    double lipschitz = 0.0;
};

inline double newton_profile_radius(double c, double s, int p2, bool quartic) {
    // solves (Rc)^2 + (Rs)^(2p) = 1   (ellipsoid, 2p = p2)
    //     or (Rc)^4 + (Rc)^2 + (Rs)^2 = 1 (quartic)
    double R = 1.0;
    for (int it = 0; it < 100; ++it) {
        double F, dF;
        if (quartic) {
            double a = R * c, b = R * s;
            F = a * a * a * a + a * a + b * b - 1.0;
            dF = 4.0 * a * a * a * c + 2.0 * a * c + 2.0 * b * s;
        } else {
            F = std::pow(R * c, 2.0) + std::pow(R * s, double(p2)) - 1.0;
            dF = 2.0 * R * c * c + p2 * std::pow(R, double(p2 - 1)) * std::pow(s, double(p2));
        }
        double dz = F / dF;
        R -= dz;
        if (std::abs(dz) < 1e-15) break;
    }
    return R;
}

inline RadialProfile radial_profile(const DomainSpec& spec) {
    RadialProfile prof;
    switch (spec.kind) {
        case DomainKind::Ball: {
            if (spec.dim != 2) throw Error("radial_profile: only available in dimension 2");
            double s = spec.scale;
            prof.at = [s](double t) -> std::array<double, 2> {
                double phi = t * M_PI / 2.0;
                return {s * std::cos(phi), s * std::sin(phi)};
            };
            prof.lipschitz = s * M_PI / 2.0 * 1.01;
            return prof;
        }
        case DomainKind::Polydisc: {
            if (spec.dim != 2) throw Error("radial_profile: only available in dimension 2");
            // two faces: (1, 2t) for t<1/2, (2-2t, 1) after
            prof.at = [](double t) -> std::array<double, 2> {
                if (t <= 0.5) return {1.0, 2.0 * t};
                return {2.0 - 2.0 * t, 1.0};
            };
            prof.lipschitz = 2.0;
            return prof;
        }
        case DomainKind::Ellipsoid: {
            int p2 = 2 * spec.ell_p;
            prof.at = [p2](double t) -> std::array<double, 2> {
                double phi = t * M_PI / 2.0;
                double c = std::cos(phi), s = std::sin(phi);
                double R = newton_profile_radius(c, s, p2, false);
                return {R * c, R * s};
            };
            break;
        }
        case DomainKind::ReinhardtQuartic: {
            prof.at = [](double t) -> std::array<double, 2> {
                double phi = t * M_PI / 2.0;
                double c = std::cos(phi), s = std::sin(phi);
                double R = newton_profile_radius(c, s, 0, true);
                return {R * c, R * s};
            };
            break;
        }
        case DomainKind::BurnsShnider: {
            // u = pi sin^2(t*pi/2) in [0,pi]; r = e^{-u}, s = sqrt(sin u).
            // This parameterization keeps ds/dt bounded at both tips.
            prof.at = [](double t) -> std::array<double, 2> {
                double tau = t * M_PI / 2.0;
                double sn = std::sin(tau);
                double u = M_PI * sn * sn;
                double su = std::sin(u);
                return {std::exp(-u), su > 0.0 ? std::sqrt(su) : 0.0};
            };
            break;
        }
        default:
            throw Error("radial_profile: not a two-dimensional numeric domain");
    }
    // numeric Lipschitz bound: max finite-difference slope on a fine grid,
    // padded; the profiles above are smooth so this is a sound overestimate.
    const int N = 8192;
    double lip = 0.0;
    auto prev = prof.at(0.0);
    for (int i = 1; i <= N; ++i) {
        auto cur = prof.at(double(i) / N);
        double d = std::hypot(cur[0] - prev[0], cur[1] - prev[1]) * N;
        lip = std::max(lip, d);
        prev = cur;
    }
    prof.lipschitz = lip * 1.25;
    return prof;
}

// squared distance from moduli (a,b) to the profile point at parameter t
inline double profile_dist2(const RadialProfile& prof, double a, double b, double t) {
    auto rs = prof.at(t);
    double dr = rs[0] - a, ds = rs[1] - b;
    return dr * dr + ds * ds;
}

inline double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters = 120) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters && (b - a) > 1e-15; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

struct ProfileMinimum {
    double t;
    double dist;
};

// all local minima of t -> dist((a,b), profile(t)), refined
inline std::vector<ProfileMinimum> profile_minima(const RadialProfile& prof, double a, double b) {
    const int N = 4096;
    std::vector<double> d(N + 1);
    for (int i = 0; i <= N; ++i) d[i] = profile_dist2(prof, a, b, double(i) / N);
    std::vector<ProfileMinimum> out;
    auto refine = [&](double lo, double hi) {
        auto f = [&](double t) { return profile_dist2(prof, a, b, t); };
        double t = golden_min(f, lo, hi);
        out.push_back({t, std::sqrt(f(t))});
    };
    if (d[0] < d[1]) refine(0.0, 1.0 / N);
    for (int i = 1; i < N; ++i)
        if (d[i] <= d[i - 1] && d[i] <= d[i + 1] && (d[i] < d[i - 1] || d[i] < d[i + 1]))
            refine(double(i - 1) / N, double(i + 1) / N);
    if (d[N] < d[N - 1]) refine(1.0 - 1.0 / N, 1.0);
    if (out.empty()) refine(0.0, 1.0);
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.dist < y.dist; });
    return out;
}

} // namespace detail

inline int domain_dim(const DomainSpec& spec) { return spec.dim; }

inline bool contains(const DomainSpec& spec, const Point& z) {
    detail::check_dim(spec, z.coords, "contains");
    CVec w = z.coords / spec.scale;
    return detail::defining_value(spec, w) < 0.0;
}

/// Largest boundary-distance over the canonical center; used to size the
/// near-boundary strip.
inline double inradius(const DomainSpec& spec);

inline double boundary_distance(const DomainSpec& spec, const Point& z) {
    detail::check_dim(spec, z.coords, "boundary_distance");
    if (!contains(spec, z)) throw OutsideDomain("boundary_distance: point is not inside " + spec.canonical_text());
    const double s = spec.scale;
    CVec w = z.coords / s;
    switch (spec.kind) {
        case DomainKind::Disc:
        case DomainKind::Ball:
            return s * (1.0 - w.norm());
        case DomainKind::Polydisc: {
            double m = 0.0;
            for (int i = 0; i < w.size(); ++i) m = std::max(m, std::abs(w[i]));
            return s * (1.0 - m);
        }
        case DomainKind::Annulus: {
            double r = std::abs(w[0]);
            return s * std::min(1.0 - r, r - spec.inner_radius);
        }
        default: {
            auto prof = detail::radial_profile(spec);
            auto mins = detail::profile_minima(prof, std::abs(w[0]), std::abs(w[1]));
            return s * mins.front().dist;
        }
    }
}

inline double inradius(const DomainSpec& spec) {
    switch (spec.kind) {
        case DomainKind::Disc:
        case DomainKind::Ball:
        case DomainKind::Polydisc:
            return spec.scale;
        case DomainKind::Ellipsoid:
            return spec.scale; // delta at the origin; w = 0 slice of the sphere is nearest
        case DomainKind::ReinhardtQuartic:
            return 0.78615137775742328; // positive root of r^4 + r^2 = 1, distance from 0 to (r*, 0)
        case DomainKind::Annulus:
            return spec.scale * 0.5 * (1.0 - spec.inner_radius);
        case DomainKind::BurnsShnider: {
            static const double cached = [] {
                DomainSpec bs = DomainSpec::burns_shnider();
                CVec c(2);
                c << std::exp(-M_PI / 2.0), 0.0;
                return boundary_distance(bs, Point(c));
            }();
            return cached;
        }
    }
    return spec.scale;
}

struct BoundaryFrame {
    Point foot;       // nearest boundary point pi(z)
    CMat tangential;  // P_z: orthogonal projector onto the complex tangent space at the foot
    CMat normal;      // P_z^perp = Id - P_z, rank one
};

struct FrameOptions {
    double near_threshold_factor = 0.2; // require delta(z) < factor * inradius
    double ambiguity_rel_tol = 1e-9;    // two minimizers this close => ambiguous
};

inline BoundaryFrame boundary_frame(const DomainSpec& spec, const Point& z,
                                    const FrameOptions& opt = {}) {
    detail::check_dim(spec, z.coords, "boundary_frame");
    if (!contains(spec, z)) throw OutsideDomain("boundary_frame: point is not inside " + spec.canonical_text());
    const double delta = boundary_distance(spec, z);
    if (delta >= opt.near_threshold_factor * inradius(spec))
        throw Error("boundary_frame: point is not in the near-boundary strip (delta=" +
                    std::to_string(delta) + ")");
    const double s = spec.scale;
    CVec w = z.coords / s;
    const int n = spec.dim;
    CVec foot(n);
    CVec nu(n); // conjugate gradient of the active defining function at the foot

    auto phase = [](cdouble v) -> cdouble {
        double a = std::abs(v);
        return a > 0.0 ? v / a : cdouble(1.0, 0.0);
    };

    switch (spec.kind) {
        case DomainKind::Disc:
        case DomainKind::Ball: {
            double r = w.norm();
            if (r < 1e-12) throw AmbiguousFoot("boundary_frame: center of the ball has no unique foot");
            foot = w / r;
            nu = foot;
            break;
        }
        case DomainKind::Polydisc: {
            int best = 0;
            double m0 = -1.0, m1 = -1.0;
            for (int i = 0; i < n; ++i) {
                double a = std::abs(w[i]);
                if (a > m0) { m1 = m0; m0 = a; best = i; }
                else m1 = std::max(m1, a);
            }
            if (m0 < 1e-12) throw AmbiguousFoot("boundary_frame: center of the polydisc has no unique foot");
            if (n > 1 && m0 - m1 < 1e-12)
                throw AmbiguousFoot("boundary_frame: two polydisc faces are equidistant");
            foot = w;
            foot[best] = phase(w[best]);
            nu = CVec::Zero(n);
            nu[best] = foot[best];
            break;
        }
        case DomainKind::Annulus: {
            double r = std::abs(w[0]);
            double douter = 1.0 - r, dinner = r - spec.inner_radius;
            if (std::abs(douter - dinner) < 1e-12)
                throw AmbiguousFoot("boundary_frame: equidistant from both circles");
            foot = CVec(1);
            foot[0] = phase(w[0]) * (douter < dinner ? 1.0 : spec.inner_radius);
            nu = CVec(1);
            nu[0] = foot[0];
            break;
        }
        default: {
            auto prof = detail::radial_profile(spec);
            double a = std::abs(w[0]), b = std::abs(w[1]);
            auto mins = detail::profile_minima(prof, a, b);
            if (mins.size() > 1) {
                // distinct minimizers (parameter-separated) within tolerance
                double sep = std::abs(mins[1].t - mins[0].t);
                if (sep > 1e-3 &&
                    mins[1].dist <= mins[0].dist * (1.0 + opt.ambiguity_rel_tol))
                    throw AmbiguousFoot("boundary_frame: two boundary minimizers within tolerance");
            }
            auto rs = prof.at(mins.front().t);
            // a vanishing coordinate with a nonvanishing foot modulus means a
            // whole circle of feet
            if ((a < 1e-12 && rs[0] > 1e-9) || (b < 1e-12 && rs[1] > 1e-9))
                throw AmbiguousFoot("boundary_frame: rotational ambiguity of the foot");
            foot = CVec(2);
            foot[0] = phase(w[0]) * rs[0];
            foot[1] = phase(w[1]) * rs[1];
            // conjugate gradient of the defining function
            if (spec.kind == DomainKind::Ellipsoid) {
                int p = spec.ell_p;
                nu = CVec(2);
                nu[0] = foot[0];
                nu[1] = double(p) * std::pow(std::abs(foot[1]), 2.0 * (p - 1)) * foot[1];
            } else if (spec.kind == DomainKind::ReinhardtQuartic) {
                nu = CVec(2);
                nu[0] = (2.0 * std::norm(foot[0]) + 1.0) * foot[0];
                nu[1] = foot[1];
            } else { // BurnsShnider
                double r0 = std::abs(foot[0]);
                nu = CVec(2);
                nu[0] = std::cos(std::log(r0)) / (2.0 * std::conj(foot[0]));
                nu[1] = foot[1];
            }
            break;
        }
    }

    double nn = nu.squaredNorm();
    if (!(nn > 0.0)) throw Error("boundary_frame: degenerate normal at the foot");
    CMat P_perp = nu * nu.adjoint() / nn;
    CMat P = CMat::Identity(n, n) - P_perp;
    return BoundaryFrame{Point(foot * s), std::move(P), std::move(P_perp)};
}

inline std::vector<Point> sample_interior(const DomainSpec& spec, int count, std::uint64_t seed) {
    if (count < 1) throw ConfigFailure("sample_interior: count must be >= 1");
    SeededRng rng(seed);
    const int n = spec.dim;
    // per-coordinate outer modulus bound of the scaled domain
    std::vector<double> R(n, spec.scale);
    if (spec.kind == DomainKind::Polydisc || spec.kind == DomainKind::Ellipsoid ||
        spec.kind == DomainKind::BurnsShnider)
        std::fill(R.begin(), R.end(), 1.0);
    if (spec.kind == DomainKind::ReinhardtQuartic) { R[0] = 0.7861513777574233; R[1] = 1.0; }
    std::vector<Point> out;
    out.reserve(count);
    const long budget = std::max(1000000L, 20000L * count);
    long tries = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++tries > budget)
            throw SamplingFailure("sample_interior: rejection budget exhausted for " + spec.canonical_text());
        CVec z(n);
        for (int i = 0; i < n; ++i)
            z[i] = cdouble(rng.uniform(-R[i], R[i]), rng.uniform(-R[i], R[i]));
        Point p(z);
        if (contains(spec, p)) out.push_back(std::move(p));
    }
    return out;
}

inline std::vector<Point> sample_boundary(const DomainSpec& spec, int count, std::uint64_t seed) {
    if (count < 1) throw ConfigFailure("sample_boundary: count must be >= 1");
    SeededRng rng(seed);
    const int n = spec.dim;
    const double s = spec.scale;
    std::vector<Point> out;
    out.reserve(count);
    auto unit = [&]() { return std::polar(1.0, 2.0 * M_PI * rng.uniform()); };
    for (int k = 0; k < count; ++k) {
        CVec z(n);
        switch (spec.kind) {
            case DomainKind::Disc:
                z[0] = s * unit();
                break;
            case DomainKind::Ball: {
                // normalized complex Gaussian is uniform on the sphere
                CVec g(n);
                for (int i = 0; i < n; ++i) {
                    double u1 = std::max(rng.uniform(), 1e-300), u2 = rng.uniform();
                    double rad = std::sqrt(-2.0 * std::log(u1));
                    g[i] = cdouble(rad * std::cos(2 * M_PI * u2), rad * std::sin(2 * M_PI * u2));
                }
                z = s * g / g.norm();
                break;
            }
            case DomainKind::Polydisc: {
                int face = static_cast<int>(rng.uniform() * n);
                face = std::min(face, n - 1);
                for (int i = 0; i < n; ++i)
                    z[i] = (i == face) ? unit() : std::sqrt(rng.uniform()) * unit();
                break;
            }
            case DomainKind::Annulus: {
                double rad = (rng.uniform() < 0.5) ? spec.inner_radius : 1.0;
                z[0] = s * rad * unit();
                break;
            }
            default: {
                auto prof = detail::radial_profile(spec);
                auto rs = prof.at(rng.uniform());
                z[0] = rs[0] * unit();
                z[1] = rs[1] * unit();
                break;
            }
        }
        out.emplace_back(z);
    }
    return out;
}

namespace detail {

// log of the unit-domain monomial L2 norm where a closed form exists;
// returns nullopt for the quadrature-backed domains.
inline std::optional<double> log_norm_closed(const DomainSpec& spec, const std::vector<int>& a) {
    switch (spec.kind) {
        case DomainKind::Disc:
            return std::log(M_PI) - std::log(double(a[0] + 1));
        case DomainKind::Ball: {
            int total = 0;
            double s = 0.0;
            for (int ai : a) { total += ai; s += std::lgamma(double(ai) + 1.0); }
            return spec.dim * std::log(M_PI) + s - std::lgamma(double(spec.dim + total + 1));
        }
        case DomainKind::Polydisc: {
            double s = 0.0;
            for (int ai : a) s += std::log(M_PI) - std::log(double(ai + 1));
            return s;
        }
        case DomainKind::Annulus: {
            const double r = spec.inner_radius;
            int k = a[0];
            if (k == -1) return std::log(2.0 * M_PI * std::log(1.0 / r));
            if (k >= 0)
                return std::log(2.0 * M_PI) + std::log1p(-std::pow(r, 2.0 * k + 2.0)) - std::log(2.0 * k + 2.0);
            // k <= -2: 2*pi*(1-r^m)/(m r^m) with m = 2|k|-2
            double m = -(2.0 * k + 2.0);
            return std::log(2.0 * M_PI) + std::log1p(-std::pow(r, m)) - std::log(m) - m * std::log(r);
        }
        default:
            return std::nullopt;
    }
}

inline void check_exponent_allowed(const DomainSpec& spec, const std::vector<int>& a) {
    if (static_cast<int>(a.size()) != spec.dim)
        throw DimensionMismatch("monomial exponent has wrong length");
    for (int i = 0; i < spec.dim; ++i) {
        bool laurent = (spec.kind == DomainKind::Annulus) ||
                       (spec.kind == DomainKind::BurnsShnider && i == 0);
        if (a[i] < 0 && !laurent)
            throw InvalidExponent("negative exponent not allowed on coordinate " +
                                  std::to_string(i) + " of " + spec.canonical_text());
    }
}

} // namespace detail

/// L2 norm squared of the (Laurent) monomial z^alpha over the domain.
/// Closed forms for Disc/Ball/Polydisc/Annulus; adaptive radial quadrature
/// for Ellipsoid, ReinhardtQuartic and BurnsShnider.
inline double monomial_norm(const DomainSpec& spec, const std::vector<int>& alpha) {
    detail::check_exponent_allowed(spec, alpha);
    int total = 0;
    for (int ai : alpha) total += ai;
    const double log_scale = (2.0 * total + 2.0 * spec.dim) * std::log(spec.scale);

    if (auto lg = detail::log_norm_closed(spec, alpha)) return std::exp(*lg + log_scale);

    const int a = alpha[0], b = alpha[1];
    double integral = 0.0;
    switch (spec.kind) {
        case DomainKind::Ellipsoid: {
            const double p2 = 2.0 * spec.ell_p;
            integral = integrate([&](double t) {
                return std::pow(t, 2.0 * b + 1.0) * std::pow(1.0 - std::pow(t, p2), a + 1.0) / (2.0 * a + 2.0);
            }, 0.0, 1.0);
            break;
        }
        case DomainKind::ReinhardtQuartic: {
            const double rstar = 0.7861513777574233;
            integral = integrate([&](double t) {
                double t2 = t * t;
                return std::pow(t, 2.0 * a + 1.0) * std::pow(1.0 - t2 - t2 * t2, b + 1.0) / (2.0 * b + 2.0);
            }, 0.0, rstar);
            break;
        }
        case DomainKind::BurnsShnider: {
            // interior margin keeps the integrand finite at the ring edges
            const double lo = detail::kBurnsShniderInnerRadius * (1.0 + 1e-9);
            const double hi = 1.0 - 1e-9;
            integral = integrate([&](double r) {
                double q = -std::sin(std::log(r));
                if (q <= 0.0) return 0.0;
                return std::pow(r, 2.0 * a + 1.0) * std::pow(q, b + 1.0) / (2.0 * b + 2.0);
            }, lo, hi);
            break;
        }
        default:
            throw Error("monomial_norm: unhandled domain");
    }
    if (!(integral > 0.0) || !std::isfinite(integral))
        throw QuadratureFailure("monomial_norm: quadrature returned a non-positive value");
    return 4.0 * M_PI * M_PI * integral * std::exp(log_scale);
}

/// Every allowed multi-index with |alpha| <= D, |alpha| = sum_i |alpha_i|.
/// Laurent coordinates range over [-D, D].
inline std::vector<std::vector<int>> allowed_exponents(const DomainSpec& spec, int D) {
    std::vector<std::vector<int>> out;
    switch (spec.kind) {
        case DomainKind::Disc:
            for (int k = 0; k <= D; ++k) out.push_back({k});
            break;
        case DomainKind::Annulus:
            for (int k = -D; k <= D; ++k) out.push_back({k});
            break;
        case DomainKind::BurnsShnider:
            for (int k = -D; k <= D; ++k)
                for (int m = 0; m + std::abs(k) <= D; ++m) out.push_back({k, m});
            break;
        default: {
            std::vector<int> cur(spec.dim, 0);
            std::function<void(int, int)> rec = [&](int i, int rem) {
                if (i == spec.dim) { out.push_back(cur); return; }
                for (int v = 0; v <= rem; ++v) {
                    cur[i] = v;
                    rec(i + 1, rem - v);
                }
            };
            rec(0, D);
            break;
        }
    }
    return out;
}

/// Per-coordinate modulus range [lo, hi] over the closed domain; lo > 0 only
/// for the annular coordinates that admit Laurent exponents.
inline std::vector<std::array<double, 2>> modulus_bounds(const DomainSpec& spec) {
    const double s = spec.scale;
    switch (spec.kind) {
        case DomainKind::Disc:
        case DomainKind::Ball:
            return std::vector<std::array<double, 2>>(spec.dim, {0.0, s});
        case DomainKind::Polydisc:
            return std::vector<std::array<double, 2>>(spec.dim, {0.0, 1.0});
        case DomainKind::Ellipsoid:
            return {{0.0, 1.0}, {0.0, 1.0}};
        case DomainKind::ReinhardtQuartic:
            return {{0.0, 0.7861513777574233}, {0.0, 1.0}};
        case DomainKind::Annulus:
            return {{s * spec.inner_radius, s}};
        case DomainKind::BurnsShnider:
            return {{detail::kBurnsShniderInnerRadius, 1.0}, {0.0, 1.0}};
    }
    return {};
}

} // namespace metriclab
