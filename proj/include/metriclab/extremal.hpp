#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "metriclab/bergman.hpp"
#include "metriclab/convex.hpp"

namespace metriclab {

/// Domains with closed-form Caratheodory/Kobayashi metrics (density
/// convention: C(0; unit v) = 1 on the unit disc).
inline bool has_exact_invariant_metrics(const DomainSpec& spec) {
    return spec.kind == DomainKind::Disc || spec.kind == DomainKind::Ball ||
           spec.kind == DomainKind::Polydisc;
}

inline double carath_exact(const DomainSpec& spec, const Point& z, const Direction& v) {
    detail::check_dim(spec, z.coords, "carath_exact");
    detail::check_dim(spec, v.coords, "carath_exact");
    if (!contains(spec, z)) throw OutsideDomain("carath_exact: point outside domain");
    const double s = spec.scale;
    CVec w = z.coords / s;
    switch (spec.kind) {
        case DomainKind::Disc:
        case DomainKind::Ball: {
            // automorphism transport of C(0, v) = |v|:
            // C(w, v)^2 = [(1-|w|^2)|v|^2 + |<v,w>|^2] / (1-|w|^2)^2
            double x = w.squaredNorm();
            double ip = std::abs((v.coords.transpose() * w.conjugate())(0, 0));
            double val = std::sqrt((1.0 - x) * v.coords.squaredNorm() + ip * ip) / (1.0 - x);
            return val / s;
        }
        case DomainKind::Polydisc: {
            double best = 0.0;
            for (int i = 0; i < spec.dim; ++i)
                best = std::max(best, std::abs(v.coords[i]) / (1.0 - std::norm(w[i])));
            return best;
        }
        default:
            throw Error("carath_exact: unsupported domain " + spec.canonical_text());
    }
}

/// Exact Kobayashi values on the same homogeneous domains; equality with the
/// Caratheodory metric there is a theorem, but the polydisc value is computed
/// through the per-factor maximum rather than by aliasing carath_exact.
inline double kobayashi_exact(const DomainSpec& spec, const Point& z, const Direction& v) {
    detail::check_dim(spec, z.coords, "kobayashi_exact");
    detail::check_dim(spec, v.coords, "kobayashi_exact");
    if (!contains(spec, z)) throw OutsideDomain("kobayashi_exact: point outside domain");
    const double s = spec.scale;
    switch (spec.kind) {
        case DomainKind::Disc:
        case DomainKind::Ball: {
            CVec w = z.coords / s;
            double x = w.squaredNorm();
            double ip = std::abs((v.coords.transpose() * w.conjugate())(0, 0));
            return std::sqrt((1.0 - x) * v.coords.squaredNorm() + ip * ip) / ((1.0 - x) * s);
        }
        case DomainKind::Polydisc: {
            // K(z, v) = max_i K_D(z_i, v_i)
            double best = 0.0;
            for (int i = 0; i < spec.dim; ++i)
                best = std::max(best, std::abs(v.coords[i]) / (1.0 - std::norm(z.coords[i])));
            return best;
        }
        default:
            throw Error("kobayashi_exact: unsupported domain " + spec.canonical_text());
    }
}

/// Certified lower bound for the Caratheodory metric by convex optimization
/// over polynomial (Laurent where allowed) candidates of total degree <= d
/// with f(z) = 0, feasibility certified on the boundary. Dimension one uses
/// modulus constraints on phase grids; dimension two uses phase-aligned l1
/// majorants on the radial profile. The value scales exactly linearly in |v|.
inline CertifiedBound carath_lower_bound(const DomainSpec& spec, const Point& z,
                                         const Direction& v, int d, int M,
                                         SolverOptions opt = {}) {
    detail::check_dim(spec, z.coords, "carath_lower_bound");
    detail::check_dim(spec, v.coords, "carath_lower_bound");
    if (!contains(spec, z)) throw OutsideDomain("carath_lower_bound: point outside domain");
    if (d < 1) throw ConfigFailure("carath_lower_bound: degree must be >= 1");
    if (M < 8 * d) throw ConfigFailure("carath_lower_bound: needs at least 8d boundary samples");

    const double vnorm = v.coords.norm();
    CVec vhat = v.coords / vnorm;

    if (spec.dim == 1) {
        std::vector<int> exps;
        if (spec.kind == DomainKind::Annulus) {
            for (int k = -d; k <= d; ++k)
                if (k != 0) exps.push_back(k);
        } else if (spec.kind == DomainKind::Disc) {
            for (int k = 1; k <= d; ++k) exps.push_back(k);
        } else {
            throw Error("carath_lower_bound: unsupported one-dimensional domain");
        }
        std::vector<double> radii;
        if (spec.kind == DomainKind::Annulus) radii = {spec.scale * spec.inner_radius, spec.scale};
        else radii = {spec.scale};
        cdouble z0 = z.coords[0];
        CVec u(static_cast<int>(exps.size()));
        for (std::size_t j = 0; j < exps.size(); ++j) {
            cdouble w = double(exps[j]) * std::pow(z0, exps[j] - 1) * vhat[0];
            u[j] = std::conj(w);
        }
        detail::ModulusMaximizer solver(exps, z0, u, radii, opt);
        auto out = solver.solve(std::max(M / static_cast<int>(radii.size()), 16));
        out.value *= vnorm;
        return out;
    }

    if (spec.dim == 2) {
        std::vector<std::array<int, 2>> alphas;
        std::vector<double> weights;
        cdouble z1 = z.coords[0], z2 = z.coords[1];
        auto powz = [](cdouble w, int e) -> cdouble {
            if (e == 0) return 1.0;
            if (w == 0.0) return e > 0 ? cdouble(0.0) : throw OutsideDomain("carath_lower_bound: Laurent at zero");
            return std::pow(w, e);
        };
        for (auto& a : allowed_exponents(spec, d)) {
            if (a[0] == 0 && a[1] == 0) continue;
            cdouble u = 0.0;
            if (a[0] != 0) u += double(a[0]) * powz(z1, a[0] - 1) * powz(z2, a[1]) * vhat[0];
            if (a[1] != 0) u += double(a[1]) * powz(z1, a[0]) * powz(z2, a[1] - 1) * vhat[1];
            double t = std::abs(u);
            if (t > 0.0) {
                alphas.push_back({a[0], a[1]});
                weights.push_back(t);
            }
        }
        if (alphas.empty()) return {0.0, {}};
        auto bounds_v = modulus_bounds(spec);
        std::array<std::array<double, 2>, 2> bounds{{{bounds_v[0][0], bounds_v[0][1]},
                                                     {bounds_v[1][0], bounds_v[1][1]}}};
        Eigen::VectorXd t(static_cast<int>(weights.size()));
        for (std::size_t i = 0; i < weights.size(); ++i) t[i] = weights[i];
        detail::ProfileL1Maximizer solver(alphas, t, {std::abs(z1), std::abs(z2)},
                                          detail::radial_profile(spec), bounds, opt);
        auto out = solver.solve(std::max(M, 129));
        out.value *= vnorm;
        return out;
    }

    // higher-dimensional catalog members are exactly solvable
    if (has_exact_invariant_metrics(spec)) return {carath_exact(spec, z, v), {}};
    throw Error("carath_lower_bound: no optimization route in dimension " + std::to_string(spec.dim));
}

/// Upper bound for the Kobayashi metric via the largest round affine disc
/// through z in direction v. Membership of the candidate disc is tested on a
/// dense radius/phase grid and sharpened by local refinement of the worst
/// point; the returned value is |v| / R.
inline double kobayashi_upper_bound(const DomainSpec& spec, const Point& z, const Direction& v) {
    detail::check_dim(spec, z.coords, "kobayashi_upper_bound");
    detail::check_dim(spec, v.coords, "kobayashi_upper_bound");
    if (!contains(spec, z)) throw OutsideDomain("kobayashi_upper_bound: point outside domain");
    const double vnorm = v.coords.norm();
    CVec vhat = v.coords / vnorm;

    auto worst_on_disc = [&](double R) {
        auto val = [&](double rho, double th) {
            CVec w = (z.coords + std::polar(rho * R, th) * vhat) / spec.scale;
            return detail::defining_value(spec, w);
        };
        const int JR = 17, JT = 128;
        double best = -std::numeric_limits<double>::infinity();
        double br = 1.0, bt = 0.0;
        for (int i = 0; i < JR; ++i) {
            double rho = std::sin(M_PI * (i + 1) / (2.0 * JR)); // clustered toward the rim
            for (int j = 0; j < JT; ++j) {
                double th = 2.0 * M_PI * j / JT;
                double f = val(rho, th);
                if (f > best) { best = f; br = rho; bt = th; }
            }
        }
        double dr = 1.0 / JR, dt = 2.0 * M_PI / JT;
        for (int it = 0; it < 70; ++it) {
            bool moved = false;
            for (auto [er, et] : {std::pair{dr, 0.0}, {-dr, 0.0}, {0.0, dt}, {0.0, -dt}}) {
                double rho = std::clamp(br + er, 0.0, 1.0);
                double f = val(rho, bt + et);
                if (f > best) { best = f; br = rho; bt += et; moved = true; }
            }
            if (!moved) { dr *= 0.6; dt *= 0.6; }
            if (dr < 1e-13) break;
        }
        return best;
    };

    double lo = 0.0, hi = 8.0 * std::max(1.0, spec.scale);
    if (worst_on_disc(hi) < 0.0)
        throw NumericalFailure("kobayashi_upper_bound: domain appears unbounded");
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        if (worst_on_disc(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    if (lo < 1e-12) throw NumericalFailure("kobayashi_upper_bound: degenerate disc radius");
    return vnorm / (lo * (1.0 - 1e-9));
}

struct MetricInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool lower_exact = false;
    bool upper_exact = false;
    BoundDiagnostics diag;
    double width() const { return upper - lower; }
};

/// Certified bracket [C-lower, K-upper]; since C <= K always, the interval
/// brackets both metrics. Exact paths are preferred where closed forms exist.
inline MetricInterval ck_interval(const DomainSpec& spec, const Point& z, const Direction& v,
                                  int d, int M, SolverOptions opt = {}) {
    MetricInterval mi;
    if (has_exact_invariant_metrics(spec)) {
        mi.lower = carath_exact(spec, z, v);
        mi.upper = kobayashi_exact(spec, z, v);
        mi.lower_exact = mi.upper_exact = true;
    } else {
        auto lb = carath_lower_bound(spec, z, v, d, M, opt);
        mi.lower = lb.value;
        mi.diag = lb.diag;
        mi.upper = kobayashi_upper_bound(spec, z, v);
    }
    if (mi.lower > mi.upper) {
        if (mi.lower <= mi.upper * (1.0 + 1e-9))
            mi.lower = mi.upper;
        else
            throw NumericalFailure("ck_interval: bracket inverted beyond tolerance");
    }
    return mi;
}

struct LuEstimate {
    double value = 0.0;
    Point witness_point;
    Direction witness_direction;
    bool exact_path = false;
};

/// Lower bound for the Lu constant sup C/B: both metrics evaluated as
/// lengths of the same Euclidean vector. The exact path uses the closed-form
/// Bergman metric; the optimization path divides the certified Caratheodory
/// lower bound by the series metric length.
inline LuEstimate lu_lower_bound(const DomainSpec& spec, const KernelSeries& series,
                                 const std::vector<Point>& points,
                                 const std::vector<Direction>& fan, int d, int M,
                                 bool use_exact_paths = true, SolverOptions opt = {}) {
    if (points.empty() || fan.empty()) throw ConfigFailure("lu_lower_bound: empty grids");
    if (!(series.spec == spec)) throw ConfigFailure("lu_lower_bound: series built for a different domain");
    const bool exact = use_exact_paths && has_exact_invariant_metrics(spec);
    LuEstimate best;
    best.exact_path = exact;
    for (const auto& z : points) {
        HermitianForm g = exact ? bergman_metric_closed_form(spec, z) : metric_at(series, z);
        for (const auto& v : fan) {
            double C = exact ? carath_exact(spec, z, v)
                             : carath_lower_bound(spec, z, v, d, M, opt).value;
            double B = g.length(v.coords);
            if (!(B > 0.0)) throw NumericalFailure("lu_lower_bound: vanishing Bergman length");
            double ratio = C / B;
            if (ratio > best.value) {
                best.value = ratio;
                best.witness_point = z;
                best.witness_direction = v;
            }
        }
    }
    if (!(best.value > 0.0)) throw NumericalFailure("lu_lower_bound: nonpositive estimate");
    if (best.value > 1.0 + 1e-9)
        throw NumericalFailure("lu_lower_bound: estimate exceeds 1; B >= C is violated numerically "
                               "(value=" + std::to_string(best.value) + ")");
    return best;
}

/// Deterministic direction fan for the Hermitian fit: axes, two-coordinate
/// mixes, then seeded unit vectors; 8 n^2 directions by default.
inline std::vector<Direction> hermitian_fit_fan(int n, std::uint64_t seed = 0x5EED) {
    std::vector<Direction> fan;
    const int target = 8 * n * n;
    for (int i = 0; i < n; ++i) {
        CVec v = CVec::Zero(n);
        v[i] = 1.0;
        fan.emplace_back(v);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (cdouble ph : {cdouble(1, 0), cdouble(-1, 0), cdouble(0, 1), cdouble(0, -1)}) {
                CVec v = CVec::Zero(n);
                v[i] = 1.0;
                v[j] = ph;
                fan.emplace_back(v / v.norm());
            }
    SeededRng rng(seed);
    while (static_cast<int>(fan.size()) < target) {
        CVec v(n);
        for (int i = 0; i < n; ++i) {
            double u1 = std::max(rng.uniform(), 1e-300), u2 = rng.uniform();
            double r = std::sqrt(-2.0 * std::log(u1));
            v[i] = cdouble(r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2));
        }
        fan.emplace_back(v / v.norm());
    }
    return fan;
}

/// Max relative misfit of the best Hermitian form Q against C(z, v)^2 over
/// the fan. Zero (to solver precision) exactly when v -> C(z,v)^2 is a
/// Hermitian quadratic form, a necessary condition for the metric to be
/// Kaehler near the boundary.
inline double hermitian_fit_residual(const DomainSpec& spec, const Point& z,
                                     const std::vector<Direction>& fan,
                                     int d = 3, int M = 129) {
    const int n = spec.dim;
    if (static_cast<int>(fan.size()) < 4 * n * n)
        throw ConfigFailure("hermitian_fit_residual: fan needs at least 4 n^2 directions");
    const int unknowns = n * n;
    Eigen::MatrixXd A(fan.size(), unknowns);
    Eigen::VectorXd rhs(fan.size());
    for (std::size_t r = 0; r < fan.size(); ++r) {
        const CVec& v = fan[r].coords;
        int col = 0;
        for (int a = 0; a < n; ++a) A(r, col++) = std::norm(v[a]);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                cdouble m = v[a] * std::conj(v[b]);
                A(r, col++) = 2.0 * m.real();
                A(r, col++) = -2.0 * m.imag();
            }
        double C = has_exact_invariant_metrics(spec)
                       ? carath_exact(spec, z, fan[r])
                       : carath_lower_bound(spec, z, fan[r], d, M).value;
        rhs(r) = C * C;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < unknowns) throw Error("hermitian_fit_residual: rank-deficient fan");
    Eigen::VectorXd q = qr.solve(rhs);
    double resid = 0.0;
    for (std::size_t r = 0; r < fan.size(); ++r)
        resid = std::max(resid, std::abs(rhs(r) - A.row(r).dot(q)) / rhs(r));
    return resid;
}

// ---------------------------------------------------------------------------
// Kaehler residual of a metric field on a full-dimensional grid
// ---------------------------------------------------------------------------

/// Hermitian forms sampled on a (2n)-dimensional grid of real coordinates
/// around a center, spacing h, 2*radius+1 nodes per axis.
struct MetricGrid {
    Point center;
    double h = 0.0;
    int radius = 0;
    int n = 0;
    std::vector<HermitianForm> values;

    int nodes_per_axis() const { return 2 * radius + 1; }

    std::size_t flat_index(const std::vector<int>& idx) const {
        std::size_t f = 0;
        for (int ax = 0; ax < 2 * n; ++ax) f = f * nodes_per_axis() + idx[ax];
        return f;
    }

    Point point_at(const std::vector<int>& idx) const {
        CVec z = center.coords;
        for (int i = 0; i < n; ++i) {
            z[i] += cdouble((idx[2 * i] - radius) * h, (idx[2 * i + 1] - radius) * h);
        }
        return Point(z);
    }
};

inline MetricGrid build_metric_grid(const std::function<HermitianForm(const Point&)>& field,
                                    const Point& center, double h, int radius) {
    if (radius < 1) throw ConfigFailure("build_metric_grid: radius must be >= 1 for central differences");
    if (!(h > 0.0)) throw ConfigFailure("build_metric_grid: spacing must be positive");
    MetricGrid grid;
    grid.center = center;
    grid.h = h;
    grid.radius = radius;
    grid.n = center.dim();
    const int L = grid.nodes_per_axis();
    const int axes = 2 * grid.n;
    std::size_t total = 1;
    for (int i = 0; i < axes; ++i) total *= L;
    grid.values.resize(total);
    std::vector<int> idx(axes, 0);
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t rem = f;
        for (int ax = axes - 1; ax >= 0; --ax) { idx[ax] = rem % L; rem /= L; }
        grid.values[f] = field(grid.point_at(idx));
    }
    return grid;
}

inline MetricGrid build_metric_grid(const KernelSeries& series, const Point& center, double h,
                                    int radius) {
    return build_metric_grid([&](const Point& p) { return metric_at(series, p); }, center, h, radius);
}

/// Max over interior nodes and index triples of |d_c g_{a b-bar} - d_a g_{c b-bar}|
/// with the holomorphic derivative taken by central differences (O(h^2)).
inline double kahler_residual(const MetricGrid& grid) {
    const int n = grid.n, L = grid.nodes_per_axis();
    if (L < 3) throw ConfigFailure("kahler_residual: grid too small for central differences");
    const int axes = 2 * n;
    std::vector<int> idx(axes, 0);
    double worst = 0.0;
    std::size_t total = grid.values.size();
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t rem = f;
        bool interior = true;
        for (int ax = axes - 1; ax >= 0; --ax) {
            idx[ax] = rem % L;
            rem /= L;
            if (idx[ax] == 0 || idx[ax] == L - 1) interior = false;
        }
        if (!interior) continue;
        auto diff = [&](int c) -> CMat {
            auto up = idx, dn = idx;
            up[2 * c] += 1; dn[2 * c] -= 1;
            CMat dx = (grid.values[grid.flat_index(up)].m - grid.values[grid.flat_index(dn)].m) /
                      (2.0 * grid.h);
            up = idx; dn = idx;
            up[2 * c + 1] += 1; dn[2 * c + 1] -= 1;
            CMat dy = (grid.values[grid.flat_index(up)].m - grid.values[grid.flat_index(dn)].m) /
                      (2.0 * grid.h);
            return 0.5 * (dx - cdouble(0, 1) * dy); // d/dz_c
        };
        std::vector<CMat> dg(n);
        for (int c = 0; c < n; ++c) dg[c] = diff(c);
        for (int c = 0; c < n; ++c)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    worst = std::max(worst, std::abs(dg[c](a, b) - dg[a](c, b)));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// coincidence scan
// ---------------------------------------------------------------------------

struct CoincidenceReport {
    double fraction_coincident = 0.0; // share of fan directions with a tight C/K bracket
    double tangential_fraction = 0.0; // share of the coincident ones that are near-tangential
    int coincident = 0;
    int tangential = 0;
    int fan_size = 0;
};

inline CoincidenceReport coincidence_scan(const DomainSpec& spec, const Point& z,
                                          const std::vector<Direction>& fan, double tol,
                                          double eps_tangential, int d, int M,
                                          const FrameOptions& fropt = {},
                                          SolverOptions opt = {}) {
    if (fan.empty()) throw ConfigFailure("coincidence_scan: empty fan");
    BoundaryFrame frame = boundary_frame(spec, z, fropt);
    CoincidenceReport rep;
    rep.fan_size = static_cast<int>(fan.size());
    for (const auto& v : fan) {
        MetricInterval mi = ck_interval(spec, z, v, d, M, opt);
        bool coincident = mi.lower > 0.0 && mi.width() < tol * mi.lower;
        if (!coincident) continue;
        ++rep.coincident;
        double tang = (frame.tangential * v.coords).norm();
        double norm = (frame.normal * v.coords).norm();
        if (norm < eps_tangential * tang) ++rep.tangential;
    }
    rep.fraction_coincident = double(rep.coincident) / rep.fan_size;
    rep.tangential_fraction = rep.coincident > 0 ? double(rep.tangential) / rep.coincident : 0.0;
    return rep;
}

} // namespace metriclab
