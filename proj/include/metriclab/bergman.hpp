#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "metriclab/kernel.hpp"

namespace metriclab {

/// Positive-definite Hermitian matrix housing g_{a b-bar}.
struct HermitianForm {
    CMat m;

    double hermitian_defect() const { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

    double smallest_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    /// length of v in this metric: (sum g_{ab} v_a conj(v_b))^{1/2}
    double length(const CVec& v) const {
        cdouble q = (v.transpose() * m * v.conjugate())(0, 0);
        return std::sqrt(std::max(0.0, q.real()));
    }
};

namespace detail {

// All kernel derivative tensors needed at t = z, accumulated term-wise:
//   K, d_i K, d_i d_j K, d_i dbar_j K, d_i d_j dbar_k K, d_i d_j dbar_k dbar_l K.
// Entries whose contribution is negligible relative to the dominant one are
// skipped up front (log-magnitude test); this is what keeps deep Laurent
// orders from overflowing the monomial evaluation.
struct KernelTensors {
    int n = 0;
    double K = 0.0;
    CVec d1;
    CMat d2h, d2m;
    std::vector<CMat> d3;              // d3[k](i,j) = d_i d_j dbar_k K
    std::vector<std::vector<CMat>> d4; // d4[k][l](i,j) = d_i d_j dbar_k dbar_l K
};

inline KernelTensors kernel_tensors(const KernelSeries& ks, const CVec& z) {
    const int n = ks.spec.dim;
    KernelTensors T;
    T.n = n;
    T.d1 = CVec::Zero(n);
    T.d2h = CMat::Zero(n, n);
    T.d2m = CMat::Zero(n, n);
    T.d3.assign(n, CMat::Zero(n, n));
    T.d4.assign(n, std::vector<CMat>(n, CMat::Zero(n, n)));

    std::vector<double> logmod(n);
    for (int i = 0; i < n; ++i) {
        double a = std::abs(z[i]);
        logmod[i] = a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
    }

    // pass 1: dominant log-magnitude over the monomial and its reductions
    auto filter_mag = [&](const KernelEntry& e) {
        double lm = std::log(e.coeff);
        for (int i = 0; i < n; ++i) {
            int a = e.alpha[i];
            if (a == 0) continue;
            if (!std::isfinite(logmod[i])) {
                if (a < 0) throw OutsideDomain("kernel tensors: Laurent exponent at a vanishing coordinate");
                if (a > 2) return -std::numeric_limits<double>::infinity();
                continue; // reduced monomial has exponent 0
            }
            double best = 2.0 * a * logmod[i];
            for (int red = 1; red <= 2 && (a - red >= 0 || a < 0); ++red)
                best = std::max(best, 2.0 * (a - red) * logmod[i]);
            lm += best;
        }
        return lm;
    };
    double max_lm = -std::numeric_limits<double>::infinity();
    std::vector<double> lms(ks.entries.size());
    for (std::size_t idx = 0; idx < ks.entries.size(); ++idx) {
        lms[idx] = filter_mag(ks.entries[idx]);
        max_lm = std::max(max_lm, lms[idx]);
    }
    if (!std::isfinite(max_lm)) throw NumericalFailure("kernel tensors: all series terms vanish here");
    const double cutoff = max_lm - 85.0; // e^-85 ~ 1e-37 relative

    CVec dm(n);
    CMat d2(n, n);
    for (std::size_t idx = 0; idx < ks.entries.size(); ++idx) {
        if (lms[idx] < cutoff) continue;
        const auto& e = ks.entries[idx];
        // monomial and its first/second holomorphic derivatives at z
        auto mono_shift = [&](int drop_i, int drop_j) -> cdouble {
            cdouble v = 1.0;
            for (int i = 0; i < n; ++i) {
                int a = e.alpha[i];
                if (i == drop_i) --a;
                if (i == drop_j) --a;
                if (a == 0) continue;
                if (z[i] == 0.0) return 0.0;
                v *= std::pow(z[i], a);
            }
            return v;
        };
        cdouble m = mono_shift(-1, -1);
        for (int i = 0; i < n; ++i)
            dm[i] = (e.alpha[i] != 0) ? double(e.alpha[i]) * mono_shift(i, -1) : cdouble(0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double f = double(e.alpha[i]) * double(e.alpha[j] - (i == j ? 1 : 0));
                d2(i, j) = (f != 0.0) ? f * mono_shift(i, j) : cdouble(0.0);
            }

        const double c = e.coeff;
        T.K += c * std::norm(m);
        T.d1 += (c * std::conj(m)) * dm;
        T.d2h += (c * std::conj(m)) * d2;
        T.d2m += c * (dm * dm.adjoint()); // (i,j) entry: c * dm_i conj(dm_j)
        for (int k = 0; k < n; ++k) {
            cdouble ck = c * std::conj(dm[k]);
            if (ck != 0.0) T.d3[k] += ck * d2;
            for (int l = 0; l < n; ++l) {
                cdouble ckl = c * std::conj(d2(k, l));
                if (ckl != 0.0) T.d4[k][l] += ckl * d2;
            }
        }
    }
    if (!(T.K > 0.0)) throw NumericalFailure("kernel tensors: K_D(z,z) <= 0");
    return T;
}

} // namespace detail

struct MetricJet {
    HermitianForm g;
    std::vector<CMat> dg;               // dg[c](a,b) = d_c g_{a b-bar}
    std::vector<std::vector<CMat>> ddg; // ddg[c][d](a,b) = d_c dbar_d g_{a b-bar}
};

/// Bergman metric by exact term-wise differentiation of log K_D. Throws
/// IndefiniteMetric when the truncated series is too short to be positive
/// definite at z.
inline HermitianForm metric_at(const KernelSeries& ks, const Point& z) {
    detail::check_dim(ks.spec, z.coords, "metric_at");
    if (!contains(ks.spec, z)) throw OutsideDomain("metric_at: point is not inside " + ks.spec.canonical_text());
    auto T = detail::kernel_tensors(ks, z.coords);
    const double K = T.K;
    // g_{a b-bar} = K_{a b-bar}/K - K_a K_{b-bar}/K^2
    HermitianForm g;
    g.m = T.d2m / K - (T.d1 * T.d1.adjoint()) / (K * K);
    if (g.smallest_eigenvalue() <= 0.0)
        throw IndefiniteMetric("metric_at: truncated metric not positive definite at this point (raise D)");
    return g;
}

/// Full analytic jet (g, dg, ddg) of the Bergman metric from the series.
inline MetricJet metric_jet(const KernelSeries& ks, const Point& z) {
    detail::check_dim(ks.spec, z.coords, "metric_jet");
    if (!contains(ks.spec, z)) throw OutsideDomain("metric_jet: point is not inside " + ks.spec.canonical_text());
    auto T = detail::kernel_tensors(ks, z.coords);
    const int n = T.n;
    const double K = T.K;
    const CVec& d1 = T.d1;
    const CMat& d2h = T.d2h;
    const CMat& d2m = T.d2m;
    CVec kb = d1.conjugate();     // K_{b-bar}
    CMat kb2 = d2h.conjugate();   // K_{b-bar d-bar}

    MetricJet jet;
    jet.g.m = d2m / K - (d1 * d1.adjoint()) / (K * K);
    if (jet.g.smallest_eigenvalue() <= 0.0)
        throw IndefiniteMetric("metric_jet: truncated metric not positive definite at this point (raise D)");

    const double K2 = K * K, K3 = K2 * K, K4 = K3 * K;
    jet.dg.assign(n, CMat::Zero(n, n));
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                jet.dg[c](a, b) = T.d3[b](a, c) / K
                                - d2h(a, c) * kb[b] / K2
                                - d2m(a, b) * d1[c] / K2
                                - d1[a] * d2m(c, b) / K2
                                + 2.0 * d1[a] * d1[c] * kb[b] / K3;

    jet.ddg.assign(n, std::vector<CMat>(n, CMat::Zero(n, n)));
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    // conj(d3[l](i,j)) = dbar_i dbar_j d_l K with (i,j,l)=(b,d,a) etc.
                    cdouble d3b_bda = std::conj(T.d3[a](b, d));
                    cdouble d3b_bdc = std::conj(T.d3[c](b, d));
                    jet.ddg[c][d](a, b) =
                          T.d4[b][d](a, c) / K - T.d3[b](a, c) * kb[d] / K2
                        - T.d3[d](a, c) * kb[b] / K2 - d2h(a, c) * kb2(b, d) / K2
                        + 2.0 * d2h(a, c) * kb[b] * kb[d] / K3
                        - d3b_bda * d1[c] / K2 - d2m(a, b) * d2m(c, d) / K2
                        + 2.0 * d2m(a, b) * d1[c] * kb[d] / K3
                        - d2m(a, d) * d2m(c, b) / K2 - d1[a] * d3b_bdc / K2
                        + 2.0 * d1[a] * d2m(c, b) * kb[d] / K3
                        + 2.0 * d2m(a, d) * d1[c] * kb[b] / K3
                        + 2.0 * d1[a] * d2m(c, d) * kb[b] / K3
                        + 2.0 * d1[a] * d1[c] * kb2(b, d) / K3
                        - 6.0 * d1[a] * d1[c] * kb[b] * kb[d] / K4;
                }
    return jet;
}

/// Holomorphic sectional curvature H(z; v) = R(v, vbar, v, vbar) / g(v, vbar)^2
/// with R_{a b-bar c d-bar} = -dd g + g^{mu-bar nu} (d g)(dbar g). The
/// normalization carries no extra factor; the unit disc comes out at -1 and
/// the unit ball at -2/(n+1).
inline double hsc_at(const KernelSeries& ks, const Point& z, const Direction& v) {
    detail::check_dim(ks.spec, v.coords, "hsc_at");
    MetricJet jet = metric_jet(ks, z);
    const int n = ks.spec.dim;
    const CVec& w = v.coords;

    cdouble gv = (w.transpose() * jet.g.m * w.conjugate())(0, 0);
    CVec amu = CVec::Zero(n);
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int m = 0; m < n; ++m)
                amu[m] += jet.dg[c](a, m) * w[a] * w[c];
    CMat ginv = jet.g.m.inverse();
    cdouble s = 0.0;
    for (int m = 0; m < n; ++m)
        for (int nu = 0; nu < n; ++nu)
            s += ginv(m, nu) * amu[m] * std::conj(amu[nu]);
    cdouble q4 = 0.0;
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    q4 += jet.ddg[c][d](a, b) * w[a] * std::conj(w[b]) * w[c] * std::conj(w[d]);
    const double R = -q4.real() + s.real();
    return R / (gv.real() * gv.real());
}

struct ScanSummary {
    double min = 0.0, max = 0.0, mean = 0.0;
    std::size_t arg_min_point = 0, arg_min_dir = 0;
    std::size_t arg_max_point = 0, arg_max_dir = 0;
    std::size_t count = 0;
};

/// Summary of hsc_at over points x fan, evaluated in input order.
inline ScanSummary curvature_scan(const KernelSeries& ks,
                                  const std::vector<Point>& points,
                                  const std::vector<Direction>& fan) {
    if (points.empty() || fan.empty()) throw ConfigFailure("curvature_scan: empty inputs");
    ScanSummary s;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < fan.size(); ++j) {
            double h = hsc_at(ks, points[i], fan[j]);
            sum += h;
            ++s.count;
            if (h < s.min) { s.min = h; s.arg_min_point = i; s.arg_min_dir = j; }
            if (h > s.max) { s.max = h; s.arg_max_point = i; s.arg_max_dir = j; }
        }
    s.mean = sum / double(s.count);
    return s;
}

// ---------------------------------------------------------------------------
// representative coordinates
// ---------------------------------------------------------------------------

/// Deterministic direction fan used to estimate the curvature constant at a
/// base point: coordinate axes, pairwise diagonals, then seeded unit vectors.
inline std::vector<Direction> curvature_fan(int n, int count = 16, std::uint64_t seed = 0xC2) {
    std::vector<Direction> fan;
    for (int i = 0; i < n && static_cast<int>(fan.size()) < count; ++i) {
        CVec v = CVec::Zero(n);
        v[i] = 1.0;
        fan.emplace_back(v);
    }
    for (int i = 0; i < n && static_cast<int>(fan.size()) < count; ++i)
        for (int j = i + 1; j < n && static_cast<int>(fan.size()) < count; ++j) {
            CVec v = CVec::Zero(n);
            v[i] = 1.0;
            v[j] = 1.0;
            fan.emplace_back(v / v.norm());
            if (static_cast<int>(fan.size()) < count) {
                CVec u = CVec::Zero(n);
                u[i] = 1.0;
                u[j] = cdouble(0.0, 1.0);
                fan.emplace_back(u / u.norm());
            }
        }
    SeededRng rng(seed);
    while (static_cast<int>(fan.size()) < count) {
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

struct RepCoordinates {
    Point base;
    CMat inverse_metric_at_base; // (g^{j-bar a}) = (g_{a j-bar})^{-1}
    HermitianForm reference_form;
    double curvature_constant = 0.0; // c^2, mean of -H over the fan
    double curvature_spread = 0.0;   // max - min of -H over the fan
    bool hypothesis_ok = true;       // spread below 1e-2
};

/// The map z -> T(z) built from kernel derivatives at the base point, with
/// its analytic Jacobian. Holomorphic away from the zero set of K_D(., p).
class RepMap {
public:
    RepMap(KernelSeries series, CVec p, CMat ginv_row_major, double Kpp, CVec blog)
        : ks_(std::move(series)), p_(std::move(p)), ginv_(std::move(ginv_row_major)),
          Kpp_(Kpp), blog_(std::move(blog)) {}

    CVec eval(const Point& z) const {
        auto [Kzp, B, dK, dB] = pieces(z.coords, false);
        guard_zero_set(z, Kzp);
        const int n = ks_.spec.dim;
        CVec w = CVec::Zero(n);
        for (int al = 0; al < n; ++al)
            for (int j = 0; j < n; ++j)
                w[al] += ginv_(j, al) * (B[j] / Kzp - blog_[j]);
        return w;
    }

    CMat jacobian(const Point& z) const {
        auto [Kzp, B, dK, dB] = pieces(z.coords, true);
        guard_zero_set(z, Kzp);
        const int n = ks_.spec.dim;
        CMat J = CMat::Zero(n, n); // J(al, be) = dw_al / dz_be
        for (int al = 0; al < n; ++al)
            for (int be = 0; be < n; ++be)
                for (int j = 0; j < n; ++j)
                    J(al, be) += ginv_(j, al) * (dB(be, j) * Kzp - B[j] * dK[be]) / (Kzp * Kzp);
        return J;
    }

    const KernelSeries& series() const { return ks_; }

private:
    void guard_zero_set(const Point& z, cdouble Kzp) const {
        double kzz = kernel_eval(ks_, z, z).real();
        if (std::abs(Kzp) < 1e-12 * std::sqrt(std::max(kzz, 0.0) * Kpp_))
            throw KernelZeroSet("representative coordinates: evaluation on the zero set of K(., p)");
    }

    // K(z,p), B_j(z) = dbar_{t_j} K(z,t)|_p, and their z-derivatives
    std::tuple<cdouble, CVec, CVec, CMat> pieces(const CVec& z, bool with_derivs) const {
        const int n = ks_.spec.dim;
        cdouble Kzp = 0.0;
        CVec B = CVec::Zero(n), dK = CVec::Zero(n);
        CMat dB = CMat::Zero(n, n); // dB(be, j) = d_{z_be} B_j
        for (const auto& e : ks_.entries) {
            auto mono = [&](const CVec& w, int drop) -> cdouble {
                cdouble v = 1.0;
                for (int i = 0; i < n; ++i) {
                    int a = e.alpha[i];
                    if (i == drop) --a;
                    if (a == 0) continue;
                    if (w[i] == 0.0) {
                        if (a > 0) return 0.0;
                        throw OutsideDomain("rep map: Laurent exponent at a vanishing coordinate");
                    }
                    v *= std::pow(w[i], a);
                }
                return v;
            };
            cdouble za = mono(z, -1);
            cdouble pa_conj = std::conj(mono(p_, -1));
            Kzp += e.coeff * za * pa_conj;
            CVec dz = CVec::Zero(n);
            if (with_derivs) {
                for (int i = 0; i < n; ++i)
                    if (e.alpha[i] != 0) dz[i] = double(e.alpha[i]) * mono(z, i);
                dK += (e.coeff * pa_conj) * dz;
            }
            for (int j = 0; j < n; ++j) {
                if (e.alpha[j] == 0) continue;
                cdouble pj_conj = std::conj(double(e.alpha[j]) * mono(p_, j));
                if (pj_conj == 0.0) continue;
                B[j] += e.coeff * za * pj_conj;
                if (with_derivs)
                    for (int be = 0; be < n; ++be) dB(be, j) += e.coeff * dz[be] * pj_conj;
            }
        }
        return {Kzp, B, dK, dB};
    }

    KernelSeries ks_;
    CVec p_;
    CMat ginv_;
    double Kpp_;
    CVec blog_;
};

inline std::pair<RepCoordinates, RepMap> rep_coords(const KernelSeries& ks, const Point& p) {
    detail::check_dim(ks.spec, p.coords, "rep_coords");
    if (!contains(ks.spec, p)) throw OutsideDomain("rep_coords: base point is not inside " + ks.spec.canonical_text());
    HermitianForm gp = metric_at(ks, p);
    CMat ginv = gp.m.inverse();

    RepCoordinates rc;
    rc.base = p;
    rc.inverse_metric_at_base = ginv;
    rc.reference_form = gp;
    auto fan = curvature_fan(ks.spec.dim);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    for (auto& v : fan) {
        double c2 = -hsc_at(ks, p, v);
        lo = std::min(lo, c2);
        hi = std::max(hi, c2);
        sum += c2;
    }
    rc.curvature_constant = sum / double(fan.size());
    rc.curvature_spread = hi - lo;
    rc.hypothesis_ok = rc.curvature_spread <= 1e-2;
    if (!(rc.curvature_constant > 0.0))
        throw NumericalFailure("rep_coords: nonpositive curvature-constant estimate");

    auto T = detail::kernel_tensors(ks, p.coords);
    CVec blog = T.d1.conjugate() / T.K;
    return {rc, RepMap(ks, p.coords, ginv, T.K, blog)};
}

/// Phi_p(z) = log[ K(z,z) K(p,p) / |K(z,p)|^2 ]; nonnegative by the
/// reproducing-property Cauchy-Schwarz inequality.
inline double potential_phi(const KernelSeries& ks, const Point& p, const Point& z) {
    double kzz = kernel_eval(ks, z, z).real();
    double kpp = kernel_eval(ks, p, p).real();
    cdouble kzp = kernel_eval(ks, z, p);
    if (!(kzz > 0.0) || !(kpp > 0.0)) throw NumericalFailure("potential_phi: vanishing diagonal kernel");
    if (std::abs(kzp) < 1e-12 * std::sqrt(kzz * kpp))
        throw KernelZeroSet("potential_phi: z lies on the zero set of K(., p)");
    double phi = std::log(kzz * kpp / std::norm(kzp));
    if (phi < 0.0 && phi > -1e-12) phi = 0.0; // rounding at z ~ p
    return phi;
}

struct IsometryReport {
    double potential_residual = 0.0;
    double pullback_residual = 0.0;
    bool image_ok = true;
    double curvature_constant = 0.0;
    double curvature_spread = 0.0;
    bool hypothesis_ok = true;
    double max_identity_deviation = 0.0; // max |T(z) - z|, meaningful when T should be the identity
};

/// Quantifies how far T fails to be a holomorphic isometry onto the weighted
/// ball of radius sqrt(2/c^2): potential identity residual, metric pullback
/// residual (operator norm), and the image constraint.
inline IsometryReport isometry_residual(const KernelSeries& ks, const Point& p,
                                        const std::vector<Point>& samples) {
    auto [rc, map] = rep_coords(ks, p);
    const double c2 = rc.curvature_constant;
    IsometryReport rep;
    rep.curvature_constant = c2;
    rep.curvature_spread = rc.curvature_spread;
    rep.hypothesis_ok = rc.hypothesis_ok;

    const CMat& gp = rc.reference_form.m;
    for (const auto& z : samples) {
        CVec w = map.eval(z);
        rep.max_identity_deviation =
            std::max(rep.max_identity_deviation, (w - z.coords).cwiseAbs().maxCoeff());
        double q = ((w.transpose() * gp * w.conjugate())(0, 0)).real();
        double u = 1.0 - 0.5 * c2 * q;
        if (!(q < 2.0 / c2) || u <= 0.0) {
            rep.image_ok = false;
            rep.potential_residual = std::numeric_limits<double>::infinity();
            continue;
        }
        double phi = potential_phi(ks, p, z);
        rep.potential_residual =
            std::max(rep.potential_residual, std::abs(phi + (2.0 / c2) * std::log(u)));
        // reference ball metric G(w) pulled back through the Jacobian
        CVec mvec = gp * w.conjugate();
        Eigen::RowVectorXcd h = w.transpose() * gp;
        CMat G = gp / u + (0.5 * c2) * (mvec * h) / (u * u);
        CMat J = map.jacobian(z);
        CMat pull = J.transpose() * G * J.conjugate();
        CMat diff = metric_at(ks, z).m - pull;
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
        rep.pullback_residual =
            std::max(rep.pullback_residual, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    return rep;
}

// ---------------------------------------------------------------------------
// closed-form references for Disc / Ball / Polydisc (any dilation)
// ---------------------------------------------------------------------------

inline bool has_bergman_closed_form(const DomainSpec& spec) {
    return spec.kind == DomainKind::Disc || spec.kind == DomainKind::Ball ||
           spec.kind == DomainKind::Polydisc;
}

inline HermitianForm bergman_metric_closed_form(const DomainSpec& spec, const Point& z) {
    detail::check_dim(spec, z.coords, "bergman_metric_closed_form");
    if (!contains(spec, z)) throw OutsideDomain("bergman_metric_closed_form: point outside domain");
    const double s = spec.scale;
    CVec w = z.coords / s;
    const int n = spec.dim;
    CMat g;
    switch (spec.kind) {
        case DomainKind::Disc:
        case DomainKind::Ball: {
            double x = w.squaredNorm();
            double d = 1.0 - x;
            g = (double(n + 1) / (d * d)) * (d * CMat::Identity(n, n) + (w.conjugate() * w.transpose()));
            break;
        }
        case DomainKind::Polydisc: {
            g = CMat::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                double d = 1.0 - std::norm(w[i]);
                g(i, i) = 2.0 / (d * d);
            }
            break;
        }
        default:
            throw Error("bergman_metric_closed_form: no closed form for " + spec.canonical_text());
    }
    return HermitianForm{g / (s * s)};
}

inline double hsc_closed_form(const DomainSpec& spec, const Point& z, const Direction& v) {
    detail::check_dim(spec, z.coords, "hsc_closed_form");
    detail::check_dim(spec, v.coords, "hsc_closed_form");
    switch (spec.kind) {
        case DomainKind::Disc:
            return -1.0;
        case DomainKind::Ball:
            return -2.0 / double(spec.dim + 1);
        case DomainKind::Polydisc: {
            // product metric: factor curvature tensors add
            double num = 0.0, den = 0.0;
            for (int i = 0; i < spec.dim; ++i) {
                double d = 1.0 - std::norm(z.coords[i]);
                double gi = 2.0 / (d * d);
                double vi2 = std::norm(v.coords[i]);
                num += -gi * gi * vi2 * vi2;
                den += gi * vi2;
            }
            return num / (den * den);
        }
        default:
            throw Error("hsc_closed_form: no closed form for " + spec.canonical_text());
    }
}

} // namespace metriclab
