#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "metriclab/domain.hpp"

namespace metriclab {

struct BoundDiagnostics {
    int newton_iterations = 0;
    int exchange_rounds = 0;
    double duality_gap = 0.0;   // relative barrier gap of the final subproblem
    double slack = 0.0;         // certification slack actually applied
    double certified_sup = 0.0; // certified sup of the returned candidate before rescaling
};

struct CertifiedBound {
    double value = 0.0;
    BoundDiagnostics diag;
};

struct SolverOptions {
    double gap_rel = 1e-9;       // relative duality-gap target of each barrier solve
    int max_exchange_rounds = 18;
    int newton_cap = 600;        // total Newton iterations across the path
    int fine_grid = 1 << 19;     // certification grid size
    double tau0 = 1.0;
    double tau_growth = 8.0;
};

namespace detail {

// ---------------------------------------------------------------------------
// Solver A: maximize Re<u, c> over complex coefficients subject to modulus
// constraints |row_k . c| <= 1. Constraint rows come from boundary circles;
// the active set is grown by exchange against a fine phase grid, and the
// final candidate is certified by an equispaced-sampling bound for
// trigonometric polynomials (|t|' <= n sqrt(T^2 - t^2)).
// ---------------------------------------------------------------------------

struct CirclePhases {
    double radius;
    std::vector<double> phases;
};

class ModulusMaximizer {
public:
    // exponents: distinct nonzero integers; basis_j(w) = w^{e_j} - z0^{e_j}
    ModulusMaximizer(std::vector<int> exponents, cdouble z0, CVec objective,
                     std::vector<double> circle_radii, SolverOptions opt = {})
        : e_(std::move(exponents)), z0_(z0), u_(std::move(objective)),
          radii_(std::move(circle_radii)), opt_(opt) {
        if (u_.size() != static_cast<Eigen::Index>(e_.size()))
            throw SolverFailure("modulus maximizer: objective size mismatch");
    }

    CertifiedBound solve(int coarse_per_circle) {
        const int N = static_cast<int>(e_.size());
        std::vector<CirclePhases> active;
        for (double r : radii_) {
            CirclePhases cp{r, {}};
            int m0 = std::max(coarse_per_circle, 16);
            for (int i = 0; i < m0; ++i) cp.phases.push_back(2.0 * M_PI * i / m0);
            active.push_back(std::move(cp));
        }
        CVec c = CVec::Zero(N);
        BoundDiagnostics diag;
        double raw = 0.0;
        for (int round = 0; round < opt_.max_exchange_rounds; ++round) {
            diag.exchange_rounds = round + 1;
            raw = barrier_solve(active, c, diag);
            double worst = 0.0;
            bool grew = false;
            for (auto& cp : active) {
                auto peaks = sample_peaks(c, cp.radius);
                for (auto [theta, mag] : peaks) {
                    worst = std::max(worst, mag);
                    if (mag > 1.0 + 1e-12) {
                        cp.phases.push_back(theta);
                        grew = true;
                    }
                }
            }
            if (!grew || worst <= 1.0 + 1e-10) break;
        }
        // certification: sup over each circle bounded through the fine grid
        double sup = 0.0;
        for (double r : radii_) sup = std::max(sup, certified_sup(c, r));
        diag.certified_sup = sup;
        if (!(sup > 0.0)) return {0.0, diag};
        diag.slack = std::abs(sup - 1.0);
        const double scale = (1.0 - 1e-12) / sup;
        double value = (u_.adjoint() * c)(0, 0).real() * scale;
        return {value, diag};
    }

private:
    // f_c on the circle of radius r as a Laurent polynomial in e^{i theta}
    cdouble eval(const CVec& c, double r, double theta) const {
        cdouble w = std::polar(r, theta);
        cdouble s = 0.0;
        for (std::size_t j = 0; j < e_.size(); ++j)
            s += c[j] * (std::pow(w, e_[j]) - std::pow(z0_, e_[j]));
        return s;
    }

    int trig_degree() const {
        int lo = 0, hi = 0;
        for (int e : e_) { lo = std::min(lo, e); hi = std::max(hi, e); }
        return hi - lo;
    }

    // local maxima of |f| on the fine grid, refined by parabolic interpolation
    std::vector<std::pair<double, double>> sample_peaks(const CVec& c, double r) const {
        const int M = 1 << 14;
        std::vector<double> mag(M);
        fine_moduli(c, r, M, mag);
        std::vector<std::pair<double, double>> peaks;
        for (int i = 0; i < M; ++i) {
            double prev = mag[(i + M - 1) % M], cur = mag[i], next = mag[(i + 1) % M];
            if (cur >= prev && cur >= next && cur > 0.9) {
                double den = prev - 2 * cur + next;
                double off = (den < -1e-300) ? 0.5 * (prev - next) / den : 0.0;
                double theta = 2.0 * M_PI * (i + off) / M;
                peaks.push_back({theta, std::abs(eval(c, r, theta))});
            }
        }
        std::sort(peaks.begin(), peaks.end(),
                  [](auto& a, auto& b) { return a.second > b.second; });
        if (peaks.size() > 8) peaks.resize(8);
        return peaks;
    }

    void fine_moduli(const CVec& c, double r, int M, std::vector<double>& mag) const {
        // Horner over the exponent range [lo, hi] with zeros at missing slots
        int lo = 0, hi = 0;
        for (int e : e_) { lo = std::min(lo, e); hi = std::max(hi, e); }
        std::vector<cdouble> coef(hi - lo + 1, 0.0);
        cdouble c0 = 0.0;
        for (std::size_t j = 0; j < e_.size(); ++j) {
            coef[e_[j] - lo] += c[j] * std::pow(r, e_[j]);
            c0 += c[j] * std::pow(z0_, e_[j]);
        }
        coef[0 - lo] -= c0; // eliminated constant, scaled by r^0
        for (int i = 0; i < M; ++i) {
            double th = 2.0 * M_PI * i / M;
            cdouble q = std::polar(1.0, th);
            cdouble acc = 0.0;
            for (int k = hi - lo; k >= 0; --k) acc = acc * q + coef[k];
            if (lo != 0) acc *= std::polar(1.0, lo * th);
            mag[i] = std::abs(acc);
        }
    }

    double certified_sup(const CVec& c, double r) const {
        const int M = opt_.fine_grid;
        std::vector<double> mag(M);
        fine_moduli(c, r, M, mag);
        double mx = *std::max_element(mag.begin(), mag.end());
        // |f|^2 is a real trig polynomial of the span degree; a peak lies
        // within half a grid step of some sample
        double x = double(trig_degree()) * M_PI / M;
        if (x >= M_PI / 2) throw SolverFailure("certified_sup: fine grid too coarse for the degree");
        return mx / std::sqrt(std::cos(x));
    }

    double barrier_solve(const std::vector<CirclePhases>& active, CVec& c,
                         BoundDiagnostics& diag) const {
        const int N = static_cast<int>(e_.size());
        int M = 0;
        for (auto& cp : active) M += static_cast<int>(cp.phases.size());
        Eigen::MatrixXcd A(M, N);
        int row = 0;
        for (auto& cp : active)
            for (double th : cp.phases) {
                cdouble w = std::polar(cp.radius, th);
                for (int j = 0; j < N; ++j)
                    A(row, j) = std::pow(w, e_[j]) - std::pow(z0_, e_[j]);
                ++row;
            }
        // real parameterization xi = (Re c; Im c)
        Eigen::VectorXd xi = Eigen::VectorXd::Zero(2 * N);
        for (int j = 0; j < N; ++j) { xi[j] = c[j].real(); xi[N + j] = c[j].imag(); }
        // pull strictly inside the current constraint set
        {
            Eigen::VectorXcd w = A * c;
            double mx = 0.0;
            for (int k = 0; k < M; ++k) mx = std::max(mx, std::abs(w[k]));
            if (mx >= 1.0 - 1e-9) xi *= (1.0 - 1e-6) / std::max(mx, 1e-300);
        }
        Eigen::VectorXd uu(2 * N);
        for (int j = 0; j < N; ++j) { uu[j] = u_[j].real(); uu[N + j] = u_[j].imag(); }

        // real picture of the constraint rows, built once
        std::vector<Eigen::VectorXd> ra(M, Eigen::VectorXd(2 * N)), rb(M, Eigen::VectorXd(2 * N));
        for (int k = 0; k < M; ++k)
            for (int j = 0; j < N; ++j) {
                ra[k][j] = A(k, j).real(); ra[k][N + j] = -A(k, j).imag();
                rb[k][j] = A(k, j).imag(); rb[k][N + j] = A(k, j).real();
            }
        auto slacks = [&](const Eigen::VectorXd& x, Eigen::VectorXd& d) {
            for (int k = 0; k < M; ++k) {
                double uk = ra[k].dot(x), vk = rb[k].dot(x);
                d[k] = 1.0 - uk * uk - vk * vk;
                if (d[k] <= 0.0) return false;
            }
            return true;
        };
        auto grad_hess = [&](const Eigen::VectorXd& x, double tau, Eigen::VectorXd& grad,
                             Eigen::MatrixXd& hess) {
            grad = tau * uu;
            hess.setZero();
            for (int k = 0; k < M; ++k) {
                double uk = ra[k].dot(x), vk = rb[k].dot(x);
                double d = 1.0 - uk * uk - vk * vk;
                grad -= (2.0 * uk / d) * ra[k] + (2.0 * vk / d) * rb[k];
                Eigen::VectorXd m = uk * ra[k] + vk * rb[k];
                hess += (2.0 / d) * (ra[k] * ra[k].transpose() + rb[k] * rb[k].transpose());
                hess += (4.0 / (d * d)) * (m * m.transpose());
            }
        };
        // exact objective difference along a step (avoids cancellation at
        // large tau, where absolute objective values dwarf the improvements)
        auto delta_obj = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& step, double t,
                             double tau, const Eigen::VectorXd& d_old, double& dout) {
            dout = tau * uu.dot(step) * t;
            Eigen::VectorXd cand = x + t * step;
            for (int k = 0; k < M; ++k) {
                double uk = ra[k].dot(cand), vk = rb[k].dot(cand);
                double d = 1.0 - uk * uk - vk * vk;
                if (d <= 0.0) return false;
                dout += std::log(d / d_old[k]);
            }
            return true;
        };

        double tau = opt_.tau0;
        Eigen::VectorXd grad(2 * N), dcur(M);
        Eigen::MatrixXd hess(2 * N, 2 * N);
        int newton_used = 0;
        const double tau_max = double(M) / (opt_.gap_rel * std::max(1.0, uu.norm()));
        while (true) {
            for (int it = 0; it < 60; ++it) {
                if (++newton_used > opt_.newton_cap)
                    throw SolverFailure("modulus maximizer: Newton iteration cap");
                if (!slacks(xi, dcur)) throw SolverFailure("modulus maximizer: infeasible iterate");
                grad_hess(xi, tau, grad, hess);
                hess.diagonal().array() += 1e-13;
                Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
                Eigen::VectorXd step = ldlt.solve(grad);
                double lambda2 = grad.dot(step);
                if (!(lambda2 > 1e-13)) break;
                double t = 1.0, dobj = 0.0;
                bool accepted = false;
                for (int bt = 0; bt < 60; ++bt) {
                    if (delta_obj(xi, step, t, tau, dcur, dobj) && dobj > 0.25 * t * lambda2) {
                        xi += t * step;
                        accepted = true;
                        break;
                    }
                    t *= 0.5;
                }
                if (!accepted) break;
                if (lambda2 < 1e-11) break;
            }
            if (tau >= tau_max) break;
            tau = std::min(tau * opt_.tau_growth, tau_max);
        }
        diag.newton_iterations += newton_used;
        diag.duality_gap = double(M) / tau / std::max(1.0, std::abs(uu.dot(xi)));
        for (int j = 0; j < N; ++j) c[j] = cdouble(xi[j], xi[N + j]);
        return uu.dot(xi);
    }

    std::vector<int> e_;
    cdouble z0_;
    CVec u_;
    std::vector<double> radii_;
    SolverOptions opt_;
};

// ---------------------------------------------------------------------------
// Solver B: maximize t . rho over rho >= 0 subject to W rho <= 1, where the
// rows are phase-aligned l1 majorants of the candidate on the radial profile.
// Columns are equilibrated internally; the final candidate is certified on a
// fine profile grid with an explicit Lipschitz slack.
// ---------------------------------------------------------------------------

class ProfileL1Maximizer {
public:
    // monomials alpha (first coordinate may be Laurent), objective weights
    // t_i = |directional-derivative coefficient|, z0 moduli for the
    // eliminated-constant term, profile of the boundary moduli curve.
    ProfileL1Maximizer(std::vector<std::array<int, 2>> alphas, Eigen::VectorXd weights,
                       std::array<double, 2> z0_mod, RadialProfile profile,
                       std::array<std::array<double, 2>, 2> mod_bounds,
                       SolverOptions opt = {})
        : alphas_(std::move(alphas)), t_(std::move(weights)), z0m_(z0_mod),
          prof_(std::move(profile)), bounds_(mod_bounds), opt_(opt) {
        if (t_.size() != static_cast<Eigen::Index>(alphas_.size()))
            throw SolverFailure("profile maximizer: weight size mismatch");
        lip_.resize(alphas_.size());
        elim_.resize(alphas_.size());
        for (std::size_t i = 0; i < alphas_.size(); ++i) {
            lip_[i] = monomial_lipschitz(alphas_[i]);
            elim_[i] = pow_or_zero(z0m_[0], alphas_[i][0]) * pow_or_zero(z0m_[1], alphas_[i][1]);
        }
    }

    CertifiedBound solve(int coarse_grid) {
        const int N = static_cast<int>(alphas_.size());
        std::vector<double> ts;
        int K0 = std::max(coarse_grid, 33);
        for (int k = 0; k < K0; ++k) ts.push_back(double(k) / (K0 - 1));
        Eigen::VectorXd rho = Eigen::VectorXd::Zero(N);
        BoundDiagnostics diag;
        for (int round = 0; round < opt_.max_exchange_rounds; ++round) {
            diag.exchange_rounds = round + 1;
            barrier_solve(ts, rho, diag);
            // scan a fine grid for violated profile points
            const int F = 200001;
            double worst = 0.0;
            std::vector<std::pair<double, double>> viol;
            for (int k = 0; k < F; ++k) {
                double t = double(k) / (F - 1);
                double v = row_value(rho, t);
                if (v > worst) worst = v;
                if (v > 1.0 + 1e-12) viol.push_back({v, t});
            }
            if (viol.empty() || worst <= 1.0 + 1e-10) break;
            std::sort(viol.rbegin(), viol.rend());
            int added = 0;
            for (auto& [v, t] : viol) {
                bool close = false;
                for (double prev : ts)
                    if (std::abs(prev - t) < 1e-7) { close = true; break; }
                if (!close) { ts.push_back(t); if (++added >= 12) break; }
            }
            if (added == 0) break;
        }
        // two-level certification: a global grid with Lipschitz slack locates
        // candidate windows for the sup, which are then refined so the final
        // slack is at the 1e-9 level
        double lipsum = 0.0;
        for (int i = 0; i < N; ++i) lipsum += rho[i] * lip_[i];
        const int F1 = 200001;
        const double d1 = 0.5 / (F1 - 1);
        std::vector<double> vals(F1);
        double sup1 = 0.0;
        for (int k = 0; k < F1; ++k) {
            vals[k] = row_value(rho, double(k) / (F1 - 1));
            sup1 = std::max(sup1, vals[k]);
        }
        double certified;
        std::vector<std::pair<int, int>> windows; // [lo, hi] grid-index ranges
        const double cut = sup1 - 2.0 * lipsum * d1 - 1e-15;
        for (int k = 0; k < F1; ++k) {
            if (vals[k] < cut) continue;
            if (!windows.empty() && k <= windows.back().second + 2) windows.back().second = k;
            else windows.push_back({k, k});
        }
        if (windows.size() > 64) {
            certified = sup1 + lipsum * d1; // flat landscape; single-level bound
        } else {
            // points outside the windows cannot exceed sup1; inside, refine
            double sup2 = sup1;
            double d2 = 0.0;
            const int G = 8193;
            for (auto [klo, khi] : windows) {
                double tlo = std::max(0.0, (klo - 1.0) / (F1 - 1));
                double thi = std::min(1.0, (khi + 1.0) / (F1 - 1));
                double step = (thi - tlo) / (G - 1);
                d2 = std::max(d2, 0.5 * step);
                for (int g = 0; g < G; ++g)
                    sup2 = std::max(sup2, row_value(rho, tlo + g * step));
            }
            certified = sup2 + lipsum * d2;
        }
        diag.certified_sup = certified;
        diag.slack = std::abs(certified - 1.0);
        if (!(certified > 0.0)) return {0.0, diag};
        double value = t_.dot(rho) * (1.0 - 1e-12) / certified;
        return {value, diag};
    }

private:
    static double pow_or_zero(double x, int e) {
        if (e == 0) return 1.0;
        if (x == 0.0) return e > 0 ? 0.0 : std::numeric_limits<double>::infinity();
        return std::pow(x, e);
    }

    double bound_pow(int coord, int e) const {
        if (e == 0) return 1.0;
        double lo = bounds_[coord][0], hi = bounds_[coord][1];
        if (e > 0) return std::pow(hi, e);
        if (lo <= 0.0) throw SolverFailure("profile maximizer: Laurent exponent needs a positive inner bound");
        return std::pow(lo, e);
    }

    double monomial_lipschitz(const std::array<int, 2>& a) const {
        double g = 0.0;
        if (a[0] != 0) g += std::abs(a[0]) * bound_pow(0, a[0] - 1) * bound_pow(1, a[1]);
        if (a[1] != 0) g += std::abs(a[1]) * bound_pow(0, a[0]) * bound_pow(1, a[1] - 1);
        return g * prof_.lipschitz;
    }

    double row_value(const Eigen::VectorXd& rho, double t) const {
        auto rs = prof_.at(t);
        double s = 0.0;
        for (std::size_t i = 0; i < alphas_.size(); ++i) {
            if (rho[i] == 0.0) continue;
            double m = pow_or_zero(rs[0], alphas_[i][0]) * pow_or_zero(rs[1], alphas_[i][1]);
            s += rho[i] * (m + elim_[i]);
        }
        return s;
    }

    void barrier_solve(const std::vector<double>& ts, Eigen::VectorXd& rho,
                       BoundDiagnostics& diag) const {
        const int N = static_cast<int>(alphas_.size());
        const int M = static_cast<int>(ts.size());
        Eigen::MatrixXd W(M, N);
        for (int k = 0; k < M; ++k) {
            auto rs = prof_.at(ts[k]);
            for (int i = 0; i < N; ++i)
                W(k, i) = pow_or_zero(rs[0], alphas_[i][0]) * pow_or_zero(rs[1], alphas_[i][1]) + elim_[i];
        }
        // column equilibration
        Eigen::VectorXd colmax = W.colwise().maxCoeff();
        for (int i = 0; i < N; ++i) colmax[i] = std::max(colmax[i], 1e-300);
        Eigen::MatrixXd Ws = W * colmax.cwiseInverse().asDiagonal();
        Eigen::VectorXd tsc = t_.cwiseQuotient(colmax);

        Eigen::VectorXd x = Eigen::VectorXd::Constant(N, 0.25 / std::max(1, N));
        {
            double mx = (Ws * x).maxCoeff();
            if (mx >= 1.0) x *= 0.5 / mx;
        }
        // warm start from the previous exchange round
        if (rho.size() == N && rho.maxCoeff() > 0.0) {
            Eigen::VectorXd cand = rho.cwiseProduct(colmax);
            cand = cand.cwiseMax(1e-12);
            if ((Ws * cand).maxCoeff() < 1.0 - 1e-9) x = cand;
        }

        auto grad_hess = [&](const Eigen::VectorXd& xx, double tau, Eigen::VectorXd& grad,
                             Eigen::MatrixXd& hess) {
            Eigen::VectorXd w = Ws * xx;
            grad = tau * tsc;
            hess.setZero();
            for (int k = 0; k < M; ++k) {
                double d = 1.0 - w[k];
                grad -= Ws.row(k).transpose() / d;
                hess += (Ws.row(k).transpose() * Ws.row(k)) / (d * d);
            }
            for (int i = 0; i < N; ++i) {
                grad[i] += 1.0 / xx[i];
                hess(i, i) += 1.0 / (xx[i] * xx[i]);
            }
        };
        auto feasible = [&](const Eigen::VectorXd& xx) {
            if ((xx.array() <= 0.0).any()) return false;
            return ((Ws * xx).array() < 1.0).all();
        };
        // exact objective difference along a step (cancellation-free)
        auto delta_obj = [&](const Eigen::VectorXd& xx, const Eigen::VectorXd& step, double t,
                             double tau, double& dout) {
            Eigen::VectorXd cand = xx + t * step;
            if ((cand.array() <= 0.0).any()) return false;
            dout = tau * tsc.dot(step) * t;
            Eigen::VectorXd w0 = Ws * xx, w1 = Ws * cand;
            for (int k = 0; k < M; ++k) {
                double d1 = 1.0 - w1[k];
                if (d1 <= 0.0) return false;
                dout += std::log(d1 / (1.0 - w0[k]));
            }
            for (int i = 0; i < N; ++i) dout += std::log(cand[i] / xx[i]);
            return true;
        };

        double tau = opt_.tau0;
        const double tau_max = double(M + N) / (opt_.gap_rel * std::max(1.0, tsc.norm()));
        Eigen::VectorXd grad(N);
        Eigen::MatrixXd hess(N, N);
        int used = 0;
        while (true) {
            for (int it = 0; it < 80; ++it) {
                if (++used > opt_.newton_cap)
                    throw SolverFailure("profile maximizer: Newton iteration cap");
                if (!feasible(x)) throw SolverFailure("profile maximizer: infeasible iterate");
                grad_hess(x, tau, grad, hess);
                hess.diagonal().array() += 1e-13;
                Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
                Eigen::VectorXd step = ldlt.solve(grad);
                double lambda2 = grad.dot(step);
                if (!(lambda2 > 1e-13)) break;
                double t = 1.0, dobj = 0.0;
                bool accepted = false;
                for (int bt = 0; bt < 60; ++bt) {
                    if (delta_obj(x, step, t, tau, dobj) && dobj > 0.25 * t * lambda2) {
                        x += t * step;
                        accepted = true;
                        break;
                    }
                    t *= 0.5;
                }
                if (!accepted) break;
                if (lambda2 < 1e-11) break;
            }
            if (tau >= tau_max) break;
            tau = std::min(tau * opt_.tau_growth, tau_max);
        }
        diag.newton_iterations += used;
        diag.duality_gap = double(M + N) / tau / std::max(1.0, std::abs(tsc.dot(x)));
        rho = x.cwiseQuotient(colmax);
    }

    std::vector<std::array<int, 2>> alphas_;
    Eigen::VectorXd t_;
    std::array<double, 2> z0m_;
    RadialProfile prof_;
    std::array<std::array<double, 2>, 2> bounds_;
    SolverOptions opt_;
    std::vector<double> lip_;
    std::vector<double> elim_;
};

} // namespace detail
} // namespace metriclab
