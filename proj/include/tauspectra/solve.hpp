#ifndef TAUSPECTRA_SOLVE_HPP
#define TAUSPECTRA_SOLVE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tauspectra/common.hpp"
#include "tauspectra/secular.hpp"
#include "tauspectra/tau_matrix.hpp"
#include "tauspectra/tridiag_eig.hpp"

namespace tauspectra {

template <class Real>
struct eigen_pair {
    Real lambda;
    branch_kind branch;
    std::optional<Real> theta; ///< absent on boundary branches
    std::vector<Real> vector;  ///< unit 2-norm, deterministic sign
};

template <class Real>
struct spectral_decomposition {
    tau_params<Real> params;
    std::vector<eigen_pair<Real>> pairs; ///< sorted by descending lambda
};

/// Thrown when root bracketing cannot account for all n eigenvalues even at
/// the densest grid. Carries whatever was found.
template <class Real>
class incomplete_spectrum_error : public error {
public:
    incomplete_spectrum_error(std::string what, spectral_decomposition<Real> partial)
        : error(std::move(what)), partial(std::move(partial)) {}
    spectral_decomposition<Real> partial;
};

namespace detail {

constexpr double pi = 3.141592653589793238462643383279502884;

/// Bisect f on [a, b] with f(a) f(b) < 0 down to floating-point resolution.
template <class Real, class F>
Real bisect(F&& f, Real a, Real b, Real fa, Real fb) {
    for (int it = 0; it < 2000; ++it) {
        const Real mid = a + (b - a) / Real(2);
        if (mid <= a || mid >= b) break;
        const Real fm = f(mid);
        if (fm == Real(0)) return mid;
        if ((fa < Real(0)) != (fm < Real(0))) {
            b = mid;
            fb = fm;
        } else {
            a = mid;
            fa = fm;
        }
    }
    (void)fb;
    return a + (b - a) / Real(2);
}

/// Roots of a scalar function on [lo, hi] located by a uniform grid of
/// `intervals` cells followed by bisection. Endpoint values are supplied by
/// the caller (they may come from analytic limits); an endpoint flagged as a
/// known zero suppresses crossing detection in the adjacent cell.
template <class Real, class F>
std::vector<Real> grid_roots(F&& f, Real lo, Real hi, Real flo, Real fhi, int intervals,
                             bool lo_is_zero, bool hi_is_zero) {
    std::vector<Real> roots;
    Real prev_x = lo;
    Real prev_f = flo;
    bool prev_valid = !lo_is_zero;
    for (int j = 1; j <= intervals; ++j) {
        const Real x = j == intervals ? hi : lo + (hi - lo) * Real(j) / Real(intervals);
        const Real fx = j == intervals ? fhi : f(x);
        if (j == intervals && hi_is_zero) break;
        if (fx == Real(0)) {
            if (j < intervals) roots.push_back(x);
            prev_x = x;
            prev_f = fx;
            prev_valid = false;
            continue;
        }
        if (prev_valid && (prev_f < Real(0)) != (fx < Real(0)))
            roots.push_back(bisect(f, prev_x, x, prev_f, fx));
        prev_x = x;
        prev_f = fx;
        prev_valid = true;
    }
    return roots;
}

/// Interior roots of the trigonometric secular equation, as theta values in
/// (0, pi). Works on the sin(theta)-divided residual, whose endpoint limits
/// are the boundary discriminants, so roots running up against the ends of
/// the interval are still bracketed.
template <class Real>
std::vector<Real> trig_roots(const tau_params<Real>& p, int grid_factor, bool bplus_is_eig,
                             bool bminus_is_eig) {
    const auto g = [&p](Real th) { return trig_secular_over_sin(p, th); };
    const Real g0 = boundary_membership(p, boundary_sign::plus);
    const Real gpi = (p.n % 2 == 0 ? Real(1) : Real(-1)) *
                     boundary_membership(p, boundary_sign::minus);
    const int intervals = 20 * p.n * grid_factor;
    return grid_roots(g, Real(0), Real(pi), g0, gpi, intervals, bplus_is_eig, bminus_is_eig);
}

/// Hyperbolic search domain: the outliers approach 2cosh(log|eps|) and
/// 2cosh(log|phi|), and Gershgorin keeps every eigenvalue below
/// max(|eps|,|phi|) + 1, so this upper end has comfortable slack.
template <class Real>
Real hyper_theta_max(const tau_params<Real>& p) {
    using std::abs;
    using std::log;
    const Real m = std::max(std::max(abs(p.eps), abs(p.phi)), Real(1));
    return log(m) + Real(2);
}

/// Roots of the scaled hyperbolic secular residual on (0, theta_max].
template <class Real>
std::vector<Real> hyper_roots(const tau_params<Real>& p, branch_kind branch, int grid_factor,
                              bool boundary_is_eig) {
    const auto q = [&p, branch](Real th) { return secular(p, branch, th); };
    const Real q0 = boundary_membership(p, branch == branch_kind::hyper_pos
                                               ? boundary_sign::plus
                                               : boundary_sign::minus) /
                    Real(p.n);
    const Real hi = hyper_theta_max(p);
    const int intervals = 20 * p.n * grid_factor;
    return grid_roots(q, Real(0), hi, q0, q(hi), intervals, boundary_is_eig, false);
}

/// For eps == phi the hyperbolic secular residual factors into a symmetric
/// and an antisymmetric part:
///   S_h(th) * sinh((n-1) th) = F_minus(th) * F_plus(th)
/// with F_{-/+} = sinh(n th) -/+ sinh(th) - eps sinh((n-1) th) on the
/// positive branch and eps -> -eps on the negative one. sinh((n-1) th) > 0
/// on (0, inf), so the factors introduce no spurious roots there. On the
/// positive branch F_minus carries the flip-symmetric eigenvector; on the
/// negative branch the classes swap with the parity of n, because the
/// sign-alternating similarity that maps lambda to -lambda commutes with the
/// flip only for odd n. The two outliers collapse onto each other
/// exponentially fast in n, which no uniform grid on the unfactored residual
/// can resolve; one root per factor is always well separated.
template <class Real>
std::vector<std::pair<Real, bool>> hyper_roots_equal_corners(const tau_params<Real>& p,
                                                             branch_kind branch, int grid_factor,
                                                             bool boundary_is_eig) {
    const Real n = Real(p.n);
    const Real e = p.eps;
    const bool pos = branch == branch_kind::hyper_pos;
    const bool minus_is_symmetric = pos || p.n % 2 == 1;
    const auto factor = [&](Real th, bool minus) {
        const Real r1 = sinh_ratio(Real(1), n, th);
        const Real rn1 = sinh_ratio(n - 1, n, th);
        return Real(1) + (minus ? Real(-1) : Real(1)) * r1 + (pos ? -e : e) * rn1;
    };
    // theta -> 0 limits of the scaled factors
    const auto factor0 = [&](bool minus) {
        return Real(1) + (minus ? Real(-1) : Real(1)) / n + (pos ? -e : e) * (n - 1) / n;
    };
    const Real hi = hyper_theta_max(p);
    const int intervals = 20 * p.n * grid_factor;
    std::vector<std::pair<Real, bool>> out;
    for (bool symmetric : {true, false}) {
        const bool minus = symmetric == minus_is_symmetric;
        const auto f = [&](Real th) { return factor(th, minus); };
        for (Real th :
             grid_roots(f, Real(0), hi, factor0(minus), f(hi), intervals, boundary_is_eig, false))
            out.emplace_back(th, symmetric);
    }
    return out;
}

/// Seed for hyperbolic inverse iteration: the geometric quasi-eigenvector of
/// the corner whose predicted outlier is nearest to lambda. Entries decay, so
/// the seed is stable at any n.
template <class Real>
std::vector<Real> hyper_seed(const tau_params<Real>& p, Real lambda) {
    using std::abs;
    const std::size_t n = static_cast<std::size_t>(p.n);
    const bool eps_side_ok = abs(p.eps) > Real(1);
    const bool phi_side_ok = abs(p.phi) > Real(1);
    bool use_eps = eps_side_ok;
    if (eps_side_ok && phi_side_ok) {
        const Real pe = p.eps + Real(1) / p.eps;
        const Real pp = p.phi + Real(1) / p.phi;
        use_eps = abs(lambda - pe) <= abs(lambda - pp);
    }
    std::vector<Real> s(n);
    if (!eps_side_ok && !phi_side_ok) {
        s.assign(n, Real(1));
        return s;
    }
    if (use_eps) {
        Real g = 1;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = g;
            g /= p.eps;
        }
    } else {
        Real g = 1;
        for (std::size_t i = n; i-- > 0;) {
            s[i] = g;
            g /= p.phi;
        }
    }
    return s;
}

/// Seed in a definite symmetry class for the eps == phi case.
template <class Real>
std::vector<Real> hyper_seed_symmetric(const tau_params<Real>& p, bool symmetric) {
    const std::size_t n = static_cast<std::size_t>(p.n);
    std::vector<Real> s(n);
    Real g = 1;
    std::vector<Real> geo(n);
    for (std::size_t i = 0; i < n; ++i) {
        geo[i] = g;
        g /= p.eps;
    }
    for (std::size_t i = 0; i < n; ++i)
        s[i] = symmetric ? geo[i] + geo[n - 1 - i] : geo[i] - geo[n - 1 - i];
    if (max_abs(s) == Real(0)) s.assign(n, Real(1));
    return s;
}

template <class Real>
void project_symmetry(std::vector<Real>& x, bool symmetric) {
    const std::size_t n = x.size();
    std::vector<Real> proj(n);
    for (std::size_t i = 0, j = n - 1; i <= j; ++i, --j) {
        const Real a = x[i], b = x[j];
        const Real m = symmetric ? (a + b) / Real(2) : (a - b) / Real(2);
        proj[i] = m;
        proj[j] = symmetric ? m : -m;
        if (i == j && !symmetric) proj[i] = Real(0);
    }
    // a unit vector of the intended class keeps its mass under projection; a
    // collapse means the iterate belongs to the other class, so leave it
    if (norm2(proj) > Real(0.1) * norm2(x)) x = std::move(proj);
    normalize_unit(x);
}

/// Sort descending by eigenvalue and check the count. Exact floating-point
/// ties can legitimately occur for the eps == phi outlier pair once the
/// analytic splitting drops below one ulp; the symmetric member is ordered
/// first to match its larger true value.
template <class Real>
spectral_decomposition<Real> finalize(const tau_params<Real>& params,
                                      std::vector<eigen_pair<Real>> pairs, int attempts_used) {
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const eigen_pair<Real>& a, const eigen_pair<Real>& b) {
                         return a.lambda > b.lambda;
                     });
    spectral_decomposition<Real> dec{params, std::move(pairs)};
    if (static_cast<int>(dec.pairs.size()) != params.n)
        throw incomplete_spectrum_error<Real>(
            "solve: found " + std::to_string(dec.pairs.size()) + " of " +
                std::to_string(params.n) + " eigenvalues after " +
                std::to_string(attempts_used) + " bracketing refinements",
            std::move(dec));
    return dec;
}

} // namespace detail

/// Full eigendecomposition of the tau matrix through the secular equations:
/// trigonometric roots for the bulk, hyperbolic roots for the outliers,
/// boundary discriminants for lambda = +-2. Eigenvectors come from the
/// explicit formulas on the trig/boundary branches and from seeded inverse
/// iteration on the hyperbolic branches, where direct formula evaluation
/// cancels catastrophically for large n*theta.
template <class Real>
spectral_decomposition<Real> solve(const tau_params<Real>& params) {
    using std::abs;
    using std::cos;
    using std::cosh;
    params.validate();
    const auto t = tau_matrix(params);
    const Real btol = boundary_tolerance(params);
    const Real bplus = boundary_membership(params, boundary_sign::plus);
    const Real bminus = boundary_membership(params, boundary_sign::minus);
    const bool bplus_is_eig = abs(bplus) <= btol;
    const bool bminus_is_eig = abs(bminus) <= btol;
    const bool equal_corners = params.eps == params.phi;
    const bool want_pos = params.eps > Real(1) || params.phi > Real(1);
    const bool want_neg = params.eps < Real(-1) || params.phi < Real(-1);

    std::vector<eigen_pair<Real>> pairs;
    int attempt = 0;
    for (int grid_factor = 1; attempt < 4; ++attempt, grid_factor *= 4) {
        pairs.clear();
        if (bplus_is_eig)
            pairs.push_back({Real(2), branch_kind::boundary_plus, std::nullopt,
                             eigvec(params, branch_kind::boundary_plus)});
        if (bminus_is_eig)
            pairs.push_back({Real(-2), branch_kind::boundary_minus, std::nullopt,
                             eigvec(params, branch_kind::boundary_minus)});

        for (Real th : detail::trig_roots(params, grid_factor, bplus_is_eig, bminus_is_eig))
            pairs.push_back({Real(2) * cos(th), branch_kind::trig, th,
                             eigvec(params, branch_kind::trig, th)});

        for (branch_kind br : {branch_kind::hyper_pos, branch_kind::hyper_neg}) {
            if (br == branch_kind::hyper_pos && !want_pos) continue;
            if (br == branch_kind::hyper_neg && !want_neg) continue;
            const Real sgn = br == branch_kind::hyper_pos ? Real(1) : Real(-1);
            const bool bnd = br == branch_kind::hyper_pos ? bplus_is_eig : bminus_is_eig;
            if (equal_corners) {
                for (auto [th, symmetric] :
                     detail::hyper_roots_equal_corners(params, br, grid_factor, bnd)) {
                    const Real lambda = sgn * Real(2) * cosh(th);
                    std::vector<Real> x = inverse_iteration(
                        t, lambda, detail::hyper_seed_symmetric(params, symmetric));
                    detail::project_symmetry(x, symmetric);
                    pairs.push_back({lambda, br, th, std::move(x)});
                }
            } else {
                for (Real th : detail::hyper_roots(params, br, grid_factor, bnd)) {
                    const Real lambda = sgn * Real(2) * cosh(th);
                    std::vector<Real> x =
                        inverse_iteration(t, lambda, detail::hyper_seed(params, lambda));
                    pairs.push_back({lambda, br, th, std::move(x)});
                }
            }
        }
        if (static_cast<int>(pairs.size()) == params.n) break;
    }
    return detail::finalize(params, std::move(pairs), attempt);
}

/// Eigendecomposition without root-finding for the parameter families that
/// admit one: both corners in {0, 1, -1}, or positive corners with product 1.
/// Returns nullopt for any other parameters.
template <class Real>
std::optional<spectral_decomposition<Real>> closed_form(const tau_params<Real>& params) {
    using std::abs;
    using std::cos;
    using std::log;
    params.validate();
    const Real e = params.eps, f = params.phi;
    const auto in_set = [](Real x) { return x == Real(0) || x == Real(1) || x == Real(-1); };
    const Real pi = Real(detail::pi);
    const int n = params.n;
    std::vector<eigen_pair<Real>> pairs;

    const auto add_trig = [&](Real th) {
        pairs.push_back({Real(2) * cos(th), branch_kind::trig, th,
                         eigvec(params, branch_kind::trig, th)});
    };

    if (in_set(e) && in_set(f)) {
        if (e == Real(1) && f == Real(1)) {
            pairs.push_back({Real(2), branch_kind::boundary_plus, std::nullopt,
                             eigvec(params, branch_kind::boundary_plus)});
            for (int k = 1; k <= n - 1; ++k) add_trig(Real(k) * pi / Real(n));
        } else if (e == Real(-1) && f == Real(-1)) {
            pairs.push_back({Real(-2), branch_kind::boundary_minus, std::nullopt,
                             eigvec(params, branch_kind::boundary_minus)});
            for (int k = 1; k <= n - 1; ++k) add_trig(Real(k) * pi / Real(n));
        } else if (e == Real(0) && f == Real(0)) {
            for (int k = 1; k <= n; ++k) add_trig(Real(k) * pi / Real(n + 1));
        } else if (e * f == Real(-1)) { // (1,-1) and (-1,1)
            for (int k = 1; k <= n; ++k) add_trig(Real(2 * k - 1) * pi / Real(2 * n));
        } else if (e + f == Real(1)) { // (0,1) and (1,0)
            for (int k = 1; k <= n; ++k) add_trig(Real(2 * k - 1) * pi / Real(2 * n + 1));
        } else { // (0,-1) and (-1,0)
            for (int k = 1; k <= n; ++k) add_trig(Real(2 * k) * pi / Real(2 * n + 1));
        }
        return detail::finalize(params, std::move(pairs), 0);
    }

    if (e > Real(0) && f > Real(0) && abs(e * f - Real(1)) <= Real(1e-12)) {
        // corner product 1: n-1 trig pairs plus one exact geometric eigenpair
        for (int k = 1; k <= n - 1; ++k) add_trig(Real(k) * pi / Real(n));
        auto qp = quasi_eigenpair_residual(params, corner_side::left);
        normalize_unit(qp.vector);
        pairs.push_back({qp.value, branch_kind::hyper_pos, abs(log(e)), std::move(qp.vector)});
        return detail::finalize(params, std::move(pairs), 0);
    }
    return std::nullopt;
}

} // namespace tauspectra

#endif // TAUSPECTRA_SOLVE_HPP
