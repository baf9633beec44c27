#ifndef TAUSPECTRA_SECULAR_HPP
#define TAUSPECTRA_SECULAR_HPP

#include <cmath>
#include <optional>
#include <type_traits>
#include <string>
#include <vector>

#include "tauspectra/common.hpp"
#include "tauspectra/tau_matrix.hpp"

namespace tauspectra {

/// Analytic branch of an eigenvalue of the tau matrix.
///   trig:           lambda = 2 cos(theta),  theta in (0, pi)
///   hyper_pos:      lambda = 2 cosh(theta), theta in (0, inf)
///   hyper_neg:      lambda = -2 cosh(theta), theta in (0, inf)
///   boundary_plus:  lambda = 2  (no theta)
///   boundary_minus: lambda = -2 (no theta)
enum class branch_kind { trig, hyper_pos, hyper_neg, boundary_plus, boundary_minus };

inline const char* branch_name(branch_kind b) {
    switch (b) {
        case branch_kind::trig: return "trig";
        case branch_kind::hyper_pos: return "hyper_pos";
        case branch_kind::hyper_neg: return "hyper_neg";
        case branch_kind::boundary_plus: return "boundary_plus";
        case branch_kind::boundary_minus: return "boundary_minus";
    }
    return "?";
}

enum class boundary_sign { plus, minus };

namespace detail {

/// sinh(m*theta)/sinh(n*theta) for theta > 0, computed in exponent space so
/// large n*theta neither overflows nor cancels.
template <class Real>
Real sinh_ratio(Real m, Real n, Real theta) {
    using std::exp;
    using std::expm1;
    return exp((m - n) * theta) * expm1(Real(-2) * m * theta) / expm1(Real(-2) * n * theta);
}

/// Trigonometric secular residual divided by sin(theta). Extends continuously
/// to [0, pi] with the boundary discriminants as endpoint values; zeros in the
/// open interval coincide with those of the raw residual.
template <class Real>
Real trig_secular_over_sin(const tau_params<Real>& p, Real theta) {
    using std::sin;
    const Real n = Real(p.n);
    return (sin((n + 1) * theta) - (p.eps + p.phi) * sin(n * theta) +
            p.eps * p.phi * sin((n - 1) * theta)) /
           sin(theta);
}

} // namespace detail

/// Discriminant whose vanishing makes lambda = +2 (plus) or lambda = -2
/// (minus) an eigenvalue.
template <class Real>
Real boundary_membership(const tau_params<Real>& params, boundary_sign sign) {
    params.validate();
    const Real n = Real(params.n);
    const Real s = sign == boundary_sign::plus ? Real(-1) : Real(1);
    return n + 1 + s * (params.eps + params.phi) * n + params.eps * params.phi * (n - 1);
}

/// Tolerance under which the boundary discriminant is declared zero.
template <class Real>
Real boundary_tolerance(const tau_params<Real>& params) {
    return Real(1e-12) * Real(params.n);
}

/// Secular residual for the open branches. The trig value is the raw
/// three-term sine combination; the hyperbolic values are divided by
/// sinh(n*theta), which is positive on the domain and so preserves zeros
/// while preventing overflow.
template <class Real>
Real secular(const tau_params<Real>& params, branch_kind branch, Real theta) {
    using std::sin;
    params.validate();
    const Real n = Real(params.n);
    const Real sum = params.eps + params.phi;
    const Real prod = params.eps * params.phi;
    switch (branch) {
        case branch_kind::trig:
            if (!(theta > Real(0) && theta < Real(3.14159265358979323846)))
                throw invalid_argument_error("secular: trig theta must lie in (0, pi)");
            return sin((n + 1) * theta) - sum * sin(n * theta) + prod * sin((n - 1) * theta);
        case branch_kind::hyper_pos:
            if (!(theta > Real(0)))
                throw invalid_argument_error("secular: hyperbolic theta must be positive");
            return detail::sinh_ratio(n + 1, n, theta) - sum +
                   prod * detail::sinh_ratio(n - 1, n, theta);
        case branch_kind::hyper_neg:
            if (!(theta > Real(0)))
                throw invalid_argument_error("secular: hyperbolic theta must be positive");
            return detail::sinh_ratio(n + 1, n, theta) + sum +
                   prod * detail::sinh_ratio(n - 1, n, theta);
        default:
            throw invalid_argument_error(
                "secular: boundary branches have no theta; use boundary_membership");
    }
}

/// Eigenvector formula for a (branch, theta) satisfying the corresponding
/// secular or boundary equation, normalized to unit 2-norm with the sign
/// convention of normalize_unit. Direct evaluation of the hyperbolic
/// formulas is numerically meaningful only while n*theta is moderate; the
/// full solver switches to inverse iteration beyond that.
template <class Real>
std::vector<Real> eigvec(const tau_params<Real>& params, branch_kind branch,
                         std::optional<std::type_identity_t<Real>> theta = std::nullopt) {
    using std::sin;
    using std::sinh;
    params.validate();
    std::vector<Real> v(static_cast<std::size_t>(params.n));
    const Real e = params.eps;
    switch (branch) {
        case branch_kind::trig: {
            if (!theta) throw invalid_argument_error("eigvec: trig branch requires theta");
            const Real th = *theta;
            for (int i = 1; i <= params.n; ++i)
                v[static_cast<std::size_t>(i - 1)] = sin(Real(i) * th) - e * sin(Real(i - 1) * th);
            break;
        }
        case branch_kind::hyper_pos: {
            if (!theta) throw invalid_argument_error("eigvec: hyperbolic branch requires theta");
            const Real th = *theta;
            for (int i = 1; i <= params.n; ++i)
                v[static_cast<std::size_t>(i - 1)] =
                    sinh(Real(i) * th) - e * sinh(Real(i - 1) * th);
            break;
        }
        case branch_kind::hyper_neg: {
            if (!theta) throw invalid_argument_error("eigvec: hyperbolic branch requires theta");
            const Real th = *theta;
            Real sign = -1;
            for (int i = 1; i <= params.n; ++i, sign = -sign)
                v[static_cast<std::size_t>(i - 1)] =
                    sign * (sinh(Real(i) * th) + e * sinh(Real(i - 1) * th));
            break;
        }
        case branch_kind::boundary_plus:
            for (int i = 1; i <= params.n; ++i)
                v[static_cast<std::size_t>(i - 1)] = e + (Real(1) - e) * Real(i);
            break;
        case branch_kind::boundary_minus: {
            Real sign = -1;
            for (int i = 1; i <= params.n; ++i, sign = -sign)
                v[static_cast<std::size_t>(i - 1)] = sign * (-e + (Real(1) + e) * Real(i));
            break;
        }
    }
    if (max_abs(v) == Real(0))
        throw invalid_argument_error("eigvec: formula produced the zero vector");
    normalize_unit(v);
    return v;
}

} // namespace tauspectra

#endif // TAUSPECTRA_SECULAR_HPP
