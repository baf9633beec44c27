#ifndef TAUSPECTRA_COMMON_HPP
#define TAUSPECTRA_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tauspectra {

/// Base class for all errors thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Precondition violations: bad dimensions, parameters outside the domain,
/// degenerate inputs.
class invalid_argument_error : public error {
public:
    explicit invalid_argument_error(const std::string& what) : error(what) {}
};

/// A tridiagonal could not be symmetrized because some b_i*c_i <= 0.
class not_symmetrizable_error : public error {
public:
    explicit not_symmetrizable_error(const std::string& what) : error(what) {}
};

/// A finite-difference discretization produced nonpositive jump rates.
class ill_posed_discretization_error : public error {
public:
    ill_posed_discretization_error(const std::string& what, int suggested_n)
        : error(what), suggested_n(suggested_n) {}
    int suggested_n; ///< smallest grid size expected to be well posed
};

template <class Real>
Real dot(const std::vector<Real>& x, const std::vector<Real>& y) {
    Real s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

template <class Real>
Real norm2(const std::vector<Real>& x) {
    using std::abs;
    using std::sqrt;
    Real scale = 0;
    for (Real v : x) scale = std::max(scale, abs(v));
    if (scale == Real(0)) return Real(0);
    Real s = 0;
    for (Real v : x) {
        const Real r = v / scale;
        s += r * r;
    }
    return scale * sqrt(s);
}

template <class Real>
Real max_abs(const std::vector<Real>& x) {
    using std::abs;
    Real m = 0;
    for (Real v : x) m = std::max(m, abs(v));
    return m;
}

template <class Real>
std::vector<Real> flip_vector(std::vector<Real> x) {
    for (std::size_t i = 0, j = x.size(); i + 1 <= j; ++i, --j) std::swap(x[i], x[j - 1]);
    return x;
}

/// Scale to unit 2-norm and make the first significant component positive.
/// "Significant" means |x_i| > 1e-8 * max|x|, which keeps the sign choice
/// deterministic when leading entries have underflowed to zero or are pure
/// rounding noise.
template <class Real>
void normalize_unit(std::vector<Real>& x) {
    const Real nrm = norm2(x);
    if (nrm == Real(0)) throw invalid_argument_error("normalize_unit: zero vector");
    for (Real& v : x) v /= nrm;
    const Real thresh = Real(1e-8) * max_abs(x);
    for (Real v : x) {
        if (std::abs(v) > thresh) {
            if (v < Real(0))
                for (Real& w : x) w = -w;
            break;
        }
    }
}

/// log(expm1(x)) for x > 0 without overflow.
template <class Real>
Real log_expm1(Real x) {
    using std::expm1;
    using std::log;
    return x > Real(50) ? x : log(expm1(x));
}

/// (1 - rho) / (1 - rho^n) for rho > 0, i.e. the normalizer of the geometric
/// steady state; continuous limit 1/n at rho = 1. Evaluated through
/// expm1/log1p so accuracy does not degrade as rho -> 1.
template <class Real>
Real geometric_normalizer(int n, Real rho) {
    using std::abs;
    using std::exp;
    using std::expm1;
    using std::log;
    if (!(rho > Real(0))) throw invalid_argument_error("geometric_normalizer: rho must be positive");
    if (abs(rho - Real(1)) <= Real(1e-12)) return Real(1) / Real(n);
    const Real L = log(rho);
    const Real num = -expm1(L);       // 1 - rho
    const Real a = Real(n) * L;
    if (abs(a) > Real(700)) {
        // 1 - rho^n overflows (rho > 1) or is exactly 1 (rho < 1)
        if (a > Real(0)) return -num * exp(-log_expm1(a));
        return num; // rho^n underflows
    }
    return num / (-expm1(a));
}

/// Normalized geometric probability vector (1-rho)/(1-rho^n) * [1, rho, ...,
/// rho^(n-1)], with the rho = 1 limit giving the uniform distribution.
/// Entries are assembled in log space so that extreme ratios underflow
/// gracefully instead of producing 0 * inf.
template <class Real>
std::vector<Real> geometric_distribution(int n, Real rho) {
    using std::abs;
    using std::exp;
    using std::log;
    if (n < 1) throw invalid_argument_error("geometric_distribution: n must be >= 1");
    if (!(rho > Real(0))) throw invalid_argument_error("geometric_distribution: rho must be positive");
    std::vector<Real> p(static_cast<std::size_t>(n));
    if (abs(rho - Real(1)) <= Real(1e-12)) {
        for (Real& v : p) v = Real(1) / Real(n);
        return p;
    }
    const Real L = log(rho);
    if (abs(Real(n) * L) > Real(700)) {
        // log-space: log p_i = (i-1) log rho + log c
        const Real logc = log(geometric_normalizer(n, rho));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = exp(logc + Real(i) * L);
    } else {
        const Real c = geometric_normalizer(n, rho);
        Real g = Real(1);
        for (int i = 0; i < n; ++i) {
            p[static_cast<std::size_t>(i)] = c * g;
            g *= rho;
        }
    }
    return p;
}

/// Unit-2-norm geometric vector [r^0, r^1, ..., r^(n-1)] / ||.||_2 for r > 0,
/// assembled in log space to survive large n * |log r|.
template <class Real>
std::vector<Real> normalized_geometric_l2(int n, Real r) {
    using std::abs;
    using std::exp;
    using std::log;
    using std::sqrt;
    if (n < 1) throw invalid_argument_error("normalized_geometric_l2: n must be >= 1");
    if (!(r > Real(0))) throw invalid_argument_error("normalized_geometric_l2: r must be positive");
    std::vector<Real> s(static_cast<std::size_t>(n));
    if (abs(r - Real(1)) <= Real(1e-15)) {
        const Real v = Real(1) / sqrt(Real(n));
        for (Real& x : s) x = v;
        return s;
    }
    const Real L = log(r);
    // log ||v||^2 with ||v||^2 = expm1(2nL)/expm1(2L); the ratio is positive
    // in both regimes but overflows for large positive 2nL, hence the split.
    Real log_mass;
    if (L > Real(0)) {
        log_mass = log_expm1(Real(2 * n) * L) - log_expm1(Real(2) * L);
    } else {
        using std::expm1;
        log_mass = log(expm1(Real(2 * n) * L) / expm1(Real(2) * L));
    }
    const Real half = Real(0.5) * log_mass;
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = exp(Real(i) * L - half);
    return s;
}

} // namespace tauspectra

#endif // TAUSPECTRA_COMMON_HPP
