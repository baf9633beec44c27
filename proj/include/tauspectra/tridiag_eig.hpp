#ifndef TAUSPECTRA_TRIDIAG_EIG_HPP
#define TAUSPECTRA_TRIDIAG_EIG_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tauspectra/common.hpp"
#include "tauspectra/tau_matrix.hpp"

// Classical symmetric-tridiagonal eigensolver: Sturm-sequence bisection for
// the eigenvalues, shifted inverse iteration for the eigenvectors. Serves as
// the verification oracle for the secular-equation solver and is deliberately
// independent of it.

namespace tauspectra {

namespace detail {

/// Number of eigenvalues of T strictly less than x, via the signs of the
/// LDL^T pivots of T - x I.
template <class Real>
int sturm_count(const symmetric_tridiagonal<Real>& t, Real x) {
    using std::abs;
    const std::size_t n = t.diag.size();
    const Real eps = std::numeric_limits<Real>::epsilon();
    Real scale = abs(t.diag[0]);
    for (std::size_t i = 0; i + 1 < n; ++i)
        scale = std::max({scale, abs(t.diag[i + 1]), abs(t.offdiag[i])});
    const Real tiny = std::max(scale, Real(1)) * eps * eps;
    int count = 0;
    Real q = t.diag[0] - x;
    if (q < Real(0)) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        if (abs(q) < tiny) q = q < Real(0) ? -tiny : tiny;
        const Real e = t.offdiag[i - 1];
        q = t.diag[i] - x - e * e / q;
        if (q < Real(0)) ++count;
    }
    return count;
}

/// Solve (T - shift I) x = b by Gaussian elimination with partial pivoting.
/// Row swaps introduce one extra superdiagonal of fill-in. Near-singular
/// pivots are replaced by a tiny value of matching sign (the usual inverse
/// iteration safeguard).
template <class Real>
std::vector<Real> shifted_tridiag_solve(const symmetric_tridiagonal<Real>& t, Real shift,
                                        std::vector<Real> b) {
    using std::abs;
    const std::size_t n = t.diag.size();
    const Real eps = std::numeric_limits<Real>::epsilon();
    Real scale = Real(1);
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, abs(t.diag[i] - shift));
    for (std::size_t i = 0; i + 1 < n; ++i) scale = std::max(scale, abs(t.offdiag[i]));
    const Real tiny = scale * eps * eps;

    std::vector<Real> d(n), u1(n, Real(0)), u2(n, Real(0)), l(n, Real(0));
    for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        u1[i] = t.offdiag[i];
        l[i + 1] = t.offdiag[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (abs(l[i + 1]) > abs(d[i])) {
            std::swap(d[i], l[i + 1]);
            std::swap(u1[i], d[i + 1]);
            std::swap(u2[i], u1[i + 1]);
            std::swap(b[i], b[i + 1]);
        }
        if (abs(d[i]) < tiny) d[i] = d[i] < Real(0) ? -tiny : tiny;
        const Real m = l[i + 1] / d[i];
        d[i + 1] -= m * u1[i];
        u1[i + 1] -= m * u2[i];
        b[i + 1] -= m * b[i];
    }
    if (abs(d[n - 1]) < tiny) d[n - 1] = d[n - 1] < Real(0) ? -tiny : tiny;
    std::vector<Real> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        Real s = b[ii];
        if (ii + 1 < n) s -= u1[ii] * x[ii + 1];
        if (ii + 2 < n) s -= u2[ii] * x[ii + 2];
        x[ii] = s / d[ii];
    }
    return x;
}

} // namespace detail

/// Eigenvector for an accurate eigenvalue estimate, by inverse iteration.
/// The seed may be empty, in which case a uniform start is used. The result
/// has unit 2-norm and the library's deterministic sign convention.
template <class Real>
std::vector<Real> inverse_iteration(const symmetric_tridiagonal<Real>& t, Real lambda,
                                    std::vector<Real> seed = {}) {
    using std::abs;
    const std::size_t n = t.diag.size();
    const Real eps = std::numeric_limits<Real>::epsilon();
    Real scale = abs(lambda);
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, abs(t.diag[i]));
    for (std::size_t i = 0; i + 1 < n; ++i) scale = std::max(scale, Real(2) * abs(t.offdiag[i]));
    const Real target = Real(256) * eps * std::max(scale, Real(1));

    std::vector<Real> x = std::move(seed);
    if (x.size() != n) x.assign(n, Real(1));
    Real nx = norm2(x);
    if (nx == Real(0)) x.assign(n, Real(1)), nx = norm2(x);
    for (Real& v : x) v /= nx;

    for (int it = 0; it < 8; ++it) {
        std::vector<Real> y = detail::shifted_tridiag_solve(t, lambda, x);
        const Real ny = norm2(y);
        if (!(ny > Real(0)) || !std::isfinite(static_cast<double>(ny))) {
            // stagnated; perturb deterministically and retry
            for (std::size_t i = 0; i < n; ++i) x[i] += Real(1e-3) * Real((i % 7) + 1) / Real(7);
            const Real r = norm2(x);
            for (Real& v : x) v /= r;
            continue;
        }
        for (Real& v : y) v /= ny;
        x = std::move(y);
        std::vector<Real> r = matvec(t, x);
        for (std::size_t i = 0; i < n; ++i) r[i] -= lambda * x[i];
        if (norm2(r) <= target) break;
    }
    normalize_unit(x);
    return x;
}

/// All eigenvalues of a symmetric tridiagonal matrix by Sturm-sequence
/// bisection, returned in descending order.
template <class Real>
std::vector<Real> oracle_eigs(const symmetric_tridiagonal<Real>& t) {
    using std::abs;
    const std::size_t n = t.diag.size();
    if (n < 1) throw invalid_argument_error("oracle_eigs: empty matrix");
    const Real eps = std::numeric_limits<Real>::epsilon();

    // Gershgorin enclosure
    Real lo = t.diag[0], hi = t.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        Real r = 0;
        if (i > 0) r += abs(t.offdiag[i - 1]);
        if (i + 1 < n) r += abs(t.offdiag[i]);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    const Real span = std::max(hi - lo, Real(1));
    lo -= eps * span;
    hi += eps * span;

    std::vector<Real> vals(n);
    // bisect for eigenvalue #k in ascending order: the k-th smallest is the
    // unique x with count(x) <= k < count(x + dx)
    for (std::size_t k = 0; k < n; ++k) {
        Real a = lo, b = hi;
        while (b - a > Real(8) * eps * std::max({abs(a), abs(b), Real(1)})) {
            const Real mid = a + (b - a) / Real(2);
            if (mid <= a || mid >= b) break;
            if (detail::sturm_count(t, mid) > static_cast<int>(k))
                b = mid;
            else
                a = mid;
        }
        vals[n - 1 - k] = a + (b - a) / Real(2); // store descending
    }
    return vals;
}

template <class Real>
struct eigen_system {
    std::vector<Real> values;               ///< descending
    std::vector<std::vector<Real>> vectors; ///< unit vectors, same order
};

/// Eigenvalues and eigenvectors; vectors come from inverse iteration, with
/// Gram-Schmidt against earlier members of a near-degenerate cluster.
template <class Real>
eigen_system<Real> oracle_eigen(const symmetric_tridiagonal<Real>& t) {
    using std::abs;
    eigen_system<Real> es;
    es.values = oracle_eigs(t);
    const std::size_t n = es.values.size();
    es.vectors.resize(n);
    Real scale = Real(1);
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, abs(es.values[i]));
    const Real cluster_tol = Real(1e-8) * scale;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Real> v = inverse_iteration(t, es.values[k]);
        for (std::size_t j = k; j-- > 0;) {
            if (abs(es.values[j] - es.values[k]) > cluster_tol) break;
            const Real c = dot(v, es.vectors[j]);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * es.vectors[j][i];
        }
        normalize_unit(v);
        es.vectors[k] = std::move(v);
    }
    return es;
}

} // namespace tauspectra

#endif // TAUSPECTRA_TRIDIAG_EIG_HPP
