#ifndef TAUSPECTRA_TAU_MATRIX_HPP
#define TAUSPECTRA_TAU_MATRIX_HPP

#include <cmath>
#include <string>
#include <vector>

#include "tauspectra/common.hpp"

namespace tauspectra {

/// Parameters of the n x n matrix with eps at (1,1), phi at (n,n), zero
/// interior diagonal and unit off-diagonals.
template <class Real>
struct tau_params {
    int n = 0;
    Real eps = 0;
    Real phi = 0;

    void validate() const {
        if (n < 2)
            throw invalid_argument_error("tau_params: n must be >= 2, got " + std::to_string(n));
        if (!std::isfinite(static_cast<double>(eps)) || !std::isfinite(static_cast<double>(phi)))
            throw invalid_argument_error("tau_params: eps and phi must be finite");
    }
};

/// Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.
template <class Real>
struct symmetric_tridiagonal {
    std::vector<Real> diag;
    std::vector<Real> offdiag; // size n-1

    int size() const { return static_cast<int>(diag.size()); }
};

/// y = T x for a symmetric tridiagonal T.
template <class Real>
std::vector<Real> matvec(const symmetric_tridiagonal<Real>& t, const std::vector<Real>& x) {
    const std::size_t n = t.diag.size();
    if (x.size() != n) throw invalid_argument_error("matvec: dimension mismatch");
    std::vector<Real> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        Real s = t.diag[i] * x[i];
        if (i > 0) s += t.offdiag[i - 1] * x[i - 1];
        if (i + 1 < n) s += t.offdiag[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

/// Tridiagonal representation of the tau matrix for the given parameters.
template <class Real>
symmetric_tridiagonal<Real> tau_matrix(const tau_params<Real>& params) {
    params.validate();
    symmetric_tridiagonal<Real> t;
    t.diag.assign(static_cast<std::size_t>(params.n), Real(0));
    t.diag.front() = params.eps;
    t.diag.back() = params.phi;
    t.offdiag.assign(static_cast<std::size_t>(params.n - 1), Real(1));
    return t;
}

/// Parameters of the flip-conjugated matrix: conjugation by the antidiagonal
/// permutation swaps the two corner entries, so the spectrum is shared and
/// eigenvectors map through flip_vector.
template <class Real>
tau_params<Real> flip_conjugate(const tau_params<Real>& params) {
    params.validate();
    return {params.n, params.phi, params.eps};
}

enum class corner_side { left, right };

template <class Real>
struct quasi_eigenpair {
    Real value;                ///< eps + 1/eps (left) or phi + 1/phi (right)
    std::vector<Real> vector;  ///< unnormalized geometric vector
    Real residual_norm;        ///< ||T v - value v||_2, exact in closed form
};

/// The geometric quasi-eigenpair anchored at one corner. The residual
/// concentrates in a single canonical-basis direction, so its 2-norm is
/// |eps|^-n |eps*phi - 1| (left) or |phi|^-n |eps*phi - 1| (right), which is
/// exactly zero when eps*phi = 1.
template <class Real>
quasi_eigenpair<Real> quasi_eigenpair_residual(const tau_params<Real>& params, corner_side side) {
    using std::abs;
    using std::pow;
    params.validate();
    const Real a = side == corner_side::left ? params.eps : params.phi;
    if (a == Real(0))
        throw invalid_argument_error("quasi_eigenpair_residual: corner parameter on the requested side is zero");
    quasi_eigenpair<Real> qp;
    qp.value = a + Real(1) / a;
    qp.vector.resize(static_cast<std::size_t>(params.n));
    if (side == corner_side::left) {
        // v_i = eps^(1-i)
        Real g = Real(1);
        for (int i = 0; i < params.n; ++i) {
            qp.vector[static_cast<std::size_t>(i)] = g;
            g /= a;
        }
    } else {
        // w_i = phi^(i-n)
        Real g = Real(1);
        for (int i = params.n - 1; i >= 0; --i) {
            qp.vector[static_cast<std::size_t>(i)] = g;
            g /= a;
        }
    }
    qp.residual_norm = pow(abs(a), Real(-params.n)) * abs(params.eps * params.phi - Real(1));
    return qp;
}

struct outlier_budget_info {
    int max_outliers = 0;    ///< 0, 1 or 2 eigenvalues allowed outside [-2,2]
    bool pm2_excluded = false; ///< whether +-2 cannot be eigenvalues
};

/// How many eigenvalues may lie outside [-2, 2], and whether the endpoints
/// are excluded, from the corner magnitudes alone.
template <class Real>
outlier_budget_info outlier_budget(const tau_params<Real>& params) {
    using std::abs;
    params.validate();
    const bool e_in = abs(params.eps) <= Real(1);
    const bool p_in = abs(params.phi) <= Real(1);
    outlier_budget_info b;
    b.max_outliers = (e_in ? 0 : 1) + (p_in ? 0 : 1);
    b.pm2_excluded = abs(params.eps) < Real(1) || abs(params.phi) < Real(1);
    return b;
}

} // namespace tauspectra

#endif // TAUSPECTRA_TAU_MATRIX_HPP
