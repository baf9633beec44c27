#ifndef TAUSPECTRA_ASYMPTOTICS_HPP
#define TAUSPECTRA_ASYMPTOTICS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tauspectra/common.hpp"
#include "tauspectra/solve.hpp"
#include "tauspectra/tau_matrix.hpp"

namespace tauspectra {

/// Limits of the outliers as n grows: eps + 1/eps when |eps| > 1 and
/// phi + 1/phi when |phi| > 1; a single value when the corners coincide.
template <class Real>
std::vector<Real> predicted_outliers(const tau_params<Real>& params) {
    using std::abs;
    std::vector<Real> out;
    if (abs(params.eps) > Real(1)) out.push_back(params.eps + Real(1) / params.eps);
    if (abs(params.phi) > Real(1) && params.phi != params.eps)
        out.push_back(params.phi + Real(1) / params.phi);
    return out;
}

/// || x - P_u x ||_2 where P_u projects onto span{u}.
template <class Real>
Real projection_residual(const std::vector<Real>& x, const std::vector<Real>& u) {
    if (x.size() != u.size())
        throw invalid_argument_error("projection_residual: dimension mismatch");
    const Real uu = dot(u, u);
    if (uu == Real(0)) throw invalid_argument_error("projection_residual: u must be nonzero");
    const Real c = dot(x, u) / uu;
    std::vector<Real> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - c * u[i];
    return norm2(r);
}

enum class symmetry { symmetric, antisymmetric, neither };

inline const char* symmetry_name(symmetry s) {
    switch (s) {
        case symmetry::symmetric: return "symmetric";
        case symmetry::antisymmetric: return "antisymmetric";
        case symmetry::neither: return "neither";
    }
    return "?";
}

/// Classify x against the flip permutation: symmetric if E x = x and
/// antisymmetric if E x = -x, both up to 1e-8 * ||x||.
template <class Real>
symmetry symmetry_class(const std::vector<Real>& x) {
    const Real nx = norm2(x);
    if (nx == Real(0)) throw invalid_argument_error("symmetry_class: zero vector");
    Real dplus = 0, dminus = 0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Real m = x[n - 1 - i];
        dplus += (m - x[i]) * (m - x[i]);
        dminus += (m + x[i]) * (m + x[i]);
    }
    using std::sqrt;
    if (sqrt(dplus) <= Real(1e-8) * nx) return symmetry::symmetric;
    if (sqrt(dminus) <= Real(1e-8) * nx) return symmetry::antisymmetric;
    return symmetry::neither;
}

template <class Real>
struct outlier_entry {
    Real predicted;            ///< limit value the outlier is matched to
    Real computed;             ///< eigenvalue from the solver
    std::vector<Real> vector;  ///< its unit eigenvector
    Real abs_error;            ///< |computed - predicted|
    Real projection_residual;  ///< distance to the predicted direction
    symmetry sym_class;
};

template <class Real>
struct outlier_report {
    tau_params<Real> params;
    std::vector<outlier_entry<Real>> entries;
};

/// One validation row: the actual outliers of the matrix paired with their
/// predicted limits and the distances of their eigenvectors from the
/// predicted directions. For distinct corners the pairing is by nearest
/// value and the reference directions are the corner quasi-eigenvectors; for
/// equal corners the two predictions coincide and the pairing is by symmetry
/// class, with the symmetric (resp. antisymmetric) combination of the two
/// quasi-eigenvectors as reference.
template <class Real>
outlier_report<Real> validation_row(const tau_params<Real>& params) {
    using std::abs;
    params.validate();
    if (outlier_budget(params).max_outliers == 0)
        throw invalid_argument_error("validation_row: no corner exceeds modulus 1");

    const auto dec = solve(params);
    std::vector<const eigen_pair<Real>*> outliers;
    for (const auto& p : dec.pairs)
        if (abs(p.lambda) > Real(2)) outliers.push_back(&p);
    if (outliers.empty())
        throw invalid_argument_error("validation_row: matrix has no outliers at this n");

    outlier_report<Real> rep;
    rep.params = params;
    const bool equal_corners = params.eps == params.phi;

    if (equal_corners) {
        const auto qv = quasi_eigenpair_residual(params, corner_side::left).vector;
        const auto qw = flip_vector(qv);
        std::vector<Real> vpw(qv.size()), vmw(qv.size());
        for (std::size_t i = 0; i < qv.size(); ++i) {
            vpw[i] = qv[i] + qw[i];
            vmw[i] = qv[i] - qw[i];
        }
        const Real predicted = params.eps + Real(1) / params.eps;
        // symmetric entry listed first
        std::stable_sort(outliers.begin(), outliers.end(),
                         [](const eigen_pair<Real>* a, const eigen_pair<Real>* b) {
                             return symmetry_class(a->vector) == symmetry::symmetric &&
                                    symmetry_class(b->vector) != symmetry::symmetric;
                         });
        for (const auto* p : outliers) {
            const symmetry sc = symmetry_class(p->vector);
            const auto& ref = sc == symmetry::antisymmetric ? vmw : vpw;
            rep.entries.push_back({predicted, p->lambda, p->vector,
                                   abs(p->lambda - predicted),
                                   projection_residual(p->vector, ref), sc});
        }
        return rep;
    }

    const auto preds = predicted_outliers(params);
    for (const auto* p : outliers) {
        Real best_pred = preds.front();
        for (Real c : preds)
            if (abs(p->lambda - c) < abs(p->lambda - best_pred)) best_pred = c;
        const bool eps_side =
            abs(params.eps) > Real(1) && best_pred == params.eps + Real(1) / params.eps;
        const auto ref = eps_side
                             ? quasi_eigenpair_residual(params, corner_side::left).vector
                             : quasi_eigenpair_residual(params, corner_side::right).vector;
        rep.entries.push_back({best_pred, p->lambda, p->vector, abs(p->lambda - best_pred),
                               projection_residual(p->vector, ref),
                               symmetry_class(p->vector)});
    }
    // outlier nearest eps + 1/eps first, then by descending eigenvalue
    std::stable_sort(rep.entries.begin(), rep.entries.end(),
                     [&](const outlier_entry<Real>& a, const outlier_entry<Real>& b) {
                         if (a.predicted != b.predicted) {
                             const bool a_eps = abs(params.eps) > Real(1) &&
                                                a.predicted == params.eps + Real(1) / params.eps;
                             return a_eps;
                         }
                         return a.computed > b.computed;
                     });
    return rep;
}

} // namespace tauspectra

#endif // TAUSPECTRA_ASYMPTOTICS_HPP
