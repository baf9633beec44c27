#ifndef TAUSPECTRA_KRON_HPP
#define TAUSPECTRA_KRON_HPP

#include <cmath>
#include <string>
#include <vector>

#include "tauspectra/common.hpp"
#include "tauspectra/markov.hpp"
#include "tauspectra/multi_index.hpp"

namespace tauspectra {

namespace detail {

/// In-place contraction of tensor axis r with an n_r x n_r matrix given by a
/// callback y = M x on axis slices. Iterates over (outer, inner) blocks of
/// the flat lexicographic layout.
template <class Real, class Apply>
void apply_axis(const multi_index_space& space, int r, std::vector<Real>& tensor, Apply&& apply) {
    const std::size_t nr = static_cast<std::size_t>(space.dims[static_cast<std::size_t>(r)]);
    const std::size_t inner = space.stride(r);
    const std::size_t outer = space.size() / (nr * inner);
    std::vector<Real> slice(nr), out(nr);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t j = 0; j < inner; ++j) {
            const std::size_t base = o * nr * inner + j;
            for (std::size_t k = 0; k < nr; ++k) slice[k] = tensor[base + k * inner];
            apply(slice, out);
            for (std::size_t k = 0; k < nr; ++k) tensor[base + k * inner] = out[k];
        }
    }
}

/// Dense n x n matrix in column-major order applied to axis r.
template <class Real>
void apply_axis_dense(const multi_index_space& space, int r, const std::vector<Real>& m,
                      bool transpose, std::vector<Real>& tensor) {
    const std::size_t n = static_cast<std::size_t>(space.dims[static_cast<std::size_t>(r)]);
    apply_axis(space, r, tensor, [&](const std::vector<Real>& x, std::vector<Real>& y) {
        for (std::size_t i = 0; i < n; ++i) {
            Real s = 0;
            for (std::size_t k = 0; k < n; ++k)
                s += (transpose ? m[i * n + k] : m[k * n + i]) * x[k];
            y[i] = s;
        }
    });
}

/// Tridiagonal matrix applied to axis r.
template <class Real>
void apply_axis_tridiag(const multi_index_space& space, int r, const tridiagonal<Real>& t,
                        std::vector<Real>& tensor) {
    const std::size_t n = static_cast<std::size_t>(space.dims[static_cast<std::size_t>(r)]);
    apply_axis(space, r, tensor, [&](const std::vector<Real>& x, std::vector<Real>& y) {
        for (std::size_t i = 0; i < n; ++i) {
            Real s = t.diag[i] * x[i];
            if (i > 0) s += t.lower[i - 1] * x[i - 1];
            if (i + 1 < n) s += t.upper[i] * x[i + 1];
            y[i] = s;
        }
    });
}

/// Elementwise scale of axis r by a vector of per-index factors.
template <class Real>
void scale_axis(const multi_index_space& space, int r, const std::vector<Real>& factors,
                std::vector<Real>& tensor) {
    apply_axis(space, r, tensor, [&](const std::vector<Real>& x, std::vector<Real>& y) {
        for (std::size_t k = 0; k < x.size(); ++k) y[k] = factors[k] * x[k];
    });
}

} // namespace detail

/// All eigenvalues of the combined operator in lexicographic order of the
/// per-axis mode indices (sums for generators, products for chains).
template <class Real>
std::vector<Real> all_eigenvalues(const spectrum_report<Real>& rep) {
    if (rep.states() > dense_state_limit)
        throw invalid_argument_error("all_eigenvalues: state count exceeds the dense limit");
    const std::size_t total = rep.states();
    std::vector<Real> vals(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        Real v = rep.kind == process_kind::generator ? Real(0) : Real(1);
        for (std::size_t r = rep.axes.size(); r-- > 0;) {
            const std::size_t nr = static_cast<std::size_t>(rep.axes[r].n);
            const Real ev = rep.axes[r].eigenvalues[rest % nr];
            if (rep.kind == process_kind::generator)
                v += ev;
            else
                v *= ev;
            rest /= nr;
        }
        vals[flat] = v;
    }
    return vals;
}

/// Materialized eigenvector of the transposed operator for one combined mode
/// index (lexicographic flat index over per-axis modes): the Kronecker
/// product of per-axis columns of D_r * basis_r, normalized.
template <class Real>
std::vector<Real> eigenvector(const spectrum_report<Real>& rep, std::size_t mode) {
    if (rep.states() > dense_state_limit)
        throw invalid_argument_error("eigenvector: state count exceeds the dense limit");
    const std::size_t total = rep.states();
    std::vector<int> k = lex_delinearize(rep.space, mode);
    std::vector<Real> v(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        Real x = 1;
        for (std::size_t r = rep.axes.size(); r-- > 0;) {
            const auto& ax = rep.axes[r];
            const std::size_t nr = static_cast<std::size_t>(ax.n);
            const std::size_t i = rest % nr;
            const std::size_t col = static_cast<std::size_t>(k[r] - 1);
            x *= ax.dscale[i] * ax.basis[col * nr + i];
            rest /= nr;
        }
        v[flat] = x;
    }
    normalize_unit(v);
    return v;
}

/// Coefficients of x in the eigenbasis of the transposed operator, computed
/// in the symmetrized coordinates where the basis is orthonormal.
template <class Real>
std::vector<Real> expand_in_eigenbasis(const spectrum_report<Real>& rep, std::vector<Real> x) {
    if (x.size() != rep.states())
        throw invalid_argument_error("expand_in_eigenbasis: size mismatch");
    for (std::size_t r = 0; r < rep.axes.size(); ++r) {
        const auto& ax = rep.axes[r];
        std::vector<Real> inv(ax.dscale.size());
        for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = Real(1) / ax.dscale[i];
        detail::scale_axis(rep.space, static_cast<int>(r), inv, x);
        detail::apply_axis_dense(rep.space, static_cast<int>(r), ax.basis, true, x);
    }
    return x;
}

/// Inverse of expand_in_eigenbasis.
template <class Real>
std::vector<Real> reconstruct_from_eigenbasis(const spectrum_report<Real>& rep,
                                              std::vector<Real> coeffs) {
    if (coeffs.size() != rep.states())
        throw invalid_argument_error("reconstruct_from_eigenbasis: size mismatch");
    for (std::size_t r = 0; r < rep.axes.size(); ++r) {
        const auto& ax = rep.axes[r];
        detail::apply_axis_dense(rep.space, static_cast<int>(r), ax.basis, false, coeffs);
        detail::scale_axis(rep.space, static_cast<int>(r), ax.dscale, coeffs);
    }
    return coeffs;
}

/// Distribution at time t (generator report) or after t steps (chain report,
/// integer t), by propagating the eigen-expansion. The decay factors are
/// separable across axes, so the whole evolution is a sequence of per-axis
/// contractions. The result's total mass is asserted to remain within 1e-9
/// of one and is returned without renormalization.
template <class Real>
std::vector<Real> transient_evolve(const spectrum_report<Real>& rep, std::vector<Real> p0,
                                   Real t) {
    using std::abs;
    using std::exp;
    using std::floor;
    using std::pow;
    if (p0.size() != rep.states())
        throw invalid_argument_error("transient_evolve: initial distribution has wrong size");
    if (!(t >= Real(0))) throw invalid_argument_error("transient_evolve: time must be >= 0");
    if (rep.kind == process_kind::chain && floor(t) != t)
        throw invalid_argument_error("transient_evolve: chain evolution needs an integer step count");
    Real mass = 0;
    for (Real v : p0) mass += v;
    if (abs(mass - Real(1)) > Real(1e-9))
        throw invalid_argument_error("transient_evolve: initial distribution is not normalized");
    if (t == Real(0)) return p0;

    for (std::size_t r = 0; r < rep.axes.size(); ++r) {
        const auto& ax = rep.axes[r];
        std::vector<Real> inv(ax.dscale.size());
        for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = Real(1) / ax.dscale[i];
        detail::scale_axis(rep.space, static_cast<int>(r), inv, p0);
        detail::apply_axis_dense(rep.space, static_cast<int>(r), ax.basis, true, p0);
        std::vector<Real> factors(ax.eigenvalues.size());
        for (std::size_t k = 0; k < factors.size(); ++k)
            factors[k] = rep.kind == process_kind::generator ? exp(ax.eigenvalues[k] * t)
                                                             : pow(ax.eigenvalues[k], t);
        detail::scale_axis(rep.space, static_cast<int>(r), factors, p0);
        detail::apply_axis_dense(rep.space, static_cast<int>(r), ax.basis, false, p0);
        detail::scale_axis(rep.space, static_cast<int>(r), ax.dscale, p0);
    }

    mass = 0;
    for (Real v : p0) mass += v;
    if (abs(mass - Real(1)) > Real(1e-9))
        throw error("transient_evolve: evolved mass drifted from 1 by more than 1e-9");
    return p0;
}

} // namespace tauspectra

#endif // TAUSPECTRA_KRON_HPP
