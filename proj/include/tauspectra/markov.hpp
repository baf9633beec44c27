#ifndef TAUSPECTRA_MARKOV_HPP
#define TAUSPECTRA_MARKOV_HPP

#include <cmath>
#include <string>
#include <vector>

#include "tauspectra/common.hpp"
#include "tauspectra/multi_index.hpp"
#include "tauspectra/tau_matrix.hpp"

namespace tauspectra {

/// Birth-death rates of the finite queue generator. The spectral formulas
/// only need lambda * mu > 0; the probabilistic reading additionally needs
/// both rates positive.
template <class Real>
struct birth_death_params {
    int n = 0;
    Real lambda = 0;
    Real mu = 0;

    void validate() const {
        if (n < 2) throw invalid_argument_error("birth_death_params: n must be >= 2");
        if (!(lambda * mu > Real(0)))
            throw invalid_argument_error("birth_death_params: lambda * mu must be positive");
    }
    bool probabilistic() const { return lambda > Real(0) && mu > Real(0); }
};

/// Step probabilities of the reflecting random walk on {1..n}.
template <class Real>
struct random_walk_params {
    int n = 0;
    Real p = 0;
    Real q = 0;

    void validate() const {
        if (n < 2) throw invalid_argument_error("random_walk_params: n must be >= 2");
        if (!(p > Real(0)) || !(q > Real(0)))
            throw invalid_argument_error("random_walk_params: p and q must be positive");
        if (p + q > Real(1) + Real(4) * Real(1e-16))
            throw invalid_argument_error("random_walk_params: p + q must not exceed 1");
    }
};

/// General tridiagonal matrix, stored by bands.
template <class Real>
struct tridiagonal {
    std::vector<Real> diag;
    std::vector<Real> lower; ///< entries (i+1, i), size n-1
    std::vector<Real> upper; ///< entries (i, i+1), size n-1

    int size() const { return static_cast<int>(diag.size()); }
};

template <class Real>
tridiagonal<Real> transpose(const tridiagonal<Real>& t) {
    return {t.diag, t.upper, t.lower};
}

template <class Real>
std::vector<Real> matvec(const tridiagonal<Real>& t, const std::vector<Real>& x) {
    const std::size_t n = t.diag.size();
    if (x.size() != n) throw invalid_argument_error("matvec: dimension mismatch");
    std::vector<Real> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        Real s = t.diag[i] * x[i];
        if (i > 0) s += t.lower[i - 1] * x[i - 1];
        if (i + 1 < n) s += t.upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

/// Generator of the finite birth-death queue: arrivals at rate lambda,
/// services at rate mu, reflecting ends, zero row sums.
template <class Real>
tridiagonal<Real> queue_generator(const birth_death_params<Real>& params) {
    params.validate();
    const std::size_t n = static_cast<std::size_t>(params.n);
    tridiagonal<Real> g;
    g.diag.assign(n, -params.lambda - params.mu);
    g.diag.front() = -params.lambda;
    g.diag.back() = -params.mu;
    g.upper.assign(n - 1, params.lambda);
    g.lower.assign(n - 1, params.mu);
    return g;
}

/// Transition matrix of the reflecting random walk; rows sum to one.
template <class Real>
tridiagonal<Real> walk_matrix(const random_walk_params<Real>& params) {
    params.validate();
    const std::size_t n = static_cast<std::size_t>(params.n);
    tridiagonal<Real> m;
    m.diag.assign(n, Real(1) - params.p - params.q);
    m.diag.front() = Real(1) - params.p;
    m.diag.back() = Real(1) - params.q;
    m.upper.assign(n - 1, params.p);
    m.lower.assign(n - 1, params.q);
    return m;
}

template <class Real>
struct symmetrization {
    std::vector<Real> dscale;         ///< diagonal of D in T = D X D^-1
    symmetric_tridiagonal<Real> sym;  ///< X
};

/// Diagonal similarity taking a sign-consistent tridiagonal to symmetric
/// form: off-diagonals become sqrt(b_i c_i), D accumulates sqrt(c_i / b_i).
template <class Real>
symmetrization<Real> symmetrize(const tridiagonal<Real>& t) {
    using std::sqrt;
    const std::size_t n = t.diag.size();
    if (n < 1) throw invalid_argument_error("symmetrize: empty matrix");
    symmetrization<Real> s;
    s.dscale.assign(n, Real(1));
    s.sym.diag = t.diag;
    s.sym.offdiag.assign(n - 1, Real(0));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Real prod = t.upper[i] * t.lower[i];
        if (!(prod > Real(0)))
            throw not_symmetrizable_error(
                "symmetrize: off-diagonal product b_" + std::to_string(i + 1) + " c_" +
                std::to_string(i + 1) + " is not positive");
        s.sym.offdiag[i] = sqrt(prod);
        s.dscale[i + 1] = s.dscale[i] * sqrt(t.lower[i] / t.upper[i]);
    }
    return s;
}

enum class process_kind { generator, chain };

/// Spectral data of one axis of a (possibly multidimensional) birth-death
/// process, held in symmetrized coordinates: the transposed generator or
/// transition matrix equals D * X * D^-1 with X symmetric, and `basis`
/// stores the orthonormal eigenvectors of X column by column. Index 0 is the
/// stationary mode (eigenvalue 0 for a generator, 1 for a chain) and the
/// rest follow the cosine grid k = 1..n-1; for positive rates that order is
/// descending.
template <class Real>
struct axis_spectrum {
    int n = 0;
    process_kind kind = process_kind::generator;
    Real birth = 0, death = 0;       ///< (lambda, mu) or (p, q)
    std::vector<Real> eigenvalues;   ///< size n, descending
    std::vector<Real> basis;         ///< n*n column-major orthonormal
    std::vector<Real> dscale;        ///< diagonal of D: powers of tau
    std::vector<Real> steady_state;  ///< geometric distribution (if probabilistic)
    Real gap = 0;                    ///< eigenvalues[1]
    bool probabilistic = false;
};

namespace detail {

template <class Real>
axis_spectrum<Real> birth_death_axis(int n, Real birth, Real death, process_kind kind) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    axis_spectrum<Real> ax;
    ax.n = n;
    ax.kind = kind;
    ax.birth = birth;
    ax.death = death;
    ax.probabilistic = birth > Real(0) && death > Real(0);
    const Real tau = sqrt(birth / death);
    const Real root = sqrt(birth * death);
    const Real shift = kind == process_kind::generator ? Real(0) : Real(1);
    const std::size_t un = static_cast<std::size_t>(n);

    ax.eigenvalues.resize(un);
    ax.eigenvalues[0] = shift; // exact stationary eigenvalue
    for (int k = 1; k < n; ++k) {
        const Real th = Real(k) * Real(3.141592653589793238462643383279502884) / Real(n);
        ax.eigenvalues[static_cast<std::size_t>(k)] =
            shift - birth - death + Real(2) * root * cos(th);
    }
    ax.gap = ax.eigenvalues[1];

    ax.dscale.resize(un);
    for (int i = 0; i < n; ++i)
        ax.dscale[static_cast<std::size_t>(i)] = std::pow(tau, Real(i));

    // orthonormal eigenvectors of the symmetrized matrix X; column 0 is the
    // geometric direction, the rest are the tau-matrix trig formulas with
    // corner 1/tau
    ax.basis.assign(un * un, Real(0));
    {
        auto s0 = normalized_geometric_l2(n, tau);
        for (std::size_t i = 0; i < un; ++i) ax.basis[i] = s0[i];
    }
    for (int k = 1; k < n; ++k) {
        const Real th = Real(k) * Real(3.141592653589793238462643383279502884) / Real(n);
        std::vector<Real> v(un);
        for (int i = 1; i <= n; ++i)
            v[static_cast<std::size_t>(i - 1)] =
                sin(Real(i) * th) - (Real(1) / tau) * sin(Real(i - 1) * th);
        normalize_unit(v);
        for (std::size_t i = 0; i < un; ++i) ax.basis[static_cast<std::size_t>(k) * un + i] = v[i];
    }

    if (ax.probabilistic) ax.steady_state = geometric_distribution(n, birth / death);
    return ax;
}

} // namespace detail

/// Multi-axis spectral report for a product or sum structure: eigenvalues of
/// the transposed generator (sums across axes) or transition matrix
/// (products across axes); eigenvectors are held as per-axis factors and the
/// steady state is the product of per-axis geometric distributions. `gap` is
/// the largest non-stationary eigenvalue reachable by exciting a single
/// axis, which for generators is exactly the second-largest eigenvalue.
template <class Real>
struct spectrum_report {
    process_kind kind = process_kind::generator;
    std::vector<axis_spectrum<Real>> axes;
    multi_index_space space;
    std::vector<Real> steady_state; ///< product tensor; empty beyond the size limit
    Real gap = 0;
    bool probabilistic = false;

    std::size_t states() const { return space.size(); }
};

/// Default cap on materialized tensors (steady states, eigenvalue lists).
inline constexpr std::size_t dense_state_limit = 1000000;

namespace detail {

template <class Real>
spectrum_report<Real> assemble_report(std::vector<axis_spectrum<Real>> axes, process_kind kind) {
    spectrum_report<Real> rep;
    rep.kind = kind;
    rep.axes = std::move(axes);
    std::vector<int> dims;
    rep.probabilistic = true;
    for (const auto& ax : rep.axes) {
        dims.push_back(ax.n);
        rep.probabilistic = rep.probabilistic && ax.probabilistic;
    }
    rep.space = multi_index_space(dims);
    // stationary eigenvalue is shared by every axis; the slowest decaying
    // combination changes exactly one axis to its second eigenvalue
    rep.gap = rep.axes.front().gap;
    for (const auto& ax : rep.axes) rep.gap = std::max(rep.gap, ax.gap);
    if (rep.probabilistic && rep.space.size() <= dense_state_limit) {
        rep.steady_state.assign(rep.space.size(), Real(1));
        const std::size_t total = rep.space.size();
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rest = flat;
            Real v = 1;
            for (std::size_t r = rep.axes.size(); r-- > 0;) {
                const std::size_t nr = static_cast<std::size_t>(rep.axes[r].n);
                v *= rep.axes[r].steady_state[rest % nr];
                rest /= nr;
            }
            rep.steady_state[flat] = v;
        }
    }
    return rep;
}

} // namespace detail

/// Spectrum of the transposed queue generator: closed-form eigenvalues
/// -lambda - mu + 2 sqrt(lambda mu) cos(k pi / n) alongside the zero mode,
/// geometric steady state, gap = second eigenvalue.
template <class Real>
spectrum_report<Real> queue_spectrum(const birth_death_params<Real>& params) {
    params.validate();
    std::vector<axis_spectrum<Real>> axes;
    axes.push_back(detail::birth_death_axis(params.n, params.lambda, params.mu,
                                            process_kind::generator));
    return detail::assemble_report(std::move(axes), process_kind::generator);
}

/// Spectrum of the transposed walk transition matrix; the eigenvalues are
/// those of the queue generator with (lambda, mu) = (p, q) shifted by one.
template <class Real>
spectrum_report<Real> walk_spectrum(const random_walk_params<Real>& params) {
    params.validate();
    std::vector<axis_spectrum<Real>> axes;
    axes.push_back(detail::birth_death_axis(params.n, params.p, params.q, process_kind::chain));
    return detail::assemble_report(std::move(axes), process_kind::chain);
}

/// Kronecker-sum spectrum of d independent queue generators.
template <class Real>
spectrum_report<Real> kron_spectrum(const std::vector<birth_death_params<Real>>& axis_params) {
    if (axis_params.empty()) throw invalid_argument_error("kron_spectrum: no axes");
    std::vector<axis_spectrum<Real>> axes;
    for (const auto& p : axis_params) {
        p.validate();
        axes.push_back(detail::birth_death_axis(p.n, p.lambda, p.mu, process_kind::generator));
    }
    return detail::assemble_report(std::move(axes), process_kind::generator);
}

/// Kronecker-product spectrum of d independent random walks.
template <class Real>
spectrum_report<Real> kron_spectrum(const std::vector<random_walk_params<Real>>& axis_params) {
    if (axis_params.empty()) throw invalid_argument_error("kron_spectrum: no axes");
    std::vector<axis_spectrum<Real>> axes;
    for (const auto& p : axis_params) {
        p.validate();
        axes.push_back(detail::birth_death_axis(p.n, p.p, p.q, process_kind::chain));
    }
    return detail::assemble_report(std::move(axes), process_kind::chain);
}

} // namespace tauspectra

#endif // TAUSPECTRA_MARKOV_HPP
