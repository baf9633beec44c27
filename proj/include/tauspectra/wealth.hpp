#ifndef TAUSPECTRA_WEALTH_HPP
#define TAUSPECTRA_WEALTH_HPP

#include <cmath>
#include <string>
#include <vector>

#include "tauspectra/common.hpp"
#include "tauspectra/diffusion.hpp"
#include "tauspectra/multi_index.hpp"

namespace tauspectra {

/// Scalar payoff over the lattice, flat in lexicographic order.
template <class Real>
struct payoff_tensor {
    std::vector<Real> values;
    std::vector<int> dims;
    std::string description;
};

/// W(x) = sum_r weights_r * x_r with the lattice coordinates of the spec.
template <class Real>
payoff_tensor<Real> linear_payoff(const diffusion_spec<Real>& spec,
                                  const std::vector<Real>& weights) {
    spec.validate();
    if (weights.size() != spec.axes.size())
        throw invalid_argument_error("linear_payoff: one weight per axis required");
    const auto space = spec.space();
    payoff_tensor<Real> w;
    w.dims = space.dims;
    w.description = "linear";
    const std::size_t total = space.size();
    w.values.resize(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        Real v = 0;
        for (std::size_t r = spec.axes.size(); r-- > 0;) {
            const std::size_t nr = static_cast<std::size_t>(spec.axes[r].n);
            v += weights[r] * spec.axes[r].coordinate(static_cast<int>(rest % nr) + 1);
            rest /= nr;
        }
        w.values[flat] = v;
    }
    return w;
}

template <class Real>
struct moment_report {
    Real mean;
    Real variance;
};

/// First two stationary moments of the payoff: mean = W . p and
/// variance = W^2 . p - (W . p)^2.
template <class Real>
moment_report<Real> payoff_moments(const payoff_tensor<Real>& w, const std::vector<Real>& p) {
    using std::abs;
    if (w.values.size() != p.size())
        throw invalid_argument_error("payoff_moments: payoff and distribution sizes differ");
    Real mass = 0;
    for (Real v : p) mass += v;
    if (abs(mass - Real(1)) > Real(1e-9))
        throw invalid_argument_error("payoff_moments: distribution is not normalized");
    Real mean = 0, second = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        mean += w.values[i] * p[i];
        second += w.values[i] * w.values[i] * p[i];
    }
    return {mean, second - mean * mean};
}

template <class Real>
struct rho_derivs {
    Real drho_dmu;
    Real drho_dsigma2;
};

/// Derivatives of the geometric ratio rho_tilde with respect to the drift
/// and the variance, branch-consistent with axis_rates; both mu branches
/// agree at mu = 0.
template <class Real>
rho_derivs<Real> rho_derivatives(const diffusion_axis<Real>& axis) {
    const auto r = axis_rates(axis);
    rho_derivs<Real> d;
    if (axis.mu >= Real(0)) {
        d.drho_dmu = Real(2) * axis.delta / axis.sigma2;
    } else {
        const Real denom = axis.sigma2 - Real(2) * axis.delta * axis.mu;
        d.drho_dmu = Real(2) * axis.delta * axis.sigma2 / (denom * denom);
    }
    const Real d3 = axis.delta * axis.delta * axis.delta;
    d.drho_dsigma2 = -axis.mu / (Real(2) * d3 * r.mu_tilde * r.mu_tilde);
    return d;
}

namespace detail {

/// d/drho of the normalized geometric distribution (1-rho)/(1-rho^n) *
/// [1, rho, ..., rho^(n-1)]. The raw prefactor
/// ((1-n)rho^n + n rho^(n-1) - 1) / (1 - rho^n)^2 cancels three ways near
/// rho = 1, so it is evaluated through the factored identity
///   (1-n)rho^n + n rho^(n-1) - 1 = -(1-rho)^2 sum_{j=0}^{n-2} (j+1) rho^j,
/// giving u = -sum_{j<n-1} (j+1) rho^j * c^2 with c the stable normalizer.
/// At rho = 1 this reduces to entries (2i - n - 1) / (2n).
template <class Real>
std::vector<Real> geometric_distribution_drho(int n, Real rho) {
    using std::abs;
    if (n < 1) throw invalid_argument_error("geometric_distribution_drho: n must be >= 1");
    if (!(rho > Real(0)))
        throw invalid_argument_error("geometric_distribution_drho: rho must be positive");
    std::vector<Real> d(static_cast<std::size_t>(n));
    if (abs(rho - Real(1)) <= Real(1e-8)) {
        for (int i = 1; i <= n; ++i)
            d[static_cast<std::size_t>(i - 1)] = Real(2 * i - n - 1) / Real(2 * n);
        return d;
    }
    // In terms of the (stable) distribution entries p_i = c rho^(i-1):
    //   d_i = -[sum_{j=1}^{n-1} j p_j] p_i + (i-1) p_{i-1},
    // which stays bounded for any rho > 0 and passes continuously through
    // rho = 1.
    const auto p = geometric_distribution(n, rho);
    Real s = 0;
    for (int j = 1; j <= n - 1; ++j) s += Real(j) * p[static_cast<std::size_t>(j - 1)];
    for (int i = 1; i <= n; ++i)
        d[static_cast<std::size_t>(i - 1)] =
            -s * p[static_cast<std::size_t>(i - 1)] +
            (i == 1 ? Real(0) : Real(i - 1) * p[static_cast<std::size_t>(i - 2)]);
    return d;
}

} // namespace detail

template <class Real>
struct axis_sensitivity {
    Real dmean_dmu;
    Real dmean_dsigma2;
    Real dvar_dmu;
    Real dvar_dsigma2;
};

template <class Real>
struct sensitivity_report {
    std::vector<axis_sensitivity<Real>> axes;
    /// per-axis steady-state derivative tensors, filled only on request
    std::vector<std::vector<Real>> dp_dmu;
    std::vector<std::vector<Real>> dp_dsigma2;
};

/// Derivatives of the stationary moments with respect to each drift and
/// variance. The steady-state derivative with respect to a parameter of axis
/// r replaces that axis's factor by d p_r / d parameter in the product
/// tensor; moment derivatives then follow from the chain rule on
/// mean = W . p and variance = W^2 . p - (W . p)^2.
template <class Real>
sensitivity_report<Real> stationary_sensitivities(const diffusion_spec<Real>& spec,
                                                  const payoff_tensor<Real>& w,
                                                  bool with_dp_tensors = false) {
    spec.validate();
    const auto space = spec.space();
    if (w.values.size() != space.size())
        throw invalid_argument_error("stationary_sensitivities: payoff shape mismatch");
    const std::size_t d = spec.axes.size();
    const std::size_t total = space.size();

    std::vector<std::vector<Real>> p_axis(d), dp_axis(d);
    std::vector<rho_derivs<Real>> chain(d);
    for (std::size_t r = 0; r < d; ++r) {
        const auto rates = axis_rates(spec.axes[r]);
        p_axis[r] = geometric_distribution(spec.axes[r].n, rates.rho_tilde);
        dp_axis[r] = detail::geometric_distribution_drho(spec.axes[r].n, rates.rho_tilde);
        chain[r] = rho_derivatives(spec.axes[r]);
    }

    std::vector<Real> p(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rest = flat;
        Real v = 1;
        for (std::size_t r = d; r-- > 0;) {
            v *= p_axis[r][rest % p_axis[r].size()];
            rest /= p_axis[r].size();
        }
        p[flat] = v;
    }
    const Real mean = dot(w.values, p);

    sensitivity_report<Real> rep;
    rep.axes.resize(d);
    if (with_dp_tensors) {
        rep.dp_dmu.resize(d);
        rep.dp_dsigma2.resize(d);
    }
    std::vector<Real> w2(total);
    for (std::size_t i = 0; i < total; ++i) w2[i] = w.values[i] * w.values[i];

    for (std::size_t r = 0; r < d; ++r) {
        // dp/drho_r: product tensor with axis r's factor replaced
        std::vector<Real> dp(total);
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rest = flat;
            Real v = 1;
            for (std::size_t s = d; s-- > 0;) {
                const std::size_t i = rest % p_axis[s].size();
                v *= s == r ? dp_axis[s][i] : p_axis[s][i];
                rest /= p_axis[s].size();
            }
            dp[flat] = v;
        }
        const Real wdp = dot(w.values, dp);
        const Real w2dp = dot(w2, dp);
        const Real dmean_drho = wdp;
        const Real dvar_drho = w2dp - Real(2) * mean * wdp;
        rep.axes[r].dmean_dmu = chain[r].drho_dmu * dmean_drho;
        rep.axes[r].dmean_dsigma2 = chain[r].drho_dsigma2 * dmean_drho;
        rep.axes[r].dvar_dmu = chain[r].drho_dmu * dvar_drho;
        rep.axes[r].dvar_dsigma2 = chain[r].drho_dsigma2 * dvar_drho;
        if (with_dp_tensors) {
            rep.dp_dmu[r].resize(total);
            rep.dp_dsigma2[r].resize(total);
            for (std::size_t i = 0; i < total; ++i) {
                rep.dp_dmu[r][i] = chain[r].drho_dmu * dp[i];
                rep.dp_dsigma2[r][i] = chain[r].drho_dsigma2 * dp[i];
            }
        }
    }
    return rep;
}

enum class sweep_parameter { mu, sigma2 };

template <class Real>
struct sweep_row {
    std::string parameter_name;
    Real value = 0;
    bool ok = false;
    std::string message;
    moment_report<Real> moments{0, 0};
    sensitivity_report<Real> sensitivities;
};

/// Comparative statics: rebuild the spec at each grid value of one axis
/// parameter and tabulate moments and sensitivities. Ill-posed grid points
/// are flagged and skipped rather than aborting the sweep. The input spec is
/// never modified.
template <class Real>
std::vector<sweep_row<Real>> comparative_sweep(const diffusion_spec<Real>& spec,
                                               const payoff_tensor<Real>& w, int target_axis,
                                               sweep_parameter target, const std::vector<Real>& grid) {
    spec.validate();
    if (target_axis < 0 || target_axis >= static_cast<int>(spec.axes.size()))
        throw invalid_argument_error("comparative_sweep: target axis out of range");
    const std::string name = (target == sweep_parameter::mu ? "mu_" : "sigma2_") +
                             std::to_string(target_axis + 1);
    std::vector<sweep_row<Real>> rows;
    rows.reserve(grid.size());
    for (Real value : grid) {
        sweep_row<Real> row;
        row.parameter_name = name;
        row.value = value;
        diffusion_spec<Real> local = spec;
        auto& ax = local.axes[static_cast<std::size_t>(target_axis)];
        if (target == sweep_parameter::mu)
            ax.mu = value;
        else
            ax.sigma2 = value;
        try {
            const auto p = diffusion_steady_state(local);
            row.moments = payoff_moments(w, p);
            row.sensitivities = stationary_sensitivities(local, w);
            row.ok = true;
        } catch (const error& e) {
            row.ok = false;
            row.message = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace tauspectra

#endif // TAUSPECTRA_WEALTH_HPP
