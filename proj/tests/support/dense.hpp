#ifndef TAUSPECTRA_TESTS_DENSE_HPP
#define TAUSPECTRA_TESTS_DENSE_HPP

// Dense-matrix helpers for test oracles: explicit assembly of tridiagonal and
// Kronecker-structured matrices plus a cyclic Jacobi eigensolver. Kept in
// test code so the library paths they verify stay independent.

#include <algorithm>
#include <cmath>
#include <vector>

#include "tauspectra/markov.hpp"
#include "tauspectra/tau_matrix.hpp"

namespace tsupport {

using matrix = std::vector<std::vector<double>>;

inline matrix zeros(std::size_t r, std::size_t c) {
    return matrix(r, std::vector<double>(c, 0.0));
}

inline matrix to_dense(const tauspectra::symmetric_tridiagonal<double>& t) {
    const std::size_t n = t.diag.size();
    matrix m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = t.diag[i];
        if (i + 1 < n) m[i][i + 1] = m[i + 1][i] = t.offdiag[i];
    }
    return m;
}

inline matrix to_dense(const tauspectra::tridiagonal<double>& t) {
    const std::size_t n = t.diag.size();
    matrix m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = t.diag[i];
        if (i + 1 < n) {
            m[i][i + 1] = t.upper[i];
            m[i + 1][i] = t.lower[i];
        }
    }
    return m;
}

inline std::vector<double> matvec(const matrix& m, const std::vector<double>& x) {
    std::vector<double> y(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
    return y;
}

inline matrix kron(const matrix& a, const matrix& b) {
    const std::size_t ra = a.size(), ca = a[0].size(), rb = b.size(), cb = b[0].size();
    matrix m = zeros(ra * rb, ca * cb);
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < ca; ++j)
            for (std::size_t k = 0; k < rb; ++k)
                for (std::size_t l = 0; l < cb; ++l)
                    m[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
    return m;
}

inline matrix identity(std::size_t n) {
    matrix m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

/// sum_r I x ... x A_r x ... x I for the given square factors
inline matrix kron_sum(const std::vector<matrix>& factors) {
    std::size_t total = 1;
    for (const auto& f : factors) total *= f.size();
    matrix m = zeros(total, total);
    for (std::size_t r = 0; r < factors.size(); ++r) {
        matrix term = identity(1);
        for (std::size_t s = 0; s < factors.size(); ++s)
            term = kron(term, s == r ? factors[s] : identity(factors[s].size()));
        for (std::size_t i = 0; i < total; ++i)
            for (std::size_t j = 0; j < total; ++j) m[i][j] += term[i][j];
    }
    return m;
}

/// All eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// returned descending. Plenty accurate for the small oracle matrices here.
inline std::vector<double> jacobi_eigenvalues(matrix a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = a[i][i];
    std::sort(vals.rbegin(), vals.rend());
    return vals;
}

} // namespace tsupport

#endif // TAUSPECTRA_TESTS_DENSE_HPP
