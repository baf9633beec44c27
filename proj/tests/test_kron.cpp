#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "support/dense.hpp"
#include "tauspectra/kron.hpp"
#include "tauspectra/markov.hpp"
#include "tauspectra/multi_index.hpp"

using namespace tauspectra;

TEST_CASE("lexicographic linearization") {
    const multi_index_space space({2, 3});
    CHECK(lex_linearize(space, {1, 1}) == 0);
    CHECK(lex_linearize(space, {1, 3}) == 2);
    CHECK(lex_linearize(space, {2, 1}) == 3);
    CHECK_THROWS_AS(lex_linearize(space, {3, 1}), invalid_argument_error);
    CHECK_THROWS_AS(lex_linearize(space, {1}), invalid_argument_error);

    const multi_index_space big({3, 4, 5});
    for (std::size_t flat = 0; flat < big.size(); ++flat)
        CHECK(lex_linearize(big, lex_delinearize(big, flat)) == flat);
}

TEST_CASE("chain products and generator sums") {
    SECTION("two walks multiply eigenvalues") {
        const std::vector<random_walk_params<double>> axes{{2, 0.25, 0.25}, {2, 0.25, 0.25}};
        const auto rep = kron_spectrum(axes);
        auto vals = all_eigenvalues(rep);
        std::sort(vals.rbegin(), vals.rend());
        CHECK(vals[0] == Catch::Approx(1.0));
        CHECK(vals[1] == Catch::Approx(0.5).margin(1e-14));
        CHECK(vals[2] == Catch::Approx(0.5).margin(1e-14));
        CHECK(vals[3] == Catch::Approx(0.25).margin(1e-14));
    }
    SECTION("two queues add eigenvalues") {
        const std::vector<birth_death_params<double>> axes{{2, 1.0, 1.0}, {2, 1.0, 1.0}};
        const auto rep = kron_spectrum(axes);
        auto vals = all_eigenvalues(rep);
        std::sort(vals.rbegin(), vals.rend());
        CHECK(vals[0] == Catch::Approx(0.0).margin(1e-14));
        CHECK(vals[1] == Catch::Approx(-2.0).margin(1e-14));
        CHECK(vals[2] == Catch::Approx(-2.0).margin(1e-14));
        CHECK(vals[3] == Catch::Approx(-4.0).margin(1e-14));
    }
}

TEST_CASE("product steady state is the outer product of axis steady states") {
    const std::vector<birth_death_params<double>> axes{{3, 1.0, 2.0}, {3, 1.0, 2.0}};
    const auto rep = kron_spectrum(axes);
    const double axis[] = {4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(rep.steady_state[lex_linearize(rep.space, {i + 1, j + 1})] ==
                  Catch::Approx(axis[i] * axis[j]).epsilon(1e-13));
    // and it is annihilated by the dense transposed Kronecker sum
    const auto g = queue_generator<double>({3, 1.0, 2.0});
    const auto dense =
        tsupport::kron_sum({tsupport::to_dense(transpose(g)), tsupport::to_dense(transpose(g))});
    const auto r = tsupport::matvec(dense, rep.steady_state);
    for (double v : r) CHECK(std::abs(v) <= 1e-13);
}

TEST_CASE("kron spectra match a dense assembly") {
    const std::vector<birth_death_params<double>> axes{{3, 0.8, 1.7}, {4, 1.4, 0.6}};
    const auto rep = kron_spectrum(axes);
    // symmetrized Kronecker sum shares the spectrum of the transposed sum
    std::vector<tsupport::matrix> sym_factors;
    for (const auto& p : axes)
        sym_factors.push_back(tsupport::to_dense(symmetrize(transpose(queue_generator(p))).sym));
    auto ref = tsupport::jacobi_eigenvalues(tsupport::kron_sum(sym_factors));
    auto vals = all_eigenvalues(rep);
    std::sort(vals.rbegin(), vals.rend());
    REQUIRE(vals.size() == ref.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        CHECK(vals[i] == Catch::Approx(ref[i]).margin(1e-10));
}

TEST_CASE("materialized eigenvectors satisfy the eigen equation") {
    const std::vector<birth_death_params<double>> axes{{3, 0.8, 1.7}, {4, 1.4, 0.6}};
    const auto rep = kron_spectrum(axes);
    const auto vals = all_eigenvalues(rep);
    std::vector<tsupport::matrix> factors;
    for (const auto& p : axes) factors.push_back(tsupport::to_dense(transpose(queue_generator(p))));
    const auto dense = tsupport::kron_sum(factors);
    for (std::size_t mode = 0; mode < vals.size(); ++mode) {
        const auto v = eigenvector(rep, mode);
        const auto lv = tsupport::matvec(dense, v);
        for (std::size_t i = 0; i < v.size(); ++i)
            CHECK(lv[i] == Catch::Approx(vals[mode] * v[i]).margin(1e-10));
    }
}

TEST_CASE("multi-axis transient evolution") {
    const std::vector<birth_death_params<double>> axes{{3, 1.0, 2.0}, {4, 0.7, 0.9}};
    const auto rep = kron_spectrum(axes);
    std::vector<double> p0(rep.states(), 0.0);
    p0[0] = 1.0;
    SECTION("time zero is the identity") {
        const auto pt = transient_evolve(rep, p0, 0.0);
        for (std::size_t i = 0; i < p0.size(); ++i) CHECK(pt[i] == p0[i]);
    }
    SECTION("long horizon reaches the product steady state") {
        const auto pt = transient_evolve(rep, p0, 1000.0 / std::abs(rep.gap));
        for (std::size_t i = 0; i < p0.size(); ++i)
            CHECK(pt[i] == Catch::Approx(rep.steady_state[i]).margin(1e-9));
    }
    SECTION("agrees with a dense Runge-Kutta integration") {
        std::vector<tsupport::matrix> factors;
        for (const auto& p : axes)
            factors.push_back(tsupport::to_dense(transpose(queue_generator(p))));
        const auto dense = tsupport::kron_sum(factors);
        const double t = 0.37;
        const int steps = 4000;
        const double dt = t / steps;
        std::vector<double> p = p0;
        const auto axpy = [](std::vector<double> a, double c, const std::vector<double>& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
            return a;
        };
        for (int s = 0; s < steps; ++s) {
            const auto k1 = tsupport::matvec(dense, p);
            const auto k2 = tsupport::matvec(dense, axpy(p, dt / 2, k1));
            const auto k3 = tsupport::matvec(dense, axpy(p, dt / 2, k2));
            const auto k4 = tsupport::matvec(dense, axpy(p, dt, k3));
            for (std::size_t i = 0; i < p.size(); ++i)
                p[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
        const auto pt = transient_evolve(rep, p0, t);
        for (std::size_t i = 0; i < p.size(); ++i)
            CHECK(pt[i] == Catch::Approx(p[i]).margin(1e-10));
    }
}

TEST_CASE("chain evolution by eigen powers matches explicit matrix powers") {
    const std::vector<random_walk_params<double>> axes{{3, 0.2, 0.3}};
    const auto rep = kron_spectrum(axes);
    const auto pm = tsupport::to_dense(transpose(walk_matrix<double>({3, 0.2, 0.3})));
    std::vector<double> p{0.2, 0.5, 0.3};
    const auto p5 = [&] {
        auto v = p;
        for (int s = 0; s < 5; ++s) v = tsupport::matvec(pm, v);
        return v;
    }();
    const auto got = transient_evolve(rep, p, 5.0);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(got[i] == Catch::Approx(p5[i]).margin(1e-12));
}
