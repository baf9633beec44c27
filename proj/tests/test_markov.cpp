#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "support/dense.hpp"
#include "tauspectra/kron.hpp"
#include "tauspectra/markov.hpp"
#include "tauspectra/tridiag_eig.hpp"

using namespace tauspectra;

TEST_CASE("queue generator") {
    const auto g = queue_generator<double>({2, 1.0, 2.0});
    CHECK(g.diag == std::vector<double>{-1.0, -2.0});
    CHECK(g.upper == std::vector<double>{1.0});
    CHECK(g.lower == std::vector<double>{2.0});

    const auto g5 = queue_generator<double>({5, 0.3, 0.7});
    for (int i = 0; i < 5; ++i) {
        double row = g5.diag[static_cast<std::size_t>(i)];
        if (i > 0) row += g5.lower[static_cast<std::size_t>(i - 1)];
        if (i < 4) row += g5.upper[static_cast<std::size_t>(i)];
        CHECK(row == Catch::Approx(0.0).margin(1e-14));
    }
    CHECK_THROWS_AS(queue_generator<double>({3, 1.0, -1.0}), invalid_argument_error);
}

TEST_CASE("queue eigenvalues from the closed form match a dense solve") {
    // (n=3, lambda=mu=1): transposed generator has eigenvalues 0, -1, -3
    const auto rep = queue_spectrum<double>({3, 1.0, 1.0});
    REQUIRE(rep.axes.front().eigenvalues.size() == 3);
    CHECK(rep.axes.front().eigenvalues[0] == 0.0);
    CHECK(rep.axes.front().eigenvalues[1] == Catch::Approx(-1.0).margin(1e-14));
    CHECK(rep.axes.front().eigenvalues[2] == Catch::Approx(-3.0).margin(1e-14));
    CHECK(rep.gap == Catch::Approx(-1.0).margin(1e-14));
}

TEST_CASE("generator spectra for positive rates: one zero, the rest negative") {
    std::mt19937 rng(63);
    std::uniform_real_distribution<double> unif(0.05, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rep = queue_spectrum<double>({2 + trial, unif(rng), unif(rng)});
        const auto& ev = rep.axes.front().eigenvalues;
        CHECK(std::abs(ev[0]) <= 1e-12);
        for (std::size_t k = 1; k < ev.size(); ++k) CHECK(ev[k] < 0.0);
    }
}

TEST_CASE("symmetrize") {
    SECTION("symmetric input leaves D at identity") {
        tridiagonal<double> t{{1.0, 2.0, 3.0}, {4.0, 5.0}, {4.0, 5.0}};
        const auto s = symmetrize(t);
        for (double d : s.dscale) CHECK(d == 1.0);
        CHECK(s.sym.offdiag == std::vector<double>{4.0, 5.0});
    }
    SECTION("transposed queue generator gives powers of tau") {
        const auto qt = transpose(queue_generator<double>({4, 1.0, 4.0}));
        const auto s = symmetrize(qt);
        // tau = sqrt(lambda/mu) = 1/2, sqrt(lambda mu) = 2
        for (int i = 0; i < 4; ++i)
            CHECK(s.dscale[static_cast<std::size_t>(i)] == Catch::Approx(std::pow(0.5, i)));
        for (double v : s.sym.offdiag) CHECK(v == Catch::Approx(2.0));
    }
    SECTION("explicit 2x2") {
        tridiagonal<double> t{{0.0, 0.0}, {12.0}, {3.0}};
        const auto s = symmetrize(t);
        CHECK(s.sym.offdiag[0] == Catch::Approx(6.0));
        CHECK(s.dscale[1] == Catch::Approx(2.0));
    }
    SECTION("reconstruction error") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> unif(0.2, 3.0);
        tridiagonal<double> t;
        const int n = 9;
        t.diag.resize(n);
        t.upper.resize(n - 1);
        t.lower.resize(n - 1);
        for (auto& v : t.diag) v = unif(rng) - 1.5;
        for (auto& v : t.upper) v = unif(rng);
        for (auto& v : t.lower) v = unif(rng);
        const auto s = symmetrize(t);
        // T = D X D^-1 entrywise
        double maxerr = 0.0, scale = 0.0;
        const auto dense_t = tsupport::to_dense(t);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double x = 0.0;
                if (i == j) x = s.sym.diag[static_cast<std::size_t>(i)];
                else if (j == i + 1 || i == j + 1)
                    x = s.sym.offdiag[static_cast<std::size_t>(std::min(i, j))];
                const double rec = s.dscale[static_cast<std::size_t>(i)] * x /
                                   s.dscale[static_cast<std::size_t>(j)];
                maxerr = std::max(maxerr, std::abs(dense_t[static_cast<std::size_t>(i)]
                                                          [static_cast<std::size_t>(j)] -
                                                   rec));
                scale = std::max(scale, std::abs(dense_t[static_cast<std::size_t>(i)]
                                                        [static_cast<std::size_t>(j)]));
            }
        CHECK(maxerr <= 1e-12 * scale);
    }
    SECTION("sign-inconsistent off-diagonals are rejected") {
        tridiagonal<double> t{{0.0, 0.0}, {1.0}, {-1.0}};
        CHECK_THROWS_AS(symmetrize(t), not_symmetrizable_error);
    }
}

TEST_CASE("queue steady states") {
    SECTION("explicit 3-state null space") {
        const auto rep = queue_spectrum<double>({3, 1.0, 2.0});
        CHECK(rep.steady_state[0] == Catch::Approx(4.0 / 7.0).epsilon(1e-14));
        CHECK(rep.steady_state[1] == Catch::Approx(2.0 / 7.0).epsilon(1e-14));
        CHECK(rep.steady_state[2] == Catch::Approx(1.0 / 7.0).epsilon(1e-14));
    }
    SECTION("balanced rates give the uniform distribution") {
        const auto rep = queue_spectrum<double>({4, 0.8, 0.8});
        for (double v : rep.steady_state) CHECK(v == Catch::Approx(0.25).epsilon(1e-14));
    }
    SECTION("transposed generator annihilates the steady state") {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> unif(0.1, 3.0);
        std::uniform_int_distribution<int> size(2, 20);
        for (int trial = 0; trial < 50; ++trial) {
            const birth_death_params<double> p{size(rng), unif(rng), unif(rng)};
            const auto rep = queue_spectrum(p);
            const auto qt = transpose(queue_generator(p));
            const auto r = matvec(qt, rep.steady_state);
            for (double v : r) CHECK(std::abs(v) <= 1e-12);
            double sum = 0.0;
            for (double v : rep.steady_state) sum += v;
            CHECK(sum == Catch::Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("queue spectrum matches the shifted symmetrized oracle") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unif(0.2, 2.5);
    for (int n : {2, 5, 9, 12}) {
        const birth_death_params<double> p{n, unif(rng), unif(rng)};
        const auto rep = queue_spectrum(p);
        const auto s = symmetrize(transpose(queue_generator(p)));
        const auto ref = oracle_eigs(s.sym);
        for (int i = 0; i < n; ++i)
            CHECK(rep.axes.front().eigenvalues[static_cast<std::size_t>(i)] ==
                  Catch::Approx(ref[static_cast<std::size_t>(i)]).margin(1e-10));
    }
}

TEST_CASE("negative rates with positive product are spectral-only") {
    const auto rep = queue_spectrum<double>({4, -1.0, -2.0});
    CHECK_FALSE(rep.probabilistic);
    CHECK(rep.steady_state.empty());
    // eigenvalue formula still matches the dense solve (as a set; the
    // stationary zero stays at index 0 even when the rest are positive)
    const auto s = symmetrize(transpose(queue_generator<double>({4, -1.0, -2.0})));
    const auto ref = oracle_eigs(s.sym);
    auto got = rep.axes.front().eigenvalues;
    std::sort(got.rbegin(), got.rend());
    for (int i = 0; i < 4; ++i)
        CHECK(got[static_cast<std::size_t>(i)] ==
              Catch::Approx(ref[static_cast<std::size_t>(i)]).margin(1e-10));
}

TEST_CASE("walk spectrum") {
    SECTION("two states with p = q = 1/4") {
        const auto rep = walk_spectrum<double>({2, 0.25, 0.25});
        CHECK(rep.axes.front().eigenvalues[0] == 1.0);
        CHECK(rep.axes.front().eigenvalues[1] == Catch::Approx(0.5).margin(1e-14));
    }
    SECTION("uniform steady state at equal probabilities") {
        const auto rep = walk_spectrum<double>({3, 1.0 / 3.0, 1.0 / 3.0});
        for (double v : rep.steady_state) CHECK(v == Catch::Approx(1.0 / 3.0).epsilon(1e-13));
    }
    SECTION("geometric steady state") {
        const auto rep = walk_spectrum<double>({3, 0.2, 0.1});
        CHECK(rep.steady_state[0] == Catch::Approx(1.0 / 7.0).epsilon(1e-13));
        CHECK(rep.steady_state[1] == Catch::Approx(2.0 / 7.0).epsilon(1e-13));
        CHECK(rep.steady_state[2] == Catch::Approx(4.0 / 7.0).epsilon(1e-13));
    }
    SECTION("transition rows sum to one") {
        const auto m = walk_matrix<double>({6, 0.3, 0.45});
        for (int i = 0; i < 6; ++i) {
            double row = m.diag[static_cast<std::size_t>(i)];
            if (i > 0) row += m.lower[static_cast<std::size_t>(i - 1)];
            if (i < 5) row += m.upper[static_cast<std::size_t>(i)];
            CHECK(row == Catch::Approx(1.0).margin(1e-14));
        }
    }
    SECTION("probabilities must be a sub-distribution") {
        CHECK_THROWS_AS(walk_spectrum<double>({3, 0.7, 0.5}), invalid_argument_error);
        CHECK_THROWS_AS(walk_spectrum<double>({3, -0.1, 0.5}), invalid_argument_error);
    }
}

TEST_CASE("gap is negative for all positive rates") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> unif(0.05, 4.0);
    for (int trial = 0; trial < 40; ++trial) {
        const birth_death_params<double> p{2 + trial % 14, unif(rng), unif(rng)};
        const auto rep = queue_spectrum(p);
        CHECK(rep.gap < 0.0);
        // arithmetic-geometric bound
        const double bound = -std::pow(std::sqrt(p.lambda) - std::sqrt(p.mu), 2) -
                             2.0 * std::sqrt(p.lambda * p.mu) * (1.0 - std::cos(M_PI / p.n));
        CHECK(rep.gap <= bound + 1e-12);
    }
}

TEST_CASE("eigen-expansion round trip") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto rep = queue_spectrum<double>({9, 0.7, 1.3});
    std::vector<double> p(9);
    double sum = 0.0;
    for (auto& v : p) sum += (v = unif(rng));
    for (auto& v : p) v /= sum;
    const auto coeffs = expand_in_eigenbasis(rep, p);
    const auto back = reconstruct_from_eigenbasis(rep, coeffs);
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(back[i] == Catch::Approx(p[i]).margin(1e-10));
}

TEST_CASE("transient evolution of the two-state chain matches the closed form") {
    const auto rep = queue_spectrum<double>({2, 1.0, 1.0});
    const std::vector<double> p0{1.0, 0.0};
    for (double t : {0.0, 0.1, 0.5, 2.0}) {
        const auto pt = transient_evolve(rep, p0, t);
        CHECK(pt[0] == Catch::Approx(0.5 + 0.5 * std::exp(-2.0 * t)).margin(1e-12));
        CHECK(pt[1] == Catch::Approx(0.5 - 0.5 * std::exp(-2.0 * t)).margin(1e-12));
    }
}

TEST_CASE("transient evolution reaches the steady state") {
    const auto rep = queue_spectrum<double>({5, 0.6, 1.1});
    std::vector<double> p0(5, 0.0);
    p0[4] = 1.0;
    const double t = 1000.0 / std::abs(rep.gap);
    const auto pt = transient_evolve(rep, p0, t);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(pt[i] == Catch::Approx(rep.steady_state[i]).margin(1e-9));
}

TEST_CASE("transient evolution validates its inputs") {
    const auto rep = queue_spectrum<double>({3, 1.0, 1.0});
    CHECK_THROWS_AS(transient_evolve(rep, std::vector<double>{0.5, 0.1, 0.1}, 1.0),
                    invalid_argument_error);
    CHECK_THROWS_AS(transient_evolve(rep, std::vector<double>{0.5, 0.4, 0.1}, -1.0),
                    invalid_argument_error);
    const auto chain = walk_spectrum<double>({3, 0.2, 0.3});
    CHECK_THROWS_AS(transient_evolve(chain, std::vector<double>{0.5, 0.4, 0.1}, 0.5),
                    invalid_argument_error);
}

TEST_CASE("generator evolution decays at the spectral gap rate") {
    const auto rep = queue_spectrum<double>({6, 0.9, 1.4});
    std::vector<double> p0(6, 0.0);
    p0[0] = 1.0;
    const double gap = rep.gap;
    const double t0 = 6.0 / std::abs(gap), dt = 1.0 / std::abs(gap);
    const auto d1 = transient_evolve(rep, p0, t0);
    const auto d2 = transient_evolve(rep, p0, t0 + dt);
    auto dist = [&](const std::vector<double>& p) {
        std::vector<double> d(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) d[i] = p[i] - rep.steady_state[i];
        return norm2(d);
    };
    const double slope = (std::log(dist(d2)) - std::log(dist(d1))) / dt;
    CHECK(slope == Catch::Approx(gap).epsilon(0.01));
}
