#include <catch_amalgamated.hpp>

#include <cmath>

#include "tauspectra/secular.hpp"
#include "tauspectra/tau_matrix.hpp"

using namespace tauspectra;

TEST_CASE("secular residual vanishes at known roots") {
    // corners (1,1): the trig equation factors through sin(n theta)
    CHECK(secular(tau_params<double>{5, 1.0, 1.0}, branch_kind::trig, M_PI / 5) ==
          Catch::Approx(0.0).margin(1e-13));
    // corner product one: the hyperbolic root sits exactly at log eps
    CHECK(secular(tau_params<double>{4, 3.0, 1.0 / 3.0}, branch_kind::hyper_pos, std::log(3.0)) ==
          Catch::Approx(0.0).margin(1e-13));
    // free corners: roots at k pi / (n+1)
    CHECK(secular(tau_params<double>{3, 0.0, 0.0}, branch_kind::trig, M_PI / 4) ==
          Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("secular rejects boundary branches and out-of-domain theta") {
    const tau_params<double> p{4, 1.0, 1.0};
    CHECK_THROWS_AS(secular(p, branch_kind::boundary_plus, 0.0), invalid_argument_error);
    CHECK_THROWS_AS(secular(p, branch_kind::trig, 0.0), invalid_argument_error);
    CHECK_THROWS_AS(secular(p, branch_kind::trig, M_PI), invalid_argument_error);
    CHECK_THROWS_AS(secular(p, branch_kind::hyper_pos, -1.0), invalid_argument_error);
}

TEST_CASE("boundary membership discriminants") {
    CHECK(boundary_membership(tau_params<double>{6, 1.0, 1.0}, boundary_sign::plus) == 0.0);
    CHECK(boundary_membership(tau_params<double>{6, -1.0, -1.0}, boundary_sign::minus) == 0.0);
    CHECK(boundary_membership(tau_params<double>{6, 0.5, 2.0}, boundary_sign::plus) ==
          Catch::Approx(-3.0));
}

TEST_CASE("scaled hyperbolic residual survives large n theta") {
    const tau_params<double> p{2000, 3.0, 0.5};
    const double v = secular(p, branch_kind::hyper_pos, 1.5);
    CHECK(std::isfinite(v));
    // for large n theta the scaled residual approaches (e^t - s)(1 - p e^-t)
    const double t = 1.5;
    const double approx = std::exp(t) - (p.eps + p.phi) + p.eps * p.phi * std::exp(-t);
    CHECK(v == Catch::Approx(approx).epsilon(1e-10));
}

TEST_CASE("eigenvector formulas") {
    SECTION("boundary vector is constant when eps = 1") {
        const auto v = eigvec(tau_params<double>{4, 1.0, 1.0}, branch_kind::boundary_plus);
        for (double x : v) CHECK(x == Catch::Approx(0.5));
    }
    SECTION("free-corner trig vector is a pure sine sample") {
        const auto v = eigvec(tau_params<double>{3, 0.0, 0.0}, branch_kind::trig, M_PI / 4);
        const double raw[] = {std::sin(M_PI / 4), 1.0, std::sin(3 * M_PI / 4)};
        const double nrm = std::sqrt(raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]);
        for (int i = 0; i < 3; ++i) CHECK(v[i] == Catch::Approx(raw[i] / nrm).epsilon(1e-14));
    }
    SECTION("hyperbolic vector at log eps is geometric") {
        const auto v = eigvec(tau_params<double>{3, 2.0, 0.5}, branch_kind::hyper_pos, std::log(2.0));
        const double raw[] = {1.0, 0.5, 0.25};
        const double nrm = std::sqrt(1.0 + 0.25 + 0.0625);
        for (int i = 0; i < 3; ++i) CHECK(v[i] == Catch::Approx(raw[i] / nrm).epsilon(1e-13));
    }
    SECTION("trig branch requires theta") {
        CHECK_THROWS_AS(eigvec(tau_params<double>{4, 1.0, 1.0}, branch_kind::trig),
                        invalid_argument_error);
    }
    SECTION("a vanishing formula vector is reported, not returned") {
        CHECK_THROWS_AS(eigvec(tau_params<double>{3, 0.0, 0.0}, branch_kind::hyper_pos, 0.0),
                        invalid_argument_error);
    }
}

TEST_CASE("boundary equations are the sin-divided limits of the secular residual") {
    const double grid[] = {-1.5, -1.0, 0.0, 0.7, 1.0, 2.0};
    for (double eps : grid) {
        for (double phi : grid) {
            for (int n : {2, 5, 8}) {
                const tau_params<double> p{n, eps, phi};
                const double th0 = 1e-6;
                const double lim0 = secular(p, branch_kind::trig, th0) / std::sin(th0);
                CHECK(lim0 == Catch::Approx(boundary_membership(p, boundary_sign::plus))
                                  .margin(1e-4));
                const double th1 = M_PI - 1e-6;
                const double sign = n % 2 == 0 ? 1.0 : -1.0;
                const double lim1 = sign * secular(p, branch_kind::trig, th1) / std::sin(th1);
                CHECK(lim1 == Catch::Approx(boundary_membership(p, boundary_sign::minus))
                                  .margin(1e-4));
            }
        }
    }
}
