#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace metrokit;

TEST_CASE("channel parameterizations", "[channels]") {
    auto ch = DephasingChannel::with_rate(3, 0.5, 2.0);
    CHECK(ch.damping() == Approx(std::exp(-1.0)));
    CHECK(2.0 * ch.p - 1.0 == Approx(std::exp(-0.5 * 2.0)));
    CHECK(DephasingChannel::with_rate(2, 1.0, 0.0).p == Approx(1.0));  // identity at t = 0

    CHECK_THROWS_AS(DephasingChannel::with_probability(2, 1.5), InvalidChannelParameter);
    CHECK_THROWS_AS(DephasingChannel::with_rate(2, -1.0, 1.0), InvalidChannelParameter);
}

TEST_CASE("explicit Kraus sets", "[channels]") {
    SECTION("p = 1 is the identity channel") {
        auto ks = dephasing_kraus(DephasingChannel::with_probability(1, 1.0));
        REQUIRE(ks.operators.size() == 2);
        CHECK((ks.operators[0] - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(ks.operators[1].cwiseAbs().maxCoeff() < 1e-15);
    }

    SECTION("p = 1/2 fully dephases") {
        auto ch = DephasingChannel::with_probability(1, 0.5);
        auto plus = reference_product_plus(1);
        auto out = apply_channel_kraus(QuantumState::mixed(plus.to_density()), dephasing_kraus(ch));
        CHECK((out.density_matrix() - Mat::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
    }

    SECTION("completeness for n = 3") {
        auto ks = dephasing_kraus(DephasingChannel::with_probability(3, 0.8));
        REQUIRE(ks.operators.size() == 8);
        CHECK(ks.completeness_residual() < 1e-12);
    }

    CHECK_THROWS_AS(dephasing_kraus(DephasingChannel::with_probability(11, 0.9)),
                    SizeTooLargeForExplicitKraus);
}

TEST_CASE("fast elementwise application equals the Kraus sum", "[channels]") {
    std::mt19937 rng(42);
    for (int n = 1; n <= 4; ++n) {
        auto ch = DephasingChannel::with_probability(n, 0.7);
        Mat rho = mtest::random_density_matrix(Index(1) << n, rng);
        auto fast = apply_dephasing_matrix(rho, ch);
        auto kraus = apply_channel_kraus(QuantumState::mixed(rho), dephasing_kraus(ch));
        CHECK((fast - kraus.density_matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("dephasing preserves populations and scales coherences", "[channels]") {
    auto ch = DephasingChannel::with_probability(3, 0.75);  // 2p-1 = 1/2
    auto ghz = reference_ghz(3);
    auto out = apply_dephasing(ghz, ch);
    const Mat& rho = out.density_matrix();
    CHECK(std::abs(rho(0, 0) - Cplx(0.5)) < 1e-12);
    CHECK(std::abs(rho(7, 7) - Cplx(0.5)) < 1e-12);
    // h(000 xor 111) = 3, so the extreme coherence is scaled by (1/2)^3
    CHECK(std::abs(rho(0, 7) - Cplx(0.5 * 0.125)) < 1e-12);

    // diagonal states are untouched
    Mat diag = Mat::Zero(8, 8);
    diag(0, 0) = 0.25;
    diag(5, 5) = 0.75;
    CHECK((apply_dephasing_matrix(diag, ch) - diag).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("unitary evolution", "[channels]") {
    auto h = build_hamiltonian(HamiltonianKind::local, 2);
    auto ghz = reference_ghz(2);

    auto same = evolve_unitary(ghz, h, 0.0);
    CHECK(overlap(same.amplitudes(), ghz.amplitudes()) > 1.0 - 1e-12);

    // eigenstates pick up only a phase
    Vec eig = Vec::Zero(4);
    eig(1) = 1.0;
    auto evolved = evolve_unitary(QuantumState::pure(eig), h, 0.7);
    CHECK(overlap(evolved.amplitudes(), eig) > 1.0 - 1e-12);

    // a density matrix diagonal in the H eigenbasis is stationary
    Mat diag = Mat::Zero(4, 4);
    diag(0, 0) = 0.5;
    diag(3, 3) = 0.5;
    auto rho = evolve_unitary(QuantumState::mixed(diag), h, 1.3);
    CHECK((rho.density_matrix() - diag).cwiseAbs().maxCoeff() < 1e-12);

    // norm preservation on a generic state
    std::mt19937 rng(7);
    auto psi = QuantumState::pure(mtest::random_pure_state(4, rng));
    CHECK(evolve_unitary(psi, h, 0.37).amplitudes().norm() == Approx(1.0).margin(1e-12));
}

TEST_CASE("dephasing commutes with the diagonal signal", "[channels]") {
    std::mt19937 rng(3);
    for (auto kind : {HamiltonianKind::local, HamiltonianKind::nearest_neighbor}) {
        for (int n : {2, 4, 6}) {
            auto h = build_hamiltonian(kind, n);
            auto ch = DephasingChannel::with_probability(n, 0.8);
            Mat rho = mtest::random_density_matrix(Index(1) << n, rng);
            double theta = 0.43;

            Mat before = evolve_unitary(QuantumState::mixed(apply_dephasing_matrix(rho, ch)), h, theta)
                             .to_density();
            Mat after = apply_dephasing_matrix(
                evolve_unitary(QuantumState::mixed(rho), h, theta).to_density(), ch);
            INFO(to_string(kind) << " n=" << n);
            CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("dephasing composes as a semigroup", "[channels]") {
    std::mt19937 rng(11);
    Mat rho = mtest::random_density_matrix(8, rng);
    double gamma = 0.9, t1 = 0.4, t2 = 1.1;
    Mat stepwise = apply_dephasing_matrix(
        apply_dephasing_matrix(rho, DephasingChannel::with_rate(3, gamma, t1)),
        DephasingChannel::with_rate(3, gamma, t2));
    Mat oneshot = apply_dephasing_matrix(rho, DephasingChannel::with_rate(3, gamma, t1 + t2));
    CHECK((stepwise - oneshot).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("channel output stays positive", "[channels]") {
    std::mt19937 rng(23);
    for (int rep = 0; rep < 5; ++rep) {
        Mat rho = mtest::random_density_matrix(8, rng);
        auto out = apply_dephasing(QuantumState::mixed(rho), DephasingChannel::with_probability(3, 0.6));
        Eigen::SelfAdjointEigenSolver<Mat> solver(out.density_matrix(), Eigen::EigenvaluesOnly);
        CHECK(solver.eigenvalues().minCoeff() > -1e-10);
        CHECK(std::abs(out.density_matrix().trace().real() - 1.0) < 1e-10);
    }
}

TEST_CASE("incomplete Kraus sets are rejected", "[channels]") {
    KrausSet ks;
    ks.operators.push_back(0.5 * Mat::Identity(2, 2));
    ks.labels.push_back(0);
    CHECK_THROWS_AS(apply_channel_kraus(reference_ghz(1), ks), IncompleteKrausSet);
}
