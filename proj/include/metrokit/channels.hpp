#ifndef METROKIT_CHANNELS_HPP
#define METROKIT_CHANNELS_HPP

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "metrokit/errors.hpp"
#include "metrokit/linalg.hpp"
#include "metrokit/operators.hpp"
#include "metrokit/states.hpp"

namespace metrokit {

// Local z-dephasing with per-qubit Kraus operators sqrt(p) 1, sqrt(1-p) sigma_z.
// The off-diagonal damping factor is 2p - 1; for exposure (gamma, t) the flip
// probability is p = (1 + e^{-gamma t})/2 so that 2p - 1 = e^{-gamma t} and
// t = 0 is the identity channel.
struct DephasingChannel {
    int n = 1;
    double p = 1.0;
    std::optional<double> gamma, t;

    static DephasingChannel with_probability(int n, double p) {
        if (n < 1) throw SizeTooSmall("channel needs n >= 1");
        if (p < 0.0 || p > 1.0) throw InvalidChannelParameter("flip probability outside [0, 1]");
        return DephasingChannel{n, p, std::nullopt, std::nullopt};
    }

    static DephasingChannel with_rate(int n, double gamma, double t) {
        if (n < 1) throw SizeTooSmall("channel needs n >= 1");
        if (gamma < 0.0 || t < 0.0)
            throw InvalidChannelParameter("dephasing rate and time must be nonnegative");
        return DephasingChannel{n, (1.0 + std::exp(-gamma * t)) / 2.0, gamma, t};
    }

    double damping() const { return 2.0 * p - 1.0; }       // e^{-gamma t}
    double q_squared() const { return 4.0 * p * (1.0 - p); }  // 1 - e^{-2 gamma t}
    Index dim() const { return Index(1) << n; }
};

struct KrausSet {
    std::vector<Mat> operators;
    std::vector<std::uint64_t> labels;

    double completeness_residual() const {
        if (operators.empty()) return 1.0;
        Index d = operators.front().rows();
        Mat sum = Mat::Zero(d, d);
        for (const auto& k : operators) sum += k.adjoint() * k;
        return (sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
    }
};

// The 2^n diagonal Kraus operators S_m = p^{(n-h(m))/2} (1-p)^{h(m)/2} Z^m.
inline KrausSet dephasing_kraus(const DephasingChannel& ch) {
    if (ch.n > 10)
        throw SizeTooLargeForExplicitKraus("explicit Kraus sets are kept to n <= 10");
    const Index dim = ch.dim();
    KrausSet out;
    out.operators.reserve(std::size_t(dim));
    out.labels.reserve(std::size_t(dim));
    for (std::uint64_t m = 0; m < std::uint64_t(dim); ++m) {
        int h = hamming_weight(m);
        double coeff = std::pow(ch.p, (ch.n - h) / 2.0) * std::pow(1.0 - ch.p, h / 2.0);
        Mat k = Mat::Zero(dim, dim);
        for (std::uint64_t x = 0; x < std::uint64_t(dim); ++x)
            k(x, x) = coeff * ((hamming_weight(m & x) % 2 == 0) ? 1.0 : -1.0);
        out.operators.push_back(std::move(k));
        out.labels.push_back(m);
    }
    return out;
}

// Elementwise fast path: rho_xy <- rho_xy (2p-1)^{h(x xor y)}; algebraically
// equal to the explicit Kraus sum.
inline Mat apply_dephasing_matrix(Mat rho, const DephasingChannel& ch) {
    if (rho.rows() != ch.dim()) throw DimensionMismatch("state and channel dimensions differ");
    const double eta = ch.damping();
    std::vector<double> pow_eta(std::size_t(ch.n) + 1, 1.0);
    for (int i = 1; i <= ch.n; ++i) pow_eta[std::size_t(i)] = pow_eta[std::size_t(i) - 1] * eta;
    for (Index x = 0; x < rho.rows(); ++x)
        for (Index y = 0; y < rho.cols(); ++y) {
            int h = hamming_weight(std::uint64_t(x) ^ std::uint64_t(y));
            if (h > 0) rho(x, y) *= pow_eta[std::size_t(h)];
        }
    return rho;
}

inline QuantumState apply_dephasing(const QuantumState& state, const DephasingChannel& ch) {
    return QuantumState::mixed(apply_dephasing_matrix(state.to_density(), ch), false);
}

inline QuantumState apply_channel_kraus(const QuantumState& state, const KrausSet& ks) {
    Mat rho = state.to_density();
    if (ks.operators.empty() || ks.operators.front().rows() != rho.rows())
        throw DimensionMismatch("Kraus set and state dimensions differ");
    if (ks.completeness_residual() > 1e-10)
        throw IncompleteKrausSet("Kraus operators do not sum to the identity");
    Mat out = Mat::Zero(rho.rows(), rho.cols());
    for (const auto& k : ks.operators) out += k * rho * k.adjoint();
    return QuantumState::mixed(std::move(out), false);
}

// e^{i theta H} |psi> for pure states, e^{i theta H} rho e^{-i theta H} for mixed.
inline QuantumState evolve_unitary(const QuantumState& state, const HermitianOperator& h,
                                   double theta) {
    if (state.dim() != h.dim()) throw DimensionMismatch("state and Hamiltonian dimensions differ");
    Eigen::SelfAdjointEigenSolver<Mat> solver(h.matrix());
    Vec phases(h.dim());
    for (Index i = 0; i < h.dim(); ++i) phases(i) = std::polar(1.0, theta * solver.eigenvalues()(i));
    Mat u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    if (state.is_pure()) return QuantumState::pure(u * state.amplitudes());
    return QuantumState::mixed(u * state.density_matrix() * u.adjoint(), false);
}

} // namespace metrokit

#endif
