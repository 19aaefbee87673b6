#ifndef METROKIT_QFI_HPP
#define METROKIT_QFI_HPP

#include <Eigen/Eigenvalues>
#include <cmath>

#include "metrokit/channels.hpp"
#include "metrokit/errors.hpp"
#include "metrokit/linalg.hpp"
#include "metrokit/operators.hpp"
#include "metrokit/states.hpp"

namespace metrokit {

struct QfiResult {
    enum class Method { pure_variance, sld_general, dephased_spectral };
    double value = 0.0;
    Method method = Method::pure_variance;
};

// Noiseless pure-state value 4 (Delta H)^2.
inline QfiResult qfi_pure(const QuantumState& state, const HermitianOperator& h) {
    if (!state.is_pure()) throw MixedInput("qfi_pure needs a pure state");
    return {4.0 * variance(state, h), QfiResult::Method::pure_variance};
}

// Symmetric logarithmic derivative L solving drho = (L rho + rho L)/2:
// L = 2 sum_{a,b: la+lb > eps} <a|drho|b> / (la + lb) |a><b|.
inline Mat sld(const Mat& rho, const Mat& drho, double eps_rel = 1e-12) {
    double scale = std::max(1.0, spectral_radius_bound(drho));
    if (!is_hermitian(drho, 1e-9 * scale))
        throw NonHermitianDerivative("drho is not Hermitian");
    if (std::abs(drho.trace()) > 1e-9 * scale * double(rho.rows()))
        throw NonHermitianDerivative("drho is not traceless");

    Eigen::SelfAdjointEigenSolver<Mat> solver(rho);
    const RVec& lam = solver.eigenvalues();
    const Mat& v = solver.eigenvectors();
    const double eps = eps_rel * std::max(std::abs(rho.trace()), 1.0);

    Mat d = v.adjoint() * drho * v;
    Mat l_eig = Mat::Zero(rho.rows(), rho.cols());
    for (Index a = 0; a < rho.rows(); ++a)
        for (Index b = 0; b < rho.cols(); ++b) {
            double denom = lam(a) + lam(b);
            l_eig(a, b) = denom > eps ? 2.0 * d(a, b) / denom : Cplx(0.0);
        }
    return v * l_eig * v.adjoint();
}

// General mixed-state value Tr[L rho L] with rho(theta) = U(theta) E(rho) U(theta)^dag
// and the analytic derivative drho = i [H, rho(theta)].
inline QfiResult qfi_mixed_sld(const QuantumState& state, const HermitianOperator& h,
                               const DephasingChannel& ch, double theta = 0.0) {
    if (state.dim() != h.dim() || state.dim() != ch.dim())
        throw DimensionMismatch("state, Hamiltonian and channel dimensions differ");
    Mat rho = apply_dephasing_matrix(state.to_density(), ch);
    if (theta != 0.0) rho = evolve_unitary(QuantumState::mixed(rho, false), h, theta).to_density();
    Mat drho = kI * commutator(h.matrix(), rho);
    Mat l = sld(rho, drho);
    double f = std::real((l * rho * l).trace());
    if (f < 0 && f > -1e-10) f = 0;
    return {f, QfiResult::Method::sld_general};
}

// Spectral form for commuting dephasing noise:
// F = 4 sum_{i<j} (li - lj)^2 / (li + lj) |<psi_i|H|psi_j>|^2
// over the eigenpairs of E(|psi><psi|).
inline QfiResult qfi_dephased_spectral(const QuantumState& state, const HermitianOperator& h,
                                       const DephasingChannel& ch) {
    if (!state.is_pure()) throw MixedInput("qfi_dephased_spectral takes the pure input state");
    if (state.dim() != h.dim() || state.dim() != ch.dim())
        throw DimensionMismatch("state, Hamiltonian and channel dimensions differ");
    // z-dephasing commutes with e^{i theta H} iff H is diagonal in the z basis
    if (max_off_diagonal(h.matrix()) > 1e-10 * spectral_radius_bound(h.matrix()))
        throw NonCommutingNoise("Hamiltonian does not commute with z-dephasing");

    Mat rho = apply_dephasing_matrix(state.to_density(), ch);
    Eigen::SelfAdjointEigenSolver<Mat> solver(rho);
    const RVec& lam = solver.eigenvalues();
    const Mat& v = solver.eigenvectors();
    const double eps = 1e-12;

    Mat hij = v.adjoint() * h.matrix() * v;
    double f = 0.0;
    for (Index i = 0; i < rho.rows(); ++i)
        for (Index j = i + 1; j < rho.rows(); ++j) {
            double denom = lam(i) + lam(j);
            if (denom <= eps) continue;
            double diff = lam(i) - lam(j);
            f += diff * diff / denom * std::norm(hij(i, j));
        }
    return {4.0 * f, QfiResult::Method::dephased_spectral};
}

} // namespace metrokit

#endif
