#ifndef METROKIT_STATES_HPP
#define METROKIT_STATES_HPP

#include <Eigen/Eigenvalues>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "metrokit/errors.hpp"
#include "metrokit/linalg.hpp"
#include "metrokit/operators.hpp"
#include "metrokit/su2.hpp"

namespace metrokit {

// Pure state vector or density matrix with normalization checked on entry.
class QuantumState {
public:
    enum class Kind { pure, mixed };

    static QuantumState pure(Vec amplitudes) {
        double nrm = amplitudes.norm();
        if (std::abs(nrm - 1.0) > 1e-12) {
            if (nrm < 1e-12) throw Error("cannot normalize a zero state vector");
            amplitudes /= nrm;
        }
        return QuantumState(std::move(amplitudes));
    }

    static QuantumState mixed(Mat rho, bool validate_spectrum = true) {
        double scale = std::max(1.0, spectral_radius_bound(rho));
        if (!is_hermitian(rho, 1e-10 * scale)) throw Error("density matrix is not Hermitian");
        rho = (rho + Mat(rho.adjoint())) / 2.0;
        if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-12)
            throw Error("density matrix trace is not one");
        if (validate_spectrum) {
            Eigen::SelfAdjointEigenSolver<Mat> solver(rho, Eigen::EigenvaluesOnly);
            if (solver.eigenvalues().minCoeff() < -1e-10)
                throw Error("density matrix has a negative eigenvalue");
        }
        return QuantumState(std::move(rho));
    }

    Kind kind() const { return kind_; }
    bool is_pure() const { return kind_ == Kind::pure; }
    Index dim() const { return is_pure() ? vec_.size() : rho_.rows(); }

    const Vec& amplitudes() const {
        if (!is_pure()) throw Error("state is not pure");
        return vec_;
    }
    const Mat& density_matrix() const {
        if (is_pure()) throw Error("pure state stores amplitudes; use to_density()");
        return rho_;
    }
    Mat to_density() const { return is_pure() ? Mat(vec_ * vec_.adjoint()) : rho_; }

private:
    explicit QuantumState(Vec v) : kind_(Kind::pure), vec_(std::move(v)) {}
    explicit QuantumState(Mat r) : kind_(Kind::mixed), rho_(std::move(r)) {}
    Kind kind_;
    Vec vec_;
    Mat rho_;
};

// <H^2> - <H>^2, clamped at zero against floating-point drift.
inline double variance(const QuantumState& state, const HermitianOperator& h) {
    if (state.dim() != h.dim()) throw DimensionMismatch("state and operator dimensions differ");
    double e1, e2;
    if (state.is_pure()) {
        const Vec& v = state.amplitudes();
        Vec hv = h.matrix() * v;
        e1 = std::real(v.dot(hv));
        e2 = std::real(hv.dot(hv));
    } else {
        const Mat& rho = state.density_matrix();
        e1 = std::real((h.matrix() * rho).trace());
        e2 = std::real((h.matrix() * h.matrix() * rho).trace());
    }
    double var = e2 - e1 * e1;
    if (var < 0 && var > -1e-10 * std::max(1.0, e2)) var = 0;
    return var;
}

// Lowest-eigenvalue eigenstate. Degenerate ground spaces resolve to the
// canonical first basis vector of the eigenspace (deterministic and
// independent of the eigensolver's internal gauge).
inline QuantumState ground_state(const HermitianOperator& op, double degeneracy_tol = 1e-9) {
    auto spec = spectral_decompose(op, degeneracy_tol);
    Index off = spec.level_offset(spec.level_count() - 1);
    return QuantumState::pure(spec.basis().col(off));
}

// Normalized projection of `direction` onto the lowest eigenspace; the
// explicit-superposition selector for degenerate ground spaces.
inline QuantumState ground_state_toward(const HermitianOperator& op, const Vec& direction,
                                        double degeneracy_tol = 1e-9) {
    if (direction.size() != op.dim()) throw DimensionMismatch("selector dimension differs");
    auto spec = spectral_decompose(op, degeneracy_tol);
    Index off = spec.level_offset(spec.level_count() - 1);
    Index mult = spec.levels().back().multiplicity;
    Mat q = spec.basis().middleCols(off, mult);
    Vec proj = q * (q.adjoint() * direction);
    if (proj.norm() < 1e-12)
        throw AnnihilatedState("selector direction has no overlap with the ground space");
    return QuantumState::pure(std::move(proj));
}

// cos(a/2)|0101...> + sin(a/2)|1010...>, a ground state of the
// nearest-neighbor chain for every mixing angle.
inline QuantumState nn_ground_superposition(int n, double alpha) {
    if (n < 2) throw SizeTooSmall("nn_ground_superposition needs n >= 2");
    const Index dim = Index(1) << n;
    std::uint64_t even = 0, odd = 0;  // 0101... and 1010...
    for (int q = 1; q <= n; ++q) {
        if (q % 2 == 0) even |= std::uint64_t(1) << (n - q);
        else odd |= std::uint64_t(1) << (n - q);
    }
    Vec v = Vec::Zero(dim);
    v(even) = std::cos(alpha / 2.0);
    v(odd) = std::sin(alpha / 2.0);
    return QuantumState::pure(std::move(v));
}

// Upper-midpoint excitation count ceil((2 j_max + 1)/2); lands one step
// above the multiplet middle when 2 j_max is even.
inline long ceil_midpoint_k(double j_max) { return long(std::ceil((2.0 * j_max + 1.0) / 2.0)); }

// Default excitation count: the integer in [0, 2 j_max] closest to j_max,
// ties resolved downward, so the raised state's ladder eigenvalue
// m = c (k - j_max) is as small as possible.
inline long default_pg_k(double j_max) {
    long k = long(std::ceil(j_max - 0.5));
    if (k < 0) k = 0;
    return k;
}

// Normalized J_+^k |psi_min> with J_+ the raising operator of `ladder_axis`
// and |psi_min> the ground state of that generator (or an explicit override).
inline QuantumState pretty_good_state(const Su2Generators& gens, int ladder_axis,
                                      std::optional<long> k = std::nullopt,
                                      std::optional<Vec> ground = std::nullopt) {
    if (ladder_axis != 2 && ladder_axis != 3) throw Error("ladder axis must be 2 or 3");
    Vec v = ground ? *ground : ground_state(gens.axis(ladder_axis)).amplitudes();
    long reps = k ? *k : default_pg_k(gens.j_max);
    if (reps < 0) throw KOutOfRange("excitation count must be nonnegative");

    LadderPair ladder = ladder_pair(gens, ladder_axis);
    for (long i = 0; i < reps; ++i) {
        v = ladder.raise_op * v;
        double nrm = v.norm();
        if (nrm < 1e-12) {
            std::ostringstream msg;
            msg << "raising annihilated the state at step " << i + 1 << " of " << reps;
            throw AnnihilatedState(msg.str());
        }
        v /= nrm;
    }
    return QuantumState::pure(std::move(v));
}

// (|Lambda_min> + e^{i phi} |Lambda_max>)/sqrt(2) with deterministic
// representatives of the extremal eigenspaces. For the nearest-neighbor chain
// the explicit pair |00...0>, |1010...> is used.
inline QuantumState reference_optimal(const HermitianOperator& h, double phi = 0.0,
                                      std::optional<HamiltonianKind> kind = std::nullopt) {
    const Index dim = h.dim();
    Vec v = Vec::Zero(dim);
    if (kind && *kind == HamiltonianKind::nearest_neighbor) {
        int n = h.qubits();
        std::uint64_t odd = 0;
        for (int q = 1; q <= n; q += 2) odd |= std::uint64_t(1) << (n - q);
        v(odd) = std::polar(1.0 / std::sqrt(2.0), 0.0);   // minimal eigenvalue rep
        v(0) = std::polar(1.0 / std::sqrt(2.0), phi);     // maximal eigenvalue rep
        return QuantumState::pure(std::move(v));
    }
    auto spec = spectral_decompose(h);
    Vec top = spec.basis().col(0);
    Vec bottom = spec.basis().col(spec.level_offset(spec.level_count() - 1));
    v = (bottom + std::polar(1.0, phi) * top) / std::sqrt(2.0);
    return QuantumState::pure(std::move(v));
}

inline QuantumState reference_ghz(int n) {
    if (n < 1) throw SizeTooSmall("GHZ needs n >= 1");
    const Index dim = Index(1) << n;
    Vec v = Vec::Zero(dim);
    v(0) = v(dim - 1) = 1.0 / std::sqrt(2.0);
    return QuantumState::pure(std::move(v));
}

inline QuantumState reference_product_plus(int n) {
    if (n < 1) throw SizeTooSmall("product state needs n >= 1");
    const Index dim = Index(1) << n;
    return QuantumState::pure(Vec::Constant(dim, 1.0 / std::sqrt(double(dim))));
}

// Permutation-symmetric state with k qubits excited (-1 eigenstate of the
// chosen single-qubit Pauli) and n-k in the +1 eigenstate.
inline QuantumState reference_dicke(int n, int k, char basis = 'x') {
    if (n < 1) throw SizeTooSmall("Dicke state needs n >= 1");
    if (k < 0 || k > n) throw KOutOfRange("Dicke excitation count must lie in [0, n]");
    Mat rot(2, 2);
    switch (basis) {
        case 'z': rot = Mat::Identity(2, 2); break;
        case 'x': rot << 1, 1, 1, -1; rot /= std::sqrt(2.0); break;
        case 'y': rot << 1, 1, kI, -kI; rot /= std::sqrt(2.0); break;
        default: throw UnknownBasis(std::string("unsupported Dicke basis: ") + basis);
    }
    const Index dim = Index(1) << n;
    Vec v = Vec::Zero(dim);
    for (std::uint64_t x = 0; x < std::uint64_t(dim); ++x)
        if (hamming_weight(x) == k) v(x) = 1.0;
    v.normalize();
    if (basis == 'z') return QuantumState::pure(std::move(v));
    Mat u = Mat::Identity(1, 1);
    for (int i = 0; i < n; ++i) u = kron(u, rot);
    return QuantumState::pure(u * v);
}

// Closed-form variance of the k-times-raised extremal state:
// (c^2/2) (j_max (j_max + 1) - (k - j_max)^2).
inline double pg_variance_closed_form(double j_max, long k, double c) {
    if (k < 0 || double(k) > 2.0 * j_max + 1e-9)
        throw KOutOfRange("excitation count outside [0, 2 j_max]");
    double m = double(k) - j_max;
    return c * c / 2.0 * (j_max * (j_max + 1.0) - m * m);
}

// |<a|b>|, the global-phase-insensitive overlap used for state comparisons.
inline double overlap(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("overlap dimensions differ");
    return std::abs(a.dot(b));
}

} // namespace metrokit

#endif
