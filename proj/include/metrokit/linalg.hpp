#ifndef METROKIT_LINALG_HPP
#define METROKIT_LINALG_HPP

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "metrokit/errors.hpp"

namespace metrokit {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Cplx kI{0.0, 1.0};

inline bool is_power_of_two(Index d) {
    return d > 0 && std::has_single_bit(static_cast<std::uint64_t>(d));
}

inline int log2_dim(Index d) {
    return std::countr_zero(static_cast<std::uint64_t>(d));
}

inline int hamming_weight(std::uint64_t x) { return std::popcount(x); }

// Qubit 1 is the most significant bit of the computational-basis index.
inline int qubit_bit(std::uint64_t index, int qubit, int n) {
    return static_cast<int>((index >> (n - qubit)) & 1u);
}

inline double spectral_radius_bound(const Mat& m) {
    // infinity norm, an upper bound on the spectral radius of a Hermitian matrix
    double r = m.cwiseAbs().rowwise().sum().maxCoeff();
    return r > 0 ? r : 1.0;
}

inline bool is_hermitian(const Mat& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline double max_off_diagonal(const Mat& m) {
    double r = 0.0;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (i != j) r = std::max(r, std::abs(m(i, j)));
    return r;
}

inline Mat pauli(char letter) {
    Mat m(2, 2);
    switch (letter) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, Cplx(0, -1), Cplx(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw Error(std::string("unknown Pauli letter: ") + letter);
    }
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// A acting on qubit q (1-based) of an n-qubit register.
inline Mat op_on_qubit(const Mat& a, int q, int n) {
    Mat left = Mat::Identity(Index(1) << (q - 1), Index(1) << (q - 1));
    Mat right = Mat::Identity(Index(1) << (n - q), Index(1) << (n - q));
    return kron(kron(left, a), right);
}

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

inline double frobenius(const Mat& m) { return m.norm(); }

// Canonical orthonormal basis of the subspace spanned by the columns of q.
// Sweeps the coordinate axes in order and keeps the normalized residual
// projection of each axis; the result depends only on the subspace, not on
// the particular columns supplied. Component i of the vector accepted at
// axis i is real and positive by construction, which fixes all phases.
inline Mat canonical_subspace_basis(const Mat& q, double accept_tol = 1e-6) {
    const Index dim = q.rows();
    const Index want = q.cols();
    Mat out(dim, want);
    Index got = 0;
    for (Index i = 0; i < dim && got < want; ++i) {
        Vec w = q * (q.row(i).adjoint());  // P e_i
        for (Index u = 0; u < got; ++u) w -= out.col(u) * (out.col(u).adjoint() * w);
        double nrm = w.norm();
        if (nrm > accept_tol) out.col(got++) = w / nrm;
    }
    if (got != want) throw Error("canonical_subspace_basis: subspace sweep incomplete");
    return out;
}

inline std::uint64_t reverse_bits(std::uint64_t x, int n) {
    std::uint64_t r = 0;
    for (int i = 0; i < n; ++i) {
        r = (r << 1) | (x & 1u);
        x >>= 1;
    }
    return r;
}

} // namespace metrokit

#endif
