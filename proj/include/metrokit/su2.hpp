#ifndef METROKIT_SU2_HPP
#define METROKIT_SU2_HPP

#include <Eigen/Eigenvalues>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "metrokit/errors.hpp"
#include "metrokit/linalg.hpp"
#include "metrokit/operators.hpp"

namespace metrokit {

// The triple (S1, S2, S3) with [S_k, S_l] = i c eps_{klm} S_m, together with
// the eigenbasis of S1 used for the block construction.
struct Su2Generators {
    HermitianOperator s1, s2, s3;
    double c = 0.0;
    Mat basis;      // columns: eigenbasis of s1, levels descending
    double j_max = 0.0;

    const HermitianOperator& axis(int k) const {
        switch (k) {
            case 1: return s1;
            case 2: return s2;
            case 3: return s3;
        }
        throw Error("generator axis must be 1, 2 or 3");
    }
};

struct LadderPair {
    Mat raise_op, lower_op;
    int axis = 3;
    double c = 0.0;
};

struct MultiplicityReport {
    bool ok = true;
    std::optional<std::size_t> failing_index;  // 1-based level index k
    std::string detail;
};

// Necessary conditions on the level multiplicities: d_{k+1} >= d_k for
// k <= floor(n/2) and d_k = d_{n+1-k}.
inline MultiplicityReport check_multiplicity_conditions(const SpectralDecomposition& spec) {
    const auto& levels = spec.levels();
    const std::size_t n = levels.size();
    MultiplicityReport rep;
    for (std::size_t k = 0; k + 1 < n && k + 1 <= n / 2; ++k) {
        if (levels[k + 1].multiplicity < levels[k].multiplicity) {
            rep.ok = false;
            rep.failing_index = k + 1;
            std::ostringstream msg;
            msg << "multiplicity decreases from level " << k + 1 << " (d=" << levels[k].multiplicity
                << ") to level " << k + 2 << " (d=" << levels[k + 1].multiplicity << ")";
            rep.detail = msg.str();
            return rep;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (levels[k].multiplicity != levels[n - 1 - k].multiplicity) {
            rep.ok = false;
            rep.failing_index = k + 1;
            std::ostringstream msg;
            msg << "multiplicities not mirror-symmetric at level " << k + 1;
            rep.detail = msg.str();
            return rep;
        }
    }
    return rep;
}

namespace detail {

// Rectangular d_{k+1} x d_k block sitting between levels k+1 and k (1-based k).
// Diagonal slot m carries sqrt(c/2) * sqrt(sum_{i=j(m)}^{k} lambda_i) where
// j(m) is the smallest level index with m <= d_j.
inline Mat s3_block(const std::vector<SpectralLevel>& levels, const RVec& centered,
                    std::size_t k, double c, double tol) {
    const Index rows = levels[k].multiplicity;      // d_{k+1}
    const Index cols = levels[k - 1].multiplicity;  // d_k

    Mat block = Mat::Zero(rows, cols);
    const Index slots = std::min(rows, cols);
    for (Index m = 1; m <= slots; ++m) {
        std::size_t j = 0;
        while (j < k && levels[j].multiplicity < m) ++j;
        if (j >= k) break;  // slot past the bucket pattern carries zero
        double sum = 0.0;
        for (std::size_t i = j; i < k; ++i) sum += centered(Index(i));
        if (sum < -tol) {
            std::ostringstream msg;
            msg << "negative partial sum " << sum << " at block " << k << ", slot " << m
                << " (spectrum not centered or malformed)";
            throw NegativePartialSum(msg.str());
        }
        block(m - 1, m - 1) = std::sqrt(c / 2.0) * std::sqrt(std::max(sum, 0.0));
    }
    return block;
}

inline double jmax_from_casimir_eigenvalue(double mu, double c) {
    double disc = 1.0 + 4.0 * mu / (c * c);
    if (disc < 0) disc = 0;  // numerical noise
    return (-1.0 + std::sqrt(disc)) / 2.0;
}

} // namespace detail

// Builds the companion generators S2, S3 completing S1 (given through its
// gap-checked spectral decomposition) into su(2). S3 has nonzero blocks only
// adjacent to the diagonal in the eigenbasis of S1, S2 blocks are -i times
// the S3 blocks, and both are returned in the original basis.
inline Su2Generators construct_generators(const SpectralDecomposition& spec, double tol = 1e-9) {
    const auto& levels = spec.levels();
    const std::size_t n = levels.size();
    const Index dim = spec.dim();
    if (n < 2) throw ConditionViolation("need at least two levels to build su(2)");

    double c = spec.gap() ? *spec.gap() : check_homogeneous_gap(spec, tol);
    auto mult = check_multiplicity_conditions(spec);
    if (!mult.ok) throw ConditionViolation(mult.detail);

    // center the spectrum so that -lambda_k = lambda_{n-k+1}
    double mid = (levels.front().eigenvalue + levels.back().eigenvalue) / 2.0;
    RVec centered(static_cast<Index>(n));
    for (std::size_t k = 0; k < n; ++k) centered(Index(k)) = levels[k].eigenvalue - mid;

    double abstol = tol * std::max(spec.spectral_radius(), 1.0);

    Mat s3_level = Mat::Zero(dim, dim);
    Mat s2_level = Mat::Zero(dim, dim);
    Index off_k = 0;
    for (std::size_t k = 1; k < n; ++k) {
        Index off_k1 = off_k + levels[k - 1].multiplicity;
        Mat block = detail::s3_block(levels, centered, k, c, abstol);
        s3_level.block(off_k1, off_k, block.rows(), block.cols()) = block;
        s3_level.block(off_k, off_k1, block.cols(), block.rows()) = block.adjoint();
        s2_level.block(off_k1, off_k, block.rows(), block.cols()) = -kI * block;
        s2_level.block(off_k, off_k1, block.cols(), block.rows()) = (-kI * block).adjoint();
        off_k = off_k1;
    }

    Mat s1_level = Mat::Zero(dim, dim);
    Index off = 0;
    for (std::size_t k = 0; k < n; ++k) {
        for (Index m = 0; m < levels[k].multiplicity; ++m) s1_level(off + m, off + m) = centered(Index(k));
        off += levels[k].multiplicity;
    }

    const Mat& b = spec.basis();
    Su2Generators gens{HermitianOperator::from_matrix(b * s1_level * b.adjoint()),
                       HermitianOperator::from_matrix(b * s2_level * b.adjoint()),
                       HermitianOperator::from_matrix(b * s3_level * b.adjoint()),
                       c, b, centered(0) / c};
    return gens;
}

// Direct sum of per-block constructions; all blocks must share the gap c.
inline Su2Generators construct_generators_blockdiag(const std::vector<SpectralDecomposition>& blocks,
                                                    double tol = 1e-9) {
    if (blocks.empty()) throw ConditionViolation("no blocks given");
    std::vector<Su2Generators> parts;
    parts.reserve(blocks.size());
    Index dim = 0;
    for (const auto& blk : blocks) {
        parts.push_back(construct_generators(blk, tol));
        dim += blk.dim();
    }
    double c = parts.front().c;
    for (const auto& p : parts)
        if (std::abs(p.c - c) > tol * std::max(1.0, c))
            throw MixedStructureConstants("blocks disagree on the structure constant");

    Mat s1 = Mat::Zero(dim, dim), s2 = Mat::Zero(dim, dim), s3 = Mat::Zero(dim, dim),
        basis = Mat::Zero(dim, dim);
    double j_max = 0.0;
    Index off = 0;
    for (const auto& p : parts) {
        Index d = p.s1.dim();
        s1.block(off, off, d, d) = p.s1.matrix();
        s2.block(off, off, d, d) = p.s2.matrix();
        s3.block(off, off, d, d) = p.s3.matrix();
        basis.block(off, off, d, d) = p.basis;
        j_max = std::max(j_max, p.j_max);
        off += d;
    }
    return Su2Generators{HermitianOperator::from_matrix(std::move(s1)),
                         HermitianOperator::from_matrix(std::move(s2)),
                         HermitianOperator::from_matrix(std::move(s3)), c, std::move(basis), j_max};
}

// J^(k)_+- = (S_l +- i S_m)/sqrt(2) with (k,l,m) a cyclic permutation of (1,2,3).
inline LadderPair ladder_pair(const Su2Generators& gens, int axis) {
    int l = axis % 3 + 1;
    int m = l % 3 + 1;
    Mat raise = (gens.axis(l).matrix() + kI * gens.axis(m).matrix()) / std::sqrt(2.0);
    return LadderPair{raise, raise.adjoint(), axis, gens.c};
}

struct Su2Report {
    double commutator_residual[3] = {0, 0, 0};  // [S1,S2]-icS3, [S2,S3]-icS1, [S3,S1]-icS2
    double max_commutator_residual = 0.0;
    double casimir_residual = 0.0;  // max_k ||[J^2, S_k]||
    double j_max = 0.0;
    bool degenerate = false;  // J^2 spectral radius indistinguishable from zero

    bool within(double tol) const {
        return max_commutator_residual <= tol && casimir_residual <= tol;
    }
};

inline Su2Report verify_su2(const Su2Generators& gens, double tol = 1e-9) {
    const Mat& a = gens.s1.matrix();
    const Mat& b = gens.s2.matrix();
    const Mat& c = gens.s3.matrix();
    const Cplx ic = kI * gens.c;

    Su2Report rep;
    rep.commutator_residual[0] = frobenius(commutator(a, b) - ic * c);
    rep.commutator_residual[1] = frobenius(commutator(b, c) - ic * a);
    rep.commutator_residual[2] = frobenius(commutator(c, a) - ic * b);
    rep.max_commutator_residual =
        std::max({rep.commutator_residual[0], rep.commutator_residual[1], rep.commutator_residual[2]});

    Mat j2 = a * a + b * b + c * c;
    rep.casimir_residual = std::max(
        {frobenius(commutator(j2, a)), frobenius(commutator(j2, b)), frobenius(commutator(j2, c))});

    Eigen::SelfAdjointEigenSolver<Mat> solver(j2, Eigen::EigenvaluesOnly);
    double mu = solver.eigenvalues().maxCoeff();
    rep.degenerate = mu <= tol * std::max(1.0, double(a.rows()));
    rep.j_max = rep.degenerate || gens.c == 0.0 ? 0.0
                                                : detail::jmax_from_casimir_eigenvalue(mu, gens.c);
    return rep;
}

// Companion generators for the nearest-neighbor chain built from Pauli words
// instead of the spectral construction:
//   S2 =  sum_j sigma_x^{j-1} (x) sigma_y (x) sigma_z (x) 1...
//   S3 = -sum_j sigma_x^{j}   (x) 1...
// The sign of S3 is fixed so that the triple closes with c > 0, which makes
// |+>^n the ground state of S3. The structure constant is determined
// empirically from [S2, S3] = i c S1.
inline Su2Generators nn_alternative_generators(int n, double tol = 1e-9) {
    if (n < 2) throw SizeTooSmall("nn_alternative_generators needs n >= 2");
    const Index dim = Index(1) << n;

    Mat s1 = build_hamiltonian(HamiltonianKind::nearest_neighbor, n).matrix();
    Mat s2 = Mat::Zero(dim, dim);
    Mat s3 = Mat::Zero(dim, dim);
    for (int j = 1; j <= n - 1; ++j) {
        std::string w2(n, 'I'), w3(n, 'I');
        for (int i = 1; i < j; ++i) w2[i - 1] = 'X';
        w2[j - 1] = 'Y';
        w2[j] = 'Z';
        for (int i = 1; i <= j; ++i) w3[i - 1] = 'X';
        s2 += PauliString(n, w2).matrix();
        s3 -= PauliString(n, w3).matrix();
    }

    // c from the leading matrix element of -i[S2,S3] against S1
    Mat lhs = -kI * commutator(s2, s3);
    double c = 0.0;
    double best = -1.0;
    for (Index i = 0; i < dim; ++i) {
        if (std::abs(s1(i, i)) > best) {
            best = std::abs(s1(i, i));
            c = std::real(lhs(i, i)) / std::real(s1(i, i));
        }
    }

    Su2Generators gens{HermitianOperator::from_matrix(std::move(s1)),
                       HermitianOperator::from_matrix(std::move(s2)),
                       HermitianOperator::from_matrix(std::move(s3)),
                       c, Mat::Identity(dim, dim), (n - 1) / 2.0};
    auto rep = verify_su2(gens, tol);
    if (!rep.within(tol * double(dim))) {
        std::ostringstream msg;
        msg << "alternative generators fail the su(2) relations: residual "
            << rep.max_commutator_residual;
        throw Su2ViolationDetected(msg.str());
    }
    return gens;
}

// Collective spin generators {S_z, S_x, S_y}/2 with c = 1; the textbook su(2)
// triple whose S1 is the local Hamiltonian.
inline Su2Generators collective_generators(int n) {
    if (n < 1) throw SizeTooSmall("collective_generators needs n >= 1");
    const Index dim = Index(1) << n;
    Mat sx = Mat::Zero(dim, dim), sy = Mat::Zero(dim, dim), sz = Mat::Zero(dim, dim);
    for (int q = 1; q <= n; ++q) {
        for (std::uint64_t x = 0; x < std::uint64_t(dim); ++x) {
            std::uint64_t y = x ^ (std::uint64_t(1) << (n - q));
            sx(y, x) += 0.5;
            sy(y, x) += kI * 0.5 * ((qubit_bit(x, q, n) == 0) ? 1.0 : -1.0);
            sz(x, x) += 0.5 * ((qubit_bit(x, q, n) == 0) ? 1.0 : -1.0);
        }
    }
    return Su2Generators{HermitianOperator::from_matrix(std::move(sz)),
                         HermitianOperator::from_matrix(std::move(sx)),
                         HermitianOperator::from_matrix(std::move(sy)),
                         1.0, Mat::Identity(dim, dim), n / 2.0};
}

} // namespace metrokit

#endif
