#ifndef METROKIT_OPERATORS_HPP
#define METROKIT_OPERATORS_HPP

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "metrokit/errors.hpp"
#include "metrokit/linalg.hpp"

namespace metrokit {

// Dense complex Hermitian operator on a 2^N-dimensional qubit register.
class HermitianOperator {
public:
    static HermitianOperator from_matrix(Mat m) {
        if (m.rows() != m.cols()) throw NonHermitianInput("operator matrix is not square");
        if (!is_power_of_two(m.rows()))
            throw Error("operator dimension is not a power of two");
        double tol = 1e-12 * spectral_radius_bound(m);
        if (!is_hermitian(m, tol)) throw NonHermitianInput("operator matrix is not Hermitian");
        // exact symmetrization kills the sub-tolerance asymmetry
        Mat h = (m + m.adjoint()) / 2.0;
        return HermitianOperator(std::move(h));
    }

    Index dim() const { return mat_.rows(); }
    int qubits() const { return log2_dim(dim()); }
    const Mat& matrix() const { return mat_; }

    bool is_diagonal(double tol = 1e-12) const {
        return max_off_diagonal(mat_) <= tol * spectral_radius_bound(mat_);
    }

private:
    explicit HermitianOperator(Mat m) : mat_(std::move(m)) {}
    Mat mat_;
};

struct SpectralLevel {
    double eigenvalue;
    Index multiplicity;
};

// Eigenvalues grouped into degenerate levels, descending, with the matching
// eigenvector basis. Column block k of `basis` spans level k.
class SpectralDecomposition {
public:
    SpectralDecomposition(std::vector<SpectralLevel> levels, Mat basis,
                          std::optional<double> gap = std::nullopt)
        : levels_(std::move(levels)), basis_(std::move(basis)), gap_(gap) {
        Index total = 0;
        for (std::size_t k = 0; k + 1 < levels_.size(); ++k)
            if (levels_[k].eigenvalue <= levels_[k + 1].eigenvalue)
                throw Error("spectral levels must be strictly decreasing");
        for (const auto& l : levels_) total += l.multiplicity;
        if (basis_.size() > 0 && total != basis_.cols())
            throw Error("level multiplicities do not match basis size");
    }

    const std::vector<SpectralLevel>& levels() const { return levels_; }
    const Mat& basis() const { return basis_; }
    std::optional<double> gap() const { return gap_; }
    void set_gap(double c) { gap_ = c; }

    std::size_t level_count() const { return levels_.size(); }
    Index dim() const { return basis_.cols(); }

    Index level_offset(std::size_t k) const {
        Index off = 0;
        for (std::size_t j = 0; j < k; ++j) off += levels_[j].multiplicity;
        return off;
    }

    // eigenvalues expanded with multiplicity, descending
    RVec expanded_eigenvalues() const {
        RVec v(dim());
        Index i = 0;
        for (const auto& l : levels_)
            for (Index m = 0; m < l.multiplicity; ++m) v(i++) = l.eigenvalue;
        return v;
    }

    double spectral_radius() const {
        double r = 0;
        for (const auto& l : levels_) r = std::max(r, std::abs(l.eigenvalue));
        return r;
    }

    // coordinates of a state in the level-ordered eigenbasis
    Vec to_eigenbasis(const Vec& state) const { return basis_.adjoint() * state; }

private:
    std::vector<SpectralLevel> levels_;
    Mat basis_;
    std::optional<double> gap_;
};

// Construction convenience for the Hamiltonians: a coefficient times a word
// of single-qubit Paulis, e.g. 0.5 * "ZZIII".
struct PauliString {
    int n = 0;
    std::string letters;
    Cplx coefficient{1.0, 0.0};

    PauliString(int n_, std::string letters_, Cplx coeff = Cplx(1.0, 0.0))
        : n(n_), letters(std::move(letters_)), coefficient(coeff) {
        if (static_cast<int>(letters.size()) != n)
            throw Error("Pauli string length does not match qubit count");
    }

    Mat matrix() const {
        Mat m = Mat::Identity(1, 1);
        for (char c : letters) m = kron(m, pauli(c));
        return coefficient * m;
    }
};

enum class HamiltonianKind { local, nearest_neighbor, cluster_1d, non_local };

inline std::string to_string(HamiltonianKind k) {
    switch (k) {
        case HamiltonianKind::local: return "local";
        case HamiltonianKind::nearest_neighbor: return "nearest_neighbor";
        case HamiltonianKind::cluster_1d: return "cluster_1d";
        case HamiltonianKind::non_local: return "non_local";
    }
    return "?";
}

namespace detail {

inline void check_hamiltonian_size(HamiltonianKind kind, int n) {
    if (n < 2) throw SizeTooSmall("Hamiltonians need n >= 2 qubits");
    if (n > 12) throw SizeTooLarge("dense storage is capped at n <= 12 qubits");
    if (kind == HamiltonianKind::non_local && n % 2 != 0)
        throw OddSizeNonLocal("the non-local Hamiltonian is homogeneously gapped only for even n");
}

// product of the nearest-neighbor phase gates, diagonal sign (-1)^{sum b_i b_{i+1}}
inline double cluster_conjugation_sign(std::uint64_t x, int n) {
    int s = 0;
    for (int i = 1; i < n; ++i) s += qubit_bit(x, i, n) & qubit_bit(x, i + 1, n);
    return (s % 2 == 0) ? 1.0 : -1.0;
}

} // namespace detail

// H = (1/2) sum_i sigma_z^(i)                        (local)
// H = sum_{i<N} sigma_z^(i) sigma_z^(i+1)            (nearest_neighbor)
// H = V (sum_i sigma_x^(i)) V^dag, V = prod U_ph     (cluster_1d, open chain)
// H = sum_{i<N} sigma_y^(i) sigma_y^(i+1) + sigma_x^N + sigma_z^N   (non_local)
inline HermitianOperator build_hamiltonian(HamiltonianKind kind, int n) {
    detail::check_hamiltonian_size(kind, n);
    const Index dim = Index(1) << n;
    Mat h = Mat::Zero(dim, dim);

    switch (kind) {
        case HamiltonianKind::local:
            for (std::uint64_t x = 0; x < std::uint64_t(dim); ++x)
                h(x, x) = 0.5 * (n - 2 * hamming_weight(x));
            break;

        case HamiltonianKind::nearest_neighbor:
            for (std::uint64_t x = 0; x < std::uint64_t(dim); ++x) {
                int val = 0;
                for (int i = 1; i < n; ++i)
                    val += (qubit_bit(x, i, n) == qubit_bit(x, i + 1, n)) ? 1 : -1;
                h(x, x) = val;
            }
            break;

        case HamiltonianKind::cluster_1d:
            // sum sigma_x has entries 1 between single-flip neighbors; conjugation
            // by the diagonal V only attaches signs
            for (std::uint64_t x = 0; x < std::uint64_t(dim); ++x) {
                double vx = detail::cluster_conjugation_sign(x, n);
                for (int q = 1; q <= n; ++q) {
                    std::uint64_t y = x ^ (std::uint64_t(1) << (n - q));
                    h(y, x) += detail::cluster_conjugation_sign(y, n) * vx;
                }
            }
            break;

        case HamiltonianKind::non_local:
            for (std::uint64_t x = 0; x < std::uint64_t(dim); ++x) {
                // sigma_y^(i) sigma_y^(i+1): flips bits i, i+1 with sign -(-1)^{x_i + x_{i+1}}
                for (int i = 1; i < n; ++i) {
                    std::uint64_t y =
                        x ^ (std::uint64_t(1) << (n - i)) ^ (std::uint64_t(1) << (n - i - 1));
                    double sign = ((qubit_bit(x, i, n) + qubit_bit(x, i + 1, n)) % 2 == 0) ? -1.0 : 1.0;
                    h(y, x) += sign;
                }
                h(~x & (dim - 1), x) += 1.0;                           // sigma_x on every qubit
                h(x, x) += (hamming_weight(x) % 2 == 0) ? 1.0 : -1.0;  // sigma_z on every qubit
            }
            break;
    }
    return HermitianOperator::from_matrix(std::move(h));
}

// Group the eigenvalues of H into degenerate levels (descending) and return a
// deterministic eigenvector basis: within each level the columns are the
// canonical echelon basis of the eigenspace, which for diagonal H reduces to
// the computational states in ascending index order.
inline SpectralDecomposition spectral_decompose(const HermitianOperator& h,
                                                double degeneracy_tol = 1e-9) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");

    const Index dim = h.dim();
    RVec vals(dim);
    Mat vecs(dim, dim);
    for (Index i = 0; i < dim; ++i) {  // descending order
        vals(i) = solver.eigenvalues()(dim - 1 - i);
        vecs.col(i) = solver.eigenvectors().col(dim - 1 - i);
    }

    double radius = std::max(std::abs(vals(0)), std::abs(vals(dim - 1)));
    double tol = degeneracy_tol * std::max(radius, 1.0);

    std::vector<SpectralLevel> levels;
    Mat basis(dim, dim);
    Index start = 0;
    while (start < dim) {
        Index end = start + 1;
        while (end < dim && vals(end - 1) - vals(end) <= tol) ++end;
        Index mult = end - start;
        double value = vals.segment(start, mult).mean();
        basis.middleCols(start, mult) =
            canonical_subspace_basis(vecs.middleCols(start, mult));
        levels.push_back({value, mult});
        start = end;
    }
    return SpectralDecomposition(std::move(levels), std::move(basis));
}

// Verifies |lambda_k - lambda_{k+1}| = c for all k and the centered symmetry
// -lambda_k = lambda_{n-k+1} (after shifting by the spectrum midpoint).
// Returns c.
inline double check_homogeneous_gap(const SpectralDecomposition& spec, double tol = 1e-9) {
    const auto& levels = spec.levels();
    const std::size_t n = levels.size();
    if (n < 2) throw Error("homogeneous-gap check needs at least two levels");

    double abstol = tol * std::max(spec.spectral_radius(), 1.0);
    double c = (levels.front().eigenvalue - levels.back().eigenvalue) / double(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double gap = levels[k].eigenvalue - levels[k + 1].eigenvalue;
        if (std::abs(gap - c) > abstol) {
            std::ostringstream msg;
            msg << "inhomogeneous gap between levels " << k + 1 << " and " << k + 2 << ": "
                << gap << " vs expected " << c;
            throw InhomogeneousGap(msg.str());
        }
    }
    double mid = (levels.front().eigenvalue + levels.back().eigenvalue) / 2.0;
    for (std::size_t k = 0; k < n; ++k) {
        double a = levels[k].eigenvalue - mid;
        double b = levels[n - 1 - k].eigenvalue - mid;
        if (std::abs(a + b) > abstol) {
            std::ostringstream msg;
            msg << "spectrum not symmetric about its midpoint at level " << k + 1;
            throw AsymmetricSpectrum(msg.str());
        }
    }
    return c;
}

// Closed-form spectrum of the nearest-neighbor chain:
// lambda_x = n-1-2x with multiplicity 2*binomial(n-1, x).
inline std::vector<SpectralLevel> nn_spectrum_formula(int n) {
    if (n < 2) throw SizeTooSmall("nn_spectrum_formula needs n >= 2");
    std::vector<SpectralLevel> out;
    out.reserve(n);
    double binom = 1.0;  // binomial(n-1, x), updated incrementally
    for (int x = 0; x < n; ++x) {
        out.push_back({double(n - 1 - 2 * x), Index(std::llround(2.0 * binom))});
        binom = binom * double(n - 1 - x) / double(x + 1);
    }
    return out;
}

} // namespace metrokit

#endif
