#ifndef METROKIT_BOUNDS_HPP
#define METROKIT_BOUNDS_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "metrokit/channels.hpp"
#include "metrokit/errors.hpp"
#include "metrokit/linalg.hpp"
#include "metrokit/operators.hpp"
#include "metrokit/states.hpp"

namespace metrokit {

struct BoundReport {
    double cq = 0.0;
    std::optional<double> alpha_min;
    double xi = 0.0;
    double omega = 0.0;
    double q2 = 0.0;
    std::string variant;
};

enum class RemixGenerator { collective_sx };

struct KrausWithDerivative {
    Mat op, d_op;
};

// C_Q = 4 (<A1> - <A2>^2) with A1 = sum dK^dag dK, A2 = i sum dK^dag K.
inline BoundReport cq_from_kraus(const QuantumState& state,
                                 const std::vector<KrausWithDerivative>& kraus) {
    if (!state.is_pure()) throw MixedInput("the purification bound takes a pure input state");
    if (kraus.empty()) throw IncompleteKrausSet("empty Kraus list");
    const Vec& psi = state.amplitudes();
    const Index dim = psi.size();
    if (kraus.front().op.rows() != dim) throw DimensionMismatch("Kraus and state dimensions differ");

    Mat ident = Mat::Zero(dim, dim);
    double a1 = 0.0;
    Cplx a2 = 0.0;
    for (const auto& kd : kraus) {
        ident += kd.op.adjoint() * kd.op;
        Vec dpsi = kd.d_op * psi;
        a1 += std::real(dpsi.dot(dpsi));
        a2 += kI * (Cplx)(dpsi.dot(kd.op * psi));
    }
    if ((ident - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10)
        throw IncompleteKrausSet("Kraus operators do not sum to the identity");

    double a2r = std::real(a2);
    BoundReport rep;
    rep.cq = 4.0 * (a1 - a2r * a2r);
    rep.variant = "kraus";
    return rep;
}

// Kraus family of the joint signal-plus-noise map at theta = 0:
// K_m = S_m, dK_m = i H S_m.
inline std::vector<KrausWithDerivative> make_signal_kraus(const HermitianOperator& h,
                                                          const KrausSet& ks) {
    std::vector<KrausWithDerivative> out;
    out.reserve(ks.operators.size());
    for (const auto& s : ks.operators) out.push_back({s, kI * (h.matrix() * s)});
    return out;
}

// Label-space matrix of the collective S_x remixing generator: B_{nm} = 1
// when the labels n, m differ in exactly one bit.
inline Mat collective_sx_label_matrix(int n) {
    const Index dim = Index(1) << n;
    Mat b = Mat::Zero(dim, dim);
    for (std::uint64_t x = 0; x < std::uint64_t(dim); ++x)
        for (int q = 1; q <= n; ++q) b(x ^ (std::uint64_t(1) << (n - q)), x) = 1.0;
    return b;
}

// Remixed family Pi_n = sum_m V_{nm} S~_m with V = e^{i alpha theta B},
// evaluated at theta = 0: K_n = S_n, dK_n = i alpha sum_m B_{nm} S_m + i H S_n.
inline std::vector<KrausWithDerivative> make_remixed_kraus(const HermitianOperator& h,
                                                           const KrausSet& ks,
                                                           const Mat& b_labels, double alpha) {
    const Index labels = Index(ks.operators.size());
    if (b_labels.rows() != labels) throw DimensionMismatch("remix generator has wrong label count");
    std::vector<KrausWithDerivative> out;
    out.reserve(ks.operators.size());
    for (Index nlab = 0; nlab < labels; ++nlab) {
        Mat mix = Mat::Zero(h.dim(), h.dim());
        for (Index m = 0; m < labels; ++m) {
            Cplx w = b_labels(nlab, m);
            if (w != Cplx(0.0)) mix += w * ks.operators[std::size_t(m)];
        }
        out.push_back({ks.operators[std::size_t(nlab)],
                       kI * alpha * mix + kI * (h.matrix() * ks.operators[std::size_t(nlab)])});
    }
    return out;
}

// Collective sum_i sigma_z^(i) (not halved), the operator entering the
// dephasing-specialized remixing sums.
inline Mat collective_sz_matrix(int n) {
    const Index dim = Index(1) << n;
    Mat sz = Mat::Zero(dim, dim);
    for (std::uint64_t x = 0; x < std::uint64_t(dim); ++x)
        sz(x, x) = double(n - 2 * hamming_weight(x));
    return sz;
}

// Closed-form remixing sums for B = collective S_x:
//   Xi    = 2 sqrt(p(1-p)) (<H S_z> - <H><S_z>)
//   Omega = N (1 - q^2) + q^2 (Delta S_z)^2,  q^2 = 4 p (1-p).
inline std::pair<double, double> xi_omega(const QuantumState& state, const HermitianOperator& h,
                                          const DephasingChannel& ch,
                                          RemixGenerator b = RemixGenerator::collective_sx) {
    if (b != RemixGenerator::collective_sx)
        throw UnsupportedRemixGenerator("only the collective S_x remix is supported");
    if (!state.is_pure()) throw MixedInput("xi_omega takes a pure state");
    if (state.dim() != h.dim() || state.dim() != ch.dim())
        throw DimensionMismatch("state, Hamiltonian and channel dimensions differ");

    const Vec& psi = state.amplitudes();
    Mat sz = collective_sz_matrix(ch.n);
    Vec hpsi = h.matrix() * psi;
    Vec zpsi = sz * psi;
    double eh = std::real(psi.dot(hpsi));
    double ez = std::real(psi.dot(zpsi));
    double ehz = std::real(hpsi.dot(zpsi));  // <H S_z>; real for H commuting with S_z
    double ez2 = std::real(zpsi.dot(zpsi));

    double root = std::sqrt(std::max(ch.p * (1.0 - ch.p), 0.0));
    double q2 = ch.q_squared();
    double xi = 2.0 * root * (ehz - eh * ez);
    double omega = ch.n * (1.0 - q2) + q2 * (ez2 - ez * ez);
    return {xi, omega};
}

// Minimized dephasing bound C_Q^min = 4 ((Delta H)^2 - Xi^2 / Omega),
// attained at alpha_min = -Xi / Omega.
inline BoundReport cq_min_dephasing(const QuantumState& state, const HermitianOperator& h,
                                    const DephasingChannel& ch) {
    auto [xi, omega] = xi_omega(state, h, ch);
    BoundReport rep;
    rep.xi = xi;
    rep.omega = omega;
    rep.q2 = ch.q_squared();
    rep.variant = "min-dephasing";
    double var = variance(state, h);
    if (omega > 1e-15) {
        rep.alpha_min = -xi / omega;
        rep.cq = 4.0 * (var - xi * xi / omega);
    } else {
        rep.alpha_min = std::nullopt;
        rep.cq = 4.0 * var;
    }
    return rep;
}

enum class ClosedFormVariant { local_general, local_pg, local_ghz, nn };

struct ClosedFormParams {
    double n = 0;           // qubit count
    double q2 = 0;          // 4 p (1-p)
    double var_h = 0;       // (Delta H)^2 where the variant needs it
    double covariance = 0;  // <H S_z> - <H><S_z>, nn variant only
};

// Closed forms of the minimized dephasing bound. local_general takes the
// variance of H = (1/2) sum sigma_z and equals cq_min_dephasing for that
// Hamiltonian identically; local_pg and local_ghz carry the variances
// N(N/2+1) and N^2 of the unhalved sum sigma_z, for which the same
// minimization gives
//   local_general: 4 N (DH)^2 (1-q^2) / (N (1-q^2) + 4 q^2 (DH)^2)
//   local_pg:      4 N (N/2+1) (1-q^2) / ((1-q^2) + q^2 (N/2+1))
//   local_ghz:     4 N^2 (1-q^2) / ((1-q^2) + q^2 N)
//   nn:            4 ((DH)^2 - q^2 cov^2 / (N (1-q^2) + q^2 (DH)^2))
// Both local_pg and local_ghz approach 4 N (1-q^2)/q^2 for large N; the
// optimal product state in local_general gives exactly N (1-q^2).
inline double cq_closed_form(ClosedFormVariant variant, const ClosedFormParams& prm) {
    if (prm.q2 < 0.0 || prm.q2 > 1.0) throw InvalidQ("q^2 must lie in [0, 1]");
    const double n = prm.n, q2 = prm.q2;
    switch (variant) {
        case ClosedFormVariant::local_general: {
            double denom = n * (1.0 - q2) + 4.0 * q2 * prm.var_h;
            return denom > 0 ? 4.0 * n * prm.var_h * (1.0 - q2) / denom : 0.0;
        }
        case ClosedFormVariant::local_pg: {
            double half = n / 2.0 + 1.0;
            double denom = (1.0 - q2) + q2 * half;
            return denom > 0 ? 4.0 * n * half * (1.0 - q2) / denom : 0.0;
        }
        case ClosedFormVariant::local_ghz: {
            double denom = (1.0 - q2) + q2 * n;
            return denom > 0 ? 4.0 * n * n * (1.0 - q2) / denom : 0.0;
        }
        case ClosedFormVariant::nn: {
            double denom = n * (1.0 - q2) + q2 * prm.var_h;
            double sub = denom > 0 ? q2 * prm.covariance * prm.covariance / denom : 0.0;
            return 4.0 * (prm.var_h - sub);
        }
    }
    throw Error("unknown closed-form variant");
}

struct FrequencyReferenceBounds {
    double ghz_bound = 0.0;  // 2 gamma e / (N T)
    double sss_bound = 0.0;  // 2 gamma / (N T)
};

inline FrequencyReferenceBounds reference_frequency_bounds(double n, double total_time,
                                                           double gamma) {
    if (n <= 0 || total_time <= 0 || gamma <= 0)
        throw Error("reference bounds need positive N, T and gamma");
    double base = 2.0 * gamma / (n * total_time);
    return {base * std::exp(1.0), base};
}

} // namespace metrokit

#endif
