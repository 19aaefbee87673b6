#ifndef METROKIT_EXPERIMENTS_HPP
#define METROKIT_EXPERIMENTS_HPP

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <tuple>
#include <vector>

#include "metrokit/channels.hpp"
#include "metrokit/errors.hpp"
#include "metrokit/linalg.hpp"
#include "metrokit/operators.hpp"
#include "metrokit/optim.hpp"
#include "metrokit/qfi.hpp"
#include "metrokit/states.hpp"
#include "metrokit/su2.hpp"

namespace metrokit {

struct FrequencyScenario {
    int n = 2;
    HamiltonianKind kind = HamiltonianKind::nearest_neighbor;
    double gamma = 1.0;
};

struct ScanPoint {
    double t = 0.0;
    double value = 0.0;
};

struct ScanResult {
    std::vector<ScanPoint> samples;
    double t_opt = 0.0;
    double f_over_t_max = 0.0;
    std::optional<double> i_rel;
};

// QFI of E_t(|psi><psi|) for a diagonal Hamiltonian under local z-dephasing,
// evaluated blockwise in the joint eigensectors of the involutive permutation
// symmetries (global spin flip, chain reflection) shared by H, the channel and
// the probe state. Falls back to a single dense block when a symmetry is
// absent. The sector split only reorganizes the spectral sum: cross-sector
// matrix elements of H vanish.
class DephasedQfiEvaluator {
public:
    explicit DephasedQfiEvaluator(const HermitianOperator& h) : n_(h.qubits()), dim_(h.dim()) {
        if (max_off_diagonal(h.matrix()) > 1e-10 * spectral_radius_bound(h.matrix()))
            throw NonCommutingNoise("evaluator needs a z-diagonal Hamiltonian");
        diag_ = h.matrix().diagonal().real();

        flip_ok_ = true;
        reflect_ok_ = true;
        for (Index x = 0; x < dim_; ++x) {
            std::uint64_t ux = std::uint64_t(x);
            if (std::abs(diag_(x) - diag_(Index(~ux & std::uint64_t(dim_ - 1)))) > 1e-12)
                flip_ok_ = false;
            if (std::abs(diag_(x) - diag_(Index(reverse_bits(ux, n_)))) > 1e-12)
                reflect_ok_ = false;
        }
    }

    int qubits() const { return n_; }

    double qfi_theta(const Vec& psi, double eta) const {
        auto [mask, perms] = symmetry_perms(psi);
        const auto& sectors = sector_cache(mask, perms);

        // dephased density matrix, entrywise
        std::vector<double> pow_eta(std::size_t(n_) + 1, 1.0);
        for (int i = 1; i <= n_; ++i) pow_eta[std::size_t(i)] = pow_eta[std::size_t(i) - 1] * eta;
        Mat rho(dim_, dim_);
        for (Index x = 0; x < dim_; ++x)
            for (Index y = 0; y < dim_; ++y)
                rho(x, y) = psi(x) * std::conj(psi(y)) *
                            pow_eta[std::size_t(hamming_weight(std::uint64_t(x) ^ std::uint64_t(y)))];

        double f = 0.0;
        for (const auto& sector : sectors) {
            const Index sz = Index(sector.members.size());
            if (sz == 0) continue;
            Mat rs(sz, sz);
            RVec hs(sz);
            for (Index a = 0; a < sz; ++a) {
                hs(a) = sector.h_values[std::size_t(a)];
                for (Index b = 0; b < sz; ++b) rs(a, b) = sector_element(rho, sector, a, b);
            }
            Eigen::SelfAdjointEigenSolver<Mat> solver(rs);
            const RVec& lam = solver.eigenvalues();
            const Mat& v = solver.eigenvectors();
            Mat hij = v.adjoint() * hs.asDiagonal() * v;
            for (Index i = 0; i < sz; ++i)
                for (Index j = i + 1; j < sz; ++j) {
                    double denom = lam(i) + lam(j);
                    if (denom <= 1e-12) continue;
                    double diff = lam(i) - lam(j);
                    f += diff * diff / denom * std::norm(hij(i, j));
                }
        }
        return 4.0 * f;
    }

private:
    struct Sector {
        // each member is a normalized character combination over one group orbit
        struct Member {
            std::vector<Index> indices;
            std::vector<double> coeffs;
        };
        std::vector<Member> members;
        std::vector<double> h_values;
    };

    // permutations (as index maps) under which psi is symmetric or antisymmetric
    std::pair<unsigned, std::vector<std::vector<Index>>> symmetry_perms(const Vec& psi) const {
        unsigned mask = 0;
        std::vector<std::vector<Index>> perms;
        auto try_perm = [&](unsigned bit, auto&& image) {
            std::vector<Index> p(static_cast<std::size_t>(dim_));
            for (Index x = 0; x < dim_; ++x) p[std::size_t(x)] = image(x);
            double dev_plus = 0.0, dev_minus = 0.0;
            for (Index x = 0; x < dim_; ++x) {
                dev_plus = std::max(dev_plus, std::abs(psi(p[std::size_t(x)]) - psi(x)));
                dev_minus = std::max(dev_minus, std::abs(psi(p[std::size_t(x)]) + psi(x)));
            }
            if (dev_plus <= 1e-10 || dev_minus <= 1e-10) {
                mask |= bit;
                perms.push_back(std::move(p));
            }
        };
        if (flip_ok_)
            try_perm(1u, [&](Index x) { return Index(~std::uint64_t(x) & std::uint64_t(dim_ - 1)); });
        if (reflect_ok_)
            try_perm(2u, [&](Index x) { return Index(reverse_bits(std::uint64_t(x), n_)); });
        return {mask, std::move(perms)};
    }

    static Cplx sector_element(const Mat& rho, const Sector& sector, Index a, Index b) {
        const auto& ma = sector.members[std::size_t(a)];
        const auto& mb = sector.members[std::size_t(b)];
        Cplx acc = 0.0;
        for (std::size_t i = 0; i < ma.indices.size(); ++i)
            for (std::size_t j = 0; j < mb.indices.size(); ++j)
                acc += ma.coeffs[i] * mb.coeffs[j] * rho(ma.indices[i], mb.indices[j]);
        return acc;
    }

    const std::vector<Sector>& sector_cache(unsigned mask,
                                            const std::vector<std::vector<Index>>& perms) const {
        std::scoped_lock lock(mutex_);
        auto it = cache_.find(mask);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(mask, build_sectors(perms)).first->second;
    }

    // joint character sectors of an abelian group of involutive permutations
    std::vector<Sector> build_sectors(const std::vector<std::vector<Index>>& perms) const {
        const std::size_t ng = perms.size();
        const std::size_t nchar = std::size_t(1) << ng;
        std::vector<Sector> sectors(nchar);

        std::vector<char> seen(std::size_t(dim_), 0);
        for (Index x0 = 0; x0 < dim_; ++x0) {
            if (seen[std::size_t(x0)]) continue;
            // orbit of x0 under the group, tracked with group-element signs
            std::vector<std::pair<Index, std::size_t>> orbit;  // (index, group element mask)
            for (std::size_t g = 0; g < nchar; ++g) {
                Index x = x0;
                for (std::size_t b = 0; b < ng; ++b)
                    if (g & (std::size_t(1) << b)) x = perms[b][std::size_t(x)];
                bool dup = false;
                for (auto& [y, gy] : orbit)
                    if (y == x) dup = true;
                if (!dup) orbit.emplace_back(x, g);
            }
            for (auto& [y, gy] : orbit) seen[std::size_t(y)] = 1;

            for (std::size_t chi = 0; chi < nchar; ++chi) {
                Sector::Member member;
                double nrm = 0.0;
                bool cancelled = false;
                for (auto& [y, gy] : orbit) {
                    double sign = (hamming_weight(chi & gy) % 2 == 0) ? 1.0 : -1.0;
                    member.indices.push_back(y);
                    member.coeffs.push_back(sign);
                    nrm += 1.0;
                }
                // the character combination can vanish when the orbit is fixed
                // by part of the group; detect by projecting back
                std::vector<double> net(orbit.size(), 0.0);
                for (std::size_t i = 0; i < orbit.size(); ++i) net[i] = member.coeffs[i];
                if (orbit.size() < nchar) {
                    // stabilized orbit: character must be trivial on the stabilizer
                    for (std::size_t g = 1; g < nchar; ++g) {
                        Index x = x0;
                        for (std::size_t b = 0; b < ng; ++b)
                            if (g & (std::size_t(1) << b)) x = perms[b][std::size_t(x)];
                        if (x == x0 && hamming_weight(chi & g) % 2 != 0) cancelled = true;
                    }
                }
                if (cancelled) continue;
                double inv = 1.0 / std::sqrt(nrm);
                for (auto& cft : member.coeffs) cft *= inv;
                sectors[chi].h_values.push_back(diag_(member.indices.front()));
                sectors[chi].members.push_back(std::move(member));
            }
        }
        return sectors;
    }

    int n_;
    Index dim_;
    RVec diag_;
    bool flip_ok_ = false, reflect_ok_ = false;
    mutable std::mutex mutex_;
    mutable std::map<unsigned, std::vector<Sector>> cache_;
};

inline HermitianOperator scenario_hamiltonian(const FrequencyScenario& sc) {
    return build_hamiltonian(sc.kind, sc.n);
}

// QFI per unit time F(rho(t))/t = t * F_theta, with theta = omega t.
inline double qfi_per_time(const DephasedQfiEvaluator& eval, const Vec& psi, double gamma,
                           double t) {
    if (t <= 0) throw NonPositiveTime("interrogation time must be positive");
    return t * eval.qfi_theta(psi, std::exp(-gamma * t));
}

struct TimeOptimizationOptions {
    int coarse_points = 64;
    double rel_tol = 1e-6;
};

// Coarse log-spaced scan over [1e-3/gamma, 10/gamma] followed by
// golden-section refinement of the bracket around the best sample.
inline ScanResult optimize_time(const DephasedQfiEvaluator& eval, const Vec& psi, double gamma,
                                const TimeOptimizationOptions& opts = {}) {
    const double t_lo = 1e-3 / gamma, t_hi = 10.0 / gamma;
    const int np = opts.coarse_points;
    ScanResult result;
    result.samples.reserve(std::size_t(np));

    int best = 0;
    for (int i = 0; i < np; ++i) {
        double t = t_lo * std::pow(t_hi / t_lo, double(i) / double(np - 1));
        double v = qfi_per_time(eval, psi, gamma, t);
        result.samples.push_back({t, v});
        if (v > result.samples[std::size_t(best)].value) best = i;
    }
    if (result.samples[std::size_t(best)].value <= 1e-14)
        throw FlatObjective("the QFI-per-time curve vanishes on the scan range");

    double a = result.samples[std::size_t(std::max(best - 1, 0))].t;
    double b = result.samples[std::size_t(std::min(best + 1, np - 1))].t;
    auto opt = golden_section_max([&](double t) { return qfi_per_time(eval, psi, gamma, t); }, a, b,
                                  opts.rel_tol);
    result.t_opt = opt.x;
    result.f_over_t_max = opt.value;
    return result;
}

// Brute-force oracle for optimize_time: the best of `points` log-spaced samples.
inline ScalarOptimum dense_grid_max(const DephasedQfiEvaluator& eval, const Vec& psi, double gamma,
                                    int points = 10000) {
    const double t_lo = 1e-3 / gamma, t_hi = 10.0 / gamma;
    ScalarOptimum best{t_lo, -1.0};
    for (int i = 0; i < points; ++i) {
        double t = t_lo * std::pow(t_hi / t_lo, double(i) / double(points - 1));
        double v = qfi_per_time(eval, psi, gamma, t);
        if (v > best.value) best = {t, v};
    }
    return best;
}

namespace detail {

inline double& baseline_cache_slot(int n, HamiltonianKind kind, double gamma) {
    static std::map<std::tuple<int, HamiltonianKind, long long>, double> cache;
    static std::mutex mtx;
    std::scoped_lock lock(mtx);
    return cache[{n, kind, std::llround(gamma * 1e12)}];
}

} // namespace detail

// max_t F/t for the product baseline |+>^n, computed once per (n, kind, gamma).
inline double baseline_f_over_t(const DephasedQfiEvaluator& eval, const FrequencyScenario& sc) {
    double& slot = detail::baseline_cache_slot(sc.n, sc.kind, sc.gamma);
    if (slot == 0.0) {
        Vec plus = reference_product_plus(sc.n).amplitudes();
        slot = optimize_time(eval, plus, sc.gamma).f_over_t_max;
    }
    return slot;
}

// I_rel = (max_t F(psi)/t) / (max_t F(|+>^n)/t).
inline double relative_improvement(const DephasedQfiEvaluator& eval, const FrequencyScenario& sc,
                                   const Vec& psi) {
    double base = baseline_f_over_t(eval, sc);
    double val = optimize_time(eval, psi, sc.gamma).f_over_t_max;
    return val / base;
}

// Normalized J_+^m applications of `ground` under the axis-1 raising operator
// (the ladder that creates excitations in the spectrum of S1 = H),
// Gram-Schmidt cleaned, terminating at annihilation.
inline std::vector<Vec> symmetric_subspace_basis(const Su2Generators& gens, const Vec& ground,
                                                 double tol = 1e-10) {
    if (ground.norm() < 1e-12) throw AnnihilatedAtStart("ground state is zero");
    LadderPair ladder = ladder_pair(gens, 1);
    long cap = long(std::floor(2.0 * gens.j_max + 1.5));

    std::vector<Vec> basis;
    Vec v = ground / ground.norm();
    basis.push_back(v);
    for (long m = 1; m < cap; ++m) {
        v = ladder.raise_op * v;
        if (v.norm() < tol) break;
        v /= v.norm();
        Vec w = v;
        for (const auto& u : basis) w -= u * (u.dot(v));
        if (w.norm() < 1e-8) break;  // ladder left the new directions
        w /= w.norm();
        basis.push_back(w);
    }
    return basis;
}

struct SubspaceSearchResult {
    std::vector<double> coefficients;
    double i_rel = 0.0;
    double f_over_t = 0.0;
};

struct SubspaceSearchOptions {
    int restarts = 8;
    unsigned seed = 12345;
    int coarse_points = 48;
    double time_rel_tol = 1e-5;
    int simplex_iterations = 250;
};

// Maximizes max_t F/t over real unit coefficient vectors on the symmetric
// subspace with a derivative-free simplex search and deterministic random
// restarts. Heuristic: the best evaluation ever seen is returned, so the
// result never falls below the best seed (basis vectors, the extremal
// superposition, and the supplied extra candidates).
inline SubspaceSearchResult optimize_state_in_subspace(
    const DephasedQfiEvaluator& eval, const FrequencyScenario& sc, const std::vector<Vec>& basis,
    const std::vector<std::vector<double>>& extra_seeds = {},
    const SubspaceSearchOptions& opts = {}) {
    const std::size_t k = basis.size();
    if (k < 2) throw Error("subspace search needs at least two basis states");
    const Index dim = basis.front().size();

    double base = baseline_f_over_t(eval, sc);
    TimeOptimizationOptions topts{opts.coarse_points, opts.time_rel_tol};

    SubspaceSearchResult best;
    auto assemble = [&](const std::vector<double>& raw) {
        Vec v = Vec::Zero(dim);
        double nrm = 0.0;
        for (double c : raw) nrm += c * c;
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) return v;
        for (std::size_t i = 0; i < k; ++i) v += (raw[i] / nrm) * basis[i];
        return v;
    };
    auto objective = [&](const std::vector<double>& raw) {
        Vec v = assemble(raw);
        if (v.norm() < 1e-12) return 0.0;
        double f;
        try {
            f = optimize_time(eval, v, sc.gamma, topts).f_over_t_max;
        } catch (const FlatObjective&) {
            f = 0.0;
        }
        if (f > best.f_over_t) {
            best.f_over_t = f;
            best.coefficients = raw;
            double nrm = 0.0;
            for (double c : best.coefficients) nrm += c * c;
            nrm = std::sqrt(nrm);
            for (double& c : best.coefficients) c /= nrm;
        }
        return f;
    };

    std::vector<std::vector<double>> seeds;
    for (std::size_t i = 0; i < k; ++i) {  // every basis vector
        std::vector<double> e(k, 0.0);
        e[i] = 1.0;
        seeds.push_back(std::move(e));
    }
    {
        std::vector<double> ext(k, 0.0);  // extremal superposition
        ext.front() = ext.back() = 1.0 / std::sqrt(2.0);
        seeds.push_back(std::move(ext));
    }
    for (const auto& s : extra_seeds)
        if (s.size() == k) seeds.push_back(s);
    std::mt19937 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int r = 0; r < opts.restarts; ++r) {
        std::vector<double> s(k);
        for (auto& c : s) c = gauss(rng);
        seeds.push_back(std::move(s));
    }

    std::vector<double> seed_values(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) seed_values[i] = objective(seeds[i]);
    // refine from the most promising seeds
    std::vector<std::size_t> order(seeds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return seed_values[a] > seed_values[b]; });
    std::size_t refine = std::min<std::size_t>(order.size(), std::size_t(opts.restarts));
    SimplexOptions sopts;
    sopts.max_iter = opts.simplex_iterations;
    sopts.step = 0.3;
    for (std::size_t i = 0; i < refine; ++i) nelder_mead_max(objective, seeds[order[i]], sopts);

    best.i_rel = best.f_over_t / base;
    return best;
}

} // namespace metrokit

#endif
