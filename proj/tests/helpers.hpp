#ifndef METROKIT_TEST_HELPERS_HPP
#define METROKIT_TEST_HELPERS_HPP

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "metrokit/metrokit.hpp"

namespace mtest {

using namespace metrokit;

inline json load_fixture(const std::string& name) {
    std::string path = std::string(METROKIT_FIXTURE_DIR) + "/" + name + ".json";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture " + path);
    json j;
    in >> j;
    return j;
}

inline Vec fixture_state(const json& coeffs) {
    Vec v(Index(coeffs.size()));
    for (Index i = 0; i < v.size(); ++i)
        v(i) = Cplx(coeffs.at(i).at(0).get<double>(), coeffs.at(i).at(1).get<double>());
    return v;
}

inline HermitianOperator fixture_hamiltonian(const json& fx) {
    std::string kind = fx.at("kind");
    int n = fx.at("n");
    if (kind == "local") return build_hamiltonian(HamiltonianKind::local, n);
    if (kind == "nearest_neighbor") return build_hamiltonian(HamiltonianKind::nearest_neighbor, n);
    if (kind == "cluster_1d") return build_hamiltonian(HamiltonianKind::cluster_1d, n);
    if (kind == "non_local") return build_hamiltonian(HamiltonianKind::non_local, n);
    throw std::runtime_error("unknown fixture kind " + kind);
}

// embed a level-coordinate sequence (one coefficient per level, slot 1)
// into the full eigenbasis coordinate vector
inline Vec embed_level_sequence(const SpectralDecomposition& spec, const Vec& seq) {
    Vec full = Vec::Zero(spec.dim());
    for (std::size_t k = 0; k < spec.level_count(); ++k) full(spec.level_offset(k)) = seq(Index(k));
    return full;
}

inline Vec random_pure_state(Index dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = Cplx(gauss(rng), gauss(rng));
    v.normalize();
    return v;
}

inline Mat random_density_matrix(Index dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat a(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) a(i, j) = Cplx(gauss(rng), gauss(rng));
    Mat rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

} // namespace mtest

#endif
