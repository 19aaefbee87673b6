#ifndef METROKIT_SERIALIZE_HPP
#define METROKIT_SERIALIZE_HPP

#include <cstdio>
#include <string>

#include <json.hpp>

#include "metrokit/linalg.hpp"
#include "metrokit/operators.hpp"
#include "metrokit/states.hpp"
#include "metrokit/su2.hpp"

namespace metrokit {

using json = nlohmann::json;

inline json matrix_to_json(const Mat& m) {
    json entries = json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            entries.push_back({m(i, j).real(), m(i, j).imag()});
    return entries;
}

inline Mat matrix_from_json(const json& entries, Index rows, Index cols) {
    Mat m(rows, cols);
    Index k = 0;
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j, ++k)
            m(i, j) = Cplx(entries.at(k).at(0).get<double>(), entries.at(k).at(1).get<double>());
    return m;
}

// {dim, entries: [[re, im], ...] row-major}
inline json operator_to_json(const HermitianOperator& op) {
    return {{"dim", op.dim()}, {"entries", matrix_to_json(op.matrix())}};
}

inline HermitianOperator operator_from_json(const json& j) {
    Index dim = j.at("dim").get<Index>();
    return HermitianOperator::from_matrix(matrix_from_json(j.at("entries"), dim, dim));
}

// {dim, kind, amplitudes | entries}
inline json state_to_json(const QuantumState& s) {
    if (s.is_pure()) {
        json amps = json::array();
        for (Index i = 0; i < s.dim(); ++i)
            amps.push_back({s.amplitudes()(i).real(), s.amplitudes()(i).imag()});
        return {{"dim", s.dim()}, {"kind", "pure"}, {"amplitudes", amps}};
    }
    return {{"dim", s.dim()}, {"kind", "mixed"}, {"entries", matrix_to_json(s.density_matrix())}};
}

inline QuantumState state_from_json(const json& j) {
    Index dim = j.at("dim").get<Index>();
    if (j.at("kind") == "pure") {
        Vec v(dim);
        const auto& amps = j.at("amplitudes");
        for (Index i = 0; i < dim; ++i)
            v(i) = Cplx(amps.at(i).at(0).get<double>(), amps.at(i).at(1).get<double>());
        return QuantumState::pure(std::move(v));
    }
    return QuantumState::mixed(matrix_from_json(j.at("entries"), dim, dim));
}

inline json generators_to_json(const Su2Generators& g) {
    return {{"c", g.c},
            {"j_max", g.j_max},
            {"s1", operator_to_json(g.s1)},
            {"s2", operator_to_json(g.s2)},
            {"s3", operator_to_json(g.s3)}};
}

// Serializer with a fixed numeric format: doubles carry 17 significant
// digits so reports round-trip exactly; keys come out sorted (nlohmann's
// object order), making the output byte-stable for fixed inputs.
inline void dump_json_17(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += '"';
                out += it.key();
                out += "\":";
                dump_json_17(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& el : j) {
                if (!first) out += ',';
                first = false;
                dump_json_17(el, out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
            out += buf;
            break;
        }
        default:
            out += j.dump();
    }
}

inline std::string dump_json_17(const json& j) {
    std::string out;
    dump_json_17(j, out);
    return out;
}

} // namespace metrokit

#endif
