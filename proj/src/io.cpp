#include "localize/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace localize::io {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw Error(ErrorCode::ParseError, field + ": " + msg);
}

Complex complex_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(field, "expected a [re, im] pair of numbers");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Index dimension_field(const Json& j, const char* key) {
    if (!j.is_object()) fail("<root>", "expected a JSON object");
    if (!j.contains(key)) fail(key, "missing");
    const Json& d = j.at(key);
    if (!d.is_number_integer() || d.get<long long>() < 1) fail(key, "expected a positive integer");
    return Index(d.get<long long>());
}

void dump_into(const Json& j, int indent, int depth, std::string& out) {
    const std::string pad = indent > 0 ? std::string(std::size_t(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(std::size_t(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
                dump_into(it.value(), indent, depth + 1, out);
            }
            out += nl + close_pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line so matrices remain readable.
            const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) {
                return e.is_primitive() || (e.is_array() && e.size() == 2 && e[0].is_number());
            });
            out += "[";
            if (!flat) out += nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) {
                    out += ",";
                    out += flat ? (indent > 0 ? " " : "") : nl;
                }
                if (!flat) out += pad;
                dump_into(j[i], flat ? 0 : indent, depth + 1, out);
            }
            if (!flat) out += nl + close_pad;
            out += "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    // Keep floats recognizable as floats when they happen to be integral.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string dump(const Json& j, int indent) {
    std::string out;
    dump_into(j, indent, 0, out);
    return out;
}

Json vector_to_json(const Vector& v) {
    Json arr = Json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(Json::array({v(i).real(), v(i).imag()}));
    return arr;
}

Vector vector_from_json(const Json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array of [re, im] pairs");
    Vector v(Index(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(Index(i)) = complex_from_json(j[i], field + "[" + std::to_string(i) + "]");
    }
    return v;
}

Json matrix_to_json(const Matrix& m) {
    Json data = Json::array();
    for (Index r = 0; r < m.rows(); ++r) data.push_back(vector_to_json(m.row(r).transpose()));
    Json j;
    j["dim"] = m.rows();
    j["data"] = std::move(data);
    return j;
}

Matrix matrix_from_json(const Json& j) {
    const Index n = dimension_field(j, "dim");
    if (!j.contains("data") || !j.at("data").is_array()) fail("data", "expected an array of rows");
    const Json& data = j.at("data");
    if (Index(data.size()) != n) {
        fail("data", "expected " + std::to_string(n) + " rows, got " + std::to_string(data.size()));
    }
    Matrix m(n, n);
    for (Index r = 0; r < n; ++r) {
        const std::string field = "data[" + std::to_string(r) + "]";
        const Vector row = vector_from_json(data[std::size_t(r)], field);
        if (row.size() != n) {
            fail(field, "expected " + std::to_string(n) + " entries, got " + std::to_string(row.size()));
        }
        m.row(r) = row.transpose();
    }
    return m;
}

HermitianOperator operator_from_json(const Json& j, const ToleranceConfig& tol) {
    return HermitianOperator::from_matrix(matrix_from_json(j), tol);
}

Json subspace_to_json(const Subspace& v) {
    Json vectors = Json::array();
    for (Index c = 0; c < v.dim(); ++c) vectors.push_back(vector_to_json(v.basis().col(c)));
    Json j;
    j["ambient_dim"] = v.ambient_dim();
    j["vectors"] = std::move(vectors);
    return j;
}

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}  // namespace

Subspace subspace_from_json(const Json& j, const ToleranceConfig& tol) {
    const Index n = dimension_field(j, "ambient_dim");
    if (!j.contains("vectors") || !j.at("vectors").is_array()) {
        fail("vectors", "expected an array of vectors");
    }
    const Json& vectors = j.at("vectors");
    Matrix raw(n, Index(vectors.size()));
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        const std::string field = "vectors[" + std::to_string(k) + "]";
        const Vector v = vector_from_json(vectors[k], field);
        if (v.size() != n) fail(field, "expected length " + std::to_string(n));
        if (!(v.norm() > 0.0)) fail(field, "zero vector");
        raw.col(Index(k)) = v;
    }
    // Already orthonormal to rounding: keep the vectors bit for bit.
    const Index m = raw.cols();
    if (m > 0 && (raw.adjoint() * raw - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() <= 8 * kEps * double(n)) {
        return Subspace::from_orthonormal(raw, tol);
    }
    Matrix basis(n, 0);
    for (Index k = 0; k < m; ++k) {
        const std::string field = "vectors[" + std::to_string(k) + "]";
        Vector v = raw.col(k);
        const double norm = v.norm();
        // Two passes of Gram-Schmidt keep the basis orthonormal to working precision.
        for (int pass = 0; pass < 2; ++pass) v -= basis * (basis.adjoint() * v);
        if (v.norm() < tol.rank_tol * norm) fail(field, "linearly dependent on earlier vectors");
        basis.conservativeResize(n, basis.cols() + 1);
        basis.col(basis.cols() - 1) = v / v.norm();
    }
    return Subspace::from_orthonormal(basis, tol);
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
    out << text;
}

}  // namespace localize::io
