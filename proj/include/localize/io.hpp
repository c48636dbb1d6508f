#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "localize/linalg.hpp"

namespace localize::io {

using Json = nlohmann::ordered_json;

/// {"dim": n, "data": [[[re, im], ...], ...]}
Json matrix_to_json(const Matrix& m);
/// Parses a square complex matrix; errors name the offending field.
Matrix matrix_from_json(const Json& j);
HermitianOperator operator_from_json(const Json& j, const ToleranceConfig& tol = {});

/// {"ambient_dim": n, "vectors": [[[re, im], ...], ...]}
Json subspace_to_json(const Subspace& v);
/// Orthonormalizes the listed vectors in order; a vector whose residual
/// after projection is below rank_tol times its norm is rejected.
Subspace subspace_from_json(const Json& j, const ToleranceConfig& tol = {});

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& field);

/// Serializes with every floating-point value printed to 17 significant digits.
std::string dump(const Json& j, int indent = 2);
std::string format_double(double x);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace localize::io
