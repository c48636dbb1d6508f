#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "helpers.hpp"
#include "localize/error.hpp"
#include "localize/io.hpp"

using namespace localize;
using io::Json;

namespace {

std::string parse_message(const Json& j) {
    try {
        io::matrix_from_json(j);
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::ParseError);
        return err.what();
    }
    FAIL("expected ParseError");
    return {};
}

}  // namespace

TEST_CASE("matrix roundtrip is bit exact through text") {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> n;
    Matrix m(3, 3);
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 3; ++j) m(i, j) = Complex(n(gen), n(gen) * 1e-7);
    }
    m(0, 0) = Complex(1.0 / 3.0, 0.0);
    m(1, 1) = Complex(5e-300, -0.0);
    const std::string text = io::dump(io::matrix_to_json(m));
    const Matrix back = io::matrix_from_json(Json::parse(text));
    CHECK(back == m);
    CHECK(io::dump(io::matrix_to_json(back)) == text);
}

TEST_CASE("subspace roundtrip is bit exact") {
    const Subspace v = test::span({test::vec({1, {0, 2}, 3}), test::vec({0, 1, -1})});
    const std::string text = io::dump(io::subspace_to_json(v));
    const Subspace back = io::subspace_from_json(Json::parse(text));
    CHECK(back.dim() == 2);
    CHECK(io::dump(io::subspace_to_json(back)) == text);
}

TEST_CASE("matrix parse diagnostics name the field") {
    CHECK(parse_message(Json::parse(R"({"data": []})")).find("dim") != std::string::npos);
    CHECK(parse_message(Json::parse(R"({"dim": 2, "data": [[[1,0],[0,0]]]})")).find("data") !=
          std::string::npos);
    CHECK(parse_message(Json::parse(R"({"dim": 2, "data": [[[1,0],[0,0]], [[0,0],[1]]]})")).find("data[1]") !=
          std::string::npos);
    CHECK(parse_message(Json::parse(R"({"dim": 1, "data": [[["x",0]]]})")).find("data[0]") != std::string::npos);
}

TEST_CASE("operator parse rejects non-Hermitian") {
    const Json j = io::matrix_to_json(test::mat({{1, 2}, {0, 1}}));
    try {
        io::operator_from_json(j);
        FAIL("expected NotHermitian");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NotHermitian);
    }
}

TEST_CASE("subspace parse orthonormalizes and rejects dependence") {
    const Json ok = Json::parse(R"({"ambient_dim": 2, "vectors": [[[3,0],[4,0]]]})");
    const Subspace v = io::subspace_from_json(ok);
    CHECK(v.dim() == 1);
    CHECK(std::abs(v.basis().col(0).norm() - 1.0) < 1e-15);

    const Json dep = Json::parse(R"({"ambient_dim": 2, "vectors": [[[1,0],[1,0]], [[2,0],[2,0]]]})");
    try {
        io::subspace_from_json(dep);
        FAIL("expected ParseError");
    } catch (const Error& err) {
        CHECK(std::string(err.what()).find("linearly dependent") != std::string::npos);
    }
    const Json zero = Json::parse(R"({"ambient_dim": 2, "vectors": [[[0,0],[0,0]]]})");
    CHECK_THROWS_AS(io::subspace_from_json(zero), Error);
    const Json wrong = Json::parse(R"({"ambient_dim": 3, "vectors": [[[0,0],[1,0]]]})");
    CHECK_THROWS_AS(io::subspace_from_json(wrong), Error);
}

TEST_CASE("format_double") {
    CHECK(io::format_double(1.0) == "1.0");
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(1e300) == "1.0000000000000001e+300");
    CHECK(io::format_double(std::nan("")) == "null");
}

TEST_CASE("file helpers") {
    const auto path = std::filesystem::temp_directory_path() / "localize_io_test.json";
    io::write_text_file(path, io::dump(io::matrix_to_json(Matrix::Identity(2, 2))));
    CHECK(io::matrix_from_json(io::read_json_file(path)) == Matrix::Identity(2, 2));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(io::read_json_file(path), Error);
}
