// Copyright 2026 The qmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>

#include "helpers.hpp"
#include "qmm/io.hpp"

using namespace qmm;
using qmm::testing::random_state;

namespace {

std::string temp_path(const std::string &name) {
    return (std::filesystem::temp_directory_path() / ("qmm_test_io_" + name)).string();
}

}  // namespace

TEST(io, round_trip_is_bit_exact) {
    std::mt19937_64 rng(3);
    auto rho = random_state(window(2, -1, 2, 2), rng);
    std::string path = temp_path("rt.json");
    write_marginal_file(path, rho);
    EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
    auto back = read_marginal_file(path);
    EXPECT_EQ(back.region(), rho.region());
    EXPECT_EQ(back.site_dimension(), 2);
    EXPECT_TRUE(back.matrix() == rho.matrix());
    EXPECT_EQ(marginal_file_json(back), marginal_file_json(rho));
    std::filesystem::remove(path);
}

TEST(io, extra_members) {
    auto rho = DensityOperator::maximally_mixed(Region{{0, 0}});
    auto j = nlohmann::json::parse(marginal_file_json(rho, "  \"provenance\": \"sequential\""));
    EXPECT_EQ(j["provenance"], "sequential");
    EXPECT_EQ(j["entropy_base"], 2);
    EXPECT_EQ(j["matrix"]["dim"], 2);
}

TEST(io, schema_errors) {
    auto good = nlohmann::json::parse(marginal_file_json(DensityOperator::maximally_mixed(Region{{0, 0}, {1, 0}})));
    EXPECT_NO_THROW(parse_matrix_file(good.dump()));
    auto bad = [&](auto edit) {
        nlohmann::json j = good;
        edit(j);
        return j.dump();
    };
    EXPECT_THROW(parse_matrix_file("{not json"), InputError);
    EXPECT_THROW(parse_matrix_file(bad([](auto &j) { j.erase("region"); })), InputError);
    EXPECT_THROW(parse_matrix_file(bad([](auto &j) { j["site_dimension"] = 0; })), InputError);
    EXPECT_THROW(parse_matrix_file(bad([](auto &j) { j["entropy_base"] = 10; })), InputError);
    EXPECT_THROW(parse_matrix_file(bad([](auto &j) { j["region"][1] = {0, 0}; })), InputError);
    EXPECT_THROW(parse_matrix_file(bad([](auto &j) { j["region"][1] = {1}; })), InputError);
    EXPECT_THROW(parse_matrix_file(bad([](auto &j) { j["matrix"]["dim"] = 3; })), InputError);
    EXPECT_THROW(parse_matrix_file(bad([](auto &j) { j["matrix"]["data"].erase(0); })), InputError);
    EXPECT_THROW(parse_matrix_file(bad([](auto &j) { j["matrix"]["data"][0] = {1}; })), InputError);
    EXPECT_THROW(parse_matrix_file(bad([](auto &j) {
                     j["region"] = nlohmann::json::array();
                     for (int x = 0; x < 14; x++) {
                         j["region"].push_back({x, 0});
                     }
                 })),
                 InputError);
}

TEST(io, invalid_operator_is_input_error) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    std::string path = temp_path("neg.json");
    write_atomic(path, matrix_file_json(Region{{0, 0}}, 2, m));
    EXPECT_THROW(read_marginal_file(path), InputError);
    std::filesystem::remove(path);
    EXPECT_THROW(read_marginal_file(temp_path("missing.json")), InputError);
}

TEST(io, formatting) {
    EXPECT_EQ(format_scalar(0), "0.000000000000");
    EXPECT_EQ(format_scalar(-1e-15), "0.000000000000");
    EXPECT_EQ(format_scalar(6), "6.000000000000");
    EXPECT_EQ(format_scalar(-0.6931471805599453), "-0.693147180560");
    EXPECT_EQ(std::stod(format17(0.1)), 0.1);
    EXPECT_EQ(digest("abc"), digest("abc"));
    EXPECT_NE(digest("abc"), digest("abd"));
    EXPECT_EQ(digest("").size(), 16u);
}

TEST(io, report_json) {
    Report rep;
    rep.add(CheckRecord::judge("a", 1e-12, 1e-8));
    rep.add(CheckRecord::skipped("b", "too big"));
    auto j = report_json(rep, Tolerances{}, {{"m22", "00"}}, "verify");
    EXPECT_EQ(j["summary"], "pass");
    EXPECT_EQ(j["records"].size(), 2u);
    EXPECT_TRUE(j["records"][1]["residual"].is_null());
    EXPECT_EQ(j["records"][1]["verdict"], "skipped");
    EXPECT_EQ(j["tolerances"]["tol_consistency"], 1e-8);
    rep.add(CheckRecord::judge("c", std::numeric_limits<double>::infinity(), 1e-8));
    EXPECT_EQ(report_json(rep, Tolerances{}, {}, "verify")["summary"], "fail");
}
