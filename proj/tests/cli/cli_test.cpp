/*
   Copyright 2026 The divop Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "divop/cli.hpp"

using divop::run_cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(Classify, MarkdownTable) {
    const auto r = run({"classify", "--p", "3", "--N", "1", "--order", "2", "--format", "markdown"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("### p = 3, N = 1, order 2"), std::string::npos);
    EXPECT_NE(r.out.find("| (2,2) | f^(0)g^(2) - f^(1)g^(1) + f^(2)g^(0) | dim 1: J^2_{2,2} |"), std::string::npos);
}

TEST(Classify, CsvHasEveryCell) {
    const auto r = run({"classify", "--p", "2", "--N", "1", "--order", "1", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "p,N,k,a,b,dim,names");
    int cells = 0;
    while (std::getline(lines, line)) {
        ++cells;
        EXPECT_EQ(line.rfind("2,1,1,", 0), 0u);
        EXPECT_EQ(line[10], '2') << line;
    }
    EXPECT_EQ(cells, 4);
}

TEST(Classify, EmptyTable) {
    const auto r = run({"classify", "--p", "11", "--N", "1", "--order", "4"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("no invariant operators"), std::string::npos);
}

TEST(Classify, SingleCellAndJson) {
    const auto r = run({"classify", "--p", "5", "--N", "1", "--order", "4", "--weights", "1,1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.at("cells").size(), 1u);
    EXPECT_EQ(j["cells"][0]["names"], "∫⊗id; id⊗∫; Bj_{5,1} = id⊗∫ - ∫⊗id; r(Bj_{5,1}) = ∫⊗id - id⊗∫");
}

TEST(Classify, Deterministic) {
    const std::vector<std::string> args{"classify", "--p", "2", "--N", "2", "--order", "4", "--format", "json"};
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Classify, UsageErrors) {
    EXPECT_EQ(run({"classify", "--p", "4", "--order", "1"}).code, 2);
    EXPECT_EQ(run({"classify", "--p", "3", "--N", "0", "--order", "1"}).code, 2);
    EXPECT_EQ(run({"classify", "--p", "3"}).code, 2);
    EXPECT_EQ(run({"classify", "--p", "3", "--order", "1", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"classify", "--p", "2", "--N", "20", "--order", "1"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Scan, CheckpointResume) {
    const std::string ck = temp("divop_cli_scan.json");
    std::filesystem::remove(ck);
    const std::vector<std::string> args{"scan", "--p-set", "2,3", "--order-max", "4", "--checkpoint", ck, "--verbose"};
    const auto first = run(args);
    ASSERT_EQ(first.code, 0) << first.err;
    EXPECT_NE(first.err.find("0 resumed"), std::string::npos);
    const auto second = run(args);
    ASSERT_EQ(second.code, 0);
    EXPECT_NE(second.err.find(" 0 computed"), std::string::npos) << second.err;
    EXPECT_EQ(first.out, second.out);
    EXPECT_EQ(run({"scan", "--p-set", "2,3", "--order-max", "4", "--checkpoint", ck, "--mode", "general"}).code, 2);
    std::filesystem::remove(ck);
}

TEST(Scan, EmptyRange) {
    const auto r = run({"scan", "--p-set", "5", "--order", "3", "--order-max", "2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "p,N,k,a,b,dim,names\n");
}

TEST(Scan, OutputFileAndFixedHeights) {
    const std::string out = temp("divop_cli_scan.csv");
    const auto r = run({"scan", "--p-set", "3", "--order-max", "2", "--N-policy", "fixed", "--N", "1,2", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "");
    const std::string text = slurp(out);
    EXPECT_NE(text.find("3,1,2,2,2,1,\"J^2_{2,2}\""), std::string::npos);
    EXPECT_NE(text.find("3,2,2,"), std::string::npos);
    std::filesystem::remove(out);
    EXPECT_EQ(run({"scan", "--p-set", "3", "--N", "1"}).code, 2);
    EXPECT_EQ(run({"scan", "--p-set", "3,6"}).code, 2);
}

TEST(Check, Families) {
    EXPECT_EQ(run({"check", "bj", "--p", "7", "--m", "1", "--N", "1"}).code, 0);
    EXPECT_EQ(run({"check", "gz", "--p", "2", "--m", "3", "--N", "2"}).code, 0);
    EXPECT_EQ(run({"check", "gz", "--p", "5", "--m", "1", "--N", "2"}).code, 0);
    EXPECT_EQ(run({"check", "L", "--p", "3", "--N", "2"}).code, 0);
    EXPECT_EQ(run({"check", "int-ops", "--p", "5", "--N", "1"}).code, 0);
    EXPECT_EQ(run({"check", "transvectant", "--p", "5", "--order", "3", "--N", "1"}).code, 0);
}

TEST(Check, RejectedParameters) {
    EXPECT_EQ(run({"check", "gz", "--p", "2", "--m", "4", "--N", "2"}).code, 2);
    EXPECT_EQ(run({"check", "gz", "--p", "3", "--m", "3", "--N", "2"}).code, 2);
    EXPECT_EQ(run({"check", "bj", "--p", "3", "--m", "2", "--N", "1"}).code, 2);
    EXPECT_EQ(run({"check", "spline", "--p", "3"}).code, 2);
}

TEST(Check, FailureReportsInstance) {
    // Transvectants are sl(2)-invariant but not vect(1;N)-invariant in general.
    const auto r = run({"check", "transvectant", "--p", "5", "--order", "2", "--N", "1", "--weights", "1,1", "--full"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL transvectant (p=5, m=1, N=1, a=1, b=1)"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("defect at X=u^("), std::string::npos);
}

TEST(Dualize, SelfDualIntegral) {
    const std::string in = temp("divop_cli_op.json");
    {
        std::ofstream f(in);
        f << R"({"p": 5, "a": 1, "b": 1, "c": 0, "name": "I", "coeffs": [[4, 4, 1]]})";
    }
    const auto r = run({"dualize", in, "--N", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["dual1"]["coeffs"], j["swap"]["coeffs"]);
    EXPECT_EQ(j["dual1"]["coeffs"], nlohmann::json::parse("[[4,4,1]]"));
    EXPECT_EQ(j["dual2"]["a"], 1);

    // twice gives back the original up to sign
    {
        std::ofstream f(in);
        f << j["dual1"].dump();
    }
    const auto twice = nlohmann::json::parse(run({"dualize", in, "--N", "1"}).out);
    EXPECT_EQ(twice["dual1"]["coeffs"], nlohmann::json::parse("[[4,4,1]]"));

    {
        std::ofstream f(in);
        f << "{not json";
    }
    EXPECT_EQ(run({"dualize", in}).code, 2);
    {
        std::ofstream f(in);
        f << R"({"p": 6, "a": 1, "b": 1, "c": 1, "coeffs": []})";
    }
    EXPECT_EQ(run({"dualize", in}).code, 2);
    std::filesystem::remove(in);
    EXPECT_EQ(run({"dualize", temp("divop_missing.json")}).code, 2);
}

TEST(Cohomology, LineCharTwo) {
    const auto r = run({"cohomology", "--m", "1", "--p", "2", "--N", "1", "--format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "m,N,p,q,dimH\n1,1,2,0,0\n1,1,2,1,1\n");
}

TEST(Cohomology, MixedHeights) {
    const auto r = run({"cohomology", "--m", "2", "--p", "3", "--N", "1,2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("| 2 | 1 | u1^(2)·u2^(8) du1^du2 |"), std::string::npos) << r.out;
    EXPECT_EQ(run({"cohomology", "--m", "2", "--p", "3", "--N", "1,2,3"}).code, 2);
    EXPECT_EQ(run({"cohomology", "--m", "1", "--p", "9"}).code, 2);
}
