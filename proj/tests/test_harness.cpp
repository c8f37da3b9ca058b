// Copyright 2026 The ecadd Authors
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
#include <sys/wait.h>

#include <array>
#include <cstdio>

#include "ecadd/harness.hpp"

namespace {

using namespace ecadd;
using nlohmann::json;

const std::string kFixtures = ECADD_FIXTURES;

struct CliResult {
    int status;
    std::string out;
};

CliResult cli(const std::string &args) {
    std::string cmd = std::string(ECADD_CLI) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return {-1, {}};
    }
    std::string out;
    std::array<char, 4096> buf;
    size_t k;
    while ((k = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        out.append(buf.data(), k);
    }
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string p17() {
    return "--curve " + kFixtures + "/p17.json";
}

CurveFixture fixture() {
    return load_curve(kFixtures + "/p17.json");
}

TEST(Fixtures, ParseAndReject) {
    auto fx = parse_curve(R"({"p": 17, "c1": 0, "c2": 7, "n": 5})");
    EXPECT_EQ(fx.curve.p(), 17u);
    EXPECT_EQ(fx.curve.c2, 7u);
    EXPECT_THROW(parse_curve(R"({"p": 17, "c1": 0})"), UsageError);
    EXPECT_THROW(parse_curve("not json"), UsageError);
    EXPECT_THROW(parse_curve(R"({"p": 17, "c1": 0, "c2": 7, "n": 6})"), UsageError);
    EXPECT_THROW(parse_curve(R"({"p": 17, "c1": 1, "c2": 0, "n": 5})"), UsageError);
    EXPECT_THROW(load_curve(kFixtures + "/missing.json"), UsageError);
}

TEST(Commands, SimulateReportsResultAndDirtyRegister) {
    auto fx = fixture();
    auto ok = cmd_simulate(fx, {2, 7}, {1, 5}, Variant::corrected(), false);
    EXPECT_TRUE(ok.passed());
    auto bad = cmd_simulate(fx, {2, 7}, {1, 5}, buggy_variant("step2"), true);
    ASSERT_EQ(bad.failures.size(), 1u);
    EXPECT_EQ(bad.failures[0].reg, "f1");
    EXPECT_EQ(bad.failures[0].cls, EdgeClass::TANGENT_COINCIDENCE);
    EXPECT_FALSE(bad.failures[0].trace_excerpt.empty());
    EXPECT_EQ(bad.exit_code(), kExitFail);
}

TEST(Commands, ExhaustiveFuzzCoversEveryClassPresent) {
    auto r = cmd_fuzz(fixture(), Variant::corrected(), {});
    EXPECT_EQ(r.cases, 324);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.details["classes"]["TANGENT_COINCIDENCE"]["cases"], 14);
    auto buggy = cmd_fuzz(fixture(), buggy_variant("step6a"), {});
    EXPECT_EQ(buggy.failures.size(), 2u);
}

TEST(Commands, SampledFuzzIsDeterministic) {
    FuzzOptions opt{false, 100, 7};
    auto a = to_json(cmd_fuzz(fixture(), Variant::all_buggy(), opt));
    auto b = to_json(cmd_fuzz(fixture(), Variant::all_buggy(), opt));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a["cases"], 100);
    opt.seed = 8;
    EXPECT_NE(to_json(cmd_fuzz(fixture(), Variant::all_buggy(), opt))["details"], a["details"]);
}

TEST(Commands, CensusCarriesCostAndDelta) {
    auto r = cmd_census(fixture(), Variant::all_buggy(), {std::nullopt, Variant::corrected()});
    EXPECT_TRUE(r.passed());
    auto j = to_json(r);
    EXPECT_EQ(j["census"]["Toffoli"], 20);
    EXPECT_EQ(j["details"]["delta"]["1"], "-12");
    EXPECT_EQ(j["details"]["delta"]["0"], "3");
    auto c = to_json(cmd_census(fixture(), Variant::corrected(), {5, std::nullopt}));
    EXPECT_EQ(c["toffoli_total"]["2"], "253/2");
    EXPECT_EQ(c["peak_ancilla"]["1"], "5");
    EXPECT_EQ(c["peak_ancilla"]["0"], "6");
}

TEST(Commands, ValidatePassesEveryVariant) {
    for (const char *v : {"corrected", "all-buggy", "step2", "step5", "step6a", "step6b"}) {
        EXPECT_TRUE(cmd_validate(fixture(), Variant::parse(v)).passed()) << v;
    }
}

TEST(Commands, ReproBugsNeedsEveryTriggerClass) {
    auto r = cmd_repro_bugs(fixture());
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(to_json(r)["details"]["bugs"].size(), 5u);
    EXPECT_THROW(cmd_repro_bugs(load_curve(kFixtures + "/p17_no_2torsion.json")), UsageError);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli("validate " + p17()).status, 0);
    EXPECT_EQ(cli("simulate " + p17() + " --px 2 --py 7 --qx 1 --qy 5").status, 0);
    EXPECT_EQ(cli("simulate " + p17() + " --px 2 --py 7 --qx 1 --qy 5 --variant step2").status, 1);
    EXPECT_EQ(cli("fuzz " + p17() + " --exhaustive --variant step6b").status, 1);
    EXPECT_EQ(cli("simulate " + p17() + " --px 1 --py 1 --qx 1 --qy 5").status, 2);
    EXPECT_EQ(cli("census --curve " + kFixtures + "/missing.json").status, 2);
    EXPECT_EQ(cli("census " + p17() + " --variant step9").status, 2);
    EXPECT_EQ(cli("frobnicate").status, 2);
    EXPECT_EQ(cli("repro-bugs " + p17()).status, 0);
    EXPECT_EQ(cli("repro-bugs --curve " + kFixtures + "/p17_no_2torsion.json").status, 2);
}

TEST(Cli, JsonSchema) {
    auto r = cli("fuzz " + p17() + " --variant step2 --exhaustive --format json");
    ASSERT_EQ(r.status, 1);
    auto j = json::parse(r.out);
    for (const char *key :
         {"command", "fixture", "variant", "verdict", "cases", "failures", "census", "toffoli_total", "peak_ancilla",
          "details"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["verdict"], "fail");
    EXPECT_EQ(j["failures"].size(), 14u);
    const auto &f = j["failures"][0];
    EXPECT_EQ(f["class"], "TANGENT_COINCIDENCE");
    EXPECT_EQ(f["register"], "f1");
    EXPECT_TRUE(f["P"].is_array());
}

TEST(Cli, SeededSamplingIsReproducible) {
    std::string args = "fuzz " + p17() + " --variant all-buggy --samples 100 --seed 7 --format json";
    auto a = cli(args);
    auto b = cli(args);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(json::parse(a.out)["cases"], 100);
}

TEST(Cli, CensusJsonMatchesLibrary) {
    auto r = cli("census " + p17() + " --format json");
    ASSERT_EQ(r.status, 0);
    auto j = json::parse(r.out);
    for (const auto &[family, count] : reference_census()) {
        EXPECT_EQ(j["census"][family], count) << family;
    }
    EXPECT_EQ(j["toffoli_total"]["1"], "447/2");
    EXPECT_EQ(j["toffoli_total"]["0"], "-37");
}

}  // namespace
