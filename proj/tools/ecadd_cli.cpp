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


// ecadd: validate, simulate, census, fuzz and repro-bugs for the reversible
// point adder. Exit codes: 0 pass, 1 verification failure, 2 usage error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ecadd/harness.hpp"

namespace {

struct Common {
    std::string curve_path;
    std::string variant = "corrected";
    std::string format = "table";
};

void add_common(CLI::App *cmd, Common &c, bool with_variant = true) {
    cmd->add_option("--curve", c.curve_path, "curve fixture (JSON: p, c1, c2, n)")->required();
    if (with_variant) {
        cmd->add_option("--variant", c.variant, "corrected|step2|step5|step6a|step6b|all-buggy")
            ->check(CLI::IsMember({"corrected", "step2", "step5", "step6a", "step6b", "all-buggy"}));
    }
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "table"}));
}

int emit(const ecadd::RunReport &r, const Common &c) {
    if (c.format == "json") {
        std::cout << ecadd::to_json(r).dump(2) << "\n";
    } else {
        std::cout << ecadd::to_table(r);
    }
    return r.exit_code();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Reversible elliptic-curve point addition: validation toolkit"};
    app.require_subcommand(1);
    Common common;

    auto *validate = app.add_subcommand("validate", "structural validation and census checks");
    add_common(validate, common);

    uint64_t px = 0, py = 0, qx = 0, qy = 0;
    bool trace = false;
    auto *simulate = app.add_subcommand("simulate", "add P + Q through the circuit");
    add_common(simulate, common);
    simulate->add_option("--px", px)->required();
    simulate->add_option("--py", py)->required();
    simulate->add_option("--qx", qx)->required();
    simulate->add_option("--qy", qy)->required();
    simulate->add_flag("--trace", trace, "record every leaf gate");

    std::optional<int64_t> n;
    bool symbolic = false;
    std::string baseline;
    auto *census = app.add_subcommand("census", "gate census, Toffoli cost and peak ancilla");
    add_common(census, common);
    auto *n_opt = census->add_option("--n", n, "evaluate costs at this bitsize");
    census->add_flag("--symbolic", symbolic, "symbolic costs only (default)")->excludes(n_opt);
    census->add_option("--baseline", baseline, "report the cost delta against this variant")
        ->check(CLI::IsMember({"corrected", "step2", "step5", "step6a", "step6b", "all-buggy"}));

    ecadd::FuzzOptions fuzz_opt;
    bool exhaustive = false;
    std::optional<int64_t> samples;
    auto *fuzz = app.add_subcommand("fuzz", "compare against the affine group law");
    add_common(fuzz, common);
    auto *ex_opt = fuzz->add_flag("--exhaustive", exhaustive, "every ordered pair of curve points");
    fuzz->add_option("--samples", samples, "number of random pairs")->excludes(ex_opt);
    fuzz->add_option("--seed", fuzz_opt.seed, "random seed");

    auto *repro = app.add_subcommand("repro-bugs", "reproduce the four uncorrected edge cases");
    add_common(repro, common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? ecadd::kExitPass : ecadd::kExitUsage;
    }

    try {
        auto fx = ecadd::load_curve(common.curve_path);
        auto variant = ecadd::Variant::parse(common.variant);
        if (*validate) {
            return emit(ecadd::cmd_validate(fx, variant), common);
        }
        if (*simulate) {
            auto P = ecadd::checked_point(px, py, fx.curve, "P");
            auto Q = ecadd::checked_point(qx, qy, fx.curve, "Q");
            return emit(ecadd::cmd_simulate(fx, P, Q, variant, trace), common);
        }
        if (*census) {
            ecadd::CensusOptions opt;
            opt.n = n;
            if (!baseline.empty()) {
                opt.baseline = ecadd::Variant::parse(baseline);
            }
            return emit(ecadd::cmd_census(fx, variant, opt), common);
        }
        if (*fuzz) {
            if (!exhaustive && !samples) {
                throw ecadd::UsageError("fuzz needs --exhaustive or --samples K");
            }
            fuzz_opt.exhaustive = exhaustive;
            fuzz_opt.samples = samples.value_or(0);
            return emit(ecadd::cmd_fuzz(fx, variant, fuzz_opt), common);
        }
        return emit(ecadd::cmd_repro_bugs(fx), common);
    } catch (const ecadd::UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return ecadd::kExitUsage;
    }
}
