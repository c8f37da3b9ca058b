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

// Verification commands behind the command-line tool. Each returns a
// RunReport; exit codes are 0 pass, 1 verification failure, 2 usage or
// fixture error.

#ifndef ECADD_HARNESS_HPP
#define ECADD_HARNESS_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecadd/cost.hpp"
#include "ecadd/curve.hpp"
#include "ecadd/ec_add.hpp"
#include "ecadd/validate.hpp"

namespace ecadd {

enum ExitCode { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

/// Bad fixture, bad point, or a fixture lacking what the command needs.
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct CurveFixture {
    std::string name;
    CurveParams curve;
};

inline CurveFixture parse_curve(const std::string &text, const std::string &name = "<inline>") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw UsageError(name + ": " + e.what());
    }
    for (const char *key : {"p", "c1", "c2"}) {
        if (!j.contains(key) || !j[key].is_number_unsigned()) {
            throw UsageError(name + ": missing or non-integer field \"" + key + "\"");
        }
    }
    try {
        uint64_t p = j["p"], c1 = j["c1"], c2 = j["c2"];
        if (j.contains("n")) {
            return {name, CurveParams(p, c1, c2, j["n"].get<unsigned>())};
        }
        return {name, CurveParams(p, c1, c2)};
    } catch (const DomainError &e) {
        throw UsageError(name + ": " + e.what());
    }
}

inline CurveFixture load_curve(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open curve fixture " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_curve(buf.str(), path);
}

inline AffinePoint checked_point(uint64_t x, uint64_t y, const CurveParams &curve, const char *what) {
    AffinePoint P{x, y};
    if (!curve.on_curve(P)) {
        throw UsageError(std::string(what) + " = " + P.str() + " is not on " + curve.str());
    }
    return P;
}

struct CaseFailure {
    AffinePoint P, Q;
    EdgeClass cls = EdgeClass::GENERIC;
    std::string kind;  // "violation", "mismatch" or "error"
    std::string detail;
    std::string reg;
    Value raw = 0;
    Value plain = 0;
    std::vector<std::string> trace_excerpt;
};

struct RunReport {
    std::string command;
    std::string fixture;
    std::string variant;
    int64_t cases = 0;
    std::vector<CaseFailure> failures;
    std::optional<FamilyCounts> census;
    std::optional<CostPolynomial> toffoli_total;
    std::optional<LinearSize> peak_ancilla;
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
    std::vector<std::string> notes;  // human-readable lines for table output

    bool passed() const {
        return failures.empty();
    }

    int exit_code() const {
        return passed() ? kExitPass : kExitFail;
    }
};

inline RunReport make_report(std::string command, std::string fixture, std::string variant) {
    RunReport r;
    r.command = std::move(command);
    r.fixture = std::move(fixture);
    r.variant = std::move(variant);
    return r;
}

inline CaseFailure make_failure(const AffinePoint &P, const AffinePoint &Q, EdgeClass cls, std::string kind = {}) {
    CaseFailure f;
    f.P = P;
    f.Q = Q;
    f.cls = cls;
    f.kind = std::move(kind);
    return f;
}

inline nlohmann::ordered_json polynomial_json(const CostPolynomial &p) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        j[std::to_string(it->first)] = rational_to_string(it->second);
    }
    return j;
}

inline nlohmann::ordered_json point_json(const AffinePoint &P) {
    return nlohmann::ordered_json::array({P.x, P.y});
}

inline nlohmann::ordered_json to_json(const RunReport &r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    j["fixture"] = r.fixture;
    j["variant"] = r.variant;
    j["verdict"] = r.passed() ? "pass" : "fail";
    j["cases"] = r.cases;
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto &f : r.failures) {
        nlohmann::ordered_json fj;
        fj["P"] = point_json(f.P);
        fj["Q"] = point_json(f.Q);
        fj["class"] = to_string(f.cls);
        fj["kind"] = f.kind;
        fj["detail"] = f.detail;
        if (!f.reg.empty()) {
            fj["register"] = f.reg;
            fj["value"] = f.plain;
            fj["raw"] = f.raw;
        }
        fj["trace"] = f.trace_excerpt;
        j["failures"].push_back(fj);
    }
    j["census"] = nlohmann::ordered_json::object();
    if (r.census) {
        for (const auto &[family, count] : *r.census) {
            j["census"][family] = count;
        }
    }
    j["toffoli_total"] = r.toffoli_total ? polynomial_json(*r.toffoli_total) : nlohmann::ordered_json::object();
    j["peak_ancilla"] = r.peak_ancilla ? polynomial_json(CostPolynomial::from(*r.peak_ancilla))
                                       : nlohmann::ordered_json::object();
    j["details"] = r.details;
    return j;
}

inline std::string to_table(const RunReport &r) {
    std::ostringstream out;
    out << r.command << " [" << r.fixture << ", " << r.variant << "]: " << (r.passed() ? "PASS" : "FAIL") << " ("
        << r.cases << " cases, " << r.failures.size() << " failures)\n";
    for (const auto &line : r.notes) {
        out << "  " << line << "\n";
    }
    if (r.census) {
        out << "  census:\n";
        for (const auto &[family, count] : *r.census) {
            out << "    " << family << std::string(family.size() < 10 ? 10 - family.size() : 1, ' ') << count
                << "\n";
        }
    }
    if (r.toffoli_total) {
        out << "  toffoli total: " << r.toffoli_total->str() << "\n";
    }
    if (r.peak_ancilla) {
        out << "  peak ancilla: " << r.peak_ancilla->str() << "\n";
    }
    for (const auto &f : r.failures) {
        out << "  FAIL P=" << f.P.str() << " Q=" << f.Q.str() << " " << to_string(f.cls) << " " << f.kind << ": "
            << f.detail << "\n";
    }
    return out.str();
}

namespace detail {

inline std::vector<std::string> trace_tail(const SimTrace &trace, size_t k = 5) {
    std::vector<std::string> out;
    size_t start = trace.size() > k ? trace.size() - k : 0;
    for (size_t i = start; i < trace.size(); ++i) {
        out.push_back(trace[i].path + " " + trace[i].gate);
    }
    return out;
}

/// Runs one pair and returns the failure, if any.
inline std::optional<CaseFailure> check_case(const CompositeCircuit &circuit, const CurveParams &curve,
                                             const AffinePoint &P, const AffinePoint &Q, bool want_trace,
                                             EcAddRun *run_out = nullptr) {
    EcAddRun run = run_ec_add(circuit, curve, P, SimMode::Flattened, want_trace);
    if (run_out) {
        *run_out = run;
    }
    CaseFailure f = make_failure(P, Q, classify(P, Q, curve));
    if (!run.error.empty()) {
        f.kind = "error";
        f.detail = run.error;
    } else if (!run.clean) {
        f.kind = "violation";
        f.reg = run.violation_register;
        f.raw = run.violation_raw;
        f.plain = run.violation_plain;
        f.detail = "ancilla " + f.reg + " released holding " + std::to_string(f.plain) + " at " + run.violation_path;
        f.trace_excerpt = trace_tail(run.trace);
    } else {
        AffinePoint want = affine_add(P, Q, curve);
        if (run.result == want) {
            return std::nullopt;
        }
        f.kind = "mismatch";
        f.detail = "got " + run.result.str() + ", expected " + want.str();
    }
    return f;
}

}  // namespace detail

inline RunReport cmd_simulate(const CurveFixture &fx, const AffinePoint &P, const AffinePoint &Q,
                              const Variant &variant, bool trace) {
    RunReport r = make_report("simulate", fx.name, variant.name());
    require_on_curve(P, fx.curve);
    auto circuit = build_ec_add(fx.curve, Q, variant);
    EcAddRun run;
    auto failure = detail::check_case(circuit, fx.curve, P, Q, trace, &run);
    r.cases = 1;
    r.details["P"] = point_json(P);
    r.details["Q"] = point_json(Q);
    r.details["class"] = to_string(classify(P, Q, fx.curve));
    r.details["expected"] = point_json(affine_add(P, Q, fx.curve));
    if (run.clean && run.error.empty()) {
        r.details["result"] = point_json(run.result);
        r.notes.push_back("result " + run.result.str());
    }
    r.details["ancillas_clean"] = run.clean;
    r.notes.push_back(std::string("ancillas ") + (run.clean ? "clean" : "dirty"));
    if (trace) {
        auto &tj = r.details["trace"] = nlohmann::ordered_json::array();
        for (const auto &e : run.trace) {
            tj.push_back({{"path", e.path}, {"gate", e.gate}, {"in", e.inputs}, {"out", e.outputs}});
            r.notes.push_back(e.path + " " + e.gate);
        }
    }
    if (failure) {
        r.failures.push_back(*failure);
    }
    return r;
}

struct FuzzOptions {
    bool exhaustive = true;
    int64_t samples = 100;
    uint64_t seed = 0;
};

/// Checks pairs against affine_add and ancilla hygiene. Per-class tallies are
/// reported; exhaustive runs must exercise every class that occurs.
inline RunReport cmd_fuzz(const CurveFixture &fx, const Variant &variant, const FuzzOptions &opt) {
    RunReport r = make_report("fuzz", fx.name, variant.name());
    auto points = curve_points(fx.curve);
    std::vector<std::pair<size_t, size_t>> pairs;
    if (opt.exhaustive) {
        for (size_t i = 0; i < points.size(); ++i) {
            for (size_t j = 0; j < points.size(); ++j) {
                pairs.emplace_back(i, j);
            }
        }
    } else {
        if (opt.samples <= 0) {
            throw UsageError("--samples must be positive");
        }
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<size_t> pick(0, points.size() - 1);
        for (int64_t k = 0; k < opt.samples; ++k) {
            size_t i = pick(rng);
            pairs.emplace_back(i, pick(rng));
        }
        std::sort(pairs.begin(), pairs.end());
    }
    std::map<size_t, CompositeCircuit> circuits;
    std::map<EdgeClass, std::pair<int64_t, int64_t>> tally;
    for (auto [i, j] : pairs) {
        const AffinePoint &P = points[i];
        const AffinePoint &Q = points[j];
        auto it = circuits.find(j);
        if (it == circuits.end()) {
            it = circuits.emplace(j, build_ec_add(fx.curve, Q, variant)).first;
        }
        auto failure = detail::check_case(it->second, fx.curve, P, Q, true);
        auto &t = tally[classify(P, Q, fx.curve)];
        t.first++;
        if (failure) {
            t.second++;
            r.failures.push_back(*failure);
        }
        r.cases++;
    }
    r.details["points"] = points.size();
    r.details["mode"] = opt.exhaustive ? "exhaustive" : "sampled";
    if (!opt.exhaustive) {
        r.details["seed"] = opt.seed;
    }
    auto &classes = r.details["classes"] = nlohmann::ordered_json::object();
    for (EdgeClass c : all_edge_classes()) {
        auto [cases, failed] = tally.count(c) ? tally[c] : std::pair<int64_t, int64_t>{0, 0};
        classes[to_string(c)] = {{"cases", cases}, {"failures", failed}};
        r.notes.push_back(to_string(c) + ": " + std::to_string(cases) + " cases, " + std::to_string(failed) +
                          " failures");
    }
    return r;
}

/// Any point of the curve other than O; census and cost do not depend on Q.
inline AffinePoint representative_point(const CurveParams &curve) {
    auto pts = curve_points(curve);
    return pts.size() > 1 ? pts[1] : kIdentity;
}

struct CensusOptions {
    std::optional<int64_t> n;                // evaluate the total at this n
    std::optional<Variant> baseline;         // report cost(variant) - cost(baseline)
};

inline RunReport cmd_census(const CurveFixture &fx, const Variant &variant, const CensusOptions &opt) {
    RunReport r = make_report("census", fx.name, variant.name());
    AffinePoint Q = representative_point(fx.curve);
    auto circuit = build_ec_add(fx.curve, Q, variant);
    auto report = census(circuit);
    auto cost = toffoli_cost(circuit);
    r.census = report.totals;
    r.toffoli_total = cost;
    r.peak_ancilla = peak_ancilla(circuit);
    r.cases = 1;

    auto lead = cost.leading_term();
    if (lead) {
        r.details["leading_term"] = {{"degree", lead->first}, {"coefficient", rational_to_string(lead->second)}};
        r.notes.push_back("leading term " + rational_to_string(lead->second) + "*n^" + std::to_string(lead->first));
    }
    auto &steps = r.details["steps"] = nlohmann::ordered_json::object();
    for (const auto &[label, counts] : report.steps) {
        auto &sj = steps[label] = nlohmann::ordered_json::object();
        for (const auto &[family, c] : counts) {
            sj[family] = c;
        }
    }
    if (opt.n) {
        Rational at = cost.eval(*opt.n);
        r.details["n"] = *opt.n;
        r.details["toffoli_at_n"] = rational_to_string(at);
        r.details["peak_ancilla_at_n"] = r.peak_ancilla->at(*opt.n);
        r.notes.push_back("at n=" + std::to_string(*opt.n) + ": " + rational_to_string(at) + " Toffolis, " +
                          std::to_string(r.peak_ancilla->at(*opt.n)) + " ancilla qubits");
    }
    std::optional<Variant> baseline = opt.baseline;
    if (!baseline && !(variant == Variant::corrected())) {
        baseline = Variant::corrected();
    }
    if (baseline) {
        auto other = build_ec_add(fx.curve, Q, *baseline);
        auto delta = cost - toffoli_cost(other);
        r.details["baseline"] = baseline->name();
        r.details["delta"] = polynomial_json(delta);
        r.notes.push_back("delta vs " + baseline->name() + ": " + delta.str());
    }

    // Built census must match the declared per-step gate lists; the corrected
    // circuit must additionally reproduce the reference resource table.
    auto check = [&](const FamilyCounts &want, const FamilyCounts &got, const std::string &where) {
        for (const auto &[family, row] : census_diff(want, got)) {
            CaseFailure f = make_failure(Q, Q, EdgeClass::GENERIC, "census");
            f.detail = where + " " + family + ": expected " + std::to_string(row.first) + ", found " +
                       std::to_string(row.second);
            r.failures.push_back(f);
        }
    };
    for (size_t k = 0; k < report.steps.size(); ++k) {
        check(declared_step_census(static_cast<int>(k) + 1, variant), report.steps[k].second,
              report.steps[k].first);
    }
    if (variant == Variant::corrected()) {
        check(reference_census(), report.totals, "total");
    }
    return r;
}

/// Structural validation of the adder and of each step's decomposition,
/// including declared censuses.
inline RunReport cmd_validate(const CurveFixture &fx, const Variant &variant) {
    RunReport r = make_report("validate", fx.name, variant.name());
    AffinePoint Q = representative_point(fx.curve);
    auto gate = make_ec_add(fx.curve, Q, variant);
    const auto &top = gate->decomposition();
    auto record = [&](const std::string &where, const ValidationReport &v) {
        r.cases++;
        r.notes.push_back(where + ": " + (v.passed() ? "ok" : std::to_string(v.findings.size()) + " findings"));
        for (const auto &f : v.findings) {
            CaseFailure cf = make_failure(Q, Q, EdgeClass::GENERIC, to_string(f.code));
            cf.detail = where + " " + f.location + ": " + f.detail;
            r.failures.push_back(cf);
        }
    };
    FamilyCounts steps;
    for (int k = 1; k <= 6; ++k) {
        steps["ECAddStep" + std::to_string(k)] = 1;
    }
    record("ECAdd", validate(top, steps));
    for (const auto &node : top.nodes) {
        if (node.kind == NodeKind::Gate) {
            auto *step = dynamic_cast<const EcAddStepGate *>(node.gate.get());
            record(node.label, validate(node.gate->decomposition(), declared_step_census(step->step(), variant)));
        }
    }
    auto flat = flatten(top);
    std::optional<FamilyCounts> want;
    if (variant == Variant::corrected()) {
        want = reference_census();
    } else {
        want = declared_census(variant);
    }
    record("flattened", validate(flat, want));
    return r;
}

struct BugTrigger {
    std::string bug;       // variant name
    std::string expected;  // register the bug leaves dirty
    std::vector<EdgeClass> classes;
};

inline const std::vector<BugTrigger> &bug_triggers() {
    static const std::vector<BugTrigger> t = {
        {"step2", "f1", {EdgeClass::TANGENT_COINCIDENCE}},
        {"step5", "lambda", {EdgeClass::TANGENT_COINCIDENCE}},
        {"step6a", "f2", {EdgeClass::P_IDENTITY, EdgeClass::Q_IDENTITY}},
        {"step6b", "f4", {EdgeClass::TWO_TORSION_DOUBLE}},
    };
    return t;
}

/// Reproduces each bug on the first trigger input (canonical order) of each
/// of its trigger classes, and checks the corrected circuit on the same
/// inputs. Exits 2 when the fixture lacks a trigger class.
inline RunReport cmd_repro_bugs(const CurveFixture &fx) {
    RunReport r = make_report("repro-bugs", fx.name, "all");
    auto points = curve_points(fx.curve);
    auto &bugs = r.details["bugs"] = nlohmann::ordered_json::array();
    int reproduced = 0, fixed = 0, total = 0;
    for (const auto &bug : bug_triggers()) {
        Variant buggy = Variant::parse(bug.bug);
        for (EdgeClass cls : bug.classes) {
            // Trigger: a pair of this class on which the buggy circuit leaves
            // the expected register dirty.
            std::optional<std::pair<AffinePoint, AffinePoint>> found;
            bool class_present = false;
            std::map<AffinePoint, CompositeCircuit> circuits;
            for (const auto &P : points) {
                for (const auto &Q : points) {
                    if (found || classify(P, Q, fx.curve) != cls) {
                        continue;
                    }
                    class_present = true;
                    auto it = circuits.find(Q);
                    if (it == circuits.end()) {
                        it = circuits.emplace(Q, build_ec_add(fx.curve, Q, buggy)).first;
                    }
                    auto run = run_ec_add(it->second, fx.curve, P);
                    if (!run.clean && run.violation_register == bug.expected) {
                        found = {P, Q};
                    }
                }
            }
            if (!class_present) {
                throw UsageError("trigger class absent: " + to_string(cls) + " (needed for " + bug.bug + ") on " +
                                 fx.curve.str());
            }
            ++total;
            nlohmann::ordered_json bj;
            bj["bug"] = bug.bug;
            bj["class"] = to_string(cls);
            bj["expected_register"] = bug.expected;
            if (!found) {
                CaseFailure f = make_failure(kIdentity, kIdentity, cls, "not-reproduced");
                f.detail = bug.bug + ": no " + to_string(cls) + " input leaves " + bug.expected + " dirty";
                r.failures.push_back(f);
                bj["reproduced"] = false;
                bugs.push_back(bj);
                continue;
            }
            auto [P, Q] = *found;
            auto buggy_run = run_ec_add(build_ec_add(fx.curve, Q, buggy), fx.curve, P, SimMode::Flattened, true);
            auto fixed_failure = detail::check_case(build_ec_add(fx.curve, Q), fx.curve, P, Q, true);
            ++reproduced;
            bj["reproduced"] = true;
            bj["P"] = point_json(P);
            bj["Q"] = point_json(Q);
            bj["register"] = buggy_run.violation_register;
            bj["value"] = buggy_run.violation_plain;
            bj["raw"] = buggy_run.violation_raw;
            bj["path"] = buggy_run.violation_path;
            bj["trace"] = detail::trace_tail(buggy_run.trace);
            bj["fixed"] = !fixed_failure.has_value();
            r.cases += 2;
            r.notes.push_back(bug.bug + " on P=" + P.str() + " Q=" + Q.str() + " (" + to_string(cls) + "): " +
                              buggy_run.violation_register + "=" + std::to_string(buggy_run.violation_plain) +
                              "; corrected " + (fixed_failure ? "FAILS" : "passes"));
            if (fixed_failure) {
                r.failures.push_back(*fixed_failure);
            } else {
                ++fixed;
            }
            bugs.push_back(bj);
        }
    }
    r.details["reproduced"] = std::to_string(reproduced) + "/" + std::to_string(total);
    r.details["fixed"] = std::to_string(fixed) + "/" + std::to_string(total);
    return r;
}

}  // namespace ecadd

#endif
