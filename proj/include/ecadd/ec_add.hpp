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

// Reversible affine point addition (x, y) <- (x, y) + Q for a classical Q,
// as six composite steps over Montgomery registers. Each of the four edge
// case fixes can be switched off to reproduce the uncorrected circuit.
//
// Registers shared by the steps (all Montgomery-encoded unless a bit):
//   f1 = [x = a]          f3 = [Q = O]          ctrl = !f2 & !f3 & !f4
//   f2 = [y = -b]         f4 = [P = O]
//   a, b, lambda_r        classical constants for Q and its tangent slope
//   lambda                slope ancilla

#ifndef ECADD_EC_ADD_HPP
#define ECADD_EC_ADD_HPP

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ecadd/circuit.hpp"
#include "ecadd/curve.hpp"
#include "ecadd/field.hpp"
#include "ecadd/gates.hpp"
#include "ecadd/simulate.hpp"
#include "ecadd/validate.hpp"

namespace ecadd {

/// Which fixes are applied. The default is the corrected circuit.
struct Variant {
    bool fix2 = true;   // step 2: g ancilla guards the f1 clear
    bool fix5 = true;   // step 5: restore lambda when the inverse is 0
    bool fix6a = true;  // step 6: extra f2 clears for P or Q = O with y = 0
    bool fix6b = true;  // step 6: controlled ModSub/ModAdd before the f4 compare

    static Variant corrected() {
        return {};
    }

    static Variant all_buggy() {
        return {false, false, false, false};
    }

    bool operator==(const Variant &) const = default;

    std::string name() const {
        if (*this == corrected()) {
            return "corrected";
        }
        if (*this == all_buggy()) {
            return "all-buggy";
        }
        for (const char *s : {"step2", "step5", "step6a", "step6b"}) {
            if (*this == parse(s)) {
                return s;
            }
        }
        return std::string("custom[") + (fix2 ? "2" : "") + (fix5 ? "5" : "") + (fix6a ? "6a" : "") +
               (fix6b ? "6b" : "") + "]";
    }

    /// "corrected", "all-buggy", or the step whose fix is reverted.
    static Variant parse(const std::string &s) {
        Variant v;
        if (s == "corrected") {
            return v;
        }
        if (s == "all-buggy") {
            return all_buggy();
        }
        if (s == "step2" || s == "2") {
            v.fix2 = false;
        } else if (s == "step5" || s == "5") {
            v.fix5 = false;
        } else if (s == "step6a" || s == "6a") {
            v.fix6a = false;
        } else if (s == "step6b" || s == "6b") {
            v.fix6b = false;
        } else {
            throw std::invalid_argument("unknown variant " + s);
        }
        return v;
    }
};

/// The full circuit with exactly one fix reverted: "2", "5", "6a" or "6b".
inline Variant buggy_variant(const std::string &step) {
    return Variant::parse(step);
}

/// Register file seen by every step, in step-signature order.
struct EcAddState {
    Value f1 = 0, f2 = 0, f3 = 0, f4 = 0, ctrl = 0;
    Value a = 0, b = 0, x = 0, y = 0, lambda = 0, lambda_r = 0;

    static constexpr std::array<const char *, 11> kNames = {"f1", "f2", "f3", "f4", "ctrl", "a",
                                                            "b",  "x",  "y",  "lambda", "lambda_r"};

    std::vector<Value> values() const {
        return {f1, f2, f3, f4, ctrl, a, b, x, y, lambda, lambda_r};
    }

    static EcAddState from(std::span<const Value> v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
    }

    bool operator==(const EcAddState &) const = default;
};

namespace detail {

/// XOR into a Montgomery register, with the same range check simulation
/// applies to register fans.
inline Value xor_mont(Value target, Value source, const FieldParams &f, const char *where) {
    Value v = target ^ source;
    if (v >= f.p) {
        throw DomainError(std::string(where) + ": value " + std::to_string(v) + " out of range for MontUInt");
    }
    return v;
}

}  // namespace detail

// Classical action of each step on Montgomery-encoded registers. These are
// the shallow semantics of the step gates and must agree exactly with the
// gate-level decompositions below.

inline EcAddState step1(EcAddState s, const FieldParams &f) {
    s.f1 ^= s.x == s.a;
    s.f2 ^= mod_neg(s.y, f) == s.b;
    s.f3 ^= s.a == 0 && s.b == 0;
    s.f4 ^= s.x == 0 && s.y == 0;
    s.ctrl ^= s.f2 == 0 && s.f3 == 0 && s.f4 == 0;
    return s;
}

inline EcAddState step2(EcAddState s, const FieldParams &f, bool fix) {
    s.x = mod_sub(s.x, s.a, f);
    if (s.ctrl) {
        s.y = mod_sub(s.y, s.b, f);
    }
    Value prod = mont_product(mont_inverse(s.x, f), s.y, f);
    bool g = fix && prod == s.lambda_r;
    if (!s.f1 && s.ctrl) {
        s.lambda = detail::xor_mont(s.lambda, prod, f, "step2.lambda");
    }
    if (s.f1 && s.ctrl) {
        s.lambda = detail::xor_mont(s.lambda, s.lambda_r, f, "step2.lambda");
    }
    if (!g) {
        s.f1 ^= s.lambda_r == s.lambda;
    }
    return s;
}

inline EcAddState step3(EcAddState s, const FieldParams &f) {
    if (s.ctrl) {
        s.y = mod_sub(s.y, mont_product(s.lambda, s.x, f), f);
    }
    return s;
}

inline EcAddState step4(EcAddState s, const FieldParams &f) {
    if (s.ctrl) {
        s.x = mod_sub(s.x, mont_product(s.lambda, s.lambda, f), f);
        s.x = mod_add(s.x, mod_add(mod_dbl(s.a, f), s.a, f), f);
        s.y = mod_add(s.y, mont_product(s.lambda, s.x, f), f);
    }
    return s;
}

inline EcAddState step5(EcAddState s, const FieldParams &f, bool fix) {
    Value prod = mont_product(mont_inverse(s.x, f), s.y, f);
    if (s.ctrl) {
        s.lambda = detail::xor_mont(s.lambda, prod, f, "step5.lambda");
        if (fix && s.x == 0) {
            s.lambda = detail::xor_mont(s.lambda, s.lambda_r, f, "step5.lambda");
        }
        s.x = mod_neg(s.x, f);
    }
    s.x = mod_add(s.x, s.a, f);
    if (s.ctrl) {
        s.y = mod_sub(s.y, s.b, f);
    }
    return s;
}

inline EcAddState step6(EcAddState s, const FieldParams &f, bool fix_a, bool fix_b) {
    s.ctrl ^= s.f2 == 0 && s.f3 == 0 && s.f4 == 0;
    if (fix_a) {
        s.f2 ^= s.a == 0 && s.b == 0 && s.y == 0;
        s.f2 ^= s.b == 0 && s.x == 0 && s.y == 0;
    }
    if (s.f4) {
        s.x = detail::xor_mont(s.x, s.a, f, "step6.x");
        s.y = detail::xor_mont(s.y, s.b, f, "step6.y");
    }
    auto reset_to_identity = [&] {
        if (s.f1 && s.f2) {
            s.x = mod_sub(s.x, s.a, f);
            s.y = mod_add(s.y, s.b, f);
        }
    };
    if (fix_b) {
        reset_to_identity();
    }
    s.f4 ^= s.a == s.x && s.b == s.y;
    if (!fix_b) {
        reset_to_identity();
    }
    s.f3 ^= s.a == 0 && s.b == 0;
    bool at_identity = s.x == 0 && s.y == 0;
    s.f1 ^= at_identity;
    s.f2 ^= at_identity;
    return s;
}

namespace detail {

/// Named-wire helper for building step decompositions: every register and
/// ancilla is tracked by name and gates are applied to lists of names.
class NamedWires {
   public:
    explicit NamedWires(CircuitBuilder &bb) : bb_(bb) {
    }

    void add_register(const std::string &name, DataKind kind) {
        h_[name] = bb_.add_register(name, kind);
    }

    void alloc(const std::string &name, DataKind kind) {
        h_[name] = bb_.alloc(kind, name);
    }

    void free(const std::string &name) {
        bb_.free(h_.at(name), name);
        h_.erase(name);
    }

    void apply(const GatePtr &gate, const std::vector<std::string> &names, std::string label = {}) {
        std::vector<Handle> ins;
        for (const auto &n : names) {
            ins.push_back(h_.at(n));
        }
        auto outs = bb_.add(gate, ins, std::move(label));
        for (size_t i = 0; i < names.size(); ++i) {
            h_[names[i]] = outs[i];
        }
    }

    CompositeCircuit finalize() {
        std::vector<std::pair<std::string, Handle>> outs;
        for (const auto *name : EcAddState::kNames) {
            outs.emplace_back(name, h_.at(name));
        }
        return bb_.finalize(outs);
    }

   private:
    CircuitBuilder &bb_;
    std::map<std::string, Handle> h_;
};

inline GatePtr fan(std::vector<ControlSpec> controls, const DataKind &kind) {
    return std::make_shared<XorFanGate>(std::move(controls), RegisterSpec{"source", kind},
                                        RegisterSpec{"dest", kind});
}

inline GatePtr mcx(std::vector<ControlSpec> controls) {
    return std::make_shared<MultiControlledX>(std::move(controls));
}

inline GatePtr equals(const std::vector<std::string> &lhs, const std::vector<std::string> &rhs, const DataKind &kind,
                      std::optional<ControlSpec> control = std::nullopt) {
    std::vector<RegisterSpec> l, r;
    for (const auto &n : lhs) {
        l.push_back({n, kind});
    }
    for (const auto &n : rhs) {
        r.push_back({n, kind});
    }
    return std::make_shared<EqualsGate>(std::move(l), std::move(r), std::move(control));
}

}  // namespace detail

/// One of the six steps, acting on the shared register file.
class EcAddStepGate : public CompositeGate {
   public:
    EcAddStepGate(FieldParams field, int step, Variant variant) : field_(field), step_(step), variant_(variant) {
        if (step < 1 || step > 6) {
            throw std::invalid_argument("step must be in 1..6");
        }
        for (size_t i = 0; i < EcAddState::kNames.size(); ++i) {
            signature_.push_back({EcAddState::kNames[i], i < 5 ? DataKind::bit() : DataKind::mont(field_)});
        }
    }

    const Signature &signature() const override {
        return signature_;
    }

    std::string family() const override {
        return "ECAddStep" + std::to_string(step_);
    }

    /// Only the fixes that touch this step appear in the identity.
    std::string identity() const override {
        std::string id = family() + "[p=" + std::to_string(field_.p);
        switch (step_) {
            case 2:
                id += variant_.fix2 ? ";fixed" : ";unfixed";
                break;
            case 5:
                id += variant_.fix5 ? ";fixed" : ";unfixed";
                break;
            case 6:
                id += std::string(variant_.fix6a ? ";fixA" : ";noFixA") + (variant_.fix6b ? ";fixB" : ";noFixB");
                break;
        }
        return id + "]";
    }

    int step() const {
        return step_;
    }

    std::vector<Value> apply(std::span<const Value> in) const override {
        return run(EcAddState::from(in)).values();
    }

    EcAddState run(const EcAddState &s) const {
        switch (step_) {
            case 1:
                return step1(s, field_);
            case 2:
                return step2(s, field_, variant_.fix2);
            case 3:
                return step3(s, field_);
            case 4:
                return step4(s, field_);
            case 5:
                return step5(s, field_, variant_.fix5);
            default:
                return step6(s, field_, variant_.fix6a, variant_.fix6b);
        }
    }

   protected:
    CompositeCircuit build() const override {
        CircuitBuilder bb(identity());
        detail::NamedWires w(bb);
        for (const auto &r : signature_) {
            w.add_register(r.name, r.kind);
        }
        switch (step_) {
            case 1:
                build_step1(w);
                break;
            case 2:
                build_step2(w);
                break;
            case 3:
                build_step3(w);
                break;
            case 4:
                build_step4(w);
                break;
            case 5:
                build_step5(w);
                break;
            default:
                build_step6(w);
                break;
        }
        return w.finalize();
    }

   private:
    DataKind mont() const {
        return DataKind::mont(field_);
    }
    DataKind word() const {
        return DataKind::uint_words(field_);
    }
    ControlSpec zero(const char *name) const {
        return is_zero(name, mont());
    }
    GatePtr mod_mult(bool adjoint = false) const {
        return std::make_shared<ModMultGate>(field_, adjoint);
    }
    GatePtr mod_inv(bool adjoint = false) const {
        return std::make_shared<ModInvGate>(field_, adjoint);
    }

    void build_step1(detail::NamedWires &w) const {
        w.apply(detail::equals({"x"}, {"a"}, mont()), {"x", "a", "f1"});
        w.apply(std::make_shared<ModNegGate>(field_), {"y"});
        w.apply(detail::equals({"y"}, {"b"}, mont()), {"y", "b", "f2"});
        w.apply(std::make_shared<ModNegGate>(field_, std::vector<ControlSpec>{}, true), {"y"});
        w.apply(detail::mcx({zero("a"), zero("b")}), {"a", "b", "f3"});
        w.apply(detail::mcx({zero("x"), zero("y")}), {"x", "y", "f4"});
        w.apply(detail::mcx({off("f2"), off("f3"), off("f4")}), {"f2", "f3", "f4", "ctrl"});
    }

    void build_step2(detail::NamedWires &w) const {
        w.apply(mod_sub_gate(field_), {"a", "x"});
        w.apply(mod_sub_gate(field_, {on("ctrl")}), {"ctrl", "b", "y"});
        w.alloc("garbage1", word());
        w.alloc("garbage2", word());
        w.alloc("garbage_mult", word());
        w.alloc("prod", mont());
        w.apply(mod_inv(), {"x", "garbage1", "garbage2"});
        w.apply(mod_mult(), {"x", "y", "garbage_mult", "prod"});
        if (variant_.fix2) {
            w.alloc("g", DataKind::bit());
            w.apply(detail::equals({"prod"}, {"lambda_r"}, mont()), {"prod", "lambda_r", "g"});
        }
        w.apply(detail::fan({off("f1"), on("ctrl")}, mont()), {"f1", "ctrl", "prod", "lambda"});
        w.apply(detail::fan({on("f1"), on("ctrl")}, mont()), {"f1", "ctrl", "lambda_r", "lambda"});
        if (variant_.fix2) {
            w.apply(detail::equals({"lambda_r"}, {"lambda"}, mont(), off("g")), {"g", "lambda_r", "lambda", "f1"});
            w.apply(detail::equals({"prod"}, {"lambda_r"}, mont()), {"prod", "lambda_r", "g"});
            w.free("g");
        } else {
            w.apply(detail::equals({"lambda_r"}, {"lambda"}, mont()), {"lambda_r", "lambda", "f1"});
        }
        w.apply(mod_mult(true), {"x", "y", "garbage_mult", "prod"});
        w.apply(mod_inv(true), {"x", "garbage1", "garbage2"});
        w.free("prod");
        w.free("garbage_mult");
        w.free("garbage2");
        w.free("garbage1");
    }

    // y <- y - lambda * x under ctrl, via a ctrl-guarded copy of x.
    void build_step3(detail::NamedWires &w) const {
        w.alloc("tmp", mont());
        w.alloc("garbage_mult", word());
        w.alloc("prod", mont());
        w.apply(detail::fan({on("ctrl")}, mont()), {"ctrl", "x", "tmp"});
        w.apply(mod_mult(), {"lambda", "tmp", "garbage_mult", "prod"});
        w.apply(mod_sub_gate(field_), {"prod", "y"});
        w.apply(mod_mult(true), {"lambda", "tmp", "garbage_mult", "prod"});
        w.apply(detail::fan({on("ctrl")}, mont()), {"ctrl", "x", "tmp"});
        w.free("prod");
        w.free("garbage_mult");
        w.free("tmp");
    }

    // Under ctrl: x <- x - lambda^2 + 3a, then y <- y + lambda * x.
    void build_step4(detail::NamedWires &w) const {
        w.alloc("tmp", mont());
        w.alloc("garbage_mult", word());
        w.alloc("prod", mont());
        auto guarded_product = [&](const char *operand, const GatePtr &consume) {
            w.apply(detail::fan({on("ctrl")}, mont()), {"ctrl", operand, "tmp"});
            w.apply(mod_mult(), {"lambda", "tmp", "garbage_mult", "prod"});
            w.apply(consume, {"ctrl", "prod", operand == std::string("lambda") ? "x" : "y"});
            w.apply(mod_mult(true), {"lambda", "tmp", "garbage_mult", "prod"});
            w.apply(detail::fan({on("ctrl")}, mont()), {"ctrl", operand, "tmp"});
        };
        guarded_product("lambda", mod_sub_gate(field_, {on("ctrl")}));

        w.apply(detail::fan({on("ctrl")}, mont()), {"ctrl", "a", "tmp"});
        w.apply(mod_add_gate(field_), {"tmp", "x"});
        w.apply(std::make_shared<ModDblGate>(field_), {"tmp"});
        w.apply(mod_add_gate(field_), {"tmp", "x"});
        w.apply(std::make_shared<ModDblGate>(field_, true), {"tmp"});
        w.apply(detail::fan({on("ctrl")}, mont()), {"ctrl", "a", "tmp"});

        guarded_product("x", mod_add_gate(field_, {on("ctrl")}));
        w.free("prod");
        w.free("garbage_mult");
        w.free("tmp");
    }

    void build_step5(detail::NamedWires &w) const {
        w.alloc("garbage1", word());
        w.alloc("garbage2", word());
        w.alloc("garbage_mult", word());
        w.alloc("prod", mont());
        w.apply(mod_inv(), {"x", "garbage1", "garbage2"});
        w.apply(mod_mult(), {"x", "y", "garbage_mult", "prod"});
        w.apply(detail::fan({on("ctrl")}, mont()), {"ctrl", "prod", "lambda"});
        if (variant_.fix5) {
            w.apply(detail::fan({on("ctrl"), zero("x")}, mont()), {"ctrl", "x", "lambda_r", "lambda"});
        }
        w.apply(mod_mult(true), {"x", "y", "garbage_mult", "prod"});
        w.apply(mod_inv(true), {"x", "garbage1", "garbage2"});
        w.free("prod");
        w.free("garbage_mult");
        w.free("garbage2");
        w.free("garbage1");
        w.apply(std::make_shared<ModNegGate>(field_, std::vector<ControlSpec>{on("ctrl")}), {"ctrl", "x"});
        w.apply(mod_add_gate(field_), {"a", "x"});
        w.apply(mod_sub_gate(field_, {on("ctrl")}), {"ctrl", "b", "y"});
    }

    void build_step6(detail::NamedWires &w) const {
        w.apply(detail::mcx({off("f2"), off("f3"), off("f4")}), {"f2", "f3", "f4", "ctrl"});
        if (variant_.fix6a) {
            w.apply(detail::mcx({zero("a"), zero("b"), zero("y")}), {"a", "b", "y", "f2"});
            w.apply(detail::mcx({zero("b"), zero("x"), zero("y")}), {"b", "x", "y", "f2"});
        }
        w.apply(detail::fan({on("f4")}, mont()), {"f4", "a", "x"});
        w.apply(detail::fan({on("f4")}, mont()), {"f4", "b", "y"});
        auto reset_to_identity = [&] {
            w.apply(mod_sub_gate(field_, {on("f1"), on("f2")}), {"f1", "f2", "a", "x"});
            w.apply(mod_add_gate(field_, {on("f1"), on("f2")}), {"f1", "f2", "b", "y"});
        };
        if (variant_.fix6b) {
            reset_to_identity();
        }
        w.apply(detail::equals({"a", "b"}, {"x", "y"}, mont()), {"a", "b", "x", "y", "f4"});
        if (!variant_.fix6b) {
            reset_to_identity();
        }
        w.apply(detail::mcx({zero("a"), zero("b")}), {"a", "b", "f3"});
        w.apply(detail::mcx({zero("x"), zero("y")}), {"x", "y", "f1"});
        w.apply(detail::mcx({zero("x"), zero("y")}), {"x", "y", "f2"});
    }

    FieldParams field_;
    int step_;
    Variant variant_;
    Signature signature_;
};

/// Leaf census each step is declared to have, written out by hand from the
/// gate lists above; validation compares the built decompositions to it.
inline FamilyCounts declared_step_census(int step, const Variant &v) {
    switch (step) {
        case 1:
            return {{"Equals", 2}, {"ModNeg", 2}, {"Toffoli", 3}};
        case 2: {
            FamilyCounts c = {{"ModSub", 1}, {"CModSub", 1}, {"ModInv", 2}, {"ModMult", 2}, {"Toffoli", 2}};
            if (v.fix2) {
                c["Equals"] = 2;
                c["CEquals"] = 1;
            } else {
                c["Equals"] = 1;
            }
            return c;
        }
        case 3:
            return {{"Toffoli", 2}, {"ModMult", 2}, {"ModSub", 1}};
        case 4:
            return {{"Toffoli", 6}, {"ModMult", 4}, {"CModSub", 1}, {"ModAdd", 2}, {"ModDbl", 2}, {"CModAdd", 1}};
        case 5:
            return {{"ModInv", 2}, {"ModMult", 2}, {"Toffoli", v.fix5 ? 2 : 1}, {"CModNeg", 1}, {"ModAdd", 1},
                    {"CModSub", 1}};
        case 6:
            return {{"Toffoli", v.fix6a ? 8 : 6}, {"CModSub", 1}, {"CModAdd", 1}, {"Equals", 2}};
    }
    throw std::invalid_argument("step must be in 1..6");
}

inline FamilyCounts declared_census(const Variant &v) {
    FamilyCounts total;
    for (int k = 1; k <= 6; ++k) {
        for (const auto &[f, c] : declared_step_census(k, v)) {
            total[f] += c;
        }
    }
    return total;
}

/// Flag and slope ancillas released by the adder, in release order.
inline const std::vector<std::string> &ec_add_released_registers() {
    static const std::vector<std::string> names = {"lambda", "f1", "f2", "f3", "f4", "ctrl"};
    return names;
}

/// (x, y) <- (x, y) + Q on Montgomery registers.
class EcAddGate : public CompositeGate {
   public:
    EcAddGate(CurveParams curve, AffinePoint Q, Variant variant)
        : curve_(curve), Q_(Q), variant_(variant), lambda_r_(lambda_r(Q, curve_)) {
        require_on_curve(Q_, curve_);
        signature_.push_back({"x", DataKind::mont(curve_.field)});
        signature_.push_back({"y", DataKind::mont(curve_.field)});
    }

    const Signature &signature() const override {
        return signature_;
    }

    std::string family() const override {
        return "ECAdd";
    }

    std::string identity() const override {
        return "ECAdd[p=" + std::to_string(curve_.p()) + ";c1=" + std::to_string(curve_.c1) +
               ";c2=" + std::to_string(curve_.c2) + ";Q=" + Q_.str() + ";" + variant_.name() + "]";
    }

    const CurveParams &curve() const {
        return curve_;
    }
    const AffinePoint &Q() const {
        return Q_;
    }
    const Variant &variant() const {
        return variant_;
    }

    /// Register file on entry for a Montgomery-encoded working point.
    EcAddState initial_state(Value x, Value y) const {
        const auto &f = curve_.field;
        EcAddState s;
        s.a = to_montgomery(Q_.x, f);
        s.b = to_montgomery(Q_.y, f);
        s.lambda_r = to_montgomery(lambda_r_, f);
        s.x = x;
        s.y = y;
        return s;
    }

    /// Runs the six steps semantically, returning the final register file
    /// without any hygiene checks.
    EcAddState run_steps(EcAddState s) const {
        for (int k = 1; k <= 6; ++k) {
            s = EcAddStepGate(curve_.field, k, variant_).run(s);
        }
        return s;
    }

    std::vector<Value> apply(std::span<const Value> in) const override {
        EcAddState init = initial_state(in[0], in[1]);
        EcAddState s = run_steps(init);
        auto vals = s.values();
        for (const auto &name : ec_add_released_registers()) {
            for (size_t i = 0; i < EcAddState::kNames.size(); ++i) {
                if (name == EcAddState::kNames[i] && vals[i] != 0) {
                    throw AncillaViolation(identity() + "/" + name, name, vals[i]);
                }
            }
        }
        for (auto [name, got, want] : {std::tuple{"a", s.a, init.a}, std::tuple{"b", s.b, init.b},
                                       std::tuple{"lambda_r", s.lambda_r, init.lambda_r}}) {
            if (got != want) {
                throw ConstantViolation(identity() + "/" + name, name, got, want);
            }
        }
        return {s.x, s.y};
    }

   protected:
    CompositeCircuit build() const override {
        const auto &f = curve_.field;
        DataKind mont = DataKind::mont(f);
        CircuitBuilder bb(identity());
        std::map<std::string, Handle> h;
        h["x"] = bb.add_register("x", mont);
        h["y"] = bb.add_register("y", mont);
        Value a = to_montgomery(Q_.x, f), b = to_montgomery(Q_.y, f), lr = to_montgomery(lambda_r_, f);
        h["a"] = bb.load_const(mont, a, "a");
        h["b"] = bb.load_const(mont, b, "b");
        h["lambda_r"] = bb.load_const(mont, lr, "lambda_r");
        for (const char *flag : {"f1", "f2", "f3", "f4", "ctrl"}) {
            h[flag] = bb.alloc(DataKind::bit(), flag);
        }
        h["lambda"] = bb.alloc(mont, "lambda");
        for (int k = 1; k <= 6; ++k) {
            std::vector<Handle> ins;
            for (const auto *name : EcAddState::kNames) {
                ins.push_back(h.at(name));
            }
            auto outs = bb.add(std::make_shared<EcAddStepGate>(f, k, variant_), ins, "step" + std::to_string(k));
            for (size_t i = 0; i < outs.size(); ++i) {
                h[EcAddState::kNames[i]] = outs[i];
            }
        }
        for (const auto &name : ec_add_released_registers()) {
            bb.free(h.at(name), name);
        }
        bb.unload_const(h.at("a"), a, "a");
        bb.unload_const(h.at("b"), b, "b");
        bb.unload_const(h.at("lambda_r"), lr, "lambda_r");
        return bb.finalize({{"x", h.at("x")}, {"y", h.at("y")}});
    }

   private:
    CurveParams curve_;
    AffinePoint Q_;
    Variant variant_;
    uint64_t lambda_r_;
    Signature signature_;
};

inline std::shared_ptr<const EcAddGate> make_ec_add(const CurveParams &curve, const AffinePoint &Q,
                                                     Variant variant = {}) {
    return std::make_shared<EcAddGate>(curve, Q, variant);
}

/// The adder as a circuit whose children are the six steps.
inline CompositeCircuit build_ec_add(const CurveParams &curve, const AffinePoint &Q, Variant variant = {}) {
    return make_ec_add(curve, Q, variant)->decomposition();
}

/// Outcome of pushing one plain-residue point through the adder.
struct EcAddRun {
    AffinePoint result;
    bool clean = true;
    std::string violation_register;  // empty when clean
    std::string violation_path;
    Value violation_raw = 0;    // register contents as stored
    Value violation_plain = 0;  // decoded from Montgomery form for field registers
    std::string error;          // non-hygiene failure (e.g. out-of-range fan)
    SimTrace trace;
};

/// Simulates `circuit` (an adder over `curve`) on the plain point P,
/// converting to and from Montgomery form at the boundary.
inline EcAddRun run_ec_add(const CompositeCircuit &circuit, const CurveParams &curve, const AffinePoint &P,
                           SimMode mode = SimMode::Flattened, bool want_trace = false) {
    const auto &f = curve.field;
    NamedValues in = {{"x", to_montgomery(P.x, f)}, {"y", to_montgomery(P.y, f)}};
    EcAddRun run;
    try {
        NamedValues out;
        if (want_trace) {
            auto r = simulate_trace(circuit, in, mode);
            out = std::move(r.outputs);
            run.trace = std::move(r.trace);
        } else {
            out = simulate(circuit, in, mode);
        }
        run.result = {from_montgomery(out.at("x"), f), from_montgomery(out.at("y"), f)};
    } catch (const HygieneViolation &v) {
        run.clean = false;
        run.violation_register = v.register_name();
        run.violation_path = v.path();
        run.violation_raw = v.observed();
        bool bit = v.register_name().size() == 2 && v.register_name()[0] == 'f';
        bit |= v.register_name() == "ctrl" || v.register_name() == "g";
        run.violation_plain = bit ? v.observed() : from_montgomery(v.observed() % f.p, f);
        run.trace = v.partial_trace();
    } catch (const DomainError &e) {
        run.clean = false;
        run.error = e.what();
    }
    return run;
}

}  // namespace ecadd

#endif
