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

// Leaf gate library: modular arithmetic on Montgomery registers, equality
// tests, multi-controlled Toffolis and controlled register XORs. Each leaf
// carries its classical action and its Toffoli cost; none decomposes.

#ifndef ECADD_GATES_HPP
#define ECADD_GATES_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecadd/circuit.hpp"
#include "ecadd/field.hpp"
#include "ecadd/polynomial.hpp"

namespace ecadd {

/// A control register and the value it must hold for the gate to act.
/// Multi-bit registers with required value 0 are the "all open controls"
/// pattern.
struct ControlSpec {
    std::string name;
    DataKind kind;
    Value required = 1;
};

inline ControlSpec on(const std::string &name) {
    return {name, DataKind::bit(), 1};
}

inline ControlSpec off(const std::string &name) {
    return {name, DataKind::bit(), 0};
}

inline ControlSpec is_zero(const std::string &name, const DataKind &kind) {
    return {name, kind, 0};
}

namespace detail {

inline std::string controls_str(const std::vector<ControlSpec> &controls) {
    std::string s;
    for (const auto &c : controls) {
        s += (s.empty() ? "" : ",") + c.name + "=" + std::to_string(c.required);
    }
    return s;
}

inline LinearSize control_arity(const std::vector<ControlSpec> &controls) {
    LinearSize total;
    for (const auto &c : controls) {
        total = total + c.kind.symbolic;
    }
    return total;
}

inline bool controls_match(const std::vector<ControlSpec> &controls, std::span<const Value> values) {
    for (size_t i = 0; i < controls.size(); ++i) {
        if (values[i] != controls[i].required) {
            return false;
        }
    }
    return true;
}

inline void add_controls(Signature &sig, const std::vector<ControlSpec> &controls) {
    for (const auto &c : controls) {
        sig.push_back({c.name, c.kind, Direction::Thru});
    }
}

inline std::string dagger(bool adjoint) {
    return adjoint ? "^dag" : "";
}

}  // namespace detail

/// Common state for leaf gates whose registers are all thru.
class LeafGate : public Gate {
   public:
    const Signature &signature() const override {
        return signature_;
    }

   protected:
    Signature signature_;
};

/// y <- y + x (ModAdd / CModAdd) or y <- y - x (ModSub / CModSub) mod p,
/// acting only when every control matches. Registers: controls..., x, y.
class ModAddSubGate : public LeafGate {
   public:
    ModAddSubGate(FieldParams field, bool subtract, std::vector<ControlSpec> controls = {}, bool adjoint = false)
        : field_(field), subtract_(subtract), controls_(std::move(controls)), adjoint_(adjoint) {
        detail::add_controls(signature_, controls_);
        signature_.push_back({"x", DataKind::mont(field_), Direction::Thru});
        signature_.push_back({"y", DataKind::mont(field_), Direction::Thru});
    }

    std::string family() const override {
        std::string base = subtract_ ? "ModSub" : "ModAdd";
        return controls_.empty() ? base : "C" + base;
    }

    std::string identity() const override {
        return family() + detail::dagger(adjoint_) + "[p=" + std::to_string(field_.p) + ";" +
               detail::controls_str(controls_) + "]";
    }

    std::vector<Value> apply(std::span<const Value> in) const override {
        std::vector<Value> out(in.begin(), in.end());
        if (!detail::controls_match(controls_, in)) {
            return out;
        }
        size_t xi = controls_.size();
        bool sub = subtract_ != adjoint_;
        out[xi + 1] = sub ? mod_sub(in[xi + 1], in[xi], field_) : mod_add(in[xi + 1], in[xi], field_);
        return out;
    }

    CostPolynomial leaf_cost() const override {
        bool controlled = !controls_.empty();
        if (subtract_) {
            return controlled ? CostPolynomial::linear(7, -1) : CostPolynomial::linear(6, -3);
        }
        return controlled ? CostPolynomial::linear(5, 1) : CostPolynomial::linear(4, -1);
    }

    std::shared_ptr<ModAddSubGate> adjoint() const {
        return std::make_shared<ModAddSubGate>(field_, subtract_, controls_, !adjoint_);
    }

   private:
    FieldParams field_;
    bool subtract_;
    std::vector<ControlSpec> controls_;
    bool adjoint_;
};

inline GatePtr mod_add_gate(const FieldParams &f, std::vector<ControlSpec> controls = {}) {
    return std::make_shared<ModAddSubGate>(f, false, std::move(controls));
}

inline GatePtr mod_sub_gate(const FieldParams &f, std::vector<ControlSpec> controls = {}) {
    return std::make_shared<ModAddSubGate>(f, true, std::move(controls));
}

/// x <- -x mod p when the controls match. Self-inverse.
class ModNegGate : public LeafGate {
   public:
    ModNegGate(FieldParams field, std::vector<ControlSpec> controls = {}, bool adjoint = false)
        : field_(field), controls_(std::move(controls)), adjoint_(adjoint) {
        detail::add_controls(signature_, controls_);
        signature_.push_back({"x", DataKind::mont(field_), Direction::Thru});
    }

    std::string family() const override {
        return controls_.empty() ? "ModNeg" : "CModNeg";
    }

    std::string identity() const override {
        return family() + detail::dagger(adjoint_) + "[p=" + std::to_string(field_.p) + ";" +
               detail::controls_str(controls_) + "]";
    }

    std::vector<Value> apply(std::span<const Value> in) const override {
        std::vector<Value> out(in.begin(), in.end());
        if (detail::controls_match(controls_, in)) {
            out.back() = mod_neg(in.back(), field_);
        }
        return out;
    }

    CostPolynomial leaf_cost() const override {
        return controls_.empty() ? CostPolynomial::linear(3, -3) : CostPolynomial::linear(3, -2);
    }

   private:
    FieldParams field_;
    std::vector<ControlSpec> controls_;
    bool adjoint_;
};

/// x <- 2x mod p; the adjoint halves.
class ModDblGate : public LeafGate {
   public:
    explicit ModDblGate(FieldParams field, bool adjoint = false) : field_(field), adjoint_(adjoint) {
        signature_.push_back({"x", DataKind::mont(field_), Direction::Thru});
    }

    std::string family() const override {
        return "ModDbl";
    }

    std::string identity() const override {
        return family() + detail::dagger(adjoint_) + "[p=" + std::to_string(field_.p) + "]";
    }

    std::vector<Value> apply(std::span<const Value> in) const override {
        return {adjoint_ ? mod_half(in[0], field_) : mod_dbl(in[0], field_)};
    }

    CostPolynomial leaf_cost() const override {
        return CostPolynomial::linear(2, 1);
    }

   private:
    FieldParams field_;
    bool adjoint_;
};

/// Low product word a word-serial Montgomery multiplier leaves behind.
inline Value mod_mult_garbage(Value x, Value y, const FieldParams &f) {
    return static_cast<Value>(static_cast<unsigned __int128>(x) * y) & f.mask();
}

/// Montgomery multiplication into a fresh register:
/// (x, y, g, t) -> (x, y, g ^ garbage(x, y), t + x*y*R^-1 mod p).
/// With g = t = 0 on entry the outputs are the garbage word and the product;
/// the adjoint consumes both.
class ModMultGate : public LeafGate {
   public:
    explicit ModMultGate(FieldParams field, bool adjoint = false) : field_(field), adjoint_(adjoint) {
        signature_.push_back({"x", DataKind::mont(field_), Direction::Thru});
        signature_.push_back({"y", DataKind::mont(field_), Direction::Thru});
        signature_.push_back({"garbage", DataKind::uint_words(field_), Direction::Thru});
        signature_.push_back({"out", DataKind::mont(field_), Direction::Thru});
    }

    std::string family() const override {
        return "ModMult";
    }

    std::string identity() const override {
        return family() + detail::dagger(adjoint_) + "[p=" + std::to_string(field_.p) + "]";
    }

    std::vector<Value> apply(std::span<const Value> in) const override {
        Value prod = mont_product(in[0], in[1], field_);
        Value garb = mod_mult_garbage(in[0], in[1], field_);
        Value out = adjoint_ ? mod_sub(in[3], prod, field_) : mod_add(in[3], prod, field_);
        return {in[0], in[1], in[2] ^ garb, out};
    }

    CostPolynomial leaf_cost() const override {
        return CostPolynomial{{2, Rational(9, 4)}, {1, Rational(29, 4)}, {0, Rational(-1)}};
    }

   private:
    FieldParams field_;
    bool adjoint_;
};

/// In-place Montgomery inverse with two garbage words:
/// (x, g1, g2) -> (inv(x), g1 ^ k(x), g2 ^ x), where k is the Kaliski
/// iteration count. inv is an involution fixing 0, so the adjoint recovers
/// x = inv(x') first and then clears the garbage.
class ModInvGate : public LeafGate {
   public:
    explicit ModInvGate(FieldParams field, bool adjoint = false) : field_(field), adjoint_(adjoint) {
        signature_.push_back({"x", DataKind::mont(field_), Direction::Thru});
        signature_.push_back({"garbage1", DataKind::uint_words(field_), Direction::Thru});
        signature_.push_back({"garbage2", DataKind::uint_words(field_), Direction::Thru});
    }

    std::string family() const override {
        return "ModInv";
    }

    std::string identity() const override {
        return family() + detail::dagger(adjoint_) + "[p=" + std::to_string(field_.p) + "]";
    }

    std::vector<Value> apply(std::span<const Value> in) const override {
        if (!adjoint_) {
            auto r = mont_inverse_detailed(in[0], field_);
            return {r.value, in[1] ^ r.iterations, in[2] ^ in[0]};
        }
        Value x = mont_inverse(in[0], field_);
        auto r = mont_inverse_detailed(x, field_);
        return {x, in[1] ^ r.iterations, in[2] ^ x};
    }

    CostPolynomial leaf_cost() const override {
        return CostPolynomial{{2, Rational(26)}, {1, Rational(9)}, {0, Rational(-1)}};
    }

   private:
    FieldParams field_;
    bool adjoint_;
};

/// target ^= [lhs == rhs] (all operand pairs equal), optionally gated by one
/// control (CEquals). Census units are n-words of compared width.
class EqualsGate : public LeafGate {
   public:
    EqualsGate(std::vector<RegisterSpec> lhs, std::vector<RegisterSpec> rhs,
               std::optional<ControlSpec> control = std::nullopt, bool adjoint = false)
        : lhs_(std::move(lhs)), rhs_(std::move(rhs)), control_(std::move(control)), adjoint_(adjoint) {
        if (lhs_.size() != rhs_.size() || lhs_.empty()) {
            throw std::invalid_argument("Equals needs matching nonempty operand lists");
        }
        if (control_) {
            signature_.push_back({control_->name, control_->kind, Direction::Thru});
        }
        for (auto &r : lhs_) {
            r.direction = Direction::Thru;
            signature_.push_back(r);
        }
        for (size_t i = 0; i < rhs_.size(); ++i) {
            rhs_[i].direction = Direction::Thru;
            if (!(rhs_[i].kind == lhs_[i].kind)) {
                throw std::invalid_argument("Equals operand kinds differ");
            }
            signature_.push_back(rhs_[i]);
        }
        signature_.push_back({"target", DataKind::bit(), Direction::Thru});
    }

    std::string family() const override {
        return control_ ? "CEquals" : "Equals";
    }

    std::string identity() const override {
        std::string s = family() + detail::dagger(adjoint_) + "[";
        for (size_t i = 0; i < lhs_.size(); ++i) {
            s += (i ? "," : "") + lhs_[i].name + "==" + rhs_[i].name + ":" + lhs_[i].kind.str();
        }
        if (control_) {
            s += ";" + control_->name + "=" + std::to_string(control_->required);
        }
        return s + "]";
    }

    std::vector<Value> apply(std::span<const Value> in) const override {
        std::vector<Value> out(in.begin(), in.end());
        size_t base = control_ ? 1 : 0;
        if (control_ && in[0] != control_->required) {
            return out;
        }
        bool equal = true;
        for (size_t i = 0; i < lhs_.size(); ++i) {
            equal &= in[base + i] == in[base + lhs_.size() + i];
        }
        out.back() ^= equal ? 1 : 0;
        return out;
    }

    LinearSize width() const {
        LinearSize w;
        for (const auto &r : lhs_) {
            w = w + r.kind.symbolic;
        }
        return w;
    }

    CostPolynomial leaf_cost() const override {
        CostPolynomial w = CostPolynomial::from(width());
        return control_ ? w.scaled(3) : w - CostPolynomial::constant(1);
    }

    int64_t census_weight() const override {
        return std::max<int64_t>(1, width().per_n);
    }

   private:
    std::vector<RegisterSpec> lhs_;
    std::vector<RegisterSpec> rhs_;
    std::optional<ControlSpec> control_;
    bool adjoint_;
};

/// Flips a target bit when every control register holds its required value.
/// Costs arity - 1 Toffolis, where arity counts control bits.
class MultiControlledX : public LeafGate {
   public:
    MultiControlledX(std::vector<ControlSpec> controls, std::string target = "target")
        : controls_(std::move(controls)) {
        detail::add_controls(signature_, controls_);
        signature_.push_back({std::move(target), DataKind::bit(), Direction::Thru});
    }

    std::string family() const override {
        return "Toffoli";
    }

    std::string identity() const override {
        return "MCX[" + detail::controls_str(controls_) + "->" + signature_.back().name + ";arity=" +
               arity().str() + "]";
    }

    LinearSize arity() const {
        return detail::control_arity(controls_);
    }

    std::vector<Value> apply(std::span<const Value> in) const override {
        std::vector<Value> out(in.begin(), in.end());
        if (detail::controls_match(controls_, in)) {
            out.back() ^= 1;
        }
        return out;
    }

    CostPolynomial leaf_cost() const override {
        return CostPolynomial::from(arity()) - CostPolynomial::constant(1);
    }

   private:
    std::vector<ControlSpec> controls_;
};

/// target ^= source when every control matches. Counted in the Toffoli
/// bucket and costed as a single Toffoli whose arity is the control bits plus
/// the source width.
class XorFanGate : public LeafGate {
   public:
    XorFanGate(std::vector<ControlSpec> controls, RegisterSpec source, RegisterSpec target)
        : controls_(std::move(controls)) {
        if (!(source.kind == target.kind)) {
            throw std::invalid_argument("XorFan source and target kinds differ");
        }
        detail::add_controls(signature_, controls_);
        source.direction = Direction::Thru;
        target.direction = Direction::Thru;
        signature_.push_back(std::move(source));
        signature_.push_back(std::move(target));
    }

    std::string family() const override {
        return "Toffoli";
    }

    std::string identity() const override {
        const auto &src = signature_[signature_.size() - 2];
        return "XorFan[" + detail::controls_str(controls_) + ";" + src.name + "->" + signature_.back().name + ":" +
               src.kind.str() + ";arity=" + arity().str() + "]";
    }

    LinearSize arity() const {
        return detail::control_arity(controls_) + signature_[signature_.size() - 2].kind.symbolic;
    }

    std::vector<Value> apply(std::span<const Value> in) const override {
        std::vector<Value> out(in.begin(), in.end());
        if (detail::controls_match(controls_, in)) {
            out.back() ^= in[in.size() - 2];
        }
        return out;
    }

    CostPolynomial leaf_cost() const override {
        return CostPolynomial::from(arity()) - CostPolynomial::constant(1);
    }

   private:
    std::vector<ControlSpec> controls_;
};

/// Cost registry for the leaf families at a unit width, keyed by family.
inline std::optional<CostPolynomial> family_unit_cost(const std::string &family) {
    static const std::map<std::string, CostPolynomial> registry = {
        {"Toffoli", CostPolynomial::linear(1, -1)},
        {"ModAdd", CostPolynomial::linear(4, -1)},
        {"CModAdd", CostPolynomial::linear(5, 1)},
        {"ModSub", CostPolynomial::linear(6, -3)},
        {"CModSub", CostPolynomial::linear(7, -1)},
        {"ModNeg", CostPolynomial::linear(3, -3)},
        {"CModNeg", CostPolynomial::linear(3, -2)},
        {"ModDbl", CostPolynomial::linear(2, 1)},
        {"ModMult", CostPolynomial{{2, Rational(9, 4)}, {1, Rational(29, 4)}, {0, Rational(-1)}}},
        {"ModInv", CostPolynomial{{2, Rational(26)}, {1, Rational(9)}, {0, Rational(-1)}}},
        {"Equals", CostPolynomial::linear(1, -1)},
        {"CEquals", CostPolynomial::linear(3, 0)},
    };
    auto it = registry.find(family);
    if (it == registry.end()) {
        return std::nullopt;
    }
    return it->second;
}

}  // namespace ecadd

#endif
