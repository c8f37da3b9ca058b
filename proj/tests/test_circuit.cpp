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

#include <functional>
#include <memory>

#include "ecadd/circuit.hpp"
#include "ecadd/ec_add.hpp"
#include "ecadd/gates.hpp"
#include "ecadd/simulate.hpp"
#include "ecadd/validate.hpp"

namespace {

using namespace ecadd;

const FieldParams kF17(17);

FindingCode code_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const StructuralError &e) {
        return e.code();
    }
    ADD_FAILURE() << "expected a StructuralError";
    return FindingCode::Cycle;
}

TEST(DataKind, BoundsAndEquality) {
    EXPECT_EQ(DataKind::bit().bound(), 2u);
    EXPECT_EQ(DataKind::uint_words(kF17).bound(), 32u);
    EXPECT_EQ(DataKind::uint_words(kF17, 2).bits, 10u);
    EXPECT_EQ(DataKind::mont(kF17).bound(), 17u);
    EXPECT_FALSE(DataKind::mont(kF17) == DataKind::uint_words(kF17));
    EXPECT_FALSE(DataKind::mont(kF17).same_type(DataKind::mont(FieldParams(19))));
    EXPECT_THROW(DataKind::uint(0, LinearSize::bits(0)), DomainError);
}

TEST(CircuitBuilder, WiresGatesAndSimulates) {
    CircuitBuilder bb("add");
    auto x = bb.add_register("x", DataKind::mont(kF17));
    auto y = bb.add_register("y", DataKind::mont(kF17));
    auto out = bb.add(mod_add_gate(kF17), {x, y});
    auto c = bb.finalize({{"x", out[0]}, {"y", out[1]}});
    EXPECT_TRUE(validate(c).passed());
    EXPECT_EQ(c.nodes.size(), 1u);
    EXPECT_EQ(c.edges.size(), 4u);
    auto r = simulate(c, {{"x", 5}, {"y", 14}});
    EXPECT_EQ(r.at("x"), 5u);
    EXPECT_EQ(r.at("y"), 2u);
}

TEST(CircuitBuilder, NamedWiringRoundTrips) {
    CircuitBuilder bb("named");
    auto x = bb.add_register("x", DataKind::mont(kF17));
    auto y = bb.add_register("y", DataKind::mont(kF17));
    auto out = bb.add_named(mod_sub_gate(kF17), {{"x", x}, {"y", y}});
    auto c = bb.finalize({{"x", out.at("x")}, {"y", out.at("y")}});
    EXPECT_EQ(simulate(c, {{"x", 5}, {"y", 3}}).at("y"), 15u);
}

TEST(CircuitBuilder, RejectsKindMismatch) {
    CircuitBuilder bb("bad");
    auto b = bb.add_register("b", DataKind::bit());
    auto y = bb.add_register("y", DataKind::mont(kF17));
    EXPECT_EQ(code_of([&] { bb.add(mod_add_gate(kF17), {b, y}); }), FindingCode::KindMismatch);
}

TEST(CircuitBuilder, RejectsForeignModulus) {
    CircuitBuilder bb("bad");
    auto x = bb.add_register("x", DataKind::mont(FieldParams(19)));
    auto y = bb.add_register("y", DataKind::mont(kF17));
    EXPECT_EQ(code_of([&] { bb.add(mod_add_gate(kF17), {x, y}); }), FindingCode::KindMismatch);
}

TEST(CircuitBuilder, RejectsBitsizeMismatch) {
    CircuitBuilder bb("bad");
    auto x = bb.add_register("x", DataKind::mont(kF17));
    auto y = bb.add_register("y", DataKind::mont(kF17));
    auto g = bb.add_register("g", DataKind::uint(6, LinearSize::bits(6)));
    auto t = bb.add_register("t", DataKind::mont(kF17));
    EXPECT_EQ(code_of([&] { bb.add(std::make_shared<ModMultGate>(kF17), {x, y, g, t}); }),
              FindingCode::BitsizeMismatch);
}

TEST(CircuitBuilder, RejectsReusedHandles) {
    CircuitBuilder bb("bad");
    auto x = bb.add_register("x", DataKind::mont(kF17));
    auto y = bb.add_register("y", DataKind::mont(kF17));
    EXPECT_EQ(code_of([&] { bb.add(mod_add_gate(kF17), {x, x}); }), FindingCode::PortReconnected);
    bb.add(mod_add_gate(kF17), {x, y});
    EXPECT_EQ(code_of([&] { bb.add(mod_add_gate(kF17), {x, y}); }), FindingCode::PortReconnected);
}

TEST(CircuitBuilder, RejectsDanglingWires) {
    {
        CircuitBuilder bb("leak");
        auto x = bb.add_register("x", DataKind::mont(kF17));
        bb.alloc(DataKind::bit(), "scratch");
        EXPECT_EQ(code_of([&] { bb.finalize({{"x", x}}); }), FindingCode::DanglingPort);
    }
    {
        CircuitBuilder bb("lost");
        bb.add_register("x", DataKind::mont(kF17));
        EXPECT_EQ(code_of([&] { bb.finalize({}); }), FindingCode::DanglingPort);
    }
    {
        CircuitBuilder bb("arity");
        auto x = bb.add_register("x", DataKind::mont(kF17));
        EXPECT_EQ(code_of([&] { bb.add(mod_add_gate(kF17), {x}); }), FindingCode::DanglingPort);
    }
}

TEST(CircuitBuilder, OutputRegistersAreDeclaredAtFinalize) {
    CircuitBuilder bb("fresh");
    auto x = bb.add_register("x", DataKind::mont(kF17));
    auto t = bb.alloc(DataKind::mont(kF17), "t");
    auto out = bb.add(mod_add_gate(kF17), {x, t});
    auto c = bb.finalize({{"x", out[0]}, {"copy", out[1]}});
    ASSERT_EQ(c.signature.size(), 2u);
    EXPECT_EQ(c.signature[1].direction, Direction::Output);
    EXPECT_TRUE(validate(c).passed());
    auto r = simulate(c, {{"x", 9}});
    EXPECT_EQ(r.at("copy"), 9u);
}

TEST(Gate, LeavesHaveNoDecomposition) {
    auto g = mod_add_gate(kF17);
    EXPECT_TRUE(g->is_leaf());
    EXPECT_THROW(g->decomposition(), LeafHasNoDecomposition);
}

TEST(Gate, CompositeSignatureMatchesDecomposition) {
    CurveParams curve(17, 0, 7);
    auto g = make_ec_add(curve, {1, 5});
    EXPECT_FALSE(g->is_leaf());
    const auto &d = g->decomposition();
    ASSERT_EQ(d.signature.size(), g->signature().size());
    for (size_t i = 0; i < d.signature.size(); ++i) {
        EXPECT_EQ(d.signature[i].name, g->signature()[i].name);
        EXPECT_TRUE(d.signature[i].kind == g->signature()[i].kind);
    }
    // Built once and shared.
    EXPECT_EQ(&g->decomposition(), &d);
}

TEST(Flatten, OneLevelExposesTheSixSteps) {
    CurveParams curve(17, 0, 7);
    auto wrapped = wrap_gate(make_ec_add(curve, {1, 5}), "ecadd");
    auto one = flatten(wrapped, 1);
    std::vector<std::string> labels;
    for (const auto &n : one.nodes) {
        if (n.kind == NodeKind::Gate) {
            labels.push_back(n.label);
        }
    }
    EXPECT_EQ(labels, (std::vector<std::string>{"ecadd/step1", "ecadd/step2", "ecadd/step3", "ecadd/step4",
                                                "ecadd/step5", "ecadd/step6"}));
    EXPECT_TRUE(validate(one).passed());
}

TEST(Flatten, FullFlattenKeepsOnlyLeavesAndPreservesBehaviour) {
    CurveParams curve(17, 0, 7);
    auto c = build_ec_add(curve, {1, 5});
    auto flat = flatten(c);
    for (const auto &n : flat.nodes) {
        if (n.kind == NodeKind::Gate) {
            EXPECT_TRUE(n.gate->is_leaf()) << n.label;
        }
    }
    EXPECT_TRUE(validate(flat).passed());
    EXPECT_EQ(flat.nodes.front().label, "a");
    bool prefixed = false;
    for (const auto &n : flat.nodes) {
        prefixed |= n.label == "step2/ModInv";
    }
    EXPECT_TRUE(prefixed);
    for (const auto &P : curve_points(curve)) {
        NamedValues in = {{"x", to_montgomery(P.x, curve.field)}, {"y", to_montgomery(P.y, curve.field)}};
        EXPECT_EQ(simulate(c, in, SimMode::Flattened), simulate(flat, in, SimMode::Shallow)) << P.str();
    }
}

TEST(Flatten, DepthZeroIsACopy) {
    CurveParams curve(17, 0, 7);
    auto c = build_ec_add(curve, {1, 5});
    auto same = flatten(c, 0);
    EXPECT_EQ(same.nodes.size(), c.nodes.size());
    EXPECT_EQ(same.edges.size(), c.edges.size());
}

}  // namespace
