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

#include "ecadd/ec_add.hpp"
#include "ecadd/gates.hpp"
#include "ecadd/simulate.hpp"

namespace {

using namespace ecadd;

const FieldParams kF17(17);

// x -> x, with a scratch copy of x that is (optionally) uncomputed.
CompositeCircuit scratch_copy(bool uncompute) {
    CircuitBuilder bb("scratch");
    auto x = bb.add_register("x", DataKind::mont(kF17));
    auto t = bb.alloc(DataKind::mont(kF17), "t");
    auto o = bb.add(mod_add_gate(kF17), {x, t}, "copy");
    if (uncompute) {
        o = bb.add(mod_sub_gate(kF17), {o[0], o[1]}, "uncopy");
    }
    bb.free(o[1], "t");
    return bb.finalize({{"x", o[0]}});
}

TEST(Simulate, CleanAncillaPasses) {
    auto c = scratch_copy(true);
    for (Value x = 0; x < 17; ++x) {
        EXPECT_EQ(simulate(c, {{"x", x}}).at("x"), x);
    }
}

TEST(Simulate, DirtyAncillaRaisesWithRegisterAndValue) {
    auto c = scratch_copy(false);
    EXPECT_NO_THROW(simulate(c, {{"x", 0}}));
    try {
        simulate(c, {{"x", 6}});
        FAIL() << "expected AncillaViolation";
    } catch (const AncillaViolation &v) {
        EXPECT_EQ(v.register_name(), "t");
        EXPECT_EQ(v.observed(), 6u);
        EXPECT_EQ(v.expected(), 0u);
        EXPECT_EQ(v.path(), "scratch/t");
    }
}

TEST(Simulate, ModifiedConstantRaises) {
    CircuitBuilder bb("const");
    auto x = bb.add_register("x", DataKind::mont(kF17));
    auto k = bb.load_const(DataKind::mont(kF17), 3, "k");
    auto o = bb.add(mod_add_gate(kF17), {x, k});
    bb.unload_const(o[1], 3, "k");
    auto c = bb.finalize({{"x", o[0]}});
    EXPECT_NO_THROW(simulate(c, {{"x", 0}}));
    EXPECT_THROW(simulate(c, {{"x", 1}}), ConstantViolation);
}

TEST(Simulate, RejectsOutOfRangeAndMissingInputs) {
    auto c = scratch_copy(true);
    EXPECT_THROW(simulate(c, {{"x", 17}}), DomainError);
    EXPECT_THROW(simulate(c, {}), std::invalid_argument);
}

TEST(Simulate, FanOutOfRangeIsDomainError) {
    CircuitBuilder bb("fan");
    auto x = bb.add_register("x", DataKind::mont(kF17));
    auto y = bb.add_register("y", DataKind::mont(kF17));
    auto o = bb.add(std::make_shared<XorFanGate>(std::vector<ControlSpec>{}, RegisterSpec{"s", DataKind::mont(kF17)},
                                                 RegisterSpec{"d", DataKind::mont(kF17)}),
                    {x, y});
    auto c = bb.finalize({{"x", o[0]}, {"y", o[1]}});
    EXPECT_EQ(simulate(c, {{"x", 5}, {"y", 3}}).at("y"), 6u);
    EXPECT_THROW(simulate(c, {{"x", 16}, {"y", 1}}), DomainError);  // 17
}

TEST(SimulateTrace, RecordsEveryLeafInOrder) {
    auto c = scratch_copy(true);
    auto r = simulate_trace(c, {{"x", 4}});
    ASSERT_EQ(r.trace.size(), 2u);
    EXPECT_EQ(r.trace[0].path, "scratch/copy");
    EXPECT_EQ(r.trace[0].inputs, (std::vector<Value>{4, 0}));
    EXPECT_EQ(r.trace[0].outputs, (std::vector<Value>{4, 4}));
    EXPECT_EQ(r.trace[1].path, "scratch/uncopy");
}

TEST(SimulateTrace, ShallowModeStopsAtChildren) {
    CurveParams curve(17, 0, 7);
    auto c = build_ec_add(curve, {1, 5});
    NamedValues in = {{"x", to_montgomery(2, curve.field)}, {"y", to_montgomery(10, curve.field)}};
    auto shallow = simulate_trace(c, in, SimMode::Shallow);
    ASSERT_EQ(shallow.trace.size(), 6u);
    EXPECT_EQ(shallow.trace[3].path, c.name + "/step4");
    auto deep = simulate_trace(c, in, SimMode::Flattened);
    // 60 census units; the 2n-wide Equals is one instance counted twice.
    EXPECT_EQ(deep.trace.size(), 59u);
    EXPECT_EQ(shallow.outputs, deep.outputs);
}

TEST(SimulateTrace, ViolationCarriesPartialTrace) {
    auto c = scratch_copy(false);
    try {
        simulate_trace(c, {{"x", 2}});
        FAIL();
    } catch (const HygieneViolation &v) {
        ASSERT_EQ(v.partial_trace().size(), 1u);
        EXPECT_EQ(v.partial_trace()[0].path, "scratch/copy");
    }
}

TEST(SimulateValues, PositionalFormMatchesNamed) {
    auto c = scratch_copy(true);
    EXPECT_EQ(simulate_values(c, {9}), std::vector<Value>{9});
}

}  // namespace
