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
#include <random>
#include <set>

#include "ecadd/gates.hpp"

namespace {

using namespace ecadd;

const FieldParams kF17(17);

DataKind mont() {
    return DataKind::mont(kF17);
}

// Calls visit on every basis input of the gate's left registers.
void for_each_input(const Gate &g, const std::function<void(const std::vector<Value> &)> &visit) {
    auto regs = left_registers(g.signature());
    std::vector<Value> v(regs.size(), 0);
    while (true) {
        visit(v);
        size_t i = 0;
        for (; i < v.size(); ++i) {
            if (++v[i] < regs[i].kind.bound()) {
                break;
            }
            v[i] = 0;
        }
        if (i == v.size()) {
            return;
        }
    }
}

bool in_range(const Gate &g, const std::vector<Value> &v) {
    auto regs = right_registers(g.signature());
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] >= regs[i].kind.bound()) {
            return false;
        }
    }
    return true;
}

// adjoint(gate(v)) == v on the whole domain, and gate is injective there.
// Inputs the gate maps out of range (register XOR fans) are skipped.
void expect_reversible(const Gate &g, const Gate &adj) {
    std::set<std::vector<Value>> images;
    int64_t checked = 0;
    for_each_input(g, [&](const std::vector<Value> &v) {
        auto out = g.apply(v);
        if (!in_range(g, out)) {
            return;
        }
        ASSERT_EQ(adj.apply(out), v) << g.identity();
        ASSERT_TRUE(images.insert(out).second) << g.identity() << " not injective";
        ++checked;
    });
    EXPECT_GT(checked, 0) << g.identity();
}

TEST(Reversibility, ModularAdders) {
    for (bool sub : {false, true}) {
        for (auto controls : {std::vector<ControlSpec>{}, std::vector<ControlSpec>{on("c")},
                              std::vector<ControlSpec>{on("c"), off("d")}}) {
            ModAddSubGate g(kF17, sub, controls);
            expect_reversible(g, *g.adjoint());
            expect_reversible(*g.adjoint(), g);
        }
    }
}

TEST(Reversibility, NegationDoublingMultInverse) {
    ModNegGate neg(kF17), neg_dag(kF17, {}, true);
    expect_reversible(neg, neg_dag);
    ModNegGate cneg(kF17, {on("c")});
    expect_reversible(cneg, cneg);
    ModDblGate dbl(kF17), dbl_dag(kF17, true);
    expect_reversible(dbl, dbl_dag);
    expect_reversible(dbl_dag, dbl);
    ModMultGate mult(kF17), mult_dag(kF17, true);
    expect_reversible(mult, mult_dag);
    expect_reversible(mult_dag, mult);
    ModInvGate inv(kF17), inv_dag(kF17, true);
    expect_reversible(inv, inv_dag);
    expect_reversible(inv_dag, inv);
}

TEST(Reversibility, ComparisonsAndToffolis) {
    EqualsGate eq({{"x", mont()}}, {{"a", mont()}});
    expect_reversible(eq, eq);
    EqualsGate eq2({{"a", mont()}, {"b", mont()}}, {{"x", mont()}, {"y", mont()}});
    expect_reversible(eq2, eq2);
    EqualsGate ceq({{"x", mont()}}, {{"a", mont()}}, off("g"));
    expect_reversible(ceq, ceq);
    MultiControlledX mcx({is_zero("a", mont()), is_zero("b", mont()), off("f")});
    expect_reversible(mcx, mcx);
    XorFanGate fan({on("c"), is_zero("x", mont())}, {"s", mont()}, {"d", mont()});
    expect_reversible(fan, fan);
}

TEST(Reversibility, RandomCasesAtSixteenBits) {
    FieldParams f(65521);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<Value> res(0, f.p - 1), word(0, f.mask());
    ModMultGate mult(f), mult_dag(f, true);
    ModInvGate inv(f), inv_dag(f, true);
    for (int i = 0; i < 1000; ++i) {
        std::vector<Value> m = {res(rng), res(rng), word(rng), res(rng)};
        ASSERT_EQ(mult_dag.apply(mult.apply(m)), m);
        std::vector<Value> v = {res(rng), word(rng), word(rng)};
        ASSERT_EQ(inv_dag.apply(inv.apply(v)), v);
    }
}

TEST(Semantics, ModMultFromCleanRegisters) {
    ModMultGate mult(kF17);
    for (Value x = 0; x < 17; ++x) {
        for (Value y = 0; y < 17; ++y) {
            auto out = mult.apply(std::vector<Value>{x, y, 0, 0});
            EXPECT_EQ(out[3], mont_product(x, y, kF17));
            EXPECT_EQ(out[2], (x * y) & 31);
        }
    }
}

TEST(Semantics, ModInvFromCleanRegisters) {
    ModInvGate inv(kF17);
    for (Value x = 0; x < 17; ++x) {
        auto out = inv.apply(std::vector<Value>{x, 0, 0});
        EXPECT_EQ(out[0], mont_inverse(x, kF17));
        EXPECT_EQ(out[1], mont_inverse_detailed(x, kF17).iterations);
        EXPECT_EQ(out[2], x);
    }
}

TEST(Semantics, ControlsGateTheAction) {
    ModAddSubGate cadd(kF17, false, {on("c")});
    EXPECT_EQ(cadd.apply(std::vector<Value>{0, 3, 4}), (std::vector<Value>{0, 3, 4}));
    EXPECT_EQ(cadd.apply(std::vector<Value>{1, 3, 4}), (std::vector<Value>{1, 3, 7}));
    MultiControlledX mcx({is_zero("a", mont()), off("f")});
    EXPECT_EQ(mcx.apply(std::vector<Value>{0, 0, 0}).back(), 1u);
    EXPECT_EQ(mcx.apply(std::vector<Value>{1, 0, 0}).back(), 0u);
    EqualsGate ceq({{"x", mont()}}, {{"a", mont()}}, off("g"));
    EXPECT_EQ(ceq.apply(std::vector<Value>{0, 5, 5, 0}).back(), 1u);
    EXPECT_EQ(ceq.apply(std::vector<Value>{1, 5, 5, 0}).back(), 0u);
}

CostPolynomial lin(int64_t a, int64_t b) {
    return CostPolynomial::linear(a, b);
}

TEST(LeafCost, TableFormulas) {
    EXPECT_EQ(ModAddSubGate(kF17, false).leaf_cost(), lin(4, -1));
    EXPECT_EQ(ModAddSubGate(kF17, false, {on("c")}).leaf_cost(), lin(5, 1));
    EXPECT_EQ(ModAddSubGate(kF17, true).leaf_cost(), lin(6, -3));
    EXPECT_EQ(ModAddSubGate(kF17, true, {on("c"), on("d")}).leaf_cost(), lin(7, -1));
    EXPECT_EQ(ModNegGate(kF17).leaf_cost(), lin(3, -3));
    EXPECT_EQ(ModNegGate(kF17, {on("c")}).leaf_cost(), lin(3, -2));
    EXPECT_EQ(ModDblGate(kF17).leaf_cost(), lin(2, 1));
    EXPECT_EQ(ModMultGate(kF17).leaf_cost().str(), "9/4*n^2 + 29/4*n - 1");
    EXPECT_EQ(ModInvGate(kF17).leaf_cost().str(), "26*n^2 + 9*n - 1");
    // Adjoints cost the same.
    EXPECT_EQ(ModMultGate(kF17, true).leaf_cost(), ModMultGate(kF17).leaf_cost());
    EXPECT_EQ(ModDblGate(kF17, true).leaf_cost(), ModDblGate(kF17).leaf_cost());
}

TEST(LeafCost, ComparisonsUseTrueWidth) {
    EqualsGate eq({{"x", mont()}}, {{"a", mont()}});
    EXPECT_EQ(eq.leaf_cost(), lin(1, -1));
    EXPECT_EQ(eq.census_weight(), 1);
    EqualsGate eq2({{"a", mont()}, {"b", mont()}}, {{"x", mont()}, {"y", mont()}});
    EXPECT_EQ(eq2.leaf_cost(), lin(2, -1));
    EXPECT_EQ(eq2.census_weight(), 2);
    EqualsGate ceq({{"x", mont()}}, {{"a", mont()}}, off("g"));
    EXPECT_EQ(ceq.leaf_cost(), lin(3, 0));
}

TEST(LeafCost, ToffolisCostArityMinusOne) {
    EXPECT_EQ(MultiControlledX({on("a"), on("b")}).leaf_cost(), CostPolynomial::constant(1));
    EXPECT_EQ(MultiControlledX({off("a"), off("b"), off("c")}).leaf_cost(), CostPolynomial::constant(2));
    MultiControlledX three_n({is_zero("a", mont()), is_zero("b", mont()), is_zero("y", mont())});
    EXPECT_EQ(three_n.leaf_cost(), lin(3, -1));
    // Register copy under ctrl and x = 0: one (2n+1)-controlled operation.
    XorFanGate fix({on("c"), is_zero("x", mont())}, {"s", mont()}, {"d", mont()});
    EXPECT_EQ(fix.leaf_cost(), lin(2, 0));
    XorFanGate copy({on("c")}, {"s", mont()}, {"d", mont()});
    EXPECT_EQ(copy.leaf_cost(), lin(1, 0));
}

TEST(Registry, EveryFamilyHasAUnitCost) {
    for (const char *f : {"Toffoli", "ModAdd", "CModAdd", "ModSub", "CModSub", "ModNeg", "CModNeg", "ModDbl",
                          "ModMult", "ModInv", "Equals", "CEquals"}) {
        EXPECT_TRUE(family_unit_cost(f).has_value()) << f;
    }
    EXPECT_FALSE(family_unit_cost("QFT").has_value());
}

TEST(Identity, DistinguishesParametersAndAdjoints) {
    EXPECT_NE(ModMultGate(kF17).identity(), ModMultGate(kF17, true).identity());
    EXPECT_NE(ModMultGate(kF17).identity(), ModMultGate(FieldParams(19)).identity());
    EXPECT_NE(MultiControlledX({on("a")}).identity(), MultiControlledX({off("a")}).identity());
    EXPECT_EQ(ModMultGate(kF17, true).family(), "ModMult");
}

}  // namespace
