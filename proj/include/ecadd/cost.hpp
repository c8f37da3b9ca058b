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

// Symbolic Toffoli accounting: per-family census, total cost polynomials,
// corrected-vs-buggy deltas and peak ancilla width.

#ifndef ECADD_COST_HPP
#define ECADD_COST_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ecadd/circuit.hpp"
#include "ecadd/gates.hpp"
#include "ecadd/polynomial.hpp"
#include "ecadd/validate.hpp"

namespace ecadd {

class UnknownFamily : public std::invalid_argument {
   public:
    explicit UnknownFamily(const std::string &family) : std::invalid_argument("unknown gate family " + family) {
    }
};

/// Leaf counts of the published resource table for the corrected adder.
inline const FamilyCounts &reference_census() {
    static const FamilyCounts table = {
        {"Toffoli", 23}, {"ModAdd", 3},   {"CModAdd", 2}, {"ModSub", 2},  {"CModSub", 4}, {"ModNeg", 2},
        {"CModNeg", 1},  {"ModDbl", 2},   {"ModMult", 10}, {"ModInv", 4}, {"Equals", 6},  {"CEquals", 1},
    };
    return table;
}

namespace detail {

class CostWalker {
   public:
    CostPolynomial gate(const Gate &g) {
        std::string key = g.identity();
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        CostPolynomial cost;
        if (g.is_leaf()) {
            if (!family_unit_cost(g.family())) {
                throw UnknownFamily(g.family());
            }
            cost = g.leaf_cost();
        } else {
            cost = circuit(g.decomposition());
        }
        memo_.emplace(key, cost);
        return cost;
    }

    CostPolynomial circuit(const CompositeCircuit &c) {
        CostPolynomial total;
        for (const auto &node : c.nodes) {
            if (node.kind == NodeKind::Gate) {
                total += gate(*node.gate);
            }
        }
        return total;
    }

   private:
    std::unordered_map<std::string, CostPolynomial> memo_;
};

}  // namespace detail

/// Toffoli cost as a polynomial in the symbolic bitsize n. Leaves use the
/// family registry; composites sum their decomposition. Memoized per call by
/// gate identity.
inline CostPolynomial toffoli_cost(const Gate &gate) {
    detail::CostWalker w;
    return w.gate(gate);
}

inline CostPolynomial toffoli_cost(const CompositeCircuit &circuit) {
    detail::CostWalker w;
    return w.circuit(circuit);
}

/// One distinct leaf: how many census units it contributes and its cost.
struct LeafTally {
    std::string family;
    int64_t instances = 0;
    int64_t units = 0;
    CostPolynomial unit_cost;  // cost of one instance
};

struct CensusReport {
    FamilyCounts totals;                          // weighted family counts
    std::map<std::string, LeafTally> leaves;      // keyed by leaf identity
    std::vector<std::pair<std::string, FamilyCounts>> steps;  // direct composite children, in order

    int64_t count(const std::string &family) const {
        auto it = totals.find(family);
        return it == totals.end() ? 0 : it->second;
    }

    /// Sum of per-leaf costs; equals toffoli_cost of the same circuit.
    CostPolynomial cost_from_leaves() const {
        CostPolynomial total;
        for (const auto &[id, t] : leaves) {
            total += t.unit_cost.scaled(t.instances);
        }
        return total;
    }
};

namespace detail {

class CensusWalker {
   public:
    // Leaf identity -> instance count, per gate identity.
    using Leaves = std::map<std::string, int64_t>;

    const Leaves &gate(const Gate &g) {
        std::string key = g.identity();
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        Leaves out;
        if (g.is_leaf()) {
            out[key] = 1;
            proto_.emplace(key, &g);
        } else {
            out = circuit(g.decomposition());
        }
        return memo_.emplace(key, std::move(out)).first->second;
    }

    Leaves circuit(const CompositeCircuit &c) {
        Leaves out;
        for (const auto &node : c.nodes) {
            if (node.kind == NodeKind::Gate) {
                for (const auto &[id, k] : gate(*node.gate)) {
                    out[id] += k;
                }
            }
        }
        return out;
    }

    const Gate &leaf(const std::string &id) const {
        return *proto_.at(id);
    }

    FamilyCounts families(const Leaves &leaves) const {
        FamilyCounts out;
        for (const auto &[id, k] : leaves) {
            const Gate &g = leaf(id);
            out[g.family()] += k * g.census_weight();
        }
        return out;
    }

   private:
    std::unordered_map<std::string, Leaves> memo_;
    std::unordered_map<std::string, const Gate *> proto_;
};

}  // namespace detail

/// Recursive leaf-family census. Every multi-controlled Toffoli and XOR fan
/// shares the "Toffoli" bucket; Equals counts one unit per compared n-word.
/// `steps` breaks the totals down by the circuit's direct composite children.
inline CensusReport census(const CompositeCircuit &circuit) {
    detail::CensusWalker w;
    CensusReport report;
    auto leaves = w.circuit(circuit);
    report.totals = w.families(leaves);
    for (const auto &[id, k] : leaves) {
        const Gate &g = w.leaf(id);
        if (!family_unit_cost(g.family())) {
            throw UnknownFamily(g.family());
        }
        report.leaves[id] = {g.family(), k, k * g.census_weight(), g.leaf_cost()};
    }
    for (const auto &node : circuit.nodes) {
        if (node.kind == NodeKind::Gate && !node.gate->is_leaf()) {
            report.steps.emplace_back(node.label, w.families(w.gate(*node.gate)));
        }
    }
    return report;
}

inline CensusReport census(const GatePtr &gate) {
    return census(wrap_gate(gate));
}

/// Rows where `actual` differs from `expected`: family -> (expected, actual).
inline std::map<std::string, std::pair<int64_t, int64_t>> census_diff(const FamilyCounts &expected,
                                                                    const FamilyCounts &actual) {
    std::map<std::string, std::pair<int64_t, int64_t>> rows;
    for (const auto &[f, k] : expected) {
        rows[f].first = k;
    }
    for (const auto &[f, k] : actual) {
        rows[f].second = k;
    }
    std::erase_if(rows, [](const auto &kv) { return kv.second.first == kv.second.second; });
    return rows;
}

inline CostPolynomial cost_delta(const CompositeCircuit &a, const CompositeCircuit &b) {
    return toffoli_cost(a) - toffoli_cost(b);
}

/// Widths compared as n grows: per-n coefficient first, then offset.
inline bool asymptotically_less(const LinearSize &a, const LinearSize &b) {
    return a.per_n != b.per_n ? a.per_n < b.per_n : a.offset < b.offset;
}

namespace detail {

inline LinearSize peak_width(const CompositeCircuit &c, std::unordered_map<std::string, LinearSize> &memo);

inline LinearSize peak_width(const Gate &g, std::unordered_map<std::string, LinearSize> &memo) {
    if (g.is_leaf()) {
        return {};
    }
    std::string key = g.identity();
    if (auto it = memo.find(key); it != memo.end()) {
        return it->second;
    }
    LinearSize peak = peak_width(g.decomposition(), memo);
    memo.emplace(key, peak);
    return peak;
}

inline LinearSize peak_width(const CompositeCircuit &c, std::unordered_map<std::string, LinearSize> &memo) {
    LinearSize live;
    LinearSize peak;
    auto bump = [&](const LinearSize &w) {
        if (asymptotically_less(peak, w)) {
            peak = w;
        }
    };
    for (const auto &node : c.nodes) {
        switch (node.kind) {
            case NodeKind::Alloc:
                live = live + node.reg_kind.symbolic;
                bump(live);
                break;
            case NodeKind::Free:
                live = live - node.reg_kind.symbolic;
                break;
            case NodeKind::Gate:
                bump(live + peak_width(*node.gate, memo));
                break;
            case NodeKind::LoadConst:
            case NodeKind::UnloadConst:
                break;
        }
    }
    return peak;
}

}  // namespace detail

/// Maximum simultaneously-live allocated width over construction order,
/// recursing into composite children. Classical constant registers are not
/// ancillas and are not counted.
inline LinearSize peak_ancilla(const CompositeCircuit &circuit) {
    std::unordered_map<std::string, LinearSize> memo;
    return detail::peak_width(circuit, memo);
}

inline LinearSize peak_ancilla(const Gate &gate) {
    std::unordered_map<std::string, LinearSize> memo;
    return detail::peak_width(gate, memo);
}

}  // namespace ecadd

#endif
