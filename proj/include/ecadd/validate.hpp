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

#ifndef ECADD_VALIDATE_HPP
#define ECADD_VALIDATE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecadd/circuit.hpp"

namespace ecadd {

struct Finding {
    FindingCode code;
    std::string location;
    std::string detail;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool passed() const {
        return findings.empty();
    }

    bool has(FindingCode code) const {
        for (const auto &f : findings) {
            if (f.code == code) {
                return true;
            }
        }
        return false;
    }
};

using FamilyCounts = std::map<std::string, int64_t>;

/// Multiset of the direct child gate families (weighted by census units).
inline FamilyCounts direct_census(const CompositeCircuit &circuit) {
    FamilyCounts out;
    for (const auto &node : circuit.nodes) {
        if (node.kind == NodeKind::Gate) {
            out[node.gate->family()] += node.gate->census_weight();
        }
    }
    return out;
}

namespace detail {

inline std::string port_path(const CompositeCircuit &c, PortRef p) {
    return c.name + "/" + c.node_name(p.node) + "#" + std::to_string(p.node) + ":" + std::to_string(p.port);
}

}  // namespace detail

/// Structural checks: every port connected exactly once, edge kinds agree
/// with both endpoints, edges respect node order. With `expected_census`, the
/// direct child families must match it exactly.
inline ValidationReport validate(const CompositeCircuit &circuit,
                                 const std::optional<FamilyCounts> &expected_census = std::nullopt) {
    ValidationReport report;
    auto add = [&](FindingCode code, std::string loc, std::string detail) {
        report.findings.push_back({code, std::move(loc), std::move(detail)});
    };

    std::map<PortRef, int> produced_uses;
    std::map<PortRef, int> consumed_uses;
    for (const auto &e : circuit.edges) {
        auto sk = circuit.source_kind(e.src);
        auto dk = circuit.dest_kind(e.dst);
        if (!sk) {
            add(FindingCode::DanglingPort, detail::port_path(circuit, e.src), "edge leaves a port that does not exist");
            continue;
        }
        if (!dk) {
            add(FindingCode::DanglingPort, detail::port_path(circuit, e.dst), "edge enters a port that does not exist");
            continue;
        }
        produced_uses[e.src]++;
        consumed_uses[e.dst]++;
        for (const DataKind *end : {&*sk, &*dk}) {
            if (!e.kind.same_type(*end)) {
                add(FindingCode::KindMismatch, detail::port_path(circuit, e.dst),
                    "edge carries " + e.kind.str() + " but port is " + end->str());
            } else if (e.kind.bits != end->bits) {
                add(FindingCode::BitsizeMismatch, detail::port_path(circuit, e.dst),
                    "edge carries " + e.kind.str() + " but port is " + end->str());
            }
        }
        int src_order = e.src.node == kLeftDangle ? -1 : e.src.node;
        int dst_order = e.dst.node == kRightDangle ? static_cast<int>(circuit.nodes.size()) : e.dst.node;
        if (src_order >= dst_order) {
            add(FindingCode::Cycle, detail::port_path(circuit, e.dst), "edge does not follow node order");
        }
    }

    auto check_port = [&](std::map<PortRef, int> &uses, PortRef p, const char *what) {
        int count = uses.count(p) ? uses[p] : 0;
        if (count == 0) {
            add(FindingCode::DanglingPort, detail::port_path(circuit, p), std::string(what) + " is not connected");
        } else if (count > 1) {
            add(FindingCode::PortReconnected, detail::port_path(circuit, p),
                std::string(what) + " has " + std::to_string(count) + " connections");
        }
    };

    auto lregs = left_registers(circuit.signature);
    for (int i = 0; i < static_cast<int>(lregs.size()); ++i) {
        check_port(produced_uses, {kLeftDangle, i}, ("input " + lregs[i].name).c_str());
    }
    auto rregs = right_registers(circuit.signature);
    for (int i = 0; i < static_cast<int>(rregs.size()); ++i) {
        check_port(consumed_uses, {kRightDangle, i}, ("output " + rregs[i].name).c_str());
    }
    for (int n = 0; n < static_cast<int>(circuit.nodes.size()); ++n) {
        const Node &node = circuit.nodes[n];
        for (int p = 0; p < static_cast<int>(node.left_kinds().size()); ++p) {
            check_port(consumed_uses, {n, p}, "input port");
        }
        for (int p = 0; p < static_cast<int>(node.right_kinds().size()); ++p) {
            check_port(produced_uses, {n, p}, "output port");
        }
    }

    if (expected_census) {
        FamilyCounts actual = direct_census(circuit);
        std::map<std::string, std::pair<int64_t, int64_t>> rows;
        for (const auto &[family, count] : *expected_census) {
            rows[family].first = count;
        }
        for (const auto &[family, count] : actual) {
            rows[family].second = count;
        }
        for (const auto &[family, row] : rows) {
            if (row.first != row.second) {
                add(FindingCode::CensusMismatch, circuit.name + "/" + family,
                    "expected " + std::to_string(row.first) + ", found " + std::to_string(row.second));
            }
        }
    }
    return report;
}

}  // namespace ecadd

#endif
