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

// Classical simulation of circuits on computational basis states.

#ifndef ECADD_SIMULATE_HPP
#define ECADD_SIMULATE_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecadd/circuit.hpp"

namespace ecadd {

enum class SimMode {
    Shallow,    // children evaluated by their own classical action
    Flattened,  // composites recursed into until leaves
};

struct TraceEntry {
    std::string path;
    std::string gate;
    std::vector<Value> inputs;
    std::vector<Value> outputs;
};

using SimTrace = std::vector<TraceEntry>;

/// A register released in a dirty state. For Free nodes the expected value is
/// zero; for UnloadConst it is the loaded constant.
class HygieneViolation : public std::runtime_error {
   public:
    HygieneViolation(std::string path, std::string reg, Value observed, Value expected)
        : std::runtime_error("ancilla " + reg + " released at " + path + " holding " + std::to_string(observed) +
                             " (expected " + std::to_string(expected) + ")"),
          path_(std::move(path)),
          register_(std::move(reg)),
          observed_(observed),
          expected_(expected) {
    }

    const std::string &path() const {
        return path_;
    }
    const std::string &register_name() const {
        return register_;
    }
    Value observed() const {
        return observed_;
    }
    Value expected() const {
        return expected_;
    }
    const SimTrace &partial_trace() const {
        return trace_;
    }
    void set_partial_trace(SimTrace t) {
        trace_ = std::move(t);
    }

   private:
    std::string path_;
    std::string register_;
    Value observed_;
    Value expected_;
    SimTrace trace_;
};

/// Nonzero ancilla at a Free.
class AncillaViolation : public HygieneViolation {
   public:
    AncillaViolation(std::string path, std::string reg, Value observed)
        : HygieneViolation(std::move(path), std::move(reg), observed, 0) {
    }
};

/// Constant register modified by the circuit.
class ConstantViolation : public HygieneViolation {
   public:
    using HygieneViolation::HygieneViolation;
};

namespace detail {

inline void check_value(const DataKind &kind, Value v, const std::string &where) {
    if (v >= kind.bound()) {
        throw DomainError(where + ": value " + std::to_string(v) + " out of range for " + kind.str());
    }
}

inline std::vector<Value> run_circuit(const CompositeCircuit &c, const std::vector<Value> &lefts, SimMode mode,
                                      const std::string &path, SimTrace *trace);

inline std::vector<Value> run_gate(const Gate &gate, const std::vector<Value> &ins, SimMode mode,
                                   const std::string &path, SimTrace *trace) {
    auto lregs = left_registers(gate.signature());
    for (size_t i = 0; i < ins.size(); ++i) {
        check_value(lregs[i].kind, ins[i], path + "." + lregs[i].name);
    }
    std::vector<Value> outs;
    bool recurse = mode == SimMode::Flattened && !gate.is_leaf();
    if (recurse) {
        outs = run_circuit(gate.decomposition(), ins, mode, path, trace);
    } else {
        outs = gate.apply(ins);
        auto rregs = right_registers(gate.signature());
        for (size_t j = 0; j < outs.size(); ++j) {
            check_value(rregs[j].kind, outs[j], path + "." + rregs[j].name);
        }
        if (trace) {
            trace->push_back({path, gate.identity(), ins, outs});
        }
    }
    return outs;
}

inline std::vector<Value> run_circuit(const CompositeCircuit &c, const std::vector<Value> &lefts, SimMode mode,
                                      const std::string &path, SimTrace *trace) {
    std::map<PortRef, PortRef> feeding;
    for (const auto &e : c.edges) {
        feeding[e.dst] = e.src;
    }
    std::map<PortRef, Value> values;
    for (int i = 0; i < static_cast<int>(lefts.size()); ++i) {
        values[{kLeftDangle, i}] = lefts[i];
    }
    auto take = [&](PortRef dst) {
        auto it = feeding.find(dst);
        if (it == feeding.end()) {
            throw StructuralError(FindingCode::DanglingPort, "simulating " + c.name + ": unconnected port");
        }
        auto v = values.find(it->second);
        if (v == values.end()) {
            throw StructuralError(FindingCode::Cycle, "simulating " + c.name + ": value used before produced");
        }
        Value out = v->second;
        values.erase(v);
        return out;
    };

    for (int n = 0; n < static_cast<int>(c.nodes.size()); ++n) {
        const Node &node = c.nodes[n];
        std::string node_path = path + "/" + node.label;
        switch (node.kind) {
            case NodeKind::Alloc:
                values[{n, 0}] = 0;
                break;
            case NodeKind::LoadConst:
                values[{n, 0}] = node.constant;
                break;
            case NodeKind::Free: {
                Value v = take({n, 0});
                if (v != 0) {
                    throw AncillaViolation(node_path, node.label, v);
                }
                break;
            }
            case NodeKind::UnloadConst: {
                Value v = take({n, 0});
                if (v != node.constant) {
                    throw ConstantViolation(node_path, node.label, v, node.constant);
                }
                break;
            }
            case NodeKind::Gate: {
                std::vector<Value> ins;
                auto lk = node.left_kinds();
                for (int p = 0; p < static_cast<int>(lk.size()); ++p) {
                    ins.push_back(take({n, p}));
                }
                auto outs = run_gate(*node.gate, ins, mode, node_path, trace);
                for (int p = 0; p < static_cast<int>(outs.size()); ++p) {
                    values[{n, p}] = outs[p];
                }
                break;
            }
        }
    }
    std::vector<Value> outs;
    auto rregs = right_registers(c.signature);
    for (int p = 0; p < static_cast<int>(rregs.size()); ++p) {
        outs.push_back(take({kRightDangle, p}));
    }
    return outs;
}

}  // namespace detail

using NamedValues = std::map<std::string, Value>;

struct SimResult {
    NamedValues outputs;
    SimTrace trace;
};

namespace detail {

inline std::vector<Value> pack_inputs(const CompositeCircuit &c, const NamedValues &inputs) {
    std::vector<Value> lefts;
    for (const auto &r : left_registers(c.signature)) {
        auto it = inputs.find(r.name);
        if (it == inputs.end()) {
            throw std::invalid_argument("missing input register " + r.name);
        }
        check_value(r.kind, it->second, c.name + "." + r.name);
        lefts.push_back(it->second);
    }
    return lefts;
}

inline NamedValues unpack_outputs(const CompositeCircuit &c, const std::vector<Value> &outs) {
    NamedValues named;
    auto rregs = right_registers(c.signature);
    for (size_t j = 0; j < rregs.size(); ++j) {
        named[rregs[j].name] = outs[j];
    }
    return named;
}

}  // namespace detail

/// Runs `circuit` on the named input values. Throws AncillaViolation /
/// ConstantViolation on dirty releases and DomainError on out-of-range values.
inline NamedValues simulate(const CompositeCircuit &circuit, const NamedValues &inputs,
                            SimMode mode = SimMode::Flattened) {
    auto lefts = detail::pack_inputs(circuit, inputs);
    return detail::unpack_outputs(circuit, detail::run_circuit(circuit, lefts, mode, circuit.name, nullptr));
}

/// As simulate, also recording every evaluated gate. On a hygiene violation
/// the trace up to the violation is attached to the exception.
inline SimResult simulate_trace(const CompositeCircuit &circuit, const NamedValues &inputs,
                                SimMode mode = SimMode::Flattened) {
    SimResult result;
    auto lefts = detail::pack_inputs(circuit, inputs);
    try {
        auto outs = detail::run_circuit(circuit, lefts, mode, circuit.name, &result.trace);
        result.outputs = detail::unpack_outputs(circuit, outs);
    } catch (HygieneViolation &v) {
        v.set_partial_trace(std::move(result.trace));
        throw;
    }
    return result;
}

/// Positional form over left/right registers in signature order.
inline std::vector<Value> simulate_values(const CompositeCircuit &circuit, const std::vector<Value> &lefts,
                                          SimMode mode = SimMode::Flattened) {
    return detail::run_circuit(circuit, lefts, mode, circuit.name, nullptr);
}

}  // namespace ecadd

#endif
