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

// Typed IR for hierarchical reversible circuits.
//
// A CompositeCircuit is a DAG of nodes (gate instances and Alloc/Free/
// LoadConst/UnloadConst pseudo-nodes) whose ports are linked by edges. Every
// port is a linear value: it is produced once and consumed once. The outer
// signature is exposed through two boundary pseudo-nodes, kLeftDangle (whose
// output ports are the circuit inputs) and kRightDangle (whose input ports are
// the circuit outputs). Node order is a topological order.

#ifndef ECADD_CIRCUIT_HPP
#define ECADD_CIRCUIT_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ecadd/field.hpp"
#include "ecadd/polynomial.hpp"

namespace ecadd {

using Value = uint64_t;

enum class FindingCode { DanglingPort, PortReconnected, BitsizeMismatch, KindMismatch, CensusMismatch, Cycle };

inline std::string to_string(FindingCode code) {
    switch (code) {
        case FindingCode::DanglingPort:
            return "DanglingPort";
        case FindingCode::PortReconnected:
            return "PortReconnected";
        case FindingCode::BitsizeMismatch:
            return "BitsizeMismatch";
        case FindingCode::KindMismatch:
            return "KindMismatch";
        case FindingCode::CensusMismatch:
            return "CensusMismatch";
        case FindingCode::Cycle:
            return "Cycle";
    }
    return "Unknown";
}

/// Thrown by the builder when a construction step would produce an invalid
/// circuit.
class StructuralError : public std::logic_error {
   public:
    StructuralError(FindingCode code, const std::string &detail)
        : std::logic_error(to_string(code) + ": " + detail), code_(code) {
    }
    FindingCode code() const {
        return code_;
    }

   private:
    FindingCode code_;
};

class LeafHasNoDecomposition : public std::logic_error {
   public:
    explicit LeafHasNoDecomposition(const std::string &gate)
        : std::logic_error("LeafHasNoDecomposition: " + gate + " is a leaf gate") {
    }
};

enum class KindTag { Bit, UInt, MontUInt };

/// Type of the data carried on a wire.
struct DataKind {
    KindTag tag = KindTag::Bit;
    unsigned bits = 1;
    LinearSize symbolic = LinearSize::bits(1);
    uint64_t modulus = 0;

    static DataKind bit() {
        return {};
    }

    static DataKind uint(unsigned bits, LinearSize symbolic) {
        if (bits == 0 || bits > 63) {
            throw DomainError("UInt width must be in [1, 63]");
        }
        return {KindTag::UInt, bits, symbolic, 0};
    }

    /// An unsigned word of k field-widths (k*n bits).
    static DataKind uint_words(const FieldParams &f, int64_t k = 1) {
        return uint(static_cast<unsigned>(k * f.n), LinearSize::words(k));
    }

    static DataKind mont(const FieldParams &f) {
        uint64_t lo = uint64_t{1} << (f.n - 1);
        if (!(lo < f.p && f.p < f.R)) {
            throw DomainError("MontUInt modulus must satisfy 2^(w-1) < p < 2^w");
        }
        return {KindTag::MontUInt, f.n, LinearSize::words(1), f.p};
    }

    /// Exclusive upper bound on the values this kind can hold.
    uint64_t bound() const {
        switch (tag) {
            case KindTag::Bit:
                return 2;
            case KindTag::UInt:
                return uint64_t{1} << bits;
            case KindTag::MontUInt:
                return modulus;
        }
        return 0;
    }

    bool same_type(const DataKind &o) const {
        return tag == o.tag && modulus == o.modulus;
    }

    bool operator==(const DataKind &o) const {
        return tag == o.tag && bits == o.bits && modulus == o.modulus;
    }

    std::string str() const {
        switch (tag) {
            case KindTag::Bit:
                return "Bit";
            case KindTag::UInt:
                return "UInt(" + std::to_string(bits) + ")";
            case KindTag::MontUInt:
                return "MontUInt(" + std::to_string(bits) + "," + std::to_string(modulus) + ")";
        }
        return "?";
    }
};

enum class Direction { Input, Output, Thru };

struct RegisterSpec {
    std::string name;
    DataKind kind;
    Direction direction = Direction::Thru;

    bool is_left() const {
        return direction != Direction::Output;
    }
    bool is_right() const {
        return direction != Direction::Input;
    }
};

using Signature = std::vector<RegisterSpec>;

inline std::vector<RegisterSpec> left_registers(const Signature &sig) {
    std::vector<RegisterSpec> out;
    for (const auto &r : sig) {
        if (r.is_left()) {
            out.push_back(r);
        }
    }
    return out;
}

inline std::vector<RegisterSpec> right_registers(const Signature &sig) {
    std::vector<RegisterSpec> out;
    for (const auto &r : sig) {
        if (r.is_right()) {
            out.push_back(r);
        }
    }
    return out;
}

class CompositeCircuit;

/// A reversible subroutine. Leaves provide a classical action and a Toffoli
/// cost; composites additionally provide a decomposition whose outer
/// signature equals their own.
class Gate {
   public:
    virtual ~Gate() = default;

    virtual const Signature &signature() const = 0;

    /// Census family. Adjoints share the family of their base gate.
    virtual std::string family() const = 0;

    /// Unique description of the gate including every parameter.
    virtual std::string identity() const {
        return family();
    }

    virtual bool is_leaf() const {
        return true;
    }

    /// Classical action on basis states: one value per left register in
    /// signature order in, one value per right register out.
    virtual std::vector<Value> apply(std::span<const Value> lefts) const = 0;

    virtual const CompositeCircuit &decomposition() const {
        throw LeafHasNoDecomposition(identity());
    }

    /// Toffoli cost of a leaf as a polynomial in the symbolic bitsize n.
    virtual CostPolynomial leaf_cost() const {
        return {};
    }

    /// How many census units one instance contributes to its family.
    virtual int64_t census_weight() const {
        return 1;
    }
};

using GatePtr = std::shared_ptr<const Gate>;

enum class NodeKind { Gate, Alloc, Free, LoadConst, UnloadConst };

struct Node {
    NodeKind kind = NodeKind::Gate;
    std::string label;
    GatePtr gate;
    DataKind reg_kind;  // Alloc/Free/LoadConst/UnloadConst
    Value constant = 0;  // LoadConst/UnloadConst

    std::vector<DataKind> left_kinds() const {
        std::vector<DataKind> out;
        switch (kind) {
            case NodeKind::Gate:
                for (const auto &r : left_registers(gate->signature())) {
                    out.push_back(r.kind);
                }
                break;
            case NodeKind::Free:
            case NodeKind::UnloadConst:
                out.push_back(reg_kind);
                break;
            default:
                break;
        }
        return out;
    }

    std::vector<DataKind> right_kinds() const {
        std::vector<DataKind> out;
        switch (kind) {
            case NodeKind::Gate:
                for (const auto &r : right_registers(gate->signature())) {
                    out.push_back(r.kind);
                }
                break;
            case NodeKind::Alloc:
            case NodeKind::LoadConst:
                out.push_back(reg_kind);
                break;
            default:
                break;
        }
        return out;
    }
};

constexpr int kLeftDangle = -1;
constexpr int kRightDangle = -2;

struct PortRef {
    int node = kLeftDangle;
    int port = 0;
    auto operator<=>(const PortRef &) const = default;
};

struct Edge {
    PortRef src;  // a right port of a node, or an outer input on kLeftDangle
    PortRef dst;  // a left port of a node, or an outer output on kRightDangle
    DataKind kind;
};

class CompositeCircuit {
   public:
    std::string name;
    Signature signature;
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    /// Kind of the value produced at `src`, if the port exists.
    std::optional<DataKind> source_kind(PortRef src) const {
        std::vector<DataKind> kinds;
        if (src.node == kLeftDangle) {
            for (const auto &r : left_registers(signature)) {
                kinds.push_back(r.kind);
            }
        } else if (src.node >= 0 && src.node < static_cast<int>(nodes.size())) {
            kinds = nodes[src.node].right_kinds();
        }
        if (src.port < 0 || src.port >= static_cast<int>(kinds.size())) {
            return std::nullopt;
        }
        return kinds[src.port];
    }

    /// Kind of the value consumed at `dst`, if the port exists.
    std::optional<DataKind> dest_kind(PortRef dst) const {
        std::vector<DataKind> kinds;
        if (dst.node == kRightDangle) {
            for (const auto &r : right_registers(signature)) {
                kinds.push_back(r.kind);
            }
        } else if (dst.node >= 0 && dst.node < static_cast<int>(nodes.size())) {
            kinds = nodes[dst.node].left_kinds();
        }
        if (dst.port < 0 || dst.port >= static_cast<int>(kinds.size())) {
            return std::nullopt;
        }
        return kinds[dst.port];
    }

    std::string node_name(int node) const {
        if (node == kLeftDangle) {
            return "LeftDangle";
        }
        if (node == kRightDangle) {
            return "RightDangle";
        }
        return nodes[node].label;
    }

    /// Gate instances (non pseudo-nodes) in order.
    std::vector<GatePtr> gates() const {
        std::vector<GatePtr> out;
        for (const auto &n : nodes) {
            if (n.kind == NodeKind::Gate) {
                out.push_back(n.gate);
            }
        }
        return out;
    }
};

/// Base for non-leaf gates: the decomposition is built lazily once and
/// shared by all readers.
class CompositeGate : public Gate {
   public:
    bool is_leaf() const override {
        return false;
    }

    const CompositeCircuit &decomposition() const override {
        std::call_once(once_, [this] { cached_ = build(); });
        return cached_;
    }

   protected:
    virtual CompositeCircuit build() const = 0;

   private:
    mutable std::once_flag once_;
    mutable CompositeCircuit cached_;
};

inline CompositeCircuit decompose(const Gate &gate) {
    return gate.decomposition();
}

/// Reference to a live wire inside a CircuitBuilder.
struct Handle {
    int id = -1;
};

/// Single-owner builder for CompositeCircuit. Handles are linear: every
/// handle must be consumed exactly once, by a gate, a Free, an UnloadConst,
/// or as a circuit output.
class CircuitBuilder {
   public:
    explicit CircuitBuilder(std::string name) {
        circuit_.name = std::move(name);
    }

    /// Declares an outer register. Thru registers must be returned in
    /// finalize under the same name; Input registers are consumed internally.
    Handle add_register(const std::string &name, DataKind kind, Direction direction = Direction::Thru) {
        check_open();
        if (direction == Direction::Output) {
            throw std::invalid_argument("output registers are declared at finalize");
        }
        for (const auto &r : circuit_.signature) {
            if (r.name == name) {
                throw std::invalid_argument("duplicate register name " + name);
            }
        }
        int port = static_cast<int>(left_registers(circuit_.signature).size());
        circuit_.signature.push_back({name, kind, direction});
        return new_wire({kLeftDangle, port}, kind, name);
    }

    /// Fresh ancilla, initially zero.
    Handle alloc(DataKind kind, const std::string &label) {
        check_open();
        circuit_.nodes.push_back({NodeKind::Alloc, label, nullptr, kind, 0});
        return new_wire({last_node(), 0}, kind, label);
    }

    /// Releases an ancilla; simulation asserts the value is zero.
    void free(Handle h, std::string label = {}) {
        check_open();
        const Wire &w = wire(h);
        if (label.empty()) {
            label = w.name;
        }
        DataKind kind = w.kind;
        PortRef src = consume(h, kind, "Free(" + label + ")");
        circuit_.nodes.push_back({NodeKind::Free, label, nullptr, kind, 0});
        circuit_.edges.push_back({src, {last_node(), 0}, kind});
    }

    /// Classical constant register.
    Handle load_const(DataKind kind, Value value, const std::string &label) {
        check_open();
        if (value >= kind.bound()) {
            throw DomainError("constant " + std::to_string(value) + " does not fit " + kind.str());
        }
        circuit_.nodes.push_back({NodeKind::LoadConst, label, nullptr, kind, value});
        return new_wire({last_node(), 0}, kind, label);
    }

    /// Releases a constant register; simulation asserts it still holds `value`.
    void unload_const(Handle h, Value value, std::string label = {}) {
        check_open();
        const Wire &w = wire(h);
        if (label.empty()) {
            label = w.name;
        }
        DataKind kind = w.kind;
        PortRef src = consume(h, kind, "UnloadConst(" + label + ")");
        circuit_.nodes.push_back({NodeKind::UnloadConst, label, nullptr, kind, value});
        circuit_.edges.push_back({src, {last_node(), 0}, kind});
    }

    /// Appends a gate instance. `lefts` are wired to the gate's left
    /// registers in signature order. Returns handles for its right registers.
    std::vector<Handle> add(GatePtr gate, const std::vector<Handle> &lefts, std::string label = {}) {
        check_open();
        auto lregs = left_registers(gate->signature());
        auto rregs = right_registers(gate->signature());
        if (lefts.size() != lregs.size()) {
            throw StructuralError(FindingCode::DanglingPort,
                                  gate->identity() + " expects " + std::to_string(lregs.size()) + " inputs, got " +
                                      std::to_string(lefts.size()));
        }
        if (label.empty()) {
            label = gate->family();
        }
        for (size_t i = 0; i < lefts.size(); ++i) {
            for (size_t j = 0; j < i; ++j) {
                if (lefts[i].id == lefts[j].id) {
                    throw StructuralError(FindingCode::PortReconnected,
                                          "handle wired into both " + lregs[j].name + " and " + lregs[i].name +
                                              " of " + label);
                }
            }
            const Wire &w = wire(lefts[i]);
            check_kind(w.kind, lregs[i].kind, label + "." + lregs[i].name);
        }
        std::map<std::string, std::string> names;
        std::vector<PortRef> srcs;
        for (size_t i = 0; i < lefts.size(); ++i) {
            names[lregs[i].name] = wire(lefts[i]).name;
            srcs.push_back(consume(lefts[i], lregs[i].kind, label));
        }
        circuit_.nodes.push_back({NodeKind::Gate, label, std::move(gate), {}, 0});
        int node = last_node();
        for (size_t i = 0; i < srcs.size(); ++i) {
            circuit_.edges.push_back({srcs[i], {node, static_cast<int>(i)}, lregs[i].kind});
        }
        std::vector<Handle> out;
        for (size_t j = 0; j < rregs.size(); ++j) {
            auto it = names.find(rregs[j].name);
            std::string wire_name = it == names.end() ? label + "." + rregs[j].name : it->second;
            out.push_back(new_wire({node, static_cast<int>(j)}, rregs[j].kind, wire_name));
        }
        return out;
    }

    /// Named wiring: maps each left register name to a handle. Returns a
    /// map from right register name to handle.
    std::map<std::string, Handle> add_named(GatePtr gate, const std::map<std::string, Handle> &wiring,
                                            std::string label = {}) {
        std::vector<Handle> lefts;
        for (const auto &r : left_registers(gate->signature())) {
            auto it = wiring.find(r.name);
            if (it == wiring.end()) {
                throw StructuralError(FindingCode::DanglingPort, "no wire for port " + r.name);
            }
            lefts.push_back(it->second);
        }
        if (wiring.size() != lefts.size()) {
            throw StructuralError(FindingCode::DanglingPort, "wiring names ports the gate does not have");
        }
        auto rregs = right_registers(gate->signature());
        auto outs = add(std::move(gate), lefts, std::move(label));
        std::map<std::string, Handle> named;
        for (size_t j = 0; j < rregs.size(); ++j) {
            named[rregs[j].name] = outs[j];
        }
        return named;
    }

    DataKind kind_of(Handle h) const {
        return wire(h).kind;
    }

    /// Closes the builder. Thru registers must appear in `outputs` under
    /// their own name; any other entry becomes an Output register.
    CompositeCircuit finalize(const std::vector<std::pair<std::string, Handle>> &outputs) {
        check_open();
        std::map<std::string, Handle> by_name;
        for (const auto &[name, h] : outputs) {
            if (!by_name.emplace(name, h).second) {
                throw std::invalid_argument("duplicate output name " + name);
            }
        }
        for (const auto &r : circuit_.signature) {
            if (r.direction == Direction::Thru && !by_name.count(r.name)) {
                throw StructuralError(FindingCode::DanglingPort, "thru register " + r.name + " not returned");
            }
            if (r.direction == Direction::Input && by_name.count(r.name)) {
                throw std::invalid_argument("input-only register " + r.name + " cannot be an output");
            }
        }
        for (const auto &[name, h] : outputs) {
            bool declared = false;
            for (const auto &r : circuit_.signature) {
                declared |= r.name == name;
            }
            if (!declared) {
                circuit_.signature.push_back({name, wire(h).kind, Direction::Output});
            }
        }
        auto rregs = right_registers(circuit_.signature);
        for (size_t j = 0; j < rregs.size(); ++j) {
            Handle h = by_name.at(rregs[j].name);
            PortRef src = consume(h, rregs[j].kind, "output " + rregs[j].name);
            circuit_.edges.push_back({src, {kRightDangle, static_cast<int>(j)}, rregs[j].kind});
        }
        for (const auto &w : wires_) {
            if (w.live) {
                throw StructuralError(FindingCode::DanglingPort, "wire " + w.name + " is never consumed");
            }
        }
        finalized_ = true;
        return std::move(circuit_);
    }

   private:
    struct Wire {
        PortRef src;
        DataKind kind;
        std::string name;
        bool live = true;
    };

    void check_open() const {
        if (finalized_) {
            throw std::logic_error("builder already finalized");
        }
    }

    int last_node() const {
        return static_cast<int>(circuit_.nodes.size()) - 1;
    }

    Handle new_wire(PortRef src, DataKind kind, std::string name) {
        wires_.push_back({src, kind, std::move(name), true});
        return {static_cast<int>(wires_.size()) - 1};
    }

    const Wire &wire(Handle h) const {
        if (h.id < 0 || h.id >= static_cast<int>(wires_.size())) {
            throw std::invalid_argument("unknown handle");
        }
        return wires_[h.id];
    }

    static void check_kind(const DataKind &have, const DataKind &want, const std::string &where) {
        if (!have.same_type(want)) {
            throw StructuralError(FindingCode::KindMismatch, where + ": " + have.str() + " wired into " + want.str());
        }
        if (have.bits != want.bits) {
            throw StructuralError(FindingCode::BitsizeMismatch,
                                  where + ": " + have.str() + " wired into " + want.str());
        }
    }

    PortRef consume(Handle h, const DataKind &want, const std::string &where) {
        if (h.id < 0 || h.id >= static_cast<int>(wires_.size())) {
            throw std::invalid_argument("unknown handle");
        }
        Wire &w = wires_[h.id];
        if (!w.live) {
            throw StructuralError(FindingCode::PortReconnected, "wire " + w.name + " already consumed (" + where + ")");
        }
        check_kind(w.kind, want, where);
        w.live = false;
        return w.src;
    }

    CompositeCircuit circuit_;
    std::vector<Wire> wires_;
    bool finalized_ = false;
};

namespace detail {

/// Copies `src` into `out`, inlining gates down to `depth` levels. `inputs`
/// are the ports in `out` feeding src's outer left registers; returns the
/// ports in `out` carrying src's outer right registers.
inline std::vector<PortRef> inline_into(CompositeCircuit &out, const CompositeCircuit &src,
                                        const std::vector<PortRef> &inputs, int depth, const std::string &prefix) {
    std::map<PortRef, PortRef> produced;  // src-circuit source port -> out source port
    for (size_t i = 0; i < inputs.size(); ++i) {
        produced[{kLeftDangle, static_cast<int>(i)}] = inputs[i];
    }
    std::map<PortRef, PortRef> feeding;  // src-circuit dest port -> src-circuit source port
    for (const auto &e : src.edges) {
        feeding[e.dst] = e.src;
    }
    auto input_port = [&](PortRef dst) { return produced.at(feeding.at(dst)); };

    for (int i = 0; i < static_cast<int>(src.nodes.size()); ++i) {
        const Node &node = src.nodes[i];
        auto lkinds = node.left_kinds();
        std::vector<PortRef> ins;
        for (int p = 0; p < static_cast<int>(lkinds.size()); ++p) {
            ins.push_back(input_port({i, p}));
        }
        std::string label = prefix.empty() ? node.label : prefix + "/" + node.label;
        if (node.kind == NodeKind::Gate && !node.gate->is_leaf() && depth != 0) {
            auto outs = inline_into(out, node.gate->decomposition(), ins, depth < 0 ? depth : depth - 1, label);
            for (int p = 0; p < static_cast<int>(outs.size()); ++p) {
                produced[{i, p}] = outs[p];
            }
            continue;
        }
        Node copy = node;
        copy.label = label;
        out.nodes.push_back(copy);
        int j = static_cast<int>(out.nodes.size()) - 1;
        for (int p = 0; p < static_cast<int>(ins.size()); ++p) {
            out.edges.push_back({ins[p], {j, p}, lkinds[p]});
        }
        auto rkinds = node.right_kinds();
        for (int p = 0; p < static_cast<int>(rkinds.size()); ++p) {
            produced[{i, p}] = {j, p};
        }
    }
    std::vector<PortRef> outs;
    auto rregs = right_registers(src.signature);
    for (int p = 0; p < static_cast<int>(rregs.size()); ++p) {
        outs.push_back(input_port({kRightDangle, p}));
    }
    return outs;
}

}  // namespace detail

/// One-node circuit exposing `gate` with the gate's own signature.
inline CompositeCircuit wrap_gate(const GatePtr &gate, const std::string &label = {}) {
    CircuitBuilder bb(gate->identity());
    std::vector<Handle> lefts;
    for (const auto &r : gate->signature()) {
        if (r.is_left()) {
            lefts.push_back(bb.add_register(r.name, r.kind, r.direction));
        }
    }
    auto outs = bb.add(gate, lefts, label);
    std::vector<std::pair<std::string, Handle>> named;
    auto rregs = right_registers(gate->signature());
    for (size_t j = 0; j < rregs.size(); ++j) {
        named.emplace_back(rregs[j].name, outs[j]);
    }
    return bb.finalize(named);
}

constexpr int kUnlimitedDepth = -1;

/// Recursively inlines decompositions of non-leaf gates, `depth` levels deep
/// (kUnlimitedDepth for all the way down to leaves). Requires a structurally
/// valid circuit.
inline CompositeCircuit flatten(const CompositeCircuit &circuit, int depth = kUnlimitedDepth) {
    CompositeCircuit out;
    out.name = circuit.name;
    out.signature = circuit.signature;
    std::vector<PortRef> inputs;
    auto lregs = left_registers(circuit.signature);
    for (int i = 0; i < static_cast<int>(lregs.size()); ++i) {
        inputs.push_back({kLeftDangle, i});
    }
    auto outs = detail::inline_into(out, circuit, inputs, depth, "");
    auto rregs = right_registers(circuit.signature);
    for (int p = 0; p < static_cast<int>(outs.size()); ++p) {
        out.edges.push_back({outs[p], {kRightDangle, p}, rregs[p].kind});
    }
    return out;
}

}  // namespace ecadd

#endif
