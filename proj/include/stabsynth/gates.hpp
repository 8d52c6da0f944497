#pragma once

// Gate/circuit representation shared by every synthesis routine.  Qubits are
// 0-based; P carries a power in {1,2,3} (power 2 printed as Z); SWAP expands
// to three CNOTs wherever depth or symplectic action is computed.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "stabsynth/common.hpp"

namespace stabsynth {

enum class GateKind { H, P, CNOT, CZ, SWAP };

struct Gate {
    GateKind kind;
    int q0 = 0;
    int q1 = -1;    // second qubit for CNOT/CZ/SWAP (target for CNOT)
    int power = 1;  // P only, mod 4, never 0

    static Gate h(int q) { return {GateKind::H, q, -1, 1}; }
    static Gate p(int q, int power = 1) { return {GateKind::P, q, -1, ((power % 4) + 4) % 4}; }
    static Gate cnot(int c, int t) { return {GateKind::CNOT, c, t, 1}; }
    static Gate cz(int a, int b) { return {GateKind::CZ, a, b, 1}; }
    static Gate swap(int a, int b) { return {GateKind::SWAP, a, b, 1}; }

    bool is_two_qubit() const {
        return kind == GateKind::CNOT || kind == GateKind::CZ || kind == GateKind::SWAP;
    }

    bool operator==(const Gate& o) const {
        return kind == o.kind && q0 == o.q0 && q1 == o.q1 && power == o.power;
    }
};

struct Circuit {
    int n = 0;
    std::vector<Gate> gates;

    Circuit() = default;
    explicit Circuit(int n_) : n(n_) {}

    void push(const Gate& g) {
        if (g.q0 < 0 || g.q0 >= n || (g.is_two_qubit() && (g.q1 < 0 || g.q1 >= n || g.q1 == g.q0)))
            throw dimension_mismatch("Circuit::push: qubit out of range");
        if (g.kind == GateKind::P && g.power == 0) return;
        gates.push_back(g);
    }

    void append(const Circuit& o) {
        if (o.n != n) throw dimension_mismatch("Circuit::append: qubit count mismatch");
        for (const Gate& g : o.gates) gates.push_back(g);
    }
};

// SWAP(a,b) = CNOT(a,b) CNOT(b,a) CNOT(a,b)
inline std::vector<Gate> expand_swap(const Gate& g) {
    return {Gate::cnot(g.q0, g.q1), Gate::cnot(g.q1, g.q0), Gate::cnot(g.q0, g.q1)};
}

inline Circuit expand_swaps(const Circuit& c) {
    Circuit out(c.n);
    for (const Gate& g : c.gates) {
        if (g.kind == GateKind::SWAP)
            for (const Gate& e : expand_swap(g)) out.push(e);
        else
            out.push(g);
    }
    return out;
}

// Greedy in-order layering; single-qubit gates are free, SWAP counts as its
// three-CNOT expansion.
inline int two_qubit_depth(const Circuit& c) {
    std::vector<int> level(c.n, 0);
    int depth = 0;
    Circuit ec = expand_swaps(c);
    for (const Gate& g : ec.gates) {
        if (!g.is_two_qubit()) continue;
        int d = std::max(level[g.q0], level[g.q1]) + 1;
        level[g.q0] = level[g.q1] = d;
        depth = std::max(depth, d);
    }
    return depth;
}

inline bool is_lnn_legal(const Circuit& c) {
    for (const Gate& g : c.gates)
        if (g.is_two_qubit() && std::abs(g.q0 - g.q1) != 1) return false;
    return true;
}

inline Circuit invert_circuit(const Circuit& c) {
    Circuit out(c.n);
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::P) g.power = (4 - g.power) % 4;
        if (g.kind == GateKind::P && g.power == 0) continue;
        out.push(g);
    }
    return out;
}

// Stage tags for layered normal forms.
enum class StageTag { C, P, CZ, H };

inline const char* stage_tag_name(StageTag t) {
    switch (t) {
        case StageTag::C: return "C";
        case StageTag::P: return "P";
        case StageTag::CZ: return "CZ";
        case StageTag::H: return "H";
    }
    return "?";
}

struct LayeredCircuit {
    int n = 0;
    std::vector<std::pair<StageTag, Circuit>> stages;

    LayeredCircuit() = default;
    explicit LayeredCircuit(int n_) : n(n_) {}

    void add_stage(StageTag tag, const Circuit& c) {
        if (c.n != n) throw dimension_mismatch("LayeredCircuit::add_stage: qubit count mismatch");
        for (const Gate& g : c.gates) {
            bool ok = false;
            switch (tag) {
                case StageTag::C: ok = g.kind == GateKind::CNOT; break;
                case StageTag::P: ok = g.kind == GateKind::P; break;
                case StageTag::CZ: ok = g.kind == GateKind::CZ; break;
                case StageTag::H: ok = g.kind == GateKind::H; break;
            }
            if (!ok) throw dimension_mismatch("LayeredCircuit::add_stage: gate kind not allowed in stage");
        }
        stages.emplace_back(tag, c);
    }

    Circuit flatten() const {
        Circuit out(n);
        for (const auto& [tag, c] : stages) out.append(c);
        return out;
    }

    std::vector<StageTag> tags() const {
        std::vector<StageTag> out;
        for (const auto& [tag, c] : stages) out.push_back(tag);
        return out;
    }
};

// Deterministic gate-word sampler (fixed engine, no library distributions so
// the stream is identical across platforms).  Not uniform over the Clifford
// group; it is only meant to exercise the synthesis paths.
inline Circuit random_clifford_word(int n, int length, uint64_t seed) {
    std::mt19937_64 rng(seed);
    Circuit c(n);
    for (int i = 0; i < length; ++i) {
        uint64_t r = rng();
        int kind = static_cast<int>(r % 4);
        int q0 = static_cast<int>((r >> 8) % static_cast<uint64_t>(n));
        switch (kind) {
            case 0: c.push(Gate::h(q0)); break;
            case 1: c.push(Gate::p(q0, 1 + static_cast<int>((r >> 32) % 3))); break;
            default: {
                if (n < 2) {
                    c.push(Gate::h(q0));
                    break;
                }
                int q1 = static_cast<int>((r >> 16) % static_cast<uint64_t>(n - 1));
                if (q1 >= q0) ++q1;
                c.push(kind == 2 ? Gate::cnot(q0, q1) : Gate::cz(q0, q1));
                break;
            }
        }
    }
    return c;
}

}  // namespace stabsynth
