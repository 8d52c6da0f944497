#pragma once

// Phase-polynomial view of {P, CNOT, CZ} circuits: the action is
// |x> -> i^{p(x)} |g(x)> with p a Z4 combination of parities of x-subsets and
// g linear invertible.  Cubic and higher terms reduce to quadratic ones via
//   i^{a+b+c  (xor)} = i^{3a+3b+3c+3(a^b)+3(a^c)+3(b^c)}
// applied with the subset split (first bit, second bit, rest).

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "stabsynth/gates.hpp"
#include "stabsynth/gf2.hpp"
#include "stabsynth/symplectic.hpp"

namespace stabsynth {

constexpr int kMaxPhasePolyQubits = 24;

struct PhaseDescr {
    int n = 0;
    std::map<uint32_t, uint8_t> poly;  // subset mask -> Z4 coefficient, no zeros
    BinMatrix g;                       // row i = mask of the function wire i holds

    PhaseDescr() = default;
    explicit PhaseDescr(int n_) : n(n_), g(BinMatrix::identity(n_)) {}

    void add_term(uint32_t mask, int coeff) {
        coeff = ((coeff % 4) + 4) % 4;
        if (!coeff || !mask) return;
        auto it = poly.find(mask);
        if (it == poly.end()) {
            poly.emplace(mask, static_cast<uint8_t>(coeff));
        } else {
            it->second = static_cast<uint8_t>((it->second + coeff) % 4);
            if (!it->second) poly.erase(it);
        }
    }

    bool is_quadratic() const {
        for (const auto& [mask, u] : poly)
            if (std::popcount(mask) > 2) return false;
        return true;
    }
};

inline uint32_t row_mask(const BinMatrix& m, int r) {
    uint32_t mask = 0;
    for (int c = 0; c < m.cols(); ++c)
        if (m.get(r, c)) mask |= uint32_t{1} << c;
    return mask;
}

// Simulates wire masks through a Hadamard-free circuit.
inline PhaseDescr extract_descr(const Circuit& c) {
    if (c.n > kMaxPhasePolyQubits) throw unsupported_size("extract_descr: more than 24 qubits");
    PhaseDescr d(c.n);
    std::vector<uint32_t> wire(c.n);
    for (int i = 0; i < c.n; ++i) wire[i] = uint32_t{1} << i;
    for (const Gate& g : expand_swaps(c).gates) {
        switch (g.kind) {
            case GateKind::P:
                d.add_term(wire[g.q0], g.power);
                break;
            case GateKind::CNOT:
                wire[g.q1] ^= wire[g.q0];
                break;
            case GateKind::CZ:
                d.add_term(wire[g.q0], 1);
                d.add_term(wire[g.q1], 1);
                d.add_term(wire[g.q0] ^ wire[g.q1], 3);
                break;
            case GateKind::H:
            case GateKind::SWAP:
                throw hadamard_in_phase_circuit("extract_descr: H gate in phase-polynomial circuit");
        }
    }
    d.g = BinMatrix(c.n, c.n);
    for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j)
            if ((wire[i] >> j) & 1u) d.g.set(i, j, true);
    return d;
}

// p(x) mod 4
inline int phase_evaluate(const PhaseDescr& d, uint32_t x) {
    int total = 0;
    for (const auto& [mask, u] : d.poly)
        if (std::popcount(mask & x) & 1) total += u;
    return total % 4;
}

inline PhaseDescr reduce_to_quadratic(PhaseDescr d) {
    for (;;) {
        std::vector<std::pair<uint32_t, int>> heavy;
        for (const auto& [mask, u] : d.poly)
            if (std::popcount(mask) > 2) heavy.emplace_back(mask, u);
        if (heavy.empty()) break;
        for (const auto& [mask, u] : heavy) {
            auto it = d.poly.find(mask);
            if (it == d.poly.end()) continue;
            int coeff = it->second;
            d.poly.erase(it);
            uint32_t a = mask & (~mask + 1);
            uint32_t rest1 = mask ^ a;
            uint32_t b = rest1 & (~rest1 + 1);
            uint32_t c = rest1 ^ b;
            int v = (3 * coeff) % 4;
            d.add_term(a, v);
            d.add_term(b, v);
            d.add_term(c, v);
            d.add_term(a ^ b, v);
            d.add_term(a ^ c, v);
            d.add_term(b ^ c, v);
        }
    }
    // Canonicalize the even part of every weight-2 coefficient into its two
    // literals (2(x_a ^ x_b) = 2x_a + 2x_b mod 4), so that equal functions
    // get equal maps: weight-2 coefficients end up in {0,1}, weight-1
    // coefficients stay mod 4.
    std::vector<std::pair<uint32_t, int>> even_part;
    for (const auto& [mask, u] : d.poly)
        if (std::popcount(mask) == 2 && u >= 2) even_part.emplace_back(mask, u - (u & 1));
    for (const auto& [mask, v] : even_part) {
        d.add_term(mask, -v);
        d.add_term(mask & (~mask + 1), v);
        d.add_term(mask ^ (mask & (~mask + 1)), v);
    }
    return d;
}

enum class PhaseOrder { P_CZ_C, C_P_CZ, CZ_P_C, C_CZ_P };

inline bool phase_order_c_first(PhaseOrder o) {
    return o == PhaseOrder::C_P_CZ || o == PhaseOrder::C_CZ_P;
}

// CNOT gate list whose wire-mask action realizes g (row i of g = final mask of
// wire i).  Gaussian elimination on g, replayed in reverse.
inline Circuit cnot_circuit_for_linear(const BinMatrix& g) {
    const int n = g.rows();
    if (g.rank() != n) throw singular_matrix("cnot_circuit_for_linear: map not invertible");
    BinMatrix cur = g;
    std::vector<std::pair<int, int>> ops;  // (dst, src): row dst ^= row src
    auto op = [&](int dst, int src) {
        cur.row_xor(dst, src);
        ops.emplace_back(dst, src);
    };
    for (int c = 0; c < n; ++c) {
        if (!cur.get(c, c)) {
            for (int r = 0; r < n; ++r)
                if (r != c && cur.get(r, c) && (r > c || !cur.get(r, r))) {
                    op(c, r);
                    break;
                }
            require(cur.get(c, c), "cnot_circuit_for_linear: pivot not found");
        }
        for (int r = 0; r < n; ++r)
            if (r != c && cur.get(r, c)) op(r, c);
    }
    Circuit out(n);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) out.push(Gate::cnot(it->second, it->first));
    return out;
}

namespace detail {

// Emits the P and CZ stages for a quadratic polynomial read over wire indices.
inline void emit_phase_stages(const PhaseDescr& quad, Circuit& p_stage, Circuit& cz_stage) {
    const int n = quad.n;
    std::vector<int> p_power(n, 0);
    for (const auto& [mask, u] : quad.poly) {
        if (std::popcount(mask) == 1) {
            p_power[std::countr_zero(mask)] += u;
        } else {
            int a = std::countr_zero(mask);
            int b = std::countr_zero(mask & (mask - 1));
            if (u % 2) {
                p_power[a] += u;
                p_power[b] += u;
                cz_stage.push(Gate::cz(a, b));
            } else {
                p_power[a] += 2;
                p_power[b] += 2;
            }
        }
    }
    for (int q = 0; q < n; ++q) {
        int pw = ((p_power[q] % 4) + 4) % 4;
        if (pw) p_stage.push(Gate::p(q, pw));
    }
}

}  // namespace detail

// Layered {P, CZ, C} realization of a phase descriptor in the requested stage
// order.  When the C stage comes first the polynomial is rewritten over the
// output functions g_1..g_n before emission.
inline LayeredCircuit synthesize_pczc(const PhaseDescr& descr, PhaseOrder order) {
    PhaseDescr quad = reduce_to_quadratic(descr);
    const int n = quad.n;
    if (phase_order_c_first(order)) {
        BinMatrix gti = quad.g.transpose().inverse();
        PhaseDescr rewritten(n);
        rewritten.g = quad.g;
        for (const auto& [mask, u] : quad.poly) {
            uint32_t nu = 0;
            for (int r = 0; r < n; ++r) {
                int bits = 0;
                for (int c = 0; c < n; ++c)
                    if (gti.get(r, c) && ((mask >> c) & 1u)) bits ^= 1;
                if (bits) nu |= uint32_t{1} << r;
            }
            rewritten.add_term(nu, u);
        }
        quad.poly = reduce_to_quadratic(rewritten).poly;
    }
    Circuit p_stage(n), cz_stage(n);
    detail::emit_phase_stages(quad, p_stage, cz_stage);
    Circuit c_stage = cnot_circuit_for_linear(quad.g);

    LayeredCircuit out(n);
    switch (order) {
        case PhaseOrder::P_CZ_C:
            out.add_stage(StageTag::P, p_stage);
            out.add_stage(StageTag::CZ, cz_stage);
            out.add_stage(StageTag::C, c_stage);
            break;
        case PhaseOrder::C_P_CZ:
            out.add_stage(StageTag::C, c_stage);
            out.add_stage(StageTag::P, p_stage);
            out.add_stage(StageTag::CZ, cz_stage);
            break;
        case PhaseOrder::CZ_P_C:
            out.add_stage(StageTag::CZ, cz_stage);
            out.add_stage(StageTag::P, p_stage);
            out.add_stage(StageTag::C, c_stage);
            break;
        case PhaseOrder::C_CZ_P:
            out.add_stage(StageTag::C, c_stage);
            out.add_stage(StageTag::CZ, cz_stage);
            out.add_stage(StageTag::P, p_stage);
            break;
    }
    return out;
}

inline LayeredCircuit fold(const Circuit& c, PhaseOrder order = PhaseOrder::P_CZ_C) {
    return synthesize_pczc(extract_descr(c), order);
}

// Exact unitary equivalence of two Hadamard-free circuits: identical linear
// part and identical phase polynomial on every input.
inline bool phase_exact_equiv(const Circuit& a, const Circuit& b) {
    PhaseDescr da = reduce_to_quadratic(extract_descr(a));
    PhaseDescr db = reduce_to_quadratic(extract_descr(b));
    return da.g == db.g && da.poly == db.poly;
}

}  // namespace stabsynth
