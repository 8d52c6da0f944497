#pragma once

// 2n x 2n binary symplectic tableaux in block form [[A,B],[C,D]] (no sign
// column).  Gates act by right multiplication as column operations; the CZ
// action is derived from CNOT and H rather than hand-coded.

#include <cstdint>
#include <set>
#include <vector>

#include "stabsynth/gates.hpp"
#include "stabsynth/gf2.hpp"

namespace stabsynth {

struct SymplecticMat {
    int n = 0;
    BinMatrix m;  // 2n x 2n

    SymplecticMat() = default;
    explicit SymplecticMat(int n_) : n(n_), m(BinMatrix::identity(2 * n_)) {}
    SymplecticMat(int n_, BinMatrix mat) : n(n_), m(std::move(mat)) {
        if (m.rows() != 2 * n || m.cols() != 2 * n)
            throw dimension_mismatch("SymplecticMat: matrix must be 2n x 2n");
    }

    static SymplecticMat identity(int n) { return SymplecticMat(n); }

    bool operator==(const SymplecticMat& o) const { return n == o.n && m == o.m; }
    bool operator!=(const SymplecticMat& o) const { return !(*this == o); }

    SymplecticMat operator*(const SymplecticMat& o) const { return {n, m * o.m}; }

    BinMatrix block_a() const { return block(0, 0); }
    BinMatrix block_b() const { return block(0, 1); }
    BinMatrix block_c() const { return block(1, 0); }
    BinMatrix block_d() const { return block(1, 1); }

    BinMatrix block(int br, int bc) const {
        BinMatrix out(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (m.get(br * n + r, bc * n + c)) out.set(r, c, true);
        return out;
    }

    // [[D^t, B^t],[C^t, A^t]]
    SymplecticMat inverse() const {
        BinMatrix out(2 * n, 2 * n);
        for (int r = 0; r < 2 * n; ++r)
            for (int c = 0; c < 2 * n; ++c)
                if (m.get(r, c)) out.set((c + n) % (2 * n), (r + n) % (2 * n), true);
        return {n, std::move(out)};
    }
};

inline BinMatrix symplectic_form(int n) {
    BinMatrix j(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        j.set(i, n + i, true);
        j.set(n + i, i, true);
    }
    return j;
}

inline bool is_symplectic(const SymplecticMat& s) {
    BinMatrix j = symplectic_form(s.n);
    return s.m.transpose() * j * s.m == j;
}

// Right multiplication by the tableau of g, expressed as column operations:
//   H(k):        swap columns k and n+k
//   P(k):        column n+k += column k
//   CNOT(c,t):   column t += column c; column n+c += column n+t
//   CZ(a,b):     H(b) CNOT(a,b) H(b)
//   SWAP(a,b):   three CNOTs
inline void apply_gate_right(SymplecticMat& s, const Gate& g) {
    const int n = s.n;
    switch (g.kind) {
        case GateKind::H:
            s.m.swap_cols(g.q0, n + g.q0);
            break;
        case GateKind::P:
            if (g.power % 2) s.m.col_xor(n + g.q0, g.q0);
            break;
        case GateKind::CNOT:
            s.m.col_xor(g.q1, g.q0);
            s.m.col_xor(n + g.q0, n + g.q1);
            break;
        case GateKind::CZ:
            apply_gate_right(s, Gate::h(g.q1));
            apply_gate_right(s, Gate::cnot(g.q0, g.q1));
            apply_gate_right(s, Gate::h(g.q1));
            break;
        case GateKind::SWAP:
            for (const Gate& e : expand_swap(g)) apply_gate_right(s, e);
            break;
    }
}

inline SymplecticMat gate_tableau(int n, const Gate& g) {
    SymplecticMat s(n);
    apply_gate_right(s, g);
    return s;
}

inline SymplecticMat circuit_to_symplectic(const Circuit& c) {
    SymplecticMat s(c.n);
    for (const Gate& g : c.gates) apply_gate_right(s, g);
    return s;
}

// ---- tableau builders for structured layers ----

// C layer diag(a, (a^{-1})^t) for invertible a.
inline SymplecticMat cnot_layer_tableau(const BinMatrix& a) {
    const int n = a.rows();
    BinMatrix ainvt = a.inverse().transpose();
    BinMatrix m(2 * n, 2 * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (a.get(r, c)) m.set(r, c, true);
            if (ainvt.get(r, c)) m.set(n + r, n + c, true);
        }
    return {n, std::move(m)};
}

// Phase-type layer [[I, b],[0, I]] for symmetric b.
inline SymplecticMat phase_layer_tableau(const BinMatrix& b) {
    const int n = b.rows();
    if (!b.is_symmetric()) throw not_symmetric("phase_layer_tableau: b not symmetric");
    BinMatrix m = BinMatrix::identity(2 * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (b.get(r, c)) m.set(r, n + c, true);
    return {n, std::move(m)};
}

// Hadamards on a qubit subset.
inline SymplecticMat hadamard_layer_tableau(int n, const std::set<int>& qubits) {
    SymplecticMat s(n);
    for (int q : qubits) apply_gate_right(s, Gate::h(q));
    return s;
}

// Qubit relabeling diag(p, p).
inline SymplecticMat perm_layer_tableau(const Perm& p) {
    const int n = static_cast<int>(p.size());
    BinMatrix pm = perm_matrix(p);
    BinMatrix m(2 * n, 2 * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (pm.get(r, c)) {
                m.set(r, c, true);
                m.set(n + r, n + c, true);
            }
    return {n, std::move(m)};
}

// ---- subgroup classification ----

enum class SubgroupTag { Cn, CDown, B0, Borel };

// C_n:   B = C = 0 and D = (A^{-1})^t
// C_dn:  additionally A lower unitriangular in the fixed basis
// B0:    A = D = I, C = 0, B symmetric
// Borel: C = 0, D = (A^{-1})^t, A lower triangular, A*B^t symmetric
inline std::set<SubgroupTag> classify_subgroup(const SymplecticMat& s) {
    std::set<SubgroupTag> tags;
    if (!is_symplectic(s)) throw not_symplectic("classify_subgroup: input not symplectic");
    BinMatrix a = s.block_a(), b = s.block_b(), c = s.block_c(), d = s.block_d();
    if (!c.is_zero()) return tags;
    bool a_inv = a.rank() == s.n;
    bool d_matches = a_inv && d == a.inverse().transpose();
    if (b.is_zero() && d_matches) {
        tags.insert(SubgroupTag::Cn);
        if (a.is_lower_unitriangular()) tags.insert(SubgroupTag::CDown);
    }
    if (a.is_identity() && d.is_identity() && b.is_symmetric()) tags.insert(SubgroupTag::B0);
    if (d_matches && a.is_lower_unitriangular() && (a * b.transpose()).is_symmetric())
        tags.insert(SubgroupTag::Borel);
    return tags;
}

}  // namespace stabsynth
