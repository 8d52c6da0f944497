#pragma once
// Linear-nearest-neighbor scheduling: the qubit-reversal CNOT network with
// interval-labeled wire traces, phase insertion along it ("CZ-hat" = -CZ-
// stage composed with the full reversal, two-qubit depth 2n+2), a CNOT-stage
// synthesizer with two-qubit depth <= 5n, and the full pipeline flattening a
// stabilizer tableau to an LNN-legal circuit of two-qubit depth <= 14n-4.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "bruhat.hpp"

namespace stabsynth {

// The linear function x_j ^ x_{j+1} ^ ... ^ x_k on 1-based wire indices.
struct IntervalFunc {
    int j = 1;
    int k = 1;

    bool operator==(const IntervalFunc& o) const { return j == o.j && k == o.k; }
    bool operator<(const IntervalFunc& o) const { return j != o.j ? j < o.j : k < o.k; }
};

// Alternating depth-2 CNOT blocks whose composition is the full qubit
// reversal.  wire_trace records, per recorded block boundary (the initial
// state and each completed depth-4 pair except the final one), the interval
// held by each wire.
struct ReversalNetwork {
    int n = 0;
    std::vector<Circuit> blocks;                        // n+1 blocks, first kind then second, alternating
    std::vector<std::vector<IntervalFunc>> wire_trace;  // wire_trace[t][wire]

    // Structural two-qubit depth: each block occupies two layers.
    int depth() const { return n < 2 ? 0 : 2 * n + 2; }

    Circuit full() const {
        Circuit out(n);
        for (const Circuit& b : blocks) out.append(b);
        return out;
    }
};

namespace detail {

// Gate lists for the two block kinds, 0-based; distinct odd/even variants.
inline Circuit reversal_block(int n, bool second_kind) {
    Circuit c(n);
    auto add = [&](int ctrl1, int tgt1) { c.push(Gate::cnot(ctrl1 - 1, tgt1 - 1)); };
    if (!second_kind) {
        if (n % 2 == 1) {
            for (int a = 1; a + 1 <= n - 1; a += 2) add(a, a + 1);
            for (int a = 3; a <= n; a += 2) add(a, a - 1);
        } else {
            for (int a = 1; a + 1 <= n; a += 2) add(a, a + 1);
            for (int a = 3; a <= n - 1; a += 2) add(a, a - 1);
        }
    } else {
        if (n % 2 == 1) {
            for (int a = 2; a <= n - 1; a += 2) add(a, a - 1);
            for (int a = 2; a <= n - 1; a += 2) add(a, a + 1);
        } else {
            for (int a = 2; a <= n; a += 2) add(a, a - 1);
            for (int a = 2; a <= n - 2; a += 2) add(a, a + 1);
        }
    }
    return c;
}

inline bool mask_interval(uint64_t m, IntervalFunc& iv) {
    if (!m) return false;
    int lo = std::countr_zero(m);
    int hi = 63 - std::countl_zero(m);
    uint64_t full = (hi == 63 ? ~uint64_t{0} : (uint64_t{1} << (hi + 1)) - 1) ^ ((uint64_t{1} << lo) - 1);
    if (m != full) return false;
    iv = {lo + 1, hi + 1};
    return true;
}

}  // namespace detail

inline ReversalNetwork reversal_network(int n) {
    if (n < 1 || n > 64) throw unsupported_size("reversal_network: n out of range");
    ReversalNetwork rn;
    rn.n = n;
    for (int b = 0; b <= n; ++b) rn.blocks.push_back(detail::reversal_block(n, b % 2 == 1));

    std::vector<uint64_t> wire(n);
    for (int i = 0; i < n; ++i) wire[i] = uint64_t{1} << i;
    auto record = [&]() {
        std::vector<IntervalFunc> row(n);
        for (int i = 0; i < n; ++i)
            require(detail::mask_interval(wire[i], row[i]), "reversal_network: non-interval wire at recorded boundary");
        rn.wire_trace.push_back(std::move(row));
    };
    record();
    const int nblocks = static_cast<int>(rn.blocks.size());
    for (int b = 0; b < nblocks; ++b) {
        for (const Gate& g : rn.blocks[b].gates) wire[g.q1] ^= wire[g.q0];
        if (b % 2 == 1 && b != nblocks - 1) record();
    }
    for (int i = 0; i < n; ++i)
        require(wire[i] == uint64_t{1} << (n - 1 - i), "reversal_network: composed map is not the reversal");
    return rn;
}

enum class CzhatCut { Full, DropFirst, DropLast };

// A CZ-hat realization with one depth-4 section peeled off for merging into a
// neighboring CNOT stage.  For DropFirst the peeled section precedes circuit;
// for DropLast it follows it.  merge is the tableau A-block (linear part) of
// the peeled CNOT section; identity for Full.
struct CzhatPiece {
    Circuit circuit;
    BinMatrix merge;
};

inline CzhatPiece czhat_synthesize_cut(int n, const PhaseDescr& quad, CzhatCut cut);

// Phase polynomial (quadratic, identity linear part) followed by the full
// qubit reversal, LNN-legal, two-qubit depth <= 2n+2.
inline Circuit czhat_synthesize(int n, const PhaseDescr& quad) {
    return czhat_synthesize_cut(n, quad, CzhatCut::Full).circuit;
}

inline CzhatPiece czhat_synthesize_cut(int n, const PhaseDescr& quad, CzhatCut cut) {
    if (n < 1 || n > kMaxPhasePolyQubits) throw unsupported_size("czhat_synthesize: n out of range");
    if (quad.n != n) throw dimension_mismatch("czhat_synthesize: descriptor size mismatch");
    if (!quad.is_quadratic()) throw not_quadratic("czhat_synthesize: cubic or higher term in descriptor");
    if (!quad.g.is_identity()) throw non_identity_linear("czhat_synthesize: descriptor has non-identity linear part");

    if (cut == CzhatCut::DropLast) {
        // Realize as the inverse of a DropFirst piece for the conjugated
        // polynomial: inverting "section ; rest" gives "rest^-1 ; section^-1",
        // which is exactly the trailing-section shape.  If U = R.D_q is the
        // phases-then-reversal unitary, U^-1 = R.D_{-(q о R)}, so requesting
        // -(quad о R) up front makes the inverse implement quad then R.
        PhaseDescr conj(n);
        for (const auto& [mask, u] : quad.poly) {
            uint32_t rev = 0;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1u) rev |= uint32_t{1} << (n - 1 - i);
            conj.add_term(rev, -static_cast<int>(u));
        }
        ReversalNetwork rn = reversal_network(n);
        Circuit section(n);
        for (size_t b = 0; b < rn.blocks.size() && b < 2; ++b) section.append(rn.blocks[b]);
        CzhatPiece first = czhat_synthesize_cut(n, conj, CzhatCut::DropFirst);
        CzhatPiece out;
        out.circuit = invert_circuit(first.circuit);
        out.merge = circuit_to_symplectic(invert_circuit(section)).block_a();
        return out;
    }

    ReversalNetwork rn = reversal_network(n);
    const int nblocks = static_cast<int>(rn.blocks.size());
    const int keep_from = (cut == CzhatCut::DropFirst && nblocks >= 2) ? 2 : 0;

    // Change of basis to prefix sums y_t = x_0 ^ ... ^ x_t: every quadratic
    // term over y is a contiguous-interval function of x, which is exactly
    // what the network's wires carry.  Weight-4 y images of non-adjacent
    // x-pairs are broken back down to quadratic terms first.
    PhaseDescr ydescr(n);
    for (const auto& [mask, u] : quad.poly) {
        uint32_t ymask = 0;
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1u) {
                ymask ^= uint32_t{1} << i;
                if (i > 0) ymask ^= uint32_t{1} << (i - 1);
            }
        ydescr.add_term(ymask, u);
    }
    ydescr = reduce_to_quadratic(ydescr);
    std::map<uint32_t, uint8_t> pending;
    for (const auto& [ymask, u] : ydescr.poly) {
        int lo = std::countr_zero(ymask);
        int hi = 31 - std::countl_zero(ymask);
        uint32_t interval = lo == hi ? (uint32_t{1} << (lo + 1)) - 1
                                     : ((uint32_t{1} << (hi + 1)) - 1) ^ ((uint32_t{1} << (lo + 1)) - 1);
        auto [it, fresh] = pending.emplace(interval, u);
        if (!fresh) it->second = static_cast<uint8_t>((it->second + u) % 4);
        if (!it->second) pending.erase(it);
    }
    Circuit out(n);
    std::vector<uint32_t> wire(n);
    for (int i = 0; i < n; ++i) wire[i] = uint32_t{1} << i;
    auto place = [&]() {
        for (int i = 0; i < n; ++i) {
            auto it = pending.find(wire[i]);
            if (it != pending.end()) {
                out.push(Gate::p(i, it->second));
                pending.erase(it);
            }
        }
    };
    for (int b = 0; b <= nblocks; ++b) {
        if (b >= keep_from) place();
        if (b < nblocks) {
            for (const Gate& g : rn.blocks[b].gates) wire[g.q1] ^= wire[g.q0];
            if (b >= keep_from) out.append(rn.blocks[b]);
        }
    }
    require(pending.empty(), "czhat_synthesize: phase term never surfaced on a wire");
    require(is_lnn_legal(out), "czhat_synthesize: non-adjacent gate emitted");
    require(two_qubit_depth(out) <= 2 * n + 2, "czhat_synthesize: depth budget exceeded");

    CzhatPiece piece;
    piece.circuit = std::move(out);
    if (cut == CzhatCut::DropFirst && keep_from == 2) {
        Circuit section(n);
        section.append(rn.blocks[0]);
        section.append(rn.blocks[1]);
        piece.merge = circuit_to_symplectic(section).block_a();
    } else {
        piece.merge = BinMatrix::identity(n);
    }
    return piece;
}

namespace detail {

// ---- LNN CNOT-stage synthesis ----
//
// Reduces an invertible matrix (rows as bit masks) to the identity with
// nearest-neighbor row operations, recording them; the circuit computing the
// matrix is the reversed operation list.  Two phases:
//   A: odd-even transposition sort on schedule keys derived from the
//      top-down reduced row leads; each crossing spends two CNOTs (a fused
//      eliminate-and-swap) and the orientation is chosen so the reduced-lead
//      profile of the current arrangement stays pinned to its target.  This
//      lands in a "raw north-east" form (row at position x has reduced lead
//      n-1-x) within depth 2n.
//   B: a reversal-shaped odd-even pass; each meeting of two rows either
//      eliminates the higher label fused with the swap (two CNOTs) or swaps
//      outright (three CNOTs), finishing at the identity within depth 3n.

struct RowOp {
    int c;  // control wire
    int t;  // target wire
};

inline std::vector<int> reduced_leads_top_down(const std::vector<uint64_t>& m) {
    const int n = static_cast<int>(m.size());
    std::vector<int> leads(n);
    std::vector<uint64_t> seen;
    for (int p = 0; p < n; ++p) {
        uint64_t v = m[p];
        for (bool changed = true; changed;) {
            changed = false;
            for (uint64_t w : seen)
                if (v && std::countr_zero(w) == std::countr_zero(v)) {
                    v ^= w;
                    changed = true;
                }
        }
        require(v != 0, "c_stage_lnn: dependent row during lead reduction");
        leads[p] = std::countr_zero(v);
        seen.push_back(v);
    }
    return leads;
}

inline bool lnn_reduce_ops(const std::vector<uint64_t>& m0, std::vector<RowOp>& ops) {
    const int n = static_cast<int>(m0.size());
    std::vector<uint64_t> m = m0;

    // ---- phase A ----
    std::vector<int> tgt = reduced_leads_top_down(m);
    std::vector<int> kap(n);
    for (int p = 0; p < n; ++p) kap[p] = n - 1 - tgt[p];
    std::vector<int> item(n);
    std::iota(item.begin(), item.end(), 0);

    auto profile_ok = [&](const std::vector<uint64_t>& mm, const std::vector<int>& it) {
        std::vector<int> td = reduced_leads_top_down(mm);
        for (int x = 0; x < n; ++x)
            if (td[x] != tgt[it[x]]) return false;
        return true;
    };

    bool done = false;
    for (int start_parity = 0; start_parity < 2 && !done; ++start_parity) {
        std::vector<uint64_t> m2 = m;
        std::vector<int> it2 = item;
        std::vector<RowOp> trial;
        int par = start_parity;
        bool fail = false;
        for (int round = 0; round < n && !fail; ++round) {
            for (int x = par; x + 1 < n; x += 2) {
                if (kap[it2[x]] <= kap[it2[x + 1]]) continue;
                std::vector<int> itn = it2;
                std::swap(itn[x], itn[x + 1]);
                std::vector<uint64_t> ma = m2, mb = m2;
                ma[x] ^= ma[x + 1];
                std::swap(ma[x], ma[x + 1]);  // (u,d) -> (d, u^d)
                mb[x + 1] ^= mb[x];
                std::swap(mb[x], mb[x + 1]);  // (u,d) -> (u^d, u)
                bool a_ok = profile_ok(ma, itn);
                bool b_ok = a_ok ? false : profile_ok(mb, itn);
                if (a_ok) {
                    trial.push_back({x, x + 1});
                    trial.push_back({x + 1, x});
                    m2 = std::move(ma);
                } else if (b_ok) {
                    trial.push_back({x + 1, x});
                    trial.push_back({x, x + 1});
                    m2 = std::move(mb);
                } else {
                    fail = true;
                    break;
                }
                it2 = std::move(itn);
            }
            par ^= 1;
        }
        if (fail) continue;
        bool settled = true;
        for (int x = 0; x < n; ++x)
            if (kap[it2[x]] != x || std::countr_zero(m2[x]) != n - 1 - x) settled = false;
        if (settled) {
            m = std::move(m2);
            ops.insert(ops.end(), trial.begin(), trial.end());
            done = true;
        }
    }
    if (!done) return false;

    // ---- phase B ----
    std::vector<int> lab0(n);
    for (int p = 0; p < n; ++p) lab0[p] = n - 1 - p;
    int good_parity = -1;
    for (int start_parity = 0; start_parity < 2 && good_parity < 0; ++start_parity) {
        std::vector<uint64_t> m2 = m;
        std::vector<int> lab = lab0;
        int par = start_parity;
        for (int round = 0; round < n; ++round) {
            for (int x = par; x + 1 < n; x += 2) {
                int ps = lab[x] < lab[x + 1] ? x : x + 1;
                int pbig = lab[x] < lab[x + 1] ? x + 1 : x;
                int jb = std::max(lab[x], lab[x + 1]);
                if ((m2[ps] >> jb) & 1u) m2[ps] ^= m2[pbig];
                std::swap(m2[x], m2[x + 1]);
                std::swap(lab[x], lab[x + 1]);
            }
            par ^= 1;
        }
        bool fine = true;
        for (int p = 0; p < n; ++p)
            if (lab[p] != p || m2[p] != uint64_t{1} << p) fine = false;
        if (fine) good_parity = start_parity;
    }
    if (good_parity < 0) return false;

    {
        std::vector<uint64_t> m2 = m;
        std::vector<int> lab = lab0;
        int par = good_parity;
        for (int round = 0; round < n; ++round) {
            for (int x = par; x + 1 < n; x += 2) {
                int ps = lab[x] < lab[x + 1] ? x : x + 1;
                int pbig = lab[x] < lab[x + 1] ? x + 1 : x;
                int jb = std::max(lab[x], lab[x + 1]);
                if ((m2[ps] >> jb) & 1u) {
                    // Fused eliminate-and-swap: two CNOTs.
                    if (ps == x) {
                        ops.push_back({x, x + 1});
                        ops.push_back({x + 1, x});
                    } else {
                        ops.push_back({x + 1, x});
                        ops.push_back({x, x + 1});
                    }
                    m2[ps] ^= m2[pbig];
                } else {
                    // Plain swap: three CNOTs.
                    ops.push_back({x, x + 1});
                    ops.push_back({x + 1, x});
                    ops.push_back({x, x + 1});
                }
                std::swap(m2[x], m2[x + 1]);
                std::swap(lab[x], lab[x + 1]);
            }
            par ^= 1;
        }
        for (int p = 0; p < n; ++p)
            if (lab[p] != p || m2[p] != uint64_t{1} << p) return false;
    }
    return true;
}

}  // namespace detail

// LNN-legal CNOT-only circuit whose tableau linear part equals a; two-qubit
// depth <= 5n.
inline Circuit c_stage_lnn(const BinMatrix& a) {
    const int n = a.rows();
    if (a.cols() != n) throw dimension_mismatch("c_stage_lnn: matrix not square");
    if (n < 1 || n > 64) throw unsupported_size("c_stage_lnn: n out of range");
    if (a.rank() != n) throw singular_matrix("c_stage_lnn: matrix not invertible");

    if (a.is_identity()) return Circuit(n);
    if (a == reversal_matrix(n)) return reversal_network(n).full();

    // The row-operation machinery reduces the wire-function matrix, which is
    // the transpose of the tableau linear part.
    std::vector<uint64_t> rows(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a.get(j, i)) rows[i] |= uint64_t{1} << j;

    std::vector<detail::RowOp> ops;
    require(detail::lnn_reduce_ops(rows, ops), "c_stage_lnn: no admissible crossing orientation");

    Circuit out(n);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) out.push(Gate::cnot(it->c, it->t));
    require(is_lnn_legal(out), "c_stage_lnn: non-adjacent gate emitted");
    require(two_qubit_depth(out) <= 5 * n, "c_stage_lnn: depth budget exceeded");
    require(circuit_to_symplectic(out).block_a() == a, "c_stage_lnn: recomposition mismatch");
    return out;
}

// Flattens a stabilizer tableau to an LNN-legal circuit of two-qubit depth
// <= 14n-4: the 7-stage layered form's two -CZ- stages are traded for
// reversal-composed realizations whose reversals cancel, and one depth-4
// section of each is merged into the neighboring CNOT stage before LNN
// synthesis.
inline Circuit pipeline_lnn(const SymplecticMat& m) {
    const int n = m.n;
    if (!is_symplectic(m)) throw not_symplectic("pipeline_lnn: input not symplectic");
    if (n > kMaxPhasePolyQubits) throw unsupported_size("pipeline_lnn: more than 24 qubits");

    LayeredCircuit layered = seven_stage(m);
    require(layered.stages.size() == 7, "pipeline_lnn: unexpected stage count");
    const Circuit& c1 = layered.stages[0].second;
    const Circuit& cz1 = layered.stages[1].second;
    const Circuit& p1 = layered.stages[2].second;
    const Circuit& hmid = layered.stages[3].second;
    const Circuit& p2 = layered.stages[4].second;
    const Circuit& cz2 = layered.stages[5].second;
    const Circuit& c2 = layered.stages[6].second;

    BinMatrix a1 = circuit_to_symplectic(c1).block_a();
    BinMatrix a2 = circuit_to_symplectic(c2).block_a();
    PhaseDescr quad1 = extract_descr(cz1);
    PhaseDescr quad2 = extract_descr(cz2);

    Circuit out(n);
    if (quad1.poly.empty() && quad2.poly.empty()) {
        // No -CZ- content: skip both reversal networks entirely.
        out.append(c_stage_lnn(a1));
        out.append(p1);
        out.append(hmid);
        out.append(p2);
        out.append(c_stage_lnn(a2));
    } else {
        CzhatPiece piece1 = czhat_synthesize_cut(n, quad1, CzhatCut::DropFirst);
        out.append(c_stage_lnn(a1 * piece1.merge));
        out.append(piece1.circuit);
        // The first reversal is now pending: logical qubit q sits on wire
        // n-1-q until the second reversal cancels it.
        for (const Gate& g : p1.gates) out.push(Gate::p(n - 1 - g.q0, g.power));
        for (const Gate& g : hmid.gates) out.push(Gate::h(n - 1 - g.q0));
        for (const Gate& g : p2.gates) out.push(Gate::p(n - 1 - g.q0, g.power));
        PhaseDescr quad2r(n);
        for (const auto& [mask, u] : quad2.poly) {
            uint32_t rev = 0;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1u) rev |= uint32_t{1} << (n - 1 - i);
            quad2r.add_term(rev, u);
        }
        CzhatPiece piece2 = czhat_synthesize_cut(n, quad2r, CzhatCut::DropLast);
        out.append(piece2.circuit);
        out.append(c_stage_lnn(piece2.merge * a2));
    }

    require(is_lnn_legal(out), "pipeline_lnn: non-adjacent gate emitted");
    require(two_qubit_depth(out) <= std::max(0, 14 * n - 4), "pipeline_lnn: depth budget exceeded");
    require(circuit_to_symplectic(out) == m, "pipeline_lnn: recomposition mismatch");
    return out;
}

}  // namespace stabsynth
