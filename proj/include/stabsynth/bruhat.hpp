#pragma once

// Bruhat-style factorization of symplectic tableaux and the layered 9-stage
// (-C-P-C-P-H-P-C-P-C-) and 7-stage (-C-CZ-P-H-P-CZ-C-) normal forms.
//
// The lower-half reduction exists in two mirrored flavors.  The public
// symplectic_lpu uses a lower-triangular row reducer and upper-triangular
// column factor; bruhat_decompose uses the mirrored flavor internally so that
// both Borel factors come out lower-triangular in the fixed basis.

#include <set>
#include <vector>

#include "stabsynth/gf2.hpp"
#include "stabsynth/phase_poly.hpp"
#include "stabsynth/symplectic.hpp"

namespace stabsynth {

struct SymplecticHalfLpu {
    BinMatrix l;  // row reducer inverse: lower triangular (upper in mirrored flavor)
    Perm sigma;
    int k = 0;
    BinMatrix d1;  // k x k, symmetric for symplectic inputs
    BinMatrix d2;  // k x (n-k)
    Perm tau;
    BinMatrix u;  // first-half column factor: upper triangular (lower in mirrored flavor)
};

namespace detail {

inline BinMatrix canonical_lower_half(int n, int k, const BinMatrix& d1, const BinMatrix& d2) {
    BinMatrix m(n, 2 * n);
    for (int i = 0; i < k; ++i) {
        m.set(i, i, true);
        for (int j = 0; j < k; ++j)
            if (d1.get(i, j)) m.set(i, n + j, true);
        for (int j = 0; j < n - k; ++j)
            if (d2.get(i, j)) m.set(i, n + k + j, true);
    }
    for (int i = k; i < n; ++i) m.set(i, n + i, true);
    return m;
}

// half = l * sigma * [[I_k,0,D1,D2],[0,0,0,I_{n-k}]] * diag(tau,tau) * diag(u, (u^{-1})^t)
inline SymplecticHalfLpu symplectic_half_reduce(const BinMatrix& half, bool mirrored) {
    const int n = half.rows();
    if (half.cols() != 2 * n) throw dimension_mismatch("symplectic_lpu: half must be n x 2n");
    std::vector<int> all_first(n), all_second(n);
    for (int i = 0; i < n; ++i) {
        all_first[i] = i;
        all_second[i] = n + i;
    }
    std::vector<int> rows_all(n);
    for (int i = 0; i < n; ++i) rows_all[i] = i;
    BinMatrix c = half.submatrix(rows_all, all_first);
    BinMatrix d = half.submatrix(rows_all, all_second);
    if (!(c * d.transpose()).is_symmetric())
        throw not_symplectic_half("symplectic_lpu: C*D^t not symmetric");
    if (half.rank() != n) throw not_symplectic_half("symplectic_lpu: half not full rank");

    // Step 1: pattern-reduce the left block.
    BinMatrix e_inv, v;  // row reducer E (applied), first-half column op V (applied)
    PermPattern p1;
    if (!mirrored) {
        LpuResult r = lpu_decompose(c);
        e_inv = r.l;
        v = r.u.inverse();
        p1 = r.p;
    } else {
        UplResult r = upl_decompose(c);
        e_inv = r.u;
        v = r.l.inverse();
        p1 = r.p;
    }
    BinMatrix e = e_inv.inverse();
    BinMatrix c1 = e * c * v;
    require(c1 == p1.to_matrix(), "symplectic_lpu: left block reduction failed");
    BinMatrix d1m = e * d * v.inverse().transpose();

    std::vector<int> piv_rows, r_rows, piv_cols;
    std::vector<bool> col_hit(n, false);
    for (int r = 0; r < n; ++r)
        if (p1.col_of_row[r] >= 0) {
            piv_rows.push_back(r);
            piv_cols.push_back(p1.col_of_row[r]);
            col_hit[p1.col_of_row[r]] = true;
        } else {
            r_rows.push_back(r);
        }
    std::vector<int> cc_cols;
    for (int col = 0; col < n; ++col)
        if (!col_hit[col]) cc_cols.push_back(col);
    const int k = static_cast<int>(piv_rows.size());

    // Rows without a left-block pivot vanish on pivot columns of the right
    // block (a consequence of C*D^t symmetry).
    for (int rr : r_rows)
        for (int pc : piv_cols)
            require(!d1m.get(rr, pc), "symplectic_lpu: unexpected entry in pivot column");

    // Step 2: pattern-reduce the residual right block on R x Cc.
    BinMatrix e2 = BinMatrix::identity(n);
    BinMatrix x = BinMatrix::identity(n);
    PermPattern psub(n - k, n - k);
    if (k < n) {
        BinMatrix sub = d1m.submatrix(r_rows, cc_cols);
        BinMatrix sub_row_red, sub_col_red;
        if (!mirrored) {
            LplResult r = lpl_decompose(sub);
            sub_row_red = r.l1.inverse();
            sub_col_red = r.l2.inverse();
            psub = r.p;
        } else {
            UpuResult r = upu_decompose(sub);
            sub_row_red = r.u1.inverse();
            sub_col_red = r.u2.inverse();
            psub = r.p;
        }
        for (int i = 0; i < n - k; ++i)
            for (int j = 0; j < n - k; ++j) {
                if (i != j && sub_row_red.get(i, j)) e2.set(r_rows[i], r_rows[j], true);
                if (i != j && sub_col_red.get(i, j)) x.set(cc_cols[i], cc_cols[j], true);
            }
        for (int i = 0; i < n - k; ++i)
            require(psub.col_of_row[i] >= 0, "symplectic_lpu: residual block rank deficient");
    }
    BinMatrix d2m = e2 * d1m * x;
    BinMatrix e_total = e2 * e;
    BinMatrix f = v * x.transpose().inverse();  // accumulated first-half column factor

    // Assemble the permutations: position i < k maps to pivot pair
    // (piv_rows[i], piv_cols[i]); position k+j maps to (r_rows[j], image of j
    // under the residual pattern).
    Perm sigma(n), tau(n);
    for (int i = 0; i < k; ++i) {
        sigma[i] = piv_rows[i];
        tau[piv_cols[i]] = i;
    }
    for (int j = 0; j < n - k; ++j) {
        sigma[k + j] = r_rows[j];
        tau[cc_cols[psub.col_of_row[j]]] = k + j;
    }

    SymplecticHalfLpu out;
    out.l = e_total.inverse();
    out.sigma = sigma;
    out.k = k;
    out.tau = tau;
    out.u = f.inverse();
    out.d1 = BinMatrix(k, k);
    out.d2 = BinMatrix(k, n - k);
    Perm tau_inv = perm_inverse(tau);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j)
            if (d2m.get(piv_rows[i], tau_inv[j])) out.d1.set(i, j, true);
        for (int j = 0; j < n - k; ++j)
            if (d2m.get(piv_rows[i], tau_inv[k + j])) out.d2.set(i, j, true);
    }

    // Recomposition check.
    BinMatrix kform = canonical_lower_half(n, k, out.d1, out.d2);
    BinMatrix ptau = perm_matrix(tau);
    BinMatrix right(2 * n, 2 * n);
    BinMatrix uinvt = out.u.inverse().transpose();
    for (int r = 0; r < n; ++r)
        for (int cidx = 0; cidx < n; ++cidx) {
            if (out.u.get(r, cidx)) right.set(r, cidx, true);
            if (uinvt.get(r, cidx)) right.set(n + r, n + cidx, true);
        }
    BinMatrix taut(2 * n, 2 * n);
    for (int r = 0; r < n; ++r)
        for (int cidx = 0; cidx < n; ++cidx)
            if (ptau.get(r, cidx)) {
                taut.set(r, cidx, true);
                taut.set(n + r, n + cidx, true);
            }
    require(out.l * perm_matrix(sigma) * kform * taut * right == half,
            "symplectic_lpu: recomposition mismatch");
    return out;
}

}  // namespace detail

// Lemma-style reduction of a symplectic lower half with L lower and U upper
// triangular.
inline SymplecticHalfLpu symplectic_lpu(const BinMatrix& half) {
    return detail::symplectic_half_reduce(half, false);
}

struct BruhatFactors {
    SymplecticMat w1;  // Borel
    int k = 0;
    Perm sigma;
    Perm tau;
    SymplecticMat w2;  // Borel

    Perm pi() const { return perm_compose(sigma, tau); }
};

// m = w1 * diag(sigma,sigma) * H_k * diag(tau,tau) * w2 with w1, w2 Borel and
// H_k the Hadamard layer on the first k qubits.  Equivalently
// m = w1 * H_S * pi * w2 with S = sigma({0..k-1}) and pi = sigma о tau.
inline BruhatFactors bruhat_decompose(const SymplecticMat& m) {
    const int n = m.n;
    if (!is_symplectic(m)) throw not_symplectic("bruhat_decompose: input not symplectic");
    std::vector<int> lower_rows(n), all_cols(2 * n);
    for (int i = 0; i < n; ++i) lower_rows[i] = n + i;
    for (int i = 0; i < 2 * n; ++i) all_cols[i] = i;
    BinMatrix half = m.m.submatrix(lower_rows, all_cols);
    SymplecticHalfLpu red = detail::symplectic_half_reduce(half, true);
    const int k = red.k;

    SymplecticMat cl = cnot_layer_tableau(red.l.transpose());          // lower-half rows get l^{-1}
    SymplecticMat cr = cnot_layer_tableau(red.u.inverse());            // first-half cols get u^{-1}
    SymplecticMat psig = perm_layer_tableau(red.sigma);
    SymplecticMat ptau = perm_layer_tableau(red.tau);
    SymplecticMat m1 = psig.inverse() * cl * m * cr * ptau.inverse();
    require(is_symplectic(m1), "bruhat_decompose: m1 not symplectic");
    {
        std::vector<int> lr(n), ac(2 * n);
        for (int i = 0; i < n; ++i) lr[i] = n + i;
        for (int i = 0; i < 2 * n; ++i) ac[i] = i;
        require(m1.m.submatrix(lr, ac) == detail::canonical_lower_half(n, k, red.d1, red.d2),
                "bruhat_decompose: lower half not in canonical form");
    }

    BinMatrix a = m1.block_a();
    BinMatrix a1(k, k), a3(n - k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) a1.set(r, c, a.get(r, c));
    for (int r = 0; r < n - k; ++r)
        for (int c = 0; c < k; ++c) a3.set(r, c, a.get(k + r, c));
    require(a1.is_symmetric(), "bruhat_decompose: A1 not symmetric");
    for (int r = 0; r < n; ++r)
        for (int c = k; c < n; ++c)
            require(a.get(r, c) == (r == c), "bruhat_decompose: A2/A4 blocks not canonical");

    BinMatrix b_n1(n, n);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            if (a1.get(r, c)) b_n1.set(r, c, true);
    for (int r = 0; r < n - k; ++r)
        for (int c = 0; c < k; ++c)
            if (a3.get(r, c)) {
                b_n1.set(k + r, c, true);
                b_n1.set(c, k + r, true);
            }
    SymplecticMat n1 = phase_layer_tableau(b_n1);
    SymplecticMat m2 = n1 * m1;

    BinMatrix b = m2.block_b();
    BinMatrix b4(n - k, n - k);
    for (int r = 0; r < n - k; ++r)
        for (int c = 0; c < n - k; ++c) b4.set(r, c, b.get(k + r, k + c));
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            require(b.get(r, c) == (r == c), "bruhat_decompose: B1 block not identity");
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < n - k; ++c)
            require(!b.get(r, k + c), "bruhat_decompose: B2 block not zero");
    for (int r = 0; r < n - k; ++r)
        for (int c = 0; c < k; ++c)
            require(b.get(k + r, c) == red.d2.get(c, r), "bruhat_decompose: B3 block mismatch");
    require(b4.is_symmetric(), "bruhat_decompose: B4 not symmetric");
    require(red.d1.is_symmetric(), "bruhat_decompose: D1 not symmetric");

    BinMatrix b_n2(n, n);
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c)
            if (red.d1.get(r, c)) b_n2.set(r, c, true);
        for (int c = 0; c < n - k; ++c)
            if (red.d2.get(r, c)) {
                b_n2.set(r, k + c, true);
                b_n2.set(k + c, r, true);
            }
    }
    for (int r = 0; r < n - k; ++r)
        for (int c = 0; c < n - k; ++c)
            if (b4.get(r, c)) b_n2.set(k + r, k + c, true);
    SymplecticMat n2 = phase_layer_tableau(b_n2);

    std::set<int> first_k;
    for (int i = 0; i < k; ++i) first_k.insert(i);
    SymplecticMat hk = hadamard_layer_tableau(n, first_k);
    require(m2 * n2 == hk, "bruhat_decompose: final form is not the Hadamard layer");

    BruhatFactors out;
    out.k = k;
    out.sigma = red.sigma;
    out.tau = red.tau;
    out.w1 = cl.inverse() * (psig * n1.inverse() * psig.inverse());
    out.w2 = (ptau.inverse() * n2.inverse() * ptau) * cr.inverse();
    require(classify_subgroup(out.w1).count(SubgroupTag::Borel) == 1,
            "bruhat_decompose: w1 not Borel");
    require(classify_subgroup(out.w2).count(SubgroupTag::Borel) == 1,
            "bruhat_decompose: w2 not Borel");
    require(out.w1 * psig * hk * ptau * out.w2 == m, "bruhat_decompose: recomposition mismatch");
    return out;
}

struct BruhatCell {
    int k = 0;
    Perm sigma;
    Perm tau;

    Perm pi() const { return perm_compose(sigma, tau); }
};

inline BruhatCell weyl_cell(const SymplecticMat& m) {
    BruhatFactors f = bruhat_decompose(m);
    return {f.k, f.sigma, f.tau};
}

// ---- Borel factorization into layered stages ----

enum class BorelSide { Left, Right };

namespace detail {

// C-stage circuit whose tableau is diag(t, (t^{-1})^t).
inline Circuit cnot_stage_circuit(const BinMatrix& t) {
    Circuit c = cnot_circuit_for_linear(t.transpose());
    return c;
}

inline Circuit p_stage_from_diag(int n, const std::vector<bool>& diag) {
    Circuit c(n);
    for (int q = 0; q < n; ++q)
        if (diag[q]) c.push(Gate::p(q));
    return c;
}

inline Circuit p_stage_all(int n) {
    Circuit c(n);
    for (int q = 0; q < n; ++q) c.push(Gate::p(q));
    return c;
}

// Four-stage realization of diag(a, (a^{-1})^t) * [[I, bsym],[0, I]] for any
// invertible a (triangularity of a is not required here; the Borel entry
// points pass lower-triangular a).
inline LayeredCircuit borel_like_factor(int n, const BinMatrix& a, const BinMatrix& bsym,
                                        BorelSide side) {
    LayeredCircuit out(n);
    Circuit empty(n);
    if (bsym.is_diagonal()) {
        std::vector<bool> diag(n);
        for (int i = 0; i < n; ++i) diag[i] = bsym.get(i, i);
        if (side == BorelSide::Left) {
            out.add_stage(StageTag::C, a.is_identity() ? empty : cnot_stage_circuit(a));
            out.add_stage(StageTag::P, p_stage_from_diag(n, diag));
            out.add_stage(StageTag::C, empty);
            out.add_stage(StageTag::P, empty);
        } else {
            // [[I,X],[0,I]] with X = a * bsym * a^t
            BinMatrix x = a * bsym * a.transpose();
            require(x.is_symmetric(), "borel_factor: diagonal case X not symmetric");
            if (x.is_diagonal()) {
                std::vector<bool> dx(n);
                for (int i = 0; i < n; ++i) dx[i] = x.get(i, i);
                out.add_stage(StageTag::P, p_stage_from_diag(n, dx));
                out.add_stage(StageTag::C, a.is_identity() ? empty : cnot_stage_circuit(a));
                out.add_stage(StageTag::P, empty);
                out.add_stage(StageTag::C, empty);
            } else {
                SymDiagSplit s = symmetric_ldl(x);
                out.add_stage(StageTag::P, p_stage_from_diag(n, s.diag));
                out.add_stage(StageTag::C, cnot_stage_circuit(s.t));
                out.add_stage(StageTag::P, p_stage_all(n));
                out.add_stage(StageTag::C, cnot_stage_circuit(s.t.inverse() * a));
            }
        }
        return out;
    }
    if (side == BorelSide::Left) {
        SymDiagSplit s = symmetric_ldl(bsym);
        out.add_stage(StageTag::C, cnot_stage_circuit(a * s.t));
        out.add_stage(StageTag::P, p_stage_all(n));
        out.add_stage(StageTag::C, cnot_stage_circuit(s.t.inverse()));
        out.add_stage(StageTag::P, p_stage_from_diag(n, s.diag));
    } else {
        BinMatrix x = a * bsym * a.transpose();
        SymDiagSplit s = symmetric_ldl(x);
        out.add_stage(StageTag::P, p_stage_from_diag(n, s.diag));
        out.add_stage(StageTag::C, cnot_stage_circuit(s.t));
        out.add_stage(StageTag::P, p_stage_all(n));
        out.add_stage(StageTag::C, cnot_stage_circuit(s.t.inverse() * a));
    }
    return out;
}

}  // namespace detail

// Borel element -> -C-P-C-P- (Left) or -P-C-P-C- (Right).
inline LayeredCircuit borel_factor(const SymplecticMat& w, BorelSide side) {
    if (classify_subgroup(w).count(SubgroupTag::Borel) == 0)
        throw not_borel("borel_factor: input not in the Borel subgroup");
    BinMatrix a = w.block_a();
    BinMatrix bsym = a.inverse() * w.block_b();
    require(bsym.is_symmetric(), "borel_factor: A^{-1} B not symmetric");
    LayeredCircuit out = detail::borel_like_factor(w.n, a, bsym, side);
    require(circuit_to_symplectic(out.flatten()) == w, "borel_factor: recomposition mismatch");
    return out;
}

// ---- layered normal forms ----

inline Circuit hadamard_stage_circuit(int n, const std::set<int>& qubits) {
    Circuit c(n);
    for (int q : qubits) c.push(Gate::h(q));
    return c;
}

// Gate realization of a qubit relabeling as SWAPs (used when folding the
// Weyl permutation into an adjacent stage).
inline Circuit perm_swap_circuit(const Perm& pi) {
    const int n = static_cast<int>(pi.size());
    Circuit c(n);
    Perm cur = perm_identity(n);
    // Selection: bring pi[i] into place with one transposition per position.
    for (int i = 0; i < n; ++i) {
        if (cur[i] == pi[i]) continue;
        int j = -1;
        for (int t = i + 1; t < n; ++t)
            if (cur[t] == pi[i]) {
                j = t;
                break;
            }
        require(j >= 0, "perm_swap_circuit: malformed permutation");
        std::swap(cur[i], cur[j]);
        c.push(Gate::swap(i, j));
    }
    require(circuit_to_symplectic(c) == perm_layer_tableau(pi),
            "perm_swap_circuit: tableau mismatch");
    return c;
}

// 9 stages tagged [C,P,C,P,H,P,C,P,C].  The Hadamard stage acts on
// sigma({0..k-1}); the Weyl permutation pi = sigma о tau is folded into the
// trailing C stages by relabeling, so the final C stage carries pi composed
// with a lower-triangular map (it is in C_down exactly when pi = id; see the
// cell-invariance discussion in the tests).
inline LayeredCircuit nine_stage(const SymplecticMat& m) {
    const int n = m.n;
    BruhatFactors bf = bruhat_decompose(m);
    LayeredCircuit left = borel_factor(bf.w1, BorelSide::Left);

    std::set<int> hset;
    for (int i = 0; i < bf.k; ++i) hset.insert(bf.sigma[i]);

    Perm pi = bf.pi();
    BinMatrix a2 = bf.w2.block_a();
    BinMatrix bsym2 = a2.inverse() * bf.w2.block_b();
    LayeredCircuit right = detail::borel_like_factor(n, perm_matrix(pi) * a2, bsym2, BorelSide::Right);

    LayeredCircuit out(n);
    for (const auto& [tag, c] : left.stages) out.add_stage(tag, c);
    out.add_stage(StageTag::H, hadamard_stage_circuit(n, hset));
    for (const auto& [tag, c] : right.stages) out.add_stage(tag, c);
    require(circuit_to_symplectic(out.flatten()) == m, "nine_stage: recomposition mismatch");
    return out;
}

// 7 stages tagged [C,CZ,P,H,P,CZ,C]: the Borel factors are folded through the
// phase-polynomial machinery, with the Weyl permutation expanded to SWAPs and
// absorbed by the trailing fold's C stage.
inline LayeredCircuit seven_stage(const SymplecticMat& m) {
    const int n = m.n;
    if (n > kMaxPhasePolyQubits) throw unsupported_size("seven_stage: more than 24 qubits");
    BruhatFactors bf = bruhat_decompose(m);

    Circuit left_circ = borel_factor(bf.w1, BorelSide::Left).flatten();
    LayeredCircuit left = fold(left_circ, PhaseOrder::C_CZ_P);

    std::set<int> hset;
    for (int i = 0; i < bf.k; ++i) hset.insert(bf.sigma[i]);

    Circuit right_circ(n);
    right_circ.append(perm_swap_circuit(bf.pi()));
    right_circ.append(borel_factor(bf.w2, BorelSide::Right).flatten());
    LayeredCircuit right = fold(right_circ, PhaseOrder::P_CZ_C);

    LayeredCircuit out(n);
    for (const auto& [tag, c] : left.stages) out.add_stage(tag, c);
    out.add_stage(StageTag::H, hadamard_stage_circuit(n, hset));
    for (const auto& [tag, c] : right.stages) out.add_stage(tag, c);
    require(circuit_to_symplectic(out.flatten()) == m, "seven_stage: recomposition mismatch");
    return out;
}

}  // namespace stabsynth
