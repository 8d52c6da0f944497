#pragma once

// Dense GF(2) matrices with word-packed rows, plus the triangular-times-
// pattern factorizations (LPU, LPL and their mirrored variants) and the
// symmetric U*U^t + diagonal split used by the synthesis layers.

#include <cstdint>
#include <vector>

#include "stabsynth/common.hpp"

namespace stabsynth {

class BinMatrix {
public:
    BinMatrix() = default;

    BinMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), words_(word_count(cols)), data_(static_cast<size_t>(rows) * words_, 0) {
        if (rows < 0 || cols < 0) throw dimension_mismatch("BinMatrix: negative shape");
    }

    static BinMatrix identity(int n) {
        BinMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool get(int r, int c) const {
        return (data_[static_cast<size_t>(r) * words_ + static_cast<size_t>(c >> 6)] >> (c & 63)) & 1u;
    }

    void set(int r, int c, bool v) {
        uint64_t& w = data_[static_cast<size_t>(r) * words_ + static_cast<size_t>(c >> 6)];
        uint64_t bit = uint64_t{1} << (c & 63);
        if (v)
            w |= bit;
        else
            w &= ~bit;
    }

    void flip(int r, int c) {
        data_[static_cast<size_t>(r) * words_ + static_cast<size_t>(c >> 6)] ^= uint64_t{1} << (c & 63);
    }

    // row dst ^= row src
    void row_xor(int dst, int src) {
        uint64_t* d = row_ptr(dst);
        const uint64_t* s = row_ptr(src);
        for (int w = 0; w < words_; ++w) d[w] ^= s[w];
    }

    // column dst ^= column src
    void col_xor(int dst, int src) {
        for (int r = 0; r < rows_; ++r)
            if (get(r, src)) flip(r, dst);
    }

    void swap_rows(int a, int b) {
        if (a == b) return;
        uint64_t* pa = row_ptr(a);
        uint64_t* pb = row_ptr(b);
        for (int w = 0; w < words_; ++w) std::swap(pa[w], pb[w]);
    }

    void swap_cols(int a, int b) {
        if (a == b) return;
        for (int r = 0; r < rows_; ++r) {
            bool va = get(r, a), vb = get(r, b);
            set(r, a, vb);
            set(r, b, va);
        }
    }

    bool row_is_zero(int r) const {
        const uint64_t* p = row_ptr(r);
        for (int w = 0; w < words_; ++w)
            if (p[w]) return false;
        return true;
    }

    // Index of the leftmost set bit in a row, or -1.
    int row_lead(int r) const {
        const uint64_t* p = row_ptr(r);
        for (int w = 0; w < words_; ++w)
            if (p[w]) {
                unsigned long long x = p[w];
                int bit = 0;
                while (!((x >> bit) & 1u)) ++bit;
                return w * 64 + bit;
            }
        return -1;
    }

    // Index of the rightmost set bit in a row, or -1.
    int row_trail(int r) const {
        const uint64_t* p = row_ptr(r);
        for (int w = words_ - 1; w >= 0; --w)
            if (p[w]) {
                int bit = 63;
                while (!((p[w] >> bit) & 1u)) --bit;
                return w * 64 + bit;
            }
        return -1;
    }

    bool operator==(const BinMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const BinMatrix& o) const { return !(*this == o); }

    BinMatrix operator*(const BinMatrix& o) const {
        if (cols_ != o.rows_) throw dimension_mismatch("BinMatrix::operator*: shape mismatch");
        BinMatrix out(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i) {
            uint64_t* dst = out.row_ptr(i);
            for (int k = 0; k < cols_; ++k)
                if (get(i, k)) {
                    const uint64_t* src = o.row_ptr(k);
                    for (int w = 0; w < o.words_; ++w) dst[w] ^= src[w];
                }
        }
        return out;
    }

    BinMatrix operator+(const BinMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw dimension_mismatch("BinMatrix::operator+: shape mismatch");
        BinMatrix out = *this;
        for (size_t i = 0; i < data_.size(); ++i) out.data_[i] ^= o.data_[i];
        return out;
    }

    BinMatrix transpose() const {
        BinMatrix out(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c)
                if (get(r, c)) out.set(c, r, true);
        return out;
    }

    bool is_zero() const {
        for (uint64_t w : data_)
            if (w) return false;
        return true;
    }

    bool is_identity() const {
        if (rows_ != cols_) return false;
        return *this == identity(rows_);
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (int r = 0; r < rows_; ++r)
            for (int c = r + 1; c < cols_; ++c)
                if (get(r, c) != get(c, r)) return false;
        return true;
    }

    bool is_diagonal() const {
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c)
                if (r != c && get(r, c)) return false;
        return true;
    }

    // Lower triangular with unit diagonal (only meaningful for square shapes).
    bool is_lower_unitriangular() const {
        if (rows_ != cols_) return false;
        for (int r = 0; r < rows_; ++r) {
            if (!get(r, r)) return false;
            for (int c = r + 1; c < cols_; ++c)
                if (get(r, c)) return false;
        }
        return true;
    }

    bool is_upper_unitriangular() const {
        if (rows_ != cols_) return false;
        for (int r = 0; r < rows_; ++r) {
            if (!get(r, r)) return false;
            for (int c = 0; c < r; ++c)
                if (get(r, c)) return false;
        }
        return true;
    }

    BinMatrix submatrix(const std::vector<int>& rs, const std::vector<int>& cs) const {
        BinMatrix out(static_cast<int>(rs.size()), static_cast<int>(cs.size()));
        for (size_t i = 0; i < rs.size(); ++i)
            for (size_t j = 0; j < cs.size(); ++j)
                if (get(rs[i], cs[j])) out.set(static_cast<int>(i), static_cast<int>(j), true);
        return out;
    }

    int rank() const {
        BinMatrix m = *this;
        int rk = 0;
        for (int c = 0; c < cols_ && rk < rows_; ++c) {
            int piv = -1;
            for (int r = rk; r < rows_; ++r)
                if (m.get(r, c)) {
                    piv = r;
                    break;
                }
            if (piv < 0) continue;
            m.swap_rows(rk, piv);
            for (int r = 0; r < rows_; ++r)
                if (r != rk && m.get(r, c)) m.row_xor(r, rk);
            ++rk;
        }
        return rk;
    }

    BinMatrix inverse() const {
        if (rows_ != cols_) throw dimension_mismatch("BinMatrix::inverse: not square");
        BinMatrix m = *this;
        BinMatrix inv = identity(rows_);
        for (int c = 0; c < cols_; ++c) {
            int piv = -1;
            for (int r = c; r < rows_; ++r)
                if (m.get(r, c)) {
                    piv = r;
                    break;
                }
            if (piv < 0) throw singular_matrix("BinMatrix::inverse: singular");
            m.swap_rows(c, piv);
            inv.swap_rows(c, piv);
            for (int r = 0; r < rows_; ++r)
                if (r != c && m.get(r, c)) {
                    m.row_xor(r, c);
                    inv.row_xor(r, c);
                }
        }
        return inv;
    }

private:
    static int word_count(int cols) { return (cols + 63) / 64; }
    uint64_t* row_ptr(int r) { return data_.data() + static_cast<size_t>(r) * words_; }
    const uint64_t* row_ptr(int r) const { return data_.data() + static_cast<size_t>(r) * words_; }

    int rows_ = 0;
    int cols_ = 0;
    int words_ = 0;
    std::vector<uint64_t> data_;
};

// A 0/1 matrix with at most one nonzero entry per row and per column.
struct PermPattern {
    int rows = 0;
    int cols = 0;
    std::vector<int> col_of_row;  // -1 when the row is empty

    PermPattern() = default;
    PermPattern(int r, int c) : rows(r), cols(c), col_of_row(r, -1) {}

    int rank() const {
        int k = 0;
        for (int c : col_of_row)
            if (c >= 0) ++k;
        return k;
    }

    BinMatrix to_matrix() const {
        BinMatrix m(rows, cols);
        for (int r = 0; r < rows; ++r)
            if (col_of_row[r] >= 0) m.set(r, col_of_row[r], true);
        return m;
    }
};

struct LpuResult {
    BinMatrix l;  // invertible, lower unitriangular
    PermPattern p;
    BinMatrix u;  // invertible, upper unitriangular
};

struct LplResult {
    BinMatrix l1;  // lower unitriangular
    PermPattern p;
    BinMatrix l2;  // lower unitriangular
};

struct UplResult {
    BinMatrix u;  // upper unitriangular
    PermPattern p;
    BinMatrix l;  // lower unitriangular
};

struct UpuResult {
    BinMatrix u1;  // upper unitriangular
    PermPattern p;
    BinMatrix u2;  // upper unitriangular
};

// m = l * p * u.  Rows are processed top to bottom; the leftmost entry of each
// row becomes a pivot, entries below it are cleared with downward row
// additions (folded into l) and entries to its right with rightward column
// additions (folded into u).
inline LpuResult lpu_decompose(const BinMatrix& m) {
    const int rows = m.rows(), cols = m.cols();
    BinMatrix cur = m;
    BinMatrix l = BinMatrix::identity(rows);
    BinMatrix u = BinMatrix::identity(cols);
    PermPattern p(rows, cols);
    for (int i = 0; i < rows; ++i) {
        int j = cur.row_lead(i);
        if (j < 0) continue;
        p.col_of_row[i] = j;
        for (int i2 = i + 1; i2 < rows; ++i2)
            if (cur.get(i2, j)) {
                cur.row_xor(i2, i);
                l.col_xor(i, i2);  // l *= (I + E_{i2,i})
            }
        for (int j2 = j + 1; j2 < cols; ++j2)
            if (cur.get(i, j2)) {
                cur.col_xor(j2, j);
                u.row_xor(j, j2);  // u = (I + E_{j,j2}) * u
            }
    }
    require(cur == p.to_matrix(), "lpu_decompose: residual is not the pattern");
    return {std::move(l), std::move(p), std::move(u)};
}

// m = l1 * p * l2.  Mirror image of lpu_decompose: pivots are the rightmost
// entries of the rows, cleared downward and leftward.
inline LplResult lpl_decompose(const BinMatrix& m) {
    const int rows = m.rows(), cols = m.cols();
    BinMatrix cur = m;
    BinMatrix l1 = BinMatrix::identity(rows);
    BinMatrix l2 = BinMatrix::identity(cols);
    PermPattern p(rows, cols);
    for (int i = 0; i < rows; ++i) {
        int j = cur.row_trail(i);
        if (j < 0) continue;
        p.col_of_row[i] = j;
        for (int i2 = i + 1; i2 < rows; ++i2)
            if (cur.get(i2, j)) {
                cur.row_xor(i2, i);
                l1.col_xor(i, i2);
            }
        for (int j2 = 0; j2 < j; ++j2)
            if (cur.get(i, j2)) {
                cur.col_xor(j2, j);
                l2.row_xor(j, j2);
            }
    }
    require(cur == p.to_matrix(), "lpl_decompose: residual is not the pattern");
    return {std::move(l1), std::move(p), std::move(l2)};
}

inline BinMatrix reversal_matrix(int n) {
    BinMatrix r(n, n);
    for (int i = 0; i < n; ++i) r.set(i, n - 1 - i, true);
    return r;
}

namespace detail {
inline BinMatrix rev_conj(const BinMatrix& m) {
    BinMatrix rr = reversal_matrix(m.rows());
    BinMatrix rc = reversal_matrix(m.cols());
    return rr * m * rc;
}
inline PermPattern rev_conj(const PermPattern& p) {
    PermPattern out(p.rows, p.cols);
    for (int r = 0; r < p.rows; ++r)
        if (p.col_of_row[r] >= 0) out.col_of_row[p.rows - 1 - r] = p.cols - 1 - p.col_of_row[r];
    return out;
}
}  // namespace detail

// m = u * p * l, obtained from lpu_decompose under simultaneous index reversal.
inline UplResult upl_decompose(const BinMatrix& m) {
    LpuResult inner = lpu_decompose(detail::rev_conj(m));
    return {detail::rev_conj(inner.l), detail::rev_conj(inner.p), detail::rev_conj(inner.u)};
}

// m = u1 * p * u2.
inline UpuResult upu_decompose(const BinMatrix& m) {
    LplResult inner = lpl_decompose(detail::rev_conj(m));
    return {detail::rev_conj(inner.l1), detail::rev_conj(inner.p), detail::rev_conj(inner.l2)};
}

struct SymDiagSplit {
    BinMatrix t;             // triangular, invertible
    std::vector<bool> diag;  // the diagonal correction
};

// a = l * l^t + diag with l lower unitriangular.  Column k of l is read off
// the current below-diagonal column, then the trailing block absorbs the
// rank-one update; no pivoting is ever required because the diagonal
// correction soaks up the diagonal.
inline SymDiagSplit symmetric_ldl(const BinMatrix& a) {
    const int n = a.rows();
    if (!a.is_symmetric()) throw not_symmetric("symmetric_ldl: input not symmetric");
    BinMatrix cur = a;
    BinMatrix l = BinMatrix::identity(n);
    for (int k = 0; k < n; ++k) {
        for (int i = k + 1; i < n; ++i) l.set(i, k, cur.get(i, k));
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                if (l.get(i, k) && l.get(j, k)) cur.flip(i, j);
    }
    BinMatrix s = a + l * l.transpose();
    require(s.is_diagonal(), "symmetric_ldl: residual not diagonal");
    std::vector<bool> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = s.get(i, i);
    return {std::move(l), std::move(diag)};
}

// a = u * u^t + diag with u upper unitriangular (index-reversed symmetric_ldl).
inline SymDiagSplit symmetric_udu(const BinMatrix& a) {
    const int n = a.rows();
    if (!a.is_symmetric()) throw not_symmetric("symmetric_udu: input not symmetric");
    SymDiagSplit inner = symmetric_ldl(detail::rev_conj(a));
    SymDiagSplit out;
    out.t = detail::rev_conj(inner.t);
    out.diag.resize(n);
    for (int i = 0; i < n; ++i) out.diag[i] = inner.diag[n - 1 - i];
    return out;
}

// ---- permutations (perm[i] = image of i; matrix has entry (perm[j], j)) ----

using Perm = std::vector<int>;

inline Perm perm_identity(int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

inline Perm perm_inverse(const Perm& p) {
    Perm q(p.size());
    for (size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
    return q;
}

// (a o b)(i) = a(b(i)); matches perm_matrix(a) * perm_matrix(b).
inline Perm perm_compose(const Perm& a, const Perm& b) {
    Perm q(a.size());
    for (size_t i = 0; i < a.size(); ++i) q[i] = a[b[i]];
    return q;
}

inline BinMatrix perm_matrix(const Perm& p) {
    BinMatrix m(static_cast<int>(p.size()), static_cast<int>(p.size()));
    for (size_t j = 0; j < p.size(); ++j) m.set(p[j], static_cast<int>(j), true);
    return m;
}

inline bool perm_is_identity(const Perm& p) {
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<int>(i)) return false;
    return true;
}

}  // namespace stabsynth
