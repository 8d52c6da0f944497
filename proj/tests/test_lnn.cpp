#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "stabsynth/lnn.hpp"

using namespace stabsynth;

namespace {

PhaseDescr random_quadratic(int n, std::mt19937_64& rng) {
    PhaseDescr d(n);
    for (int i = 0; i < n; ++i) {
        d.add_term(uint32_t{1} << i, static_cast<int>(rng() % 4));
        for (int j = i + 1; j < n; ++j)
            if (rng() & 1) d.add_term((uint32_t{1} << i) | (uint32_t{1} << j), static_cast<int>(rng() % 4));
    }
    return reduce_to_quadratic(d);
}

BinMatrix random_invertible(int n, std::mt19937_64& rng) {
    BinMatrix g(n, n);
    do {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g.set(i, j, rng() & 1);
    } while (g.rank() != n);
    return g;
}

bool same_phase_function(const PhaseDescr& a, const PhaseDescr& b) {
    if (a.n != b.n) return false;
    for (uint32_t x = 0; x < (uint32_t{1} << a.n); ++x)
        if (phase_evaluate(a, x) != phase_evaluate(b, x)) return false;
    return true;
}

}  // namespace

TEST_CASE("reversal network shape, depth, and composed map") {
    for (int n = 1; n <= 16; ++n) {
        ReversalNetwork rn = reversal_network(n);
        CHECK(static_cast<int>(rn.blocks.size()) == n + 1);
        if (n >= 2) {
            CHECK(rn.depth() == 2 * n + 2);
            CHECK(two_qubit_depth(rn.full()) <= 2 * n + 2);
        }
        Circuit full = rn.full();
        CHECK(is_lnn_legal(full));
        CHECK(circuit_to_symplectic(full).block_a() == reversal_matrix(n));
    }
    CHECK_THROWS_AS(reversal_network(0), unsupported_size);
}

TEST_CASE("recorded boundaries cover every interval") {
    for (int n = 2; n <= 16; ++n) {
        ReversalNetwork rn = reversal_network(n);
        std::map<IntervalFunc, int> seen;
        for (const auto& row : rn.wire_trace)
            for (const IntervalFunc& iv : row) ++seen[iv];
        // Every interval [j,k], 1 <= j <= k <= n, appears; for even n the
        // only repeats are n/2 singletons at the last recorded boundary.
        int total = 0;
        for (int j = 1; j <= n; ++j)
            for (int k = j; k <= n; ++k) {
                REQUIRE(seen.count(IntervalFunc{j, k}) == 1);
                total += seen[IntervalFunc{j, k}];
            }
        CHECK(total == static_cast<int>(rn.wire_trace.size()) * n);
        int dups = 0;
        for (const auto& [iv, cnt] : seen) {
            CHECK(cnt <= 2);
            if (cnt == 2) {
                ++dups;
                CHECK(iv.j == iv.k);
            }
        }
        CHECK(dups == (n % 2 == 0 ? n / 2 : 0));
    }
}

TEST_CASE("seven-wire trace matches the frozen bracket pattern") {
    ReversalNetwork rn = reversal_network(7);
    REQUIRE(rn.wire_trace.size() == 4);
    std::vector<IntervalFunc> t0, t1{{2, 3}, {1, 3}, {1, 5}, {3, 5}, {3, 7}, {5, 7}, {5, 6}},
        t2{{4, 5}, {2, 5}, {2, 7}, {1, 7}, {1, 6}, {3, 6}, {3, 4}},
        t3{{6, 7}, {4, 7}, {4, 6}, {2, 6}, {2, 4}, {1, 4}, {1, 2}};
    for (int j = 1; j <= 7; ++j) t0.push_back({j, j});
    CHECK(rn.wire_trace[0] == t0);
    CHECK(rn.wire_trace[1] == t1);
    CHECK(rn.wire_trace[2] == t2);
    CHECK(rn.wire_trace[3] == t3);
}

TEST_CASE("phase insertion along the reversal is exact") {
    std::mt19937_64 rng(61);
    for (int n = 1; n <= 7; ++n)
        for (int t = 0; t < 20; ++t) {
            PhaseDescr quad = random_quadratic(n, rng);
            Circuit c = czhat_synthesize(n, quad);
            CHECK(is_lnn_legal(c));
            CHECK(two_qubit_depth(c) <= 2 * n + 2);
            PhaseDescr got = extract_descr(c);
            CHECK(got.g == reversal_matrix(n));
            // Compare against phases-then-reversal.
            PhaseDescr want = quad;
            want.g = reversal_matrix(n);
            CHECK(same_phase_function(got, want));
        }
}

TEST_CASE("peeled variants recompose with their merge matrices") {
    std::mt19937_64 rng(62);
    for (int n = 2; n <= 7; ++n)
        for (int t = 0; t < 15; ++t) {
            PhaseDescr quad = random_quadratic(n, rng);
            PhaseDescr want = quad;
            want.g = reversal_matrix(n);

            CzhatPiece df = czhat_synthesize_cut(n, quad, CzhatCut::DropFirst);
            CHECK(is_lnn_legal(df.circuit));
            CHECK(two_qubit_depth(df.circuit) <= 2 * n - 2);
            Circuit whole1(n);
            whole1.append(cnot_circuit_for_linear(df.merge.transpose()));
            whole1.append(df.circuit);
            CHECK(same_phase_function(extract_descr(whole1), want));

            CzhatPiece dl = czhat_synthesize_cut(n, quad, CzhatCut::DropLast);
            CHECK(is_lnn_legal(dl.circuit));
            CHECK(two_qubit_depth(dl.circuit) <= 2 * n - 2);
            Circuit whole2(n);
            whole2.append(dl.circuit);
            whole2.append(cnot_circuit_for_linear(dl.merge.transpose()));
            CHECK(same_phase_function(extract_descr(whole2), want));
        }
}

TEST_CASE("phase insertion rejects bad descriptors") {
    PhaseDescr cubic(3);
    cubic.add_term(0b111, 1);
    CHECK_THROWS_AS(czhat_synthesize(3, cubic), not_quadratic);

    PhaseDescr lin(2);
    lin.g.flip(1, 0);
    CHECK_THROWS_AS(czhat_synthesize(2, lin), non_identity_linear);

    PhaseDescr wrong(3);
    CHECK_THROWS_AS(czhat_synthesize(2, wrong), dimension_mismatch);
}

TEST_CASE("nearest-neighbor linear synthesis: exhaustive small sizes") {
    for (int n = 1; n <= 3; ++n) {
        // Enumerate all invertible n x n matrices.
        int count = 0;
        for (uint32_t bits = 0; bits < (uint32_t{1} << (n * n)); ++bits) {
            BinMatrix a(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a.set(i, j, (bits >> (i * n + j)) & 1u);
            if (a.rank() != n) continue;
            ++count;
            Circuit c = c_stage_lnn(a);
            CHECK(is_lnn_legal(c));
            CHECK(two_qubit_depth(c) <= 5 * n);
            CHECK(circuit_to_symplectic(c).block_a() == a);
        }
        CHECK(count == (n == 1 ? 1 : n == 2 ? 6 : 168));
    }
}

TEST_CASE("nearest-neighbor linear synthesis: random larger sizes") {
    std::mt19937_64 rng(63);
    for (int t = 0; t < 200; ++t) {
        int n = 2 + static_cast<int>(rng() % 7);
        BinMatrix a = random_invertible(n, rng);
        Circuit c = c_stage_lnn(a);
        CHECK(is_lnn_legal(c));
        CHECK(two_qubit_depth(c) <= 5 * n);
        CHECK(circuit_to_symplectic(c).block_a() == a);
    }
    for (int n = 1; n <= 8; ++n) {
        CHECK(c_stage_lnn(BinMatrix::identity(n)).gates.empty());
        Circuit rev = c_stage_lnn(reversal_matrix(n));
        CHECK(circuit_to_symplectic(rev).block_a() == reversal_matrix(n));
    }
    CHECK_THROWS_AS(c_stage_lnn(BinMatrix(2, 2)), singular_matrix);
}

TEST_CASE("full pipeline stays legal, within depth, and exact") {
    std::mt19937_64 rng(64);
    for (int t = 0; t < 120; ++t) {
        int n = 2 + static_cast<int>(rng() % 7);
        SymplecticMat m = circuit_to_symplectic(random_clifford_word(n, 8 * n, rng()));
        Circuit c = pipeline_lnn(m);
        CHECK(is_lnn_legal(c));
        CHECK(two_qubit_depth(c) <= 14 * n - 4);
        CHECK(circuit_to_symplectic(c) == m);
    }
    CHECK(pipeline_lnn(SymplecticMat(3)).gates.empty());
}
