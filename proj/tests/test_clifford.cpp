#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <set>

#include "doctest.h"
#include "stabsynth/symplectic.hpp"

using namespace stabsynth;

namespace {

SymplecticMat random_tableau(int n, uint64_t seed, int length = 0) {
    return circuit_to_symplectic(random_clifford_word(n, length ? length : 8 * n, seed));
}

uint64_t pack(const SymplecticMat& s) {
    uint64_t key = 0;
    const int d = 2 * s.n;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            if (s.m.get(r, c)) key |= uint64_t{1} << (r * d + c);
    return key;
}

}  // namespace

TEST_CASE("single gate tableaux") {
    // H(0) on one qubit swaps the X/Z columns.
    SymplecticMat h = gate_tableau(1, Gate::h(0));
    CHECK(h.m.get(0, 1));
    CHECK(h.m.get(1, 0));
    CHECK_FALSE(h.m.get(0, 0));

    // P has B = I restricted to the acted qubit.
    SymplecticMat p = gate_tableau(1, Gate::p(0));
    CHECK(p.block_a().is_identity());
    CHECK(p.block_b().get(0, 0));
    CHECK(p.block_c().is_zero());

    // P^2 = Z acts trivially on the tableau.
    CHECK(gate_tableau(1, Gate::p(0, 2)) == SymplecticMat(1));

    // CZ = (I x H) CNOT (I x H).
    Circuit lhs(2), rhs(2);
    lhs.push(Gate::cz(0, 1));
    rhs.push(Gate::h(1));
    rhs.push(Gate::cnot(0, 1));
    rhs.push(Gate::h(1));
    CHECK(circuit_to_symplectic(lhs) == circuit_to_symplectic(rhs));

    // SWAP = three alternating CNOTs.
    Circuit sw(2), cn(2);
    sw.push(Gate::swap(0, 1));
    cn.push(Gate::cnot(0, 1));
    cn.push(Gate::cnot(1, 0));
    cn.push(Gate::cnot(0, 1));
    CHECK(circuit_to_symplectic(sw) == circuit_to_symplectic(cn));
}

TEST_CASE("random words are symplectic and compose") {
    std::mt19937_64 rng(21);
    for (int n = 1; n <= 6; ++n)
        for (int t = 0; t < 25; ++t) {
            Circuit c1 = random_clifford_word(n, 10, 100 * n + t);
            Circuit c2 = random_clifford_word(n, 10, 900 * n + t);
            SymplecticMat s1 = circuit_to_symplectic(c1);
            SymplecticMat s2 = circuit_to_symplectic(c2);
            CHECK(is_symplectic(s1));
            Circuit both = c1;
            both.append(c2);
            CHECK(circuit_to_symplectic(both) == s1 * s2);
        }
}

TEST_CASE("inverse via the block-transpose formula") {
    for (int n = 1; n <= 5; ++n)
        for (int t = 0; t < 20; ++t) {
            SymplecticMat s = random_tableau(n, 31 * n + t);
            SymplecticMat inv = s.inverse();
            CHECK(s * inv == SymplecticMat(n));
            CHECK(inv * s == SymplecticMat(n));
            CHECK(inv.block_a() == s.block_d().transpose());
            CHECK(inv.block_b() == s.block_b().transpose());
        }
}

TEST_CASE("circuit inversion inverts the tableau") {
    for (int n = 1; n <= 5; ++n)
        for (int t = 0; t < 20; ++t) {
            Circuit c = random_clifford_word(n, 12, 77 * n + t);
            SymplecticMat s = circuit_to_symplectic(c);
            CHECK(circuit_to_symplectic(invert_circuit(c)) == s.inverse());
        }
}

TEST_CASE("the one-qubit symplectic group has 6 elements") {
    std::set<uint64_t> seen;
    std::vector<SymplecticMat> frontier{SymplecticMat(1)};
    seen.insert(pack(frontier[0]));
    while (!frontier.empty()) {
        std::vector<SymplecticMat> next;
        for (const SymplecticMat& s : frontier)
            for (const Gate& g : {Gate::h(0), Gate::p(0)}) {
                SymplecticMat t = s;
                apply_gate_right(t, g);
                if (seen.insert(pack(t)).second) next.push_back(t);
            }
        frontier = std::move(next);
    }
    CHECK(seen.size() == 6);
}

TEST_CASE("structured layer builders") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 40; ++t) {
        int n = 1 + static_cast<int>(rng() % 5);
        BinMatrix a(n, n);
        do {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a.set(i, j, rng() & 1);
        } while (a.rank() != n);
        SymplecticMat ca = cnot_layer_tableau(a);
        CHECK(is_symplectic(ca));
        CHECK(ca.block_a() == a);
        CHECK(ca.block_d() == a.inverse().transpose());
        CHECK(ca.block_b().is_zero());

        BinMatrix b(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                if (rng() & 1) {
                    b.set(i, j, true);
                    b.set(j, i, true);
                }
        SymplecticMat pb = phase_layer_tableau(b);
        CHECK(is_symplectic(pb));
        CHECK(pb.block_b() == b);
        CHECK(pb.block_a().is_identity());
    }
}

TEST_CASE("subgroup classification") {
    // A pure CNOT circuit sits in the C subgroup.
    Circuit c(3);
    c.push(Gate::cnot(0, 1));
    c.push(Gate::cnot(2, 1));
    auto tags = classify_subgroup(circuit_to_symplectic(c));
    CHECK(tags.count(SubgroupTag::Cn));

    // A CNOT whose tableau linear part is lower triangular is in the
    // triangular CNOT subgroup.
    Circuit down(3);
    down.push(Gate::cnot(2, 0));
    CHECK(classify_subgroup(circuit_to_symplectic(down)).count(SubgroupTag::CDown));

    // A CZ layer is in the A=D=I phase-type subgroup.
    Circuit z(3);
    z.push(Gate::cz(0, 2));
    z.push(Gate::p(1));
    CHECK(classify_subgroup(circuit_to_symplectic(z)).count(SubgroupTag::B0));

    // Hadamard leaves all the triangular families.
    Circuit h(3);
    h.push(Gate::h(0));
    CHECK(classify_subgroup(circuit_to_symplectic(h)).empty());
}

TEST_CASE("two-qubit depth metric") {
    Circuit c(3);
    CHECK(two_qubit_depth(c) == 0);
    c.push(Gate::h(0));
    c.push(Gate::p(1));
    CHECK(two_qubit_depth(c) == 0);  // single-qubit gates are free
    c.push(Gate::cnot(0, 1));
    c.push(Gate::cnot(1, 2));
    CHECK(two_qubit_depth(c) == 2);  // they share qubit 1
    Circuit par(4);
    par.push(Gate::cnot(0, 1));
    par.push(Gate::cz(2, 3));
    CHECK(two_qubit_depth(par) == 1);  // disjoint supports share a layer
    Circuit sw(2);
    sw.push(Gate::swap(0, 1));
    CHECK(two_qubit_depth(sw) == 3);  // SWAP counts as three CNOTs
}

TEST_CASE("adjacency legality") {
    Circuit good(3);
    good.push(Gate::cnot(0, 1));
    good.push(Gate::cz(2, 1));
    good.push(Gate::h(2));
    CHECK(is_lnn_legal(good));
    Circuit bad(3);
    bad.push(Gate::cnot(0, 2));
    CHECK_FALSE(is_lnn_legal(bad));
}

TEST_CASE("random words are deterministic in the seed") {
    Circuit a = random_clifford_word(5, 40, 123);
    Circuit b = random_clifford_word(5, 40, 123);
    Circuit c = random_clifford_word(5, 40, 124);
    CHECK(a.gates == b.gates);
    CHECK(a.gates != c.gates);
}
