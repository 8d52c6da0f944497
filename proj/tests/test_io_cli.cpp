#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "stabsynth/io.hpp"
#include "stabsynth/lnn.hpp"

using namespace stabsynth;

namespace {

std::string tmp_path(const std::string& stem) {
    return std::string("io_cli_") + stem + ".txt";
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

#ifdef STABSYNTH_CLI_PATH
// Runs the CLI binary, captures stdout, returns the exit code.
int run_cli(const std::string& args, std::string* captured = nullptr) {
    std::string out = tmp_path("stdout");
    std::string cmd = std::string("\"") + STABSYNTH_CLI_PATH + "\" " + args + " > " + out + " 2> " +
                      tmp_path("stderr");
    int rc = std::system(cmd.c_str());
    if (captured) *captured = read_file(out);
    return WEXITSTATUS(rc);
}
#endif

Circuit sample_circuit() {
    Circuit c(3);
    c.push(Gate::h(0));
    c.push(Gate::p(1));
    c.push(Gate::p(2, 2));
    c.push(Gate::p(0, 3));
    c.push(Gate::cnot(0, 1));
    c.push(Gate::cz(1, 2));
    c.push(Gate::swap(0, 2));
    return c;
}

}  // namespace

TEST_CASE("circuit round-trip and whitespace tolerance") {
    Circuit c = sample_circuit();
    std::ostringstream out;
    emit_circuit(out, c);
    std::istringstream in(out.str());
    Circuit back = parse_circuit(in);
    CHECK(back.n == c.n);
    CHECK(back.gates == c.gates);

    std::istringstream messy("  # leading comment\n\n qubits   3 # trailing\n H  0\n\tP 1\nZ 2\nPDG 0\nCNOT 0 1\nCZ 1 2\nSWAP 0 2\n");
    Circuit m = parse_circuit(messy);
    CHECK(m.gates == c.gates);
}

TEST_CASE("circuit parse errors") {
    auto bad = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(parse_circuit(in), parse_error);
    };
    bad("");
    bad("H 0\n");                    // missing header
    bad("qubits 0\n");               // empty system
    bad("qubits two\n");             // non-numeric
    bad("qubits 2\nH\n");            // missing operand
    bad("qubits 2\nH 0 1\n");        // extra operand
    bad("qubits 2\nFOO 0\n");        // unknown gate
    bad("qubits 2\nH 5\n");          // out of range
    bad("qubits 2\nCNOT 0 0\n");     // coincident operands
    bad("qubits 2\nH -1\n");         // negative index
}

TEST_CASE("matrix round-trip and parse errors") {
    std::mt19937_64 rng(81);
    for (int t = 0; t < 30; ++t) {
        int n = 1 + static_cast<int>(rng() % 5);
        SymplecticMat m = circuit_to_symplectic(random_clifford_word(n, 6 * n, rng()));
        std::ostringstream out;
        emit_matrix(out, m);
        std::istringstream in(out.str());
        CHECK(parse_matrix(in) == m);
    }
    auto bad = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(parse_matrix(in), parse_error);
    };
    bad("");
    bad("n 1\n0 1\n");               // short row count
    bad("n 1\n0 1\n1 0\n0 0\n");     // too many rows
    bad("n 1\n0 1 1\n1 0\n");        // wrong width
    bad("n 1\n0 2\n1 0\n");          // non-bit entry
}

#ifdef STABSYNTH_CLI_PATH

TEST_CASE("cli: synth then verify round-trips for every mode") {
    std::mt19937_64 rng(82);
    for (int t = 0; t < 12; ++t) {
        int n = 2 + static_cast<int>(rng() % 4);
        SymplecticMat m = circuit_to_symplectic(random_clifford_word(n, 6 * n, rng()));
        std::string mpath = tmp_path("m");
        {
            std::ostringstream ss;
            emit_matrix(ss, m);
            write_file(mpath, ss.str());
        }
        for (std::string mode : {"--stages 7", "--stages 9", "--lnn",
                                 "--stages 7 --order c-p-cz", "--stages 7 --order cz-p-c",
                                 "--stages 7 --order c-cz-p"}) {
            std::string cpath = tmp_path("c");
            CHECK(run_cli("synth --in " + mpath + " " + mode + " --out " + cpath) == 0);
            std::string verdict;
            CHECK(run_cli("verify --circuit " + cpath + " --matrix " + mpath, &verdict) == 0);
            CHECK(verdict == "ok\n");
        }
    }
}

TEST_CASE("cli: verify flags a mismatch") {
    write_file(tmp_path("vc"), "qubits 1\nH 0\n");
    write_file(tmp_path("vm"), "n 1\n1 0\n0 1\n");
    std::string outp;
    CHECK(run_cli("verify --circuit " + tmp_path("vc") + " --matrix " + tmp_path("vm"), &outp) == 1);
    CHECK(outp.find("mismatch at") != std::string::npos);
}

TEST_CASE("cli: exit codes for malformed and inadmissible inputs") {
    write_file(tmp_path("junk"), "garbage\n");
    CHECK(run_cli("synth --in " + tmp_path("junk")) == 2);
    CHECK(run_cli("depth --in " + tmp_path("junk")) == 2);
    // Well-formed but not symplectic.
    write_file(tmp_path("nsym"), "n 1\n1 0\n1 0\n");
    CHECK(run_cli("synth --in " + tmp_path("nsym")) == 2);
    // Unknown flag.
    CHECK(run_cli("synth --frobnicate") == 2);
    // Hadamard cannot be folded: semantic failure.
    write_file(tmp_path("hc"), "qubits 2\nH 0\nCNOT 0 1\n");
    CHECK(run_cli("fold --in " + tmp_path("hc")) == 1);
}

TEST_CASE("cli: fold emits stage comments and a sound circuit") {
    write_file(tmp_path("fc"), "qubits 3\nP 0\nCNOT 0 1\nCZ 1 2\nCNOT 1 2\nP 2\n");
    std::string text;
    CHECK(run_cli("fold --in " + tmp_path("fc") + " --order c-p-cz --out -", &text) == 0);
    CHECK(text.find("# stage C") != std::string::npos);
    CHECK(text.find("# stage P") != std::string::npos);
    CHECK(text.find("# stage CZ") != std::string::npos);
}

TEST_CASE("cli: depth report") {
    write_file(tmp_path("dc"), "qubits 3\nCNOT 0 1\nCNOT 1 2\nH 0\n");
    std::string text;
    CHECK(run_cli("depth --in " + tmp_path("dc"), &text) == 0);
    CHECK(text == "qubits 3\ngates 3\ndepth 2\nlnn yes\n");
}

TEST_CASE("cli: cell report on the all-Hadamard matrix") {
    // H on both qubits: full off-diagonal block, k = n, trivial permutations.
    write_file(tmp_path("cm"), "n 2\n0 0 1 0\n0 0 0 1\n1 0 0 0\n0 1 0 0\n");
    std::string text;
    CHECK(run_cli("cell --in " + tmp_path("cm"), &text) == 0);
    CHECK(text == "k 2\nsigma 0 1\ntau 0 1\npi 0 1\n");
}

TEST_CASE("cli: oracle row") {
    std::string text;
    CHECK(run_cli("oracle --table1 --n 2", &text) == 0);
    CHECK(text == "1 1 3 3\n");
    CHECK(run_cli("oracle --table1 --n 3", &text) == 0);
    CHECK(text == "3 3 6 6\n");
}

TEST_CASE("cli: czopt on an overlapping-fan matrix") {
    BinMatrix b(5, 5);
    auto edge = [&](int x, int y) {
        b.set(x, y, true);
        b.set(y, x, true);
    };
    for (int k = 1; k <= 4; ++k) edge(0, k);
    for (int k = 2; k <= 4; ++k) edge(1, k);
    std::ostringstream ss;
    emit_matrix(ss, phase_layer_tableau(b));
    write_file(tmp_path("zb"), ss.str());
    std::string text;
    CHECK(run_cli("czopt --in " + tmp_path("zb") + " --out -", &text) == 0);
    CHECK(text.find("# two-qubit 5") != std::string::npos);
    // A matrix that is not a pure phase layer is rejected.
    write_file(tmp_path("zh"), "n 1\n0 1\n1 0\n");
    CHECK(run_cli("czopt --in " + tmp_path("zh")) == 2);
}

TEST_CASE("cli: random words are reproducible byte for byte") {
    std::string a, b;
    CHECK(run_cli("random --n 4 --length 30 --seed 9 --out -", &a) == 0);
    CHECK(run_cli("random --n 4 --length 30 --seed 9 --out -", &b) == 0);
    CHECK(a == b);
    CHECK(a.find("qubits 4") == 0);
    std::string c;
    CHECK(run_cli("random --n 4 --length 30 --seed 10 --out -", &c) == 0);
    CHECK(a != c);
    // The emitted matrix matches the emitted word.
    CHECK(run_cli("random --n 3 --length 25 --seed 5 --out " + tmp_path("rw") +
                  " --matrix-out " + tmp_path("rm")) == 0);
    std::string verdict;
    CHECK(run_cli("verify --circuit " + tmp_path("rw") + " --matrix " + tmp_path("rm"), &verdict) == 0);
    CHECK(verdict == "ok\n");
}

TEST_CASE("cli: synthesis output is deterministic") {
    std::mt19937_64 rng(83);
    SymplecticMat m = circuit_to_symplectic(random_clifford_word(4, 24, rng()));
    std::ostringstream ss;
    emit_matrix(ss, m);
    write_file(tmp_path("dm"), ss.str());
    for (std::string mode : {"--stages 7", "--stages 9", "--lnn"}) {
        std::string a, b;
        CHECK(run_cli("synth --in " + tmp_path("dm") + " " + mode + " --out -", &a) == 0);
        CHECK(run_cli("synth --in " + tmp_path("dm") + " " + mode + " --out -", &b) == 0);
        CHECK(a == b);
    }
}

#endif  // STABSYNTH_CLI_PATH
