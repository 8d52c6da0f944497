#pragma once
// Plain-text circuit and matrix formats: whitespace-insensitive parsing,
// canonical single-space emission, "#" comments (used for stage boundaries).

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gates.hpp"
#include "symplectic.hpp"

namespace stabsynth {

namespace detail {

inline std::vector<std::string> file_tokens_line(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ss(body);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    return toks;
}

inline int parse_index(const std::string& tok, int line_no) {
    try {
        size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size() || v < 0) throw parse_error("");
        return v;
    } catch (...) {
        throw parse_error("line " + std::to_string(line_no) + ": expected a nonnegative integer, got '" + tok + "'");
    }
}

}  // namespace detail

// Format: header "qubits N"; one gate per line: "H q", "P q", "PDG q",
// "Z q", "CNOT c t", "CZ a b", "SWAP a b"; 0-based decimal indices.
inline Circuit parse_circuit(std::istream& in) {
    std::string line;
    int line_no = 0;
    bool have_header = false;
    Circuit c;
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = detail::file_tokens_line(line);
        if (toks.empty()) continue;
        if (!have_header) {
            if (toks.size() != 2 || toks[0] != "qubits")
                throw parse_error("line " + std::to_string(line_no) + ": expected 'qubits N' header");
            int n = detail::parse_index(toks[1], line_no);
            if (n < 1) throw parse_error("line " + std::to_string(line_no) + ": qubit count must be positive");
            c = Circuit(n);
            have_header = true;
            continue;
        }
        const std::string& op = toks[0];
        auto arity = [&](size_t want) {
            if (toks.size() != want + 1)
                throw parse_error("line " + std::to_string(line_no) + ": '" + op + "' takes " +
                                  std::to_string(want) + " operand(s)");
        };
        try {
            if (op == "H") {
                arity(1);
                c.push(Gate::h(detail::parse_index(toks[1], line_no)));
            } else if (op == "P" || op == "Z" || op == "PDG") {
                arity(1);
                int power = op == "P" ? 1 : op == "Z" ? 2 : 3;
                c.push(Gate::p(detail::parse_index(toks[1], line_no), power));
            } else if (op == "CNOT") {
                arity(2);
                c.push(Gate::cnot(detail::parse_index(toks[1], line_no), detail::parse_index(toks[2], line_no)));
            } else if (op == "CZ") {
                arity(2);
                c.push(Gate::cz(detail::parse_index(toks[1], line_no), detail::parse_index(toks[2], line_no)));
            } else if (op == "SWAP") {
                arity(2);
                c.push(Gate::swap(detail::parse_index(toks[1], line_no), detail::parse_index(toks[2], line_no)));
            } else {
                throw parse_error("line " + std::to_string(line_no) + ": unknown gate '" + op + "'");
            }
        } catch (const dimension_mismatch& e) {
            throw parse_error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_header) throw parse_error("missing 'qubits N' header");
    return c;
}

inline void emit_gate(std::ostream& out, const Gate& g) {
    switch (g.kind) {
        case GateKind::H: out << "H " << g.q0; break;
        case GateKind::P: out << (g.power == 1 ? "P " : g.power == 2 ? "Z " : "PDG ") << g.q0; break;
        case GateKind::CNOT: out << "CNOT " << g.q0 << " " << g.q1; break;
        case GateKind::CZ: out << "CZ " << g.q0 << " " << g.q1; break;
        case GateKind::SWAP: out << "SWAP " << g.q0 << " " << g.q1; break;
    }
    out << "\n";
}

inline void emit_circuit(std::ostream& out, const Circuit& c) {
    out << "qubits " << c.n << "\n";
    for (const Gate& g : c.gates) emit_gate(out, g);
}

// Flat circuit file with "# stage X" comment boundaries.
inline void emit_layered(std::ostream& out, const LayeredCircuit& lc) {
    out << "qubits " << lc.n << "\n";
    for (const auto& [tag, c] : lc.stages) {
        out << "# stage " << stage_tag_name(tag) << "\n";
        for (const Gate& g : c.gates) emit_gate(out, g);
    }
}

// Format: line 1 "n N"; then 2N lines of 2N space-separated bits, row-major,
// block convention [[A,B],[C,D]].  Symplecticity is not enforced here.
inline SymplecticMat parse_matrix(std::istream& in) {
    std::string line;
    int line_no = 0;
    int n = -1;
    int row = 0;
    SymplecticMat s(1);
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = detail::file_tokens_line(line);
        if (toks.empty()) continue;
        if (n < 0) {
            if (toks.size() != 2 || toks[0] != "n")
                throw parse_error("line " + std::to_string(line_no) + ": expected 'n N' header");
            n = detail::parse_index(toks[1], line_no);
            if (n < 1) throw parse_error("line " + std::to_string(line_no) + ": size must be positive");
            s = SymplecticMat(n);
            s.m = BinMatrix(2 * n, 2 * n);
            continue;
        }
        if (row >= 2 * n) throw parse_error("line " + std::to_string(line_no) + ": more than 2n rows");
        if (static_cast<int>(toks.size()) != 2 * n)
            throw parse_error("line " + std::to_string(line_no) + ": expected " + std::to_string(2 * n) + " bits");
        for (int col = 0; col < 2 * n; ++col) {
            if (toks[col] != "0" && toks[col] != "1")
                throw parse_error("line " + std::to_string(line_no) + ": matrix entries must be 0 or 1");
            if (toks[col] == "1") s.m.set(row, col, true);
        }
        ++row;
    }
    if (n < 0) throw parse_error("missing 'n N' header");
    if (row != 2 * n) throw parse_error("expected " + std::to_string(2 * n) + " rows, got " + std::to_string(row));
    return s;
}

inline void emit_matrix(std::ostream& out, const SymplecticMat& s) {
    out << "n " << s.n << "\n";
    for (int r = 0; r < 2 * s.n; ++r) {
        for (int c = 0; c < 2 * s.n; ++c) out << (c ? " " : "") << (s.m.get(r, c) ? 1 : 0);
        out << "\n";
    }
}

}  // namespace stabsynth
