#pragma once

#include <stdexcept>
#include <string>

namespace stabsynth {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct dimension_mismatch : error {
    explicit dimension_mismatch(const std::string& msg) : error(msg) {}
};
struct singular_matrix : error {
    explicit singular_matrix(const std::string& msg) : error(msg) {}
};
struct not_symmetric : error {
    explicit not_symmetric(const std::string& msg) : error(msg) {}
};
struct not_symplectic : error {
    explicit not_symplectic(const std::string& msg) : error(msg) {}
};
struct not_symplectic_half : error {
    explicit not_symplectic_half(const std::string& msg) : error(msg) {}
};
struct not_borel : error {
    explicit not_borel(const std::string& msg) : error(msg) {}
};
struct hadamard_in_phase_circuit : error {
    explicit hadamard_in_phase_circuit(const std::string& msg) : error(msg) {}
};
struct not_hollow_symmetric : error {
    explicit not_hollow_symmetric(const std::string& msg) : error(msg) {}
};
struct not_quadratic : error {
    explicit not_quadratic(const std::string& msg) : error(msg) {}
};
struct non_identity_linear : error {
    explicit non_identity_linear(const std::string& msg) : error(msg) {}
};
struct unsupported_size : error {
    explicit unsupported_size(const std::string& msg) : error(msg) {}
};
struct search_budget_exceeded : error {
    explicit search_budget_exceeded(const std::string& msg) : error(msg) {}
};
struct parse_error : error {
    explicit parse_error(const std::string& msg) : error(msg) {}
};
// Thrown when an internal consistency check fails; maps to CLI exit code 3.
struct internal_error : error {
    explicit internal_error(const std::string& msg) : error(msg) {}
};

inline void require(bool cond, const char* msg) {
    if (!cond) throw internal_error(msg);
}

}  // namespace stabsynth
