#pragma once

#include <string>

namespace dualmortar {

/// Assembly kernels exist in a serial reference form and an OpenMP form. Both compute local
/// contributions the same way and scatter them in the same order, so results agree bitwise.
enum class Execution { serial, parallel };

inline std::string to_string(Execution e) { return e == Execution::serial ? "serial" : "parallel"; }

}  // namespace dualmortar
