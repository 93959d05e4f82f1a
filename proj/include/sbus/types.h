#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbus {

enum class QubitKind : uint8_t { Data = 0, AncillaX = 1, AncillaZ = 2 };

// Identifies a qubit of the code. Ordering is (kind, index) with
// Data < AncillaX < AncillaZ, which is also the Kahn tie-break order.
struct QubitId {
    QubitKind kind = QubitKind::Data;
    int index = 0;

    friend auto operator<=>(const QubitId&, const QubitId&) = default;
};

std::string to_string(const QubitId& q);
QubitId qubit_from_string(const std::string& s);

struct InvalidDistance : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CyclicDependency : std::runtime_error {
    std::vector<QubitId> cycle;
    explicit CyclicDependency(std::vector<QubitId> witness);
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonGraphlikeModel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sbus
