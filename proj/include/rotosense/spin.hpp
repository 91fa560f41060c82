#pragma once

// Spin quantum number j, stored as the integer two_j = 2j so that
// half-integer spins stay exact. All dimensions derive from it.

#include <stdexcept>
#include <string>
#include <string_view>

namespace rotosense {

/// A numerical invariant was violated (e.g. a state that cannot be
/// normalized), as opposed to malformed input.
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Spin {
public:
    constexpr explicit Spin(int two_j) : two_j_(two_j)
    {
        if (two_j < 0) throw std::invalid_argument("Spin: two_j must be >= 0");
    }

    /// Parse "3", "7/2", "1/2"...
    static Spin from_string(std::string_view s)
    {
        const auto bad = [&] {
            return std::invalid_argument("Spin: cannot parse '" + std::string(s) +
                                         "' (expected e.g. \"2\" or \"5/2\")");
        };
        if (s.empty()) throw bad();
        const auto slash = s.find('/');
        try {
            if (slash == std::string_view::npos) {
                size_t pos   = 0;
                const int v  = std::stoi(std::string(s), &pos);
                if (pos != s.size() || v < 0) throw bad();
                return Spin(2 * v);
            }
            size_t pn = 0, pd = 0;
            const int num = std::stoi(std::string(s.substr(0, slash)), &pn);
            const int den = std::stoi(std::string(s.substr(slash + 1)), &pd);
            if (pn != slash || pd != s.size() - slash - 1) throw bad();
            if (den == 2 && num >= 0) return Spin(num);
            if (den == 1 && num >= 0) return Spin(2 * num);
            throw bad();
        } catch (const std::invalid_argument&) {
            throw bad();
        } catch (const std::out_of_range&) {
            throw bad();
        }
    }

    constexpr int two_j() const { return two_j_; }
    /// Number of qubits in the symmetric-state picture, N = 2j.
    constexpr int n_qubits() const { return two_j_; }
    constexpr int dimension() const { return two_j_ + 1; }
    constexpr int floor_j() const { return two_j_ / 2; }
    constexpr bool is_integer() const { return two_j_ % 2 == 0; }
    constexpr double value() const { return 0.5 * two_j_; }

    /// "2" or "5/2"
    std::string str() const
    {
        if (is_integer()) return std::to_string(two_j_ / 2);
        return std::to_string(two_j_) + "/2";
    }

    friend constexpr bool operator==(Spin a, Spin b) { return a.two_j_ == b.two_j_; }
    friend constexpr bool operator!=(Spin a, Spin b) { return a.two_j_ != b.two_j_; }
    friend constexpr bool operator<(Spin a, Spin b) { return a.two_j_ < b.two_j_; }

private:
    int two_j_;
};

} // namespace rotosense
