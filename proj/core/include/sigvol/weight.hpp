#pragma once

#include <string>

namespace sigvol {

/// Grading weight n -> w(n) of the weighted tensor algebra.
///
/// All shipped kinds satisfy w(0) = 1, are non-decreasing and submultiplicative
/// with constant 1:
///   geometric(r)   w(n) = r^n        (r >= 1)
///   polynomial(a)  w(n) = (n + 1)^a  (a >= 0)
///   constant       w(n) = 1
class Weight {
public:
    enum class Kind { geometric, polynomial, constant };

    static Weight geometric(double r);
    static Weight polynomial(double alpha);
    static Weight constant();

    /// Parses `geometric:2`, `polynomial:1.5` or `constant`.
    static Weight parse(const std::string& text);

    Kind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return param_; }

    double operator()(std::size_t n) const;
    /// log w(n), finite where w(n) itself overflows.
    double log_at(std::size_t n) const;

    /// Submultiplicativity constant C_w in w(m+n) <= C_w w(m) w(n).
    double submultiplicativity() const noexcept { return 1.0; }
    /// Geometric growth bound r with w(n) <= C r^n.
    double growth_bound() const noexcept;

    std::string to_string() const;

private:
    Weight(Kind kind, double param) : kind_(kind), param_(param) {}

    Kind kind_;
    double param_;
};

} // namespace sigvol
