#pragma once

#include <compare>
#include <string>

namespace hetnet {

// Value in [-inf, +inf]. Infinities are tagged explicitly so that no
// floating-point infinity leaks into reports or arithmetic.
class ExtReal {
public:
    enum class Kind { NegInf, Finite, PosInf };

    constexpr ExtReal() = default;
    constexpr ExtReal(double v) : kind_(Kind::Finite), value_(v) {}

    static ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
    static ExtReal neg_inf() { return ExtReal(Kind::NegInf); }
    // Maps +-HUGE_VAL onto the tagged infinities; throws on NaN.
    static ExtReal from_double(double v);
    // Accepts "inf", "-inf", "+inf" or a decimal literal.
    static ExtReal parse(const std::string& s);

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    // Throws std::logic_error when infinite.
    double value() const;
    // -1, 0 or +1.
    int sign() const;

    ExtReal operator-() const;

    std::partial_ordering operator<=>(const ExtReal& o) const;
    bool operator==(const ExtReal& o) const;

    // 12 significant digits; infinities as "inf" / "-inf".
    std::string str() const;

private:
    explicit constexpr ExtReal(Kind k) : kind_(k) {}
    Kind kind_ = Kind::Finite;
    double value_ = 0.0;
};

ExtReal min(const ExtReal& a, const ExtReal& b);
ExtReal max(const ExtReal& a, const ExtReal& b);

// Sum where at most one operand may be infinite, or both with equal sign.
// A sum that would form inf - inf throws std::logic_error.
ExtReal add(const ExtReal& a, const ExtReal& b);

}  // namespace hetnet
