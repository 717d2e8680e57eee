#include "hetnet/ext_real.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hetnet {

ExtReal ExtReal::from_double(double v) {
    if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN");
    if (std::isinf(v)) return v > 0 ? pos_inf() : neg_inf();
    return ExtReal(v);
}

ExtReal ExtReal::parse(const std::string& s) {
    if (s == "inf" || s == "+inf") return pos_inf();
    if (s == "-inf") return neg_inf();
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("ExtReal: bad literal '" + s + "'");
    return from_double(v);
}

double ExtReal::value() const {
    if (kind_ != Kind::Finite) throw std::logic_error("ExtReal::value on infinite value");
    return value_;
}

int ExtReal::sign() const {
    switch (kind_) {
        case Kind::NegInf: return -1;
        case Kind::PosInf: return 1;
        default: return (value_ > 0) - (value_ < 0);
    }
}

ExtReal ExtReal::operator-() const {
    switch (kind_) {
        case Kind::NegInf: return pos_inf();
        case Kind::PosInf: return neg_inf();
        default: return ExtReal(-value_);
    }
}

static int rank(ExtReal::Kind k) {
    return k == ExtReal::Kind::NegInf ? 0 : (k == ExtReal::Kind::Finite ? 1 : 2);
}

std::partial_ordering ExtReal::operator<=>(const ExtReal& o) const {
    int a = rank(kind_), b = rank(o.kind_);
    if (a != b) return a <=> b;
    if (kind_ != Kind::Finite) return std::partial_ordering::equivalent;
    return value_ <=> o.value_;
}

bool ExtReal::operator==(const ExtReal& o) const {
    return (*this <=> o) == std::partial_ordering::equivalent;
}

std::string ExtReal::str() const {
    if (kind_ == Kind::PosInf) return "inf";
    if (kind_ == Kind::NegInf) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value_);
    return buf;
}

ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }
ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

ExtReal add(const ExtReal& a, const ExtReal& b) {
    if (a.is_finite() && b.is_finite()) return ExtReal(a.value() + b.value());
    if (!a.is_finite() && !b.is_finite() && a.kind() != b.kind())
        throw std::logic_error("ExtReal: inf - inf");
    return a.is_finite() ? b : a;
}

}  // namespace hetnet
