#pragma once

#include <limits>
#include <string>

namespace freelevy {

// A nonnegative quantity that may be +infinity by construction rather than by overflow.
class ExtendedReal {
public:
    constexpr ExtendedReal() = default;
    constexpr ExtendedReal(double v) : value_(v) {}

    static constexpr ExtendedReal infinity() {
        ExtendedReal r;
        r.infinite_ = true;
        return r;
    }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }
    constexpr double value() const {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

    friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return ExtendedReal(a.value_ + b.value_);
    }
    friend constexpr ExtendedReal operator*(double k, ExtendedReal a) {
        if (a.infinite_) return k == 0.0 ? ExtendedReal(0.0) : infinity();
        return ExtendedReal(k * a.value_);
    }

    std::string to_string() const;

private:
    double value_ = 0.0;
    bool infinite_ = false;
};

}  // namespace freelevy
