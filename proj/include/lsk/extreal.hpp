#pragma once

#include <cmath>
#include <limits>

#include "lsk/errors.hpp"

namespace lsk {

/// Extended real in R ∪ {+inf}. +inf is an explicit tag, never an IEEE
/// infinity inside arithmetic kernels; -inf is not representable.
class ExtReal {
public:
    ExtReal() : v_(0.0), inf_(false) {}
    ExtReal(double v) : v_(v), inf_(false) {
        if (std::isinf(v)) {
            if (v < 0) throw DomainError("ExtReal: -inf not representable");
            inf_ = true;
            v_ = 0.0;
        }
    }
    static ExtReal infinity() {
        ExtReal e;
        e.inf_ = true;
        return e;
    }

    bool is_infinite() const { return inf_; }
    bool is_finite() const { return !inf_; }
    /// Finite value; throws on +inf.
    double value() const {
        if (inf_) throw DomainError("ExtReal: value() on +inf");
        return v_;
    }
    /// Value with +inf mapped to the IEEE infinity (for output only).
    double value_or_inf() const {
        return inf_ ? std::numeric_limits<double>::infinity() : v_;
    }

    ExtReal operator+(double c) const { return inf_ ? infinity() : ExtReal(v_ + c); }
    ExtReal operator*(double c) const {
        if (inf_) {
            if (c <= 0) throw DomainError("ExtReal: nonpositive scaling of +inf");
            return infinity();
        }
        return ExtReal(v_ * c);
    }
    ExtReal operator/(double c) const { return (*this) * (1.0 / c); }

    friend bool operator<(const ExtReal& a, const ExtReal& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
    }

    static ExtReal min(const ExtReal& a, const ExtReal& b) { return a < b ? a : b; }
    static ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

private:
    double v_;
    bool inf_;
};

} // namespace lsk
