#pragma once

#include <cstdint>
#include <string>

namespace singspline {

// Exact dyadic rational num / 2^level. All mesh and support arithmetic is
// done in this type so that containment tests against breakpoints like 3/8
// are exact. Levels stay far below 62, so 64-bit arithmetic never overflows.
struct Dyadic {
    std::int64_t num = 0;
    int level = 0;

    constexpr Dyadic() = default;
    constexpr Dyadic(std::int64_t n, int lvl) : num(n), level(lvl) {}

    static constexpr Dyadic integer(std::int64_t k) { return {k, 0}; }

    double value() const {
        return static_cast<double>(num) / static_cast<double>(std::int64_t(1) << level);
    }

    Dyadic normalized() const {
        Dyadic d = *this;
        while (d.level > 0 && d.num % 2 == 0) {
            d.num /= 2;
            --d.level;
        }
        return d;
    }

    // value * 2^k (k may be negative)
    Dyadic times_pow2(int k) const {
        Dyadic d = *this;
        if (k >= 0) {
            int reduce = k < d.level ? k : d.level;
            d.level -= reduce;
            d.num <<= (k - reduce);
        } else {
            d.level -= k;
        }
        return d;
    }

    Dyadic half() const { return {num, level + 1}; }

    friend Dyadic operator+(Dyadic a, Dyadic b) {
        int lvl = a.level > b.level ? a.level : b.level;
        return Dyadic{(a.num << (lvl - a.level)) + (b.num << (lvl - b.level)), lvl};
    }
    friend Dyadic operator-(Dyadic a, Dyadic b) {
        int lvl = a.level > b.level ? a.level : b.level;
        return Dyadic{(a.num << (lvl - a.level)) - (b.num << (lvl - b.level)), lvl};
    }
    friend Dyadic operator*(Dyadic a, Dyadic b) {
        return Dyadic{a.num * b.num, a.level + b.level};
    }

    friend bool operator==(Dyadic a, Dyadic b) {
        int lvl = a.level > b.level ? a.level : b.level;
        return (a.num << (lvl - a.level)) == (b.num << (lvl - b.level));
    }
    friend bool operator<(Dyadic a, Dyadic b) {
        int lvl = a.level > b.level ? a.level : b.level;
        return (a.num << (lvl - a.level)) < (b.num << (lvl - b.level));
    }
    friend bool operator!=(Dyadic a, Dyadic b) { return !(a == b); }
    friend bool operator>(Dyadic a, Dyadic b) { return b < a; }
    friend bool operator<=(Dyadic a, Dyadic b) { return !(b < a); }
    friend bool operator>=(Dyadic a, Dyadic b) { return !(a < b); }

    std::string str() const {
        Dyadic d = normalized();
        if (d.level == 0) return std::to_string(d.num);
        return std::to_string(d.num) + "/2^" + std::to_string(d.level);
    }
};

struct DyadicInterval {
    Dyadic lo, hi;

    double length() const { return (hi - lo).value(); }

    // Positive-measure overlap; touching at a point counts as disjoint.
    bool overlaps_open(const DyadicInterval& o) const {
        return lo < o.hi && o.lo < hi;
    }
    bool contains(const DyadicInterval& o) const {
        return lo <= o.lo && o.hi <= hi;
    }
    bool contains_point(Dyadic x) const { return lo <= x && x <= hi; }
};

}  // namespace singspline
