#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace tropic {

using Int = mpz_class;
using Rat = mpq_class;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

// Parses "-?[0-9]+(/[1-9][0-9]*)?" exactly; anything else (including "1/0")
// yields nullopt.
std::optional<Rat> parse_rational(const std::string& text);

// Canonical form: integers print without slash, otherwise "p/q" with q > 0.
std::string to_string(const Rat& value);
std::string to_string(const Int& value);

IntVec to_int_vec(const std::vector<long>& entries);
RatVec to_rat_vec(const IntVec& entries);

bool is_zero(const IntVec& v);
bool is_zero(const RatVec& v);

IntVec negated(const IntVec& v);
IntVec add(const IntVec& a, const IntVec& b);
IntVec sub(const IntVec& a, const IntVec& b);
IntVec scaled(const IntVec& v, const Int& c);

Rat dot(const RatVec& a, const RatVec& b);
Int dot(const IntVec& a, const IntVec& b);
Rat dot(const IntVec& a, const RatVec& b);

RatVec add(const RatVec& a, const RatVec& b);
RatVec sub(const RatVec& a, const RatVec& b);
RatVec scaled(const RatVec& v, const Rat& c);

// gcd of |entries|; zero vector gives 0.
Int content(const IntVec& v);

// Clears denominators and divides by the content; the zero vector maps to
// itself. Sign of the leading data is preserved.
IntVec primitive_part(const RatVec& v);

// Rational with infinity adjoined, ordered above every rational. Used for
// path distances where "no escape vertex" reads as infinite distance.
struct ExtRat {
    bool infinite = false;
    Rat value = 0;

    static ExtRat inf() { return ExtRat{true, 0}; }
    static ExtRat of(const Rat& v) { return ExtRat{false, v}; }

    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.infinite || b.infinite) return a.infinite == b.infinite;
        return a.value == b.value;
    }
    friend bool operator<(const ExtRat& a, const ExtRat& b) {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.value < b.value;
    }
};

std::string to_string(const ExtRat& value);

}  // namespace tropic
