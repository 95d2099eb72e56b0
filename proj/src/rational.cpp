#include "tropic/rational.hpp"

#include <stdexcept>

namespace tropic {

std::optional<Rat> parse_rational(const std::string& text) {
    // ^-?[0-9]+(/[1-9][0-9]*)?$
    size_t i = 0;
    if (i < text.size() && text[i] == '-') ++i;
    size_t num_begin = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    if (i == num_begin) return std::nullopt;
    std::string num = text.substr(0, i);
    if (i == text.size()) return Rat(Int(num));
    if (text[i] != '/') return std::nullopt;
    ++i;
    if (i >= text.size() || text[i] < '1' || text[i] > '9') return std::nullopt;
    size_t den_begin = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
    if (i != text.size()) return std::nullopt;
    Rat q(Int(num), Int(text.substr(den_begin)));
    q.canonicalize();
    return q;
}

std::string to_string(const Rat& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const Int& value) { return value.get_str(); }

IntVec to_int_vec(const std::vector<long>& entries) {
    IntVec out;
    out.reserve(entries.size());
    for (long e : entries) out.emplace_back(e);
    return out;
}

RatVec to_rat_vec(const IntVec& entries) {
    RatVec out;
    out.reserve(entries.size());
    for (const Int& e : entries) out.emplace_back(e);
    return out;
}

bool is_zero(const IntVec& v) {
    for (const Int& e : v)
        if (e != 0) return false;
    return true;
}

bool is_zero(const RatVec& v) {
    for (const Rat& e : v)
        if (e != 0) return false;
    return true;
}

IntVec negated(const IntVec& v) {
    IntVec out(v);
    for (Int& e : out) e = -e;
    return out;
}

IntVec add(const IntVec& a, const IntVec& b) {
    IntVec out(a);
    for (size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

IntVec sub(const IntVec& a, const IntVec& b) {
    IntVec out(a);
    for (size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

IntVec scaled(const IntVec& v, const Int& c) {
    IntVec out(v);
    for (Int& e : out) e *= c;
    return out;
}

Rat dot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Int dot(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rat dot(const IntVec& a, const RatVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
    return s;
}

RatVec add(const RatVec& a, const RatVec& b) {
    RatVec out(a);
    for (size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

RatVec sub(const RatVec& a, const RatVec& b) {
    RatVec out(a);
    for (size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

RatVec scaled(const RatVec& v, const Rat& c) {
    RatVec out(v);
    for (Rat& e : out) e *= c;
    return out;
}

Int content(const IntVec& v) {
    Int g = 0;
    for (const Int& e : v) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
        // gcd accumulates absolute values; early exit on 1
        if (g == 1) return g;
    }
    return g;
}

IntVec primitive_part(const RatVec& v) {
    Int lcm = 1;
    for (const Rat& e : v)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), e.get_den().get_mpz_t());
    IntVec cleared;
    cleared.reserve(v.size());
    for (const Rat& e : v) {
        Rat scaled_entry = e * Rat(lcm);
        cleared.push_back(scaled_entry.get_num());
    }
    Int g = content(cleared);
    if (g == 0) return cleared;
    for (Int& e : cleared) e /= g;
    return cleared;
}

std::string to_string(const ExtRat& value) {
    if (value.infinite) return "inf";
    return to_string(value.value);
}

}  // namespace tropic
