#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropic/rational.hpp"

namespace tropic {

// All operations here are exact and pure; results are deterministic for a
// given input (column-style Hermite normal forms fix the bases).

struct IntMat {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<Int> data;  // row-major

    IntMat() = default;
    IntMat(size_t r, size_t c) : rows(r), cols(c), data(r * c, Int(0)) {}

    Int& at(size_t r, size_t c) { return data[r * cols + c]; }
    const Int& at(size_t r, size_t c) const { return data[r * cols + c]; }

    static IntMat from_rows(const std::vector<IntVec>& rws, size_t width);
    static IntMat from_cols(const std::vector<IntVec>& cls, size_t height);
    std::vector<IntVec> col_vectors() const;
    std::vector<IntVec> row_vectors() const;
};

struct RatMat {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<Rat> data;

    RatMat() = default;
    RatMat(size_t r, size_t c) : rows(r), cols(c), data(r * c, Rat(0)) {}

    Rat& at(size_t r, size_t c) { return data[r * cols + c]; }
    const Rat& at(size_t r, size_t c) const { return data[r * cols + c]; }

    static RatMat from_rows(const std::vector<RatVec>& rws, size_t width);
};

class ZeroVectorError : public std::runtime_error {
  public:
    ZeroVectorError() : std::runtime_error("primitive_vector: zero vector") {}
};

class NotASublatticeError : public std::runtime_error {
  public:
    explicit NotASublatticeError(size_t generator)
        : std::runtime_error("lattice_index: generator " +
                             std::to_string(generator) +
                             " is not an integral combination of the ambient "
                             "generators"),
          generator_index(generator) {}
    size_t generator_index;
};

// v / gcd(entries); direction and sign preserved. Throws ZeroVectorError on 0.
IntVec primitive_vector(const IntVec& v);

// Basis of {x : Mx = 0} over Q. Vectors are integral with content 1 and come
// in ascending free-column order (reduced row echelon pivots ascending).
std::vector<IntVec> kernel_basis(const RatMat& M);

size_t rank(const RatMat& M);
size_t rank_of_int_vectors(const std::vector<IntVec>& vectors, size_t width);

// Column-style Hermite normal form of the column lattice of M. The result
// has full column rank, pivot rows strictly increasing, positive pivots, and
// entries left of each pivot reduced into [0, pivot). Unique for the lattice.
IntMat column_hnf(const IntMat& M);

// Canonical basis (column HNF columns) of the lattice generated by the input.
std::vector<IntVec> lattice_canonical_basis(const std::vector<IntVec>& gens,
                                            size_t width);

// Z-basis of {x in Z^cols : Mx = 0}; saturated by construction, canonical.
std::vector<IntVec> integer_kernel_basis(const IntMat& M);

// Elementary divisors d1 | d2 | ... | dr of M, each positive.
std::vector<Int> smith_invariants(const IntMat& M);

// Product of all Smith invariants: the index of the column lattice inside
// its saturation (equals |det| for square nonsingular M).
Int smith_index(const IntMat& M);

// Basis of the saturated lattice {phi : phi(v) = 0 for all v}; canonical.
std::vector<IntVec> annihilator_basis(const std::vector<IntVec>& vectors,
                                      size_t ambient_rank);

// Basis of span_Q(sub) intersected with Z^n; canonical.
std::vector<IntVec> saturation(const std::vector<IntVec>& sub,
                               size_t ambient_rank);

struct LatticeIndex {
    bool finite = false;
    Int index = 0;  // meaningful when finite

    static LatticeIndex infinite() { return LatticeIndex{false, 0}; }
    static LatticeIndex of(Int v) { return LatticeIndex{true, std::move(v)}; }
};

// [<ambient> : <sub>] for sub generators integrally inside the ambient
// lattice. INFINITE when rank(sub) < rank(ambient); NotASublatticeError when
// a sub generator fails membership (index of the offender reported).
LatticeIndex lattice_index(const std::vector<IntVec>& sub,
                           const std::vector<IntVec>& ambient);

// Membership of v in the lattice generated by gens.
bool in_lattice(const IntVec& v, const std::vector<IntVec>& gens);

// Membership of v in the Q-span of gens.
bool in_span(const IntVec& v, const std::vector<IntVec>& gens);
bool in_span(const RatVec& v, const std::vector<IntVec>& gens);

// Lattice equality as mutual integral membership of generators.
bool same_lattice(const std::vector<IntVec>& a, const std::vector<IntVec>& b);

// Solves Mx = rhs over Q; nullopt when inconsistent. When the solution is
// not unique the echelon representative (free variables zero) is returned.
std::optional<RatVec> solve(const RatMat& M, const RatVec& rhs);

// Some integral covector phi with phi(v) = 1 for primitive v (extended gcd).
IntVec unimodular_covector(const IntVec& primitive);

}  // namespace tropic
