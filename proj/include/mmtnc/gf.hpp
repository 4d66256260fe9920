#pragma once

// Arithmetic over GF(2^u), 1 <= u <= 16.

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace mmtnc {

/// One field symbol. Wide enough for every supported u.
using Symbol = std::uint16_t;

/// Generator used for every random draw in the library.
using Rng = std::mt19937_64;

namespace detail {
struct FieldTables;
}

/// Field parameters plus the lookup tables derived from them. Copies share
/// the tables, so a Field is cheap to pass by value.
class Field {
public:
    static constexpr unsigned kMaxBits = 16;
    static constexpr unsigned kDefaultBits = 8;

    /// Builds GF(2^u) reduced by `reduction_poly` (bit i = coefficient of x^i).
    /// Throws InvalidParameter if u is out of range, the polynomial has the
    /// wrong degree, or it is reducible.
    Field(unsigned u, std::uint32_t reduction_poly);

    /// GF(2^u) with the library's stock irreducible polynomial for u.
    explicit Field(unsigned u = kDefaultBits);

    /// Stock reduction polynomial for u (x^8+x^4+x^3+x+1 for u = 8).
    static std::uint32_t default_poly(unsigned u);

    /// Trial division by every polynomial of degree 1..deg/2.
    static bool is_irreducible(std::uint32_t poly);

    unsigned bits() const noexcept { return bits_; }
    std::uint32_t size() const noexcept { return 1u << bits_; }
    std::uint32_t poly() const noexcept { return poly_; }
    bool contains(std::uint32_t v) const noexcept { return v < size(); }

    Symbol add(Symbol a, Symbol b) const noexcept { return static_cast<Symbol>(a ^ b); }
    Symbol sub(Symbol a, Symbol b) const noexcept { return static_cast<Symbol>(a ^ b); }
    Symbol mul(Symbol a, Symbol b) const noexcept;
    /// Throws DivisionByZero for a == 0.
    Symbol inv(Symbol a) const;
    Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

    /// dst[k] += c * src[k]; spans must have equal length.
    void axpy(std::span<Symbol> dst, Symbol c, std::span<const Symbol> src) const;
    /// v[k] *= c
    void scale(std::span<Symbol> v, Symbol c) const;

    /// Uniform over [0, q) or, with `nonzero`, over [1, q).
    Symbol sample(Rng& rng, bool nonzero = false) const;

    /// Element whose powers enumerate the multiplicative group (u <= 8 only
    /// keeps log tables; for larger u this is computed on demand).
    Symbol generator() const;

    friend bool operator==(const Field& a, const Field& b) noexcept {
        return a.bits_ == b.bits_ && a.poly_ == b.poly_;
    }

private:
    Symbol mul_slow(Symbol a, Symbol b) const noexcept;

    unsigned bits_;
    std::uint32_t poly_;
    std::shared_ptr<const detail::FieldTables> tables_;
};

/// A value bound to its field. Mixing fields raises SpecMismatch.
class FieldElement {
public:
    FieldElement(Field field, std::uint32_t value);

    Symbol value() const noexcept { return value_; }
    const Field& field() const noexcept { return field_; }
    bool is_zero() const noexcept { return value_ == 0; }

    /// Throws DivisionByZero for the zero element.
    FieldElement inverse() const;

    static FieldElement sample(const Field& field, Rng& rng, bool nonzero = false);

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + b; }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        return a * b.inverse();
    }
    friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
        return a.field_ == b.field_ && a.value_ == b.value_;
    }

private:
    Field field_;
    Symbol value_;
};

}  // namespace mmtnc
