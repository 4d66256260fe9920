#include "mmtnc/gf.hpp"

#include <array>
#include <bit>
#include <string>

#include "mmtnc/error.hpp"

namespace mmtnc {

namespace detail {

// Log/antilog tables plus a full product table, kept only for u <= 8.
struct FieldTables {
    Symbol generator = 1;
    std::vector<Symbol> exp;   // 2(q-1) entries so log a + log b needs no wrap
    std::vector<Symbol> log;   // log[0] unused
    std::vector<Symbol> prod;  // q*q products, row-major
    std::vector<Symbol> inv;
};

}  // namespace detail

namespace {

constexpr unsigned kTableBits = 8;

int degree(std::uint32_t p) { return p == 0 ? -1 : 31 - std::countl_zero(p); }

// Remainder of a modulo b over GF(2)[x].
std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b) {
    const int db = degree(b);
    for (int da = degree(a); da >= db; da = degree(a)) a ^= b << (da - db);
    return a;
}

// Carry-less product followed by reduction.
Symbol clmul_reduce(Symbol a, Symbol b, unsigned bits, std::uint32_t poly) {
    std::uint32_t acc = 0;
    for (std::uint32_t x = a, y = b; y != 0; y >>= 1, x <<= 1)
        if (y & 1u) acc ^= x;
    for (int d = degree(acc); d >= static_cast<int>(bits); d = degree(acc))
        acc ^= poly << (d - static_cast<int>(bits));
    return static_cast<Symbol>(acc);
}

std::uint32_t multiplicative_order(Symbol g, unsigned bits, std::uint32_t poly) {
    const std::uint32_t group = (1u << bits) - 1;
    Symbol x = g;
    std::uint32_t order = 1;
    while (x != 1 && order <= group) {
        x = clmul_reduce(x, g, bits, poly);
        ++order;
    }
    return order;
}

Symbol find_generator(unsigned bits, std::uint32_t poly) {
    const std::uint32_t group = (1u << bits) - 1;
    for (std::uint32_t g = 1; g <= group; ++g)
        if (multiplicative_order(static_cast<Symbol>(g), bits, poly) == group)
            return static_cast<Symbol>(g);
    throw StructuralError("no generator found in GF(2^" + std::to_string(bits) + ")");
}

std::shared_ptr<const detail::FieldTables> build_tables(unsigned bits, std::uint32_t poly) {
    auto t = std::make_shared<detail::FieldTables>();
    const std::uint32_t q = 1u << bits;
    const std::uint32_t group = q - 1;
    t->generator = find_generator(bits, poly);
    if (bits > kTableBits) return t;

    t->exp.assign(2 * group, 0);
    t->log.assign(q, 0);
    Symbol x = 1;
    for (std::uint32_t k = 0; k < group; ++k) {
        t->exp[k] = x;
        t->exp[k + group] = x;
        t->log[x] = static_cast<Symbol>(k);
        x = clmul_reduce(x, t->generator, bits, poly);
    }
    t->prod.assign(static_cast<std::size_t>(q) * q, 0);
    t->inv.assign(q, 0);
    for (std::uint32_t a = 1; a < q; ++a) {
        for (std::uint32_t b = 1; b < q; ++b)
            t->prod[a * q + b] = t->exp[t->log[a] + t->log[b]];
        t->inv[a] = t->exp[(group - t->log[a]) % group];
    }
    return t;
}

constexpr std::array<std::uint32_t, Field::kMaxBits + 1> kStockPolys = {
    0,        // unused
    0x3,      // x + 1
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x83,     // x^7 + x + 1
    0x11B,    // x^8 + x^4 + x^3 + x + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4443,   // x^14 + x^10 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1002D,  // x^16 + x^5 + x^3 + x^2 + 1
};

}  // namespace

bool Field::is_irreducible(std::uint32_t poly) {
    const int d = degree(poly);
    if (d < 1) return false;
    for (std::uint32_t divisor = 2; degree(divisor) <= d / 2; ++divisor)
        if (poly_mod(poly, divisor) == 0) return false;
    return true;
}

std::uint32_t Field::default_poly(unsigned u) {
    if (u < 1 || u > kMaxBits)
        throw InvalidParameter("field width u must be in [1,16], got " + std::to_string(u));
    return kStockPolys[u];
}

Field::Field(unsigned u) : Field(u, default_poly(u)) {}

Field::Field(unsigned u, std::uint32_t reduction_poly) : bits_(u), poly_(reduction_poly) {
    if (u < 1 || u > kMaxBits)
        throw InvalidParameter("field width u must be in [1,16], got " + std::to_string(u));
    if (degree(reduction_poly) != static_cast<int>(u))
        throw InvalidParameter("reduction polynomial must have degree " + std::to_string(u));
    if (!is_irreducible(reduction_poly))
        throw InvalidParameter("reduction polynomial is reducible");
    tables_ = build_tables(u, reduction_poly);
}

Symbol Field::mul(Symbol a, Symbol b) const noexcept {
    if (bits_ <= kTableBits) return tables_->prod[(static_cast<std::size_t>(a) << bits_) | b];
    return mul_slow(a, b);
}

Symbol Field::mul_slow(Symbol a, Symbol b) const noexcept {
    return clmul_reduce(a, b, bits_, poly_);
}

Symbol Field::inv(Symbol a) const {
    if (a == 0) throw DivisionByZero("inverse of zero in GF(2^" + std::to_string(bits_) + ")");
    if (bits_ <= kTableBits) return tables_->inv[a];
    // a^(q-2) by square-and-multiply
    std::uint32_t e = size() - 2;
    Symbol result = 1;
    Symbol base = a;
    while (e != 0) {
        if (e & 1u) result = mul_slow(result, base);
        base = mul_slow(base, base);
        e >>= 1;
    }
    return result;
}

void Field::axpy(std::span<Symbol> dst, Symbol c, std::span<const Symbol> src) const {
    if (dst.size() != src.size()) throw InvalidParameter("axpy: length mismatch");
    if (c == 0) return;
    if (c == 1) {
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] ^= src[k];
        return;
    }
    if (bits_ <= kTableBits) {
        const Symbol* row = tables_->prod.data() + (static_cast<std::size_t>(c) << bits_);
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] ^= row[src[k]];
        return;
    }
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] ^= mul_slow(c, src[k]);
}

void Field::scale(std::span<Symbol> v, Symbol c) const {
    if (c == 1) return;
    if (bits_ <= kTableBits) {
        const Symbol* row = tables_->prod.data() + (static_cast<std::size_t>(c) << bits_);
        for (auto& s : v) s = row[s];
        return;
    }
    for (auto& s : v) s = mul_slow(c, s);
}

Symbol Field::sample(Rng& rng, bool nonzero) const {
    // top u bits of a 64-bit draw are uniform over [0, 2^u)
    for (;;) {
        const auto v = static_cast<Symbol>(rng() >> (64 - bits_));
        if (!nonzero || v != 0) return v;
    }
}

Symbol Field::generator() const { return tables_->generator; }

FieldElement::FieldElement(Field field, std::uint32_t value)
    : field_(std::move(field)), value_(static_cast<Symbol>(value)) {
    if (!field_.contains(value))
        throw InvalidParameter("value " + std::to_string(value) + " outside GF(2^" +
                               std::to_string(field_.bits()) + ")");
}

FieldElement FieldElement::inverse() const { return {field_, field_.inv(value_)}; }

FieldElement FieldElement::sample(const Field& field, Rng& rng, bool nonzero) {
    return {field, field.sample(rng, nonzero)};
}

namespace {
void require_same(const FieldElement& a, const FieldElement& b) {
    if (!(a.field() == b.field())) throw SpecMismatch("operands belong to different fields");
}
}  // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    require_same(a, b);
    return {a.field_, a.field_.add(a.value_, b.value_)};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    require_same(a, b);
    return {a.field_, a.field_.mul(a.value_, b.value_)};
}

}  // namespace mmtnc
