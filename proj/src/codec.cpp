#include "mmtnc/codec.hpp"

#include <algorithm>
#include <string>

#include "mmtnc/error.hpp"

namespace mmtnc {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
    return m;
}

bool Matrix::is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](Symbol s) { return s == 0; });
}

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InvalidParameter("matrix product: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k)
            if (auto c = a(r, k); c != 0) f.axpy(out.row(r), c, b.row(k));
    return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidParameter("matrix sum: shapes differ");
    Matrix out = a;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) ^= b(r, c);
    return out;
}

Generation::Generation(std::size_t r_, std::size_t payload_len_, Field field_, std::uint64_t id_)
    : r(r_), payload_len(payload_len_), field(std::move(field_)), id(id_) {
    if (r < 1) throw InvalidParameter("generation needs r >= 1");
    if (payload_len < 1) throw InvalidParameter("generation needs payload length >= 1");
}

std::vector<Symbol> pad_message(std::span<const Symbol> message, std::size_t len) {
    if (message.size() > len)
        throw InvalidParameter("message of " + std::to_string(message.size()) +
                               " symbols exceeds payload length " + std::to_string(len));
    std::vector<Symbol> out(len, 0);
    std::copy(message.begin(), message.end(), out.begin());
    return out;
}

namespace {

void check_symbols(const Field& f, std::span<const Symbol> v) {
    for (auto s : v)
        if (!f.contains(s)) throw InvalidParameter("symbol outside the field");
}

}  // namespace

CodedPacket encode_source(const Generation& gen, std::span<const std::vector<Symbol>> messages,
                          std::span<const Symbol> coeffs) {
    if (messages.size() != gen.r || coeffs.size() != gen.r)
        throw InvalidParameter("encode_source: expected " + std::to_string(gen.r) +
                               " messages and coefficients");
    check_symbols(gen.field, coeffs);
    CodedPacket pkt{gen.id, {coeffs.begin(), coeffs.end()}, std::vector<Symbol>(gen.payload_len, 0)};
    for (std::size_t k = 0; k < gen.r; ++k) {
        check_symbols(gen.field, messages[k]);
        auto padded = pad_message(messages[k], gen.payload_len);
        gen.field.axpy(pkt.payload, coeffs[k], padded);
    }
    return pkt;
}

CodedPacket source_packet(const Generation& gen, std::size_t k, std::span<const Symbol> message) {
    if (k >= gen.r) throw InvalidParameter("source index out of range");
    CodedPacket pkt{gen.id, std::vector<Symbol>(gen.r, 0), pad_message(message, gen.payload_len)};
    pkt.coeffs[k] = 1;
    return pkt;
}

CodedPacket recode(const Generation& gen, std::span<const CodedPacket> inputs,
                   std::span<const Symbol> local) {
    if (inputs.size() != local.size())
        throw InvalidParameter("recode: one local coefficient per input required");
    check_symbols(gen.field, local);
    CodedPacket out{gen.id, std::vector<Symbol>(gen.r, 0), std::vector<Symbol>(gen.payload_len, 0)};
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const auto& in = inputs[k];
        if (in.generation != gen.id || in.coeffs.size() != gen.r ||
            in.payload.size() != gen.payload_len)
            throw InvalidParameter("recode: input from another generation");
        gen.field.axpy(out.coeffs, local[k], in.coeffs);
        gen.field.axpy(out.payload, local[k], in.payload);
    }
    return out;
}

DecoderState::DecoderState(Generation gen) : gen_(std::move(gen)) {}

Reception DecoderState::insert(const CodedPacket& pkt) {
    const std::size_t r = gen_.r;
    if (pkt.generation != gen_.id || pkt.coeffs.size() != r || pkt.payload.size() != gen_.payload_len)
        throw InvalidParameter("decoder_insert: packet from another generation");
    const Field& f = gen_.field;

    std::vector<Symbol> v;
    v.reserve(r + gen_.payload_len);
    v.insert(v.end(), pkt.coeffs.begin(), pkt.coeffs.end());
    v.insert(v.end(), pkt.payload.begin(), pkt.payload.end());

    for (const auto& row : rows_)
        if (auto c = v[row.pivot]; c != 0) f.axpy(v, c, row.data);

    std::size_t pivot = 0;
    while (pivot < r && v[pivot] == 0) ++pivot;
    if (pivot == r) return Reception::Redundant;

    f.scale(v, f.inv(v[pivot]));
    for (auto& row : rows_)
        if (auto c = row.data[pivot]; c != 0) f.axpy(row.data, c, v);

    auto pos = std::lower_bound(rows_.begin(), rows_.end(), pivot,
                                [](const Row& row, std::size_t p) { return row.pivot < p; });
    rows_.insert(pos, Row{pivot, std::move(v)});
    return Reception::Innovative;
}

bool DecoderState::decodable(std::size_t k) const {
    if (k >= gen_.r) throw InvalidParameter("source index out of range");
    for (const auto& row : rows_) {
        if (row.pivot != k) continue;
        for (std::size_t c = 0; c < gen_.r; ++c)
            if (c != k && row.data[c] != 0) return false;
        return true;
    }
    return false;
}

std::optional<std::vector<Symbol>> DecoderState::source(std::size_t k) const {
    if (!decodable(k)) return std::nullopt;
    for (const auto& row : rows_)
        if (row.pivot == k) return std::vector<Symbol>(row.data.begin() + gen_.r, row.data.end());
    return std::nullopt;
}

SolveResult DecoderState::solve() const {
    if (!full_rank()) return NotYetDecodable{rank()};
    // full rank in reduced row-echelon form: the coefficient block is the identity
    std::vector<std::vector<Symbol>> out;
    out.reserve(gen_.r);
    for (const auto& row : rows_) out.emplace_back(row.data.begin() + gen_.r, row.data.end());
    return out;
}

Matrix DecoderState::basis() const {
    Matrix m(rows_.size(), gen_.r);
    for (std::size_t k = 0; k < rows_.size(); ++k)
        std::copy_n(rows_[k].data.begin(), gen_.r, m.row(k).begin());
    return m;
}

CodedPacket DecoderState::random_combination(Rng& rng, bool nonzero_coefficients) const {
    const Field& f = gen_.field;
    std::vector<Symbol> acc(gen_.r + gen_.payload_len, 0);
    for (const auto& row : rows_) f.axpy(acc, f.sample(rng, nonzero_coefficients), row.data);
    CodedPacket pkt{gen_.id, {}, {}};
    pkt.coeffs.assign(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(gen_.r));
    pkt.payload.assign(acc.begin() + static_cast<std::ptrdiff_t>(gen_.r), acc.end());
    return pkt;
}

std::size_t rank_of(const Field& f, Matrix m) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        std::size_t pick = rank;
        while (pick < m.rows() && m(pick, col) == 0) ++pick;
        if (pick == m.rows()) continue;
        if (pick != rank)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pick, c), m(rank, c));
        const Symbol inv = f.inv(m(rank, col));
        f.scale(m.row(rank), inv);
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != rank && m(r, col) != 0) f.axpy(m.row(r), m(r, col), m.row(rank));
        ++rank;
    }
    return rank;
}

}  // namespace mmtnc
