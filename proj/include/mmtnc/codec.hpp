#pragma once

// Random linear network coding over GF(2^u): coded packets carrying their
// global encoding vector, recoding at intermediate nodes, and an incremental
// reduced row-echelon decoder.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mmtnc/gf.hpp"

namespace mmtnc {

/// Row-major dense matrix of field symbols.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    Symbol& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Symbol operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<Symbol> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Symbol> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    bool is_zero() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Symbol> data_;
};

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);

/// r source messages of L symbols each, coded together.
struct Generation {
    std::size_t r = 1;
    std::size_t payload_len = 1;
    Field field;
    std::uint64_t id = 0;

    /// Throws InvalidParameter unless r >= 1 and L >= 1.
    Generation(std::size_t r, std::size_t payload_len, Field field, std::uint64_t id = 0);

    bool same_as(const Generation& other) const noexcept {
        return id == other.id && r == other.r && payload_len == other.payload_len &&
               field == other.field;
    }
};

struct CodedPacket {
    std::uint64_t generation = 0;
    std::vector<Symbol> coeffs;   // global encoding vector, length r
    std::vector<Symbol> payload;  // length L

    friend bool operator==(const CodedPacket&, const CodedPacket&) = default;
};

/// Shorter messages are zero-padded on the right to L symbols.
std::vector<Symbol> pad_message(std::span<const Symbol> message, std::size_t len);

/// payload = sum_k coeffs[k] * messages[k]. Throws InvalidParameter on
/// dimension mismatch or a message longer than L.
CodedPacket encode_source(const Generation& gen, std::span<const std::vector<Symbol>> messages,
                          std::span<const Symbol> coeffs);

/// The packet carrying exactly source k (unit encoding vector).
CodedPacket source_packet(const Generation& gen, std::size_t k, std::span<const Symbol> message);

/// Applies the same local coefficients to payloads and encoding vectors.
/// Throws InvalidParameter on mixed generations or |local| != |inputs|.
CodedPacket recode(const Generation& gen, std::span<const CodedPacket> inputs,
                   std::span<const Symbol> local);

enum class Reception { Innovative, Redundant };

struct NotYetDecodable {
    std::size_t rank = 0;
};

using SolveResult = std::variant<std::vector<std::vector<Symbol>>, NotYetDecodable>;

/// Received rows kept in reduced row-echelon form. The row space of the
/// coefficient part is the subspace of source combinations this node knows.
class DecoderState {
public:
    explicit DecoderState(Generation gen);

    const Generation& generation() const noexcept { return gen_; }
    std::size_t rank() const noexcept { return rows_.size(); }
    bool full_rank() const noexcept { return rows_.size() == gen_.r; }

    /// Innovative iff the encoding vector was outside the current row space.
    /// Throws InvalidParameter for a packet of another generation.
    Reception insert(const CodedPacket& pkt);

    /// True if source k alone is recoverable (its unit vector lies in the row space).
    bool decodable(std::size_t k) const;
    std::optional<std::vector<Symbol>> source(std::size_t k) const;
    /// All r sources once rank == r.
    SolveResult solve() const;

    /// Coefficient rows of the current basis (r columns each).
    Matrix basis() const;

    /// A random combination of the stored rows; the zero packet when rank is 0.
    CodedPacket random_combination(Rng& rng, bool nonzero_coefficients = false) const;

private:
    struct Row {
        std::size_t pivot;
        std::vector<Symbol> data;  // coeffs followed by payload
    };

    Generation gen_;
    std::vector<Row> rows_;  // sorted by pivot
};

/// Rank of a matrix by Gaussian elimination on a copy.
std::size_t rank_of(const Field& f, Matrix m);

}  // namespace mmtnc
