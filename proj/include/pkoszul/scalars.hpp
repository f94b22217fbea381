#pragma once

// Exact arithmetic over Z/p and dense linear algebra on top of it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace pkoszul {

using Residue = std::uint32_t;
using Vector = std::vector<Residue>;

inline constexpr Residue default_characteristic = 32003;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

/// The prime field Z/p. Residues are kept in [0, p).
class PrimeField {
public:
    PrimeField() : PrimeField(default_characteristic) {}

    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (p >= (1u << 31) || !is_prime(p))
            throw input_error("characteristic " + std::to_string(p) + " is not a prime below 2^31");
    }

    std::uint32_t characteristic() const { return p_; }

    Residue reduce(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        return static_cast<Residue>(r < 0 ? r + p_ : r);
    }
    Residue add(Residue a, Residue b) const {
        Residue s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + p_ - b; }
    Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
    Residue mul(Residue a, Residue b) const {
        return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p_);
    }
    /// a + b*c
    Residue fma(Residue a, Residue b, Residue c) const {
        return static_cast<Residue>((a + static_cast<std::uint64_t>(b) * c) % p_);
    }
    Residue pow(Residue a, std::uint64_t e) const {
        Residue r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    Residue inv(Residue a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return pow(a, p_ - 2);
    }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t p_;
};

/// A single element of Z/p carrying its modulus.
class FieldElement {
public:
    FieldElement(std::int64_t v, PrimeField f) : value_(f.reduce(v)), char_(f.characteristic()) {}

    Residue value() const { return value_; }
    std::uint32_t characteristic() const { return char_; }
    PrimeField field() const { return PrimeField(char_); }
    bool is_zero() const { return value_ == 0; }

    friend FieldElement operator+(FieldElement a, FieldElement b) {
        check(a, b);
        return {a.field().add(a.value_, b.value_), a.char_, 0};
    }
    friend FieldElement operator-(FieldElement a, FieldElement b) {
        check(a, b);
        return {a.field().sub(a.value_, b.value_), a.char_, 0};
    }
    friend FieldElement operator*(FieldElement a, FieldElement b) {
        check(a, b);
        return {a.field().mul(a.value_, b.value_), a.char_, 0};
    }
    FieldElement operator-() const { return {PrimeField(char_).neg(value_), char_, 0}; }
    FieldElement inverse() const { return {field().inv(value_), char_, 0}; }

    friend bool operator==(const FieldElement&, const FieldElement&) = default;

private:
    FieldElement(Residue v, std::uint32_t c, int) : value_(v), char_(c) {}
    static void check(const FieldElement& a, const FieldElement& b) {
        if (a.char_ != b.char_) throw std::invalid_argument("mixed characteristics");
    }

    Residue value_;
    std::uint32_t char_;
};

/// Dense row-major matrix over a prime field.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, PrimeField f)
        : rows_(rows), cols_(cols), field_(f), data_(rows * cols, 0) {}

    static Matrix identity(std::size_t n, PrimeField f) {
        Matrix m(n, n, f);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    /// Build from signed integer rows; entries are reduced mod p.
    static Matrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, PrimeField f) {
        std::size_t c = rows.empty() ? 0 : rows.front().size();
        Matrix m(rows.size(), c, f);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) throw input_error("ragged matrix rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = f.reduce(rows[i][j]);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const PrimeField& field() const { return field_; }

    Residue& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Residue> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    Vector column(std::size_t c) const {
        Vector v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
        return v;
    }
    void set_column(std::size_t c, std::span<const Residue> v) {
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
    }

    bool is_zero() const {
        for (Residue x : data_)
            if (x) return false;
        return true;
    }

    const std::vector<Residue>& entries() const { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    PrimeField field_;
    std::vector<Residue> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw input_error("matrix product dimension mismatch");
    const PrimeField& f = a.field();
    Matrix c(a.rows(), b.cols(), f);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Residue x = a(i, k);
            if (!x) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = f.fma(c(i, j), x, b(k, j));
        }
    return c;
}

inline Vector operator*(const Matrix& a, std::span<const Residue> v) {
    if (a.cols() != v.size()) throw input_error("matrix-vector dimension mismatch");
    const PrimeField& f = a.field();
    Vector out(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc = (acc + static_cast<std::uint64_t>(a(i, j)) * v[j]) % f.characteristic();
        out[i] = static_cast<Residue>(acc);
    }
    return out;
}

struct EchelonForm {
    Matrix reduced;
    std::vector<std::size_t> pivots;
};

/// Reduced row echelon form. Pivot search runs left to right over columns and
/// top to bottom within a column, so the result is bit-identical across runs.
inline EchelonForm rref(Matrix m) {
    const PrimeField f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        Residue s = f.inv(m(r, c));
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), s);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Residue factor = f.neg(m(i, c));
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = f.fma(m(i, j), factor, m(r, j));
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

/// Basis of the right null space, one vector per free column (in column order).
inline std::vector<Vector> kernel_basis(const Matrix& m) {
    const PrimeField f = m.field();
    auto [e, pivots] = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vector v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(e(r, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

/// A factorization T*M = R (R in reduced echelon form) reused across many right-hand sides.
class LinearSolver {
public:
    explicit LinearSolver(const Matrix& m) : rows_(m.rows()), cols_(m.cols()), field_(m.field()) {
        Matrix aug(m.rows(), m.cols() + m.rows(), m.field());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
            aug(i, m.cols() + i) = 1;
        }
        auto e = rref(std::move(aug));
        for (auto c : e.pivots) {
            if (c >= m.cols()) break;
            pivots_.push_back(c);
        }
        transform_ = Matrix(rows_, rows_, field_);
        reduced_ = Matrix(rows_, cols_, field_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) reduced_(i, j) = e.reduced(i, j);
            for (std::size_t j = 0; j < rows_; ++j) transform_(i, j) = e.reduced(i, cols_ + j);
        }
    }

    std::size_t rank() const { return pivots_.size(); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    /// Some x with M x = b, or nothing when b is outside the column space.
    std::optional<Vector> solve(std::span<const Residue> b) const {
        if (b.size() != rows_) throw input_error("solve: right-hand side has wrong length");
        Vector c = transform_ * b;
        for (std::size_t r = pivots_.size(); r < rows_; ++r)
            if (c[r] != 0) return std::nullopt;
        Vector x(cols_, 0);
        for (std::size_t r = 0; r < pivots_.size(); ++r) x[pivots_[r]] = c[r];
        return x;
    }

    std::vector<Vector> kernel() const {
        std::vector<bool> is_pivot(cols_, false);
        for (auto c : pivots_) is_pivot[c] = true;
        std::vector<Vector> basis;
        for (std::size_t free = 0; free < cols_; ++free) {
            if (is_pivot[free]) continue;
            Vector v(cols_, 0);
            v[free] = 1;
            for (std::size_t r = 0; r < pivots_.size(); ++r) v[pivots_[r]] = field_.neg(reduced_(r, free));
            basis.push_back(std::move(v));
        }
        return basis;
    }

private:
    std::size_t rows_, cols_;
    PrimeField field_;
    std::vector<std::size_t> pivots_;
    Matrix transform_;
    Matrix reduced_;
};

inline std::optional<Vector> solve(const Matrix& m, std::span<const Residue> b) {
    if (b.size() != m.rows()) throw input_error("solve: right-hand side has wrong length");
    return LinearSolver(m).solve(b);
}

/// Incrementally maintained row space in reduced echelon form. Used to test
/// membership and to extend spanning sets greedily.
class SpanBuilder {
public:
    SpanBuilder(std::size_t dim, PrimeField f) : dim_(dim), field_(f) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }

    /// Reduce v against the current basis; returns the residual.
    Vector reduce(Vector v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            Residue c = v[pivots_[i]];
            if (!c) continue;
            Residue factor = field_.neg(c);
            const Vector& row = rows_[i];
            for (std::size_t j = pivots_[i]; j < dim_; ++j)
                if (row[j]) v[j] = field_.fma(v[j], factor, row[j]);
        }
        return v;
    }

    bool contains(const Vector& v) const {
        Vector r = reduce(v);
        for (Residue x : r)
            if (x) return false;
        return true;
    }

    /// Adds v; returns true iff it enlarged the span.
    bool add(Vector v) {
        v = reduce(std::move(v));
        std::size_t p = 0;
        while (p < dim_ && v[p] == 0) ++p;
        if (p == dim_) return false;
        Residue s = field_.inv(v[p]);
        for (std::size_t j = p; j < dim_; ++j) v[j] = field_.mul(v[j], s);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            Residue c = rows_[i][p];
            if (!c) continue;
            Residue factor = field_.neg(c);
            for (std::size_t j = p; j < dim_; ++j)
                if (v[j]) rows_[i][j] = field_.fma(rows_[i][j], factor, v[j]);
        }
        std::size_t pos = 0;
        while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
        pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), p);
        rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
        return true;
    }

    const std::vector<Vector>& basis() const { return rows_; }

private:
    std::size_t dim_;
    PrimeField field_;
    std::vector<Vector> rows_;
    std::vector<std::size_t> pivots_;
};

}  // namespace pkoszul
