#ifndef R2POLY_F2_HPP
#define R2POLY_F2_HPP

#include <atomic>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace r2poly {

/// Dense matrix over the two-element field, row-major, one bit per entry.
/// Bits past `cols` in the last word of each row are always zero.
class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), stride_((cols + 63) / 64), data_(rows * stride_, 0)
    {
    }

    static F2Matrix identity(std::size_t n)
    {
        F2Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.set(i, i, true);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t stride() const { return stride_; }

    bool get(std::size_t i, std::size_t j) const { return (data_[i * stride_ + (j >> 6)] >> (j & 63)) & 1u; }

    void set(std::size_t i, std::size_t j, bool v)
    {
        check(i, j);
        auto& w = data_[i * stride_ + (j >> 6)];
        const std::uint64_t bit = std::uint64_t{1} << (j & 63);
        w = v ? (w | bit) : (w & ~bit);
    }

    void flip(std::size_t i, std::size_t j)
    {
        check(i, j);
        data_[i * stride_ + (j >> 6)] ^= std::uint64_t{1} << (j & 63);
    }

    std::span<const std::uint64_t> row(std::size_t i) const { return {data_.data() + i * stride_, stride_}; }
    std::span<std::uint64_t> row(std::size_t i) { return {data_.data() + i * stride_, stride_}; }

    bool row_is_zero(std::size_t i) const
    {
        for (auto w : row(i))
            if (w)
                return false;
        return true;
    }

    /// dst ^= src, row-wise.
    void xor_row(std::size_t dst, std::size_t src)
    {
        std::uint64_t* d = data_.data() + dst * stride_;
        const std::uint64_t* s = data_.data() + src * stride_;
        for (std::size_t w = 0; w < stride_; ++w)
            d[w] ^= s[w];
    }

    std::size_t ones() const
    {
        std::size_t c = 0;
        for (auto w : data_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    friend bool operator==(const F2Matrix&, const F2Matrix&) = default;

private:
    void check(std::size_t i, std::size_t j) const
    {
        if (i >= rows_ || j >= cols_)
            throw InvalidInput("matrix index out of range");
    }

    std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<std::uint64_t> data_;
};

/// Rank by Gaussian elimination on packed rows.
inline std::size_t rank(F2Matrix m)
{
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        const std::size_t word = c >> 6;
        const std::uint64_t bit = std::uint64_t{1} << (c & 63);
        std::size_t pivot = r;
        while (pivot < m.rows() && !(m.row(pivot)[word] & bit))
            ++pivot;
        if (pivot == m.rows())
            continue;
        if (pivot != r) {
            auto a = m.row(pivot), b = m.row(r);
            for (std::size_t w = 0; w < m.stride(); ++w)
                std::swap(a[w], b[w]);
        }
        for (std::size_t i = r + 1; i < m.rows(); ++i)
            if (m.row(i)[word] & bit)
                m.xor_row(i, r);
        ++r;
    }
    return r;
}

/// n x n symmetric zero-diagonal adjacency of (V, S).
inline F2Matrix adjacency(const Graph& g, const EdgeSubset& s)
{
    F2Matrix m(g.n(), g.n());
    for (EdgeId e = 0; e < g.m(); ++e)
        if (s.contains(e)) {
            auto [a, b] = g.edge(e);
            m.set(a, b, true);
            m.set(b, a, true);
        }
    return m;
}

/// |U| x |W| matrix, entry (u, w) = 1 iff {u, w} is in S.
inline F2Matrix bipartite_adjacency(const BipartiteGraph& g, const EdgeSubset& s)
{
    F2Matrix m(g.u_side().size(), g.w_side().size());
    for (EdgeId e = 0; e < g.m(); ++e)
        if (s.contains(e))
            m.set(g.side_index(g.u_end(e)), g.side_index(g.w_end(e)), true);
    return m;
}

namespace testing_hooks {
/// When set, RankProfile::flip_entry skips re-elimination. Self-test only.
inline std::atomic<bool> corrupt_flip_entry{false};
} // namespace testing_hooks

/// Maintained elimination state of a matrix A supporting single-entry flips.
///
/// Keeps R = T * A with T invertible and R fully reduced: every nonzero row of
/// R owns one pivot column that is zero in every other row. Flipping A(i, j)
/// toggles column j of R in exactly the rows r with T(r, i) = 1; only those
/// rows are re-eliminated.
class RankProfile {
public:
    enum class UpdateMode { Incremental, FromScratch };

    RankProfile() = default;

    explicit RankProfile(F2Matrix source, UpdateMode mode = UpdateMode::Incremental)
        : mode_(mode), a_(std::move(source))
    {
        rebuild();
    }

    std::size_t rank() const { return rank_; }
    const F2Matrix& source() const { return a_; }
    std::size_t rows() const { return a_.rows(); }
    std::size_t cols() const { return a_.cols(); }
    UpdateMode mode() const { return mode_; }

    /// Flips A(i, j) and returns the new rank.
    std::size_t flip_entry(std::size_t i, std::size_t j)
    {
        a_.flip(i, j);
        if (mode_ == UpdateMode::FromScratch) {
            rebuild();
            return rank_;
        }
        dirty_.clear();
        for (std::size_t r = 0; r < a_.rows(); ++r)
            if (t_.get(r, i)) {
                r_.flip(r, j);
                dirty_.push_back(r);
            }
        if (!testing_hooks::corrupt_flip_entry.load(std::memory_order_relaxed))
            reinsert();
        return rank_;
    }

    /// Rows of the reduced basis (the nonzero rows of R).
    F2Matrix basis() const
    {
        F2Matrix out(rank_, a_.cols());
        std::size_t k = 0;
        for (std::size_t r = 0; r < r_.rows(); ++r)
            if (pivot_of_row_[r] != npos) {
                for (std::size_t j = 0; j < a_.cols(); ++j)
                    if (r_.get(r, j))
                        out.set(k, j, true);
                ++k;
            }
        return out;
    }

    /// Rows of T whose R row is zero; they span the left null space of A.
    F2Matrix left_null_basis() const
    {
        F2Matrix out(a_.rows() - rank_, a_.rows());
        std::size_t k = 0;
        for (std::size_t r = 0; r < r_.rows(); ++r)
            if (pivot_of_row_[r] == npos) {
                for (std::size_t j = 0; j < a_.rows(); ++j)
                    if (t_.get(r, j))
                        out.set(k, j, true);
                ++k;
            }
        return out;
    }

    /// Full consistency audit: R = T*A, reduced form, and rank equals a
    /// from-scratch elimination. Quadratic-to-cubic cost; for tests.
    bool consistent() const
    {
        if (rank_ != r2poly::rank(a_))
            return false;
        for (std::size_t r = 0; r < a_.rows(); ++r) {
            std::vector<std::uint64_t> acc(a_.stride(), 0);
            for (std::size_t i = 0; i < a_.rows(); ++i)
                if (t_.get(r, i))
                    for (std::size_t w = 0; w < a_.stride(); ++w)
                        acc[w] ^= a_.row(i)[w];
            for (std::size_t w = 0; w < a_.stride(); ++w)
                if (acc[w] != r_.row(r)[w])
                    return false;
            const bool zero = r_.row_is_zero(r);
            if (zero != (pivot_of_row_[r] == npos))
                return false;
            if (!zero)
                for (std::size_t x = 0; x < a_.rows(); ++x)
                    if (x != r && r_.get(x, pivot_of_row_[r]))
                        return false;
        }
        return true;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    void rebuild()
    {
        r_ = a_;
        t_ = F2Matrix::identity(a_.rows());
        pivot_of_row_.assign(a_.rows(), npos);
        owner_of_col_.assign(a_.cols(), npos);
        owned_.assign(a_.stride(), 0);
        rank_ = 0;
        dirty_.resize(a_.rows());
        for (std::size_t r = 0; r < a_.rows(); ++r)
            dirty_[r] = r;
        reinsert();
    }

    void release(std::size_t r)
    {
        const std::size_t c = pivot_of_row_[r];
        if (c == npos)
            return;
        pivot_of_row_[r] = npos;
        owner_of_col_[c] = npos;
        owned_[c >> 6] &= ~(std::uint64_t{1} << (c & 63));
        --rank_;
    }

    void reinsert()
    {
        for (std::size_t r : dirty_)
            release(r);
        const std::size_t stride = a_.stride();
        for (std::size_t r : dirty_) {
            // Reduce against owned pivot columns; XORing an owner row never
            // introduces another owned column, so one sweep suffices.
            for (std::size_t w = 0; w < stride; ++w) {
                std::uint64_t bits = r_.row(r)[w] & owned_[w];
                while (bits) {
                    const std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
                    bits &= bits - 1;
                    const std::size_t o = owner_of_col_[c];
                    r_.xor_row(r, o);
                    t_.xor_row(r, o);
                }
            }
            std::size_t c = npos;
            for (std::size_t w = 0; w < stride && c == npos; ++w)
                if (auto bits = r_.row(r)[w])
                    c = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
            if (c == npos)
                continue;
            pivot_of_row_[r] = c;
            owner_of_col_[c] = r;
            owned_[c >> 6] |= std::uint64_t{1} << (c & 63);
            ++rank_;
            const std::size_t word = c >> 6;
            const std::uint64_t bit = std::uint64_t{1} << (c & 63);
            for (std::size_t x = 0; x < a_.rows(); ++x)
                if (x != r && (r_.row(x)[word] & bit)) {
                    r_.xor_row(x, r);
                    t_.xor_row(x, r);
                }
        }
    }

    UpdateMode mode_ = UpdateMode::Incremental;
    F2Matrix a_, r_, t_;
    std::vector<std::size_t> pivot_of_row_, owner_of_col_;
    std::vector<std::uint64_t> owned_;
    std::vector<std::size_t> dirty_;
    std::size_t rank_ = 0;
};

/// Basis (as rows) of { beta : beta^T M = 0 }; dimension rows - rank.
inline F2Matrix left_nullspace(const F2Matrix& m) { return RankProfile(m).left_null_basis(); }

/// Uniform vector of the left null space: each basis vector enters a random
/// combination with probability 1/2.
template <class Urbg>
std::vector<bool> sample_left_nullspace(const F2Matrix& m, Urbg& rng)
{
    F2Matrix basis = left_nullspace(m);
    std::vector<bool> out(m.rows(), false);
    for (std::size_t k = 0; k < basis.rows(); ++k)
        if ((rng() >> 63) != 0)
            for (std::size_t i = 0; i < m.rows(); ++i)
                if (basis.get(k, i))
                    out[i] = !out[i];
    return out;
}

} // namespace r2poly

#endif // R2POLY_F2_HPP
