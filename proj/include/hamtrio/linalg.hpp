#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace hamtrio::linalg {

/// Incremental row echelon basis over an exact field F. Rows are added one at
/// a time and reduced against the current pivots, so huge overdetermined
/// systems only cost memory proportional to the rank.
template <class F>
class EchelonBasis {
public:
    using IsZero = std::function<bool(const F&)>;

    explicit EchelonBasis(std::size_t cols, IsZero is_zero) : cols_(cols), is_zero_(std::move(is_zero)) {}

    std::size_t cols() const { return cols_; }
    std::size_t rank() const { return rows_.size(); }

    /// Reduces and inserts; returns false if the row was dependent.
    bool add(std::vector<F> row) {
        reduce(row);
        std::size_t p = 0;
        while (p < cols_ && is_zero_(row[p])) ++p;
        if (p == cols_) return false;
        F inv = F(1) / row[p];
        for (std::size_t j = p; j < cols_; ++j)
            if (!is_zero_(row[j])) row[j] = row[j] * inv;
        // keep fully reduced: eliminate the new pivot from existing rows
        for (auto& [q, r] : rows_) {
            if (is_zero_(r[p])) continue;
            F f = r[p];
            for (std::size_t j = p; j < cols_; ++j)
                if (!is_zero_(row[j])) r[j] = r[j] - f * row[j];
        }
        auto it = rows_.begin();
        while (it != rows_.end() && it->first < p) ++it;
        rows_.insert(it, {p, std::move(row)});
        return true;
    }

    void reduce(std::vector<F>& row) const {
        for (const auto& [p, r] : rows_) {
            if (is_zero_(row[p])) continue;
            F f = row[p];
            for (std::size_t j = p; j < cols_; ++j)
                if (!is_zero_(r[j])) row[j] = row[j] - f * r[j];
        }
    }

    bool contains(std::vector<F> row) const {
        reduce(row);
        for (const auto& x : row)
            if (!is_zero_(x)) return false;
        return true;
    }

    std::vector<std::size_t> pivots() const {
        std::vector<std::size_t> out;
        for (const auto& [p, r] : rows_) out.push_back(p);
        return out;
    }

    const std::vector<std::pair<std::size_t, std::vector<F>>>& rows() const { return rows_; }

    /// Basis of the solution space of rows * x = 0, one vector per free column.
    std::vector<std::vector<F>> nullspace() const {
        std::vector<bool> pivot(cols_, false);
        for (const auto& [p, r] : rows_) pivot[p] = true;
        std::vector<std::vector<F>> out;
        for (std::size_t free = 0; free < cols_; ++free) {
            if (pivot[free]) continue;
            std::vector<F> v(cols_, F(0));
            v[free] = F(1);
            for (const auto& [p, r] : rows_)
                if (!is_zero_(r[free])) v[p] = F(0) - r[free];
            out.push_back(std::move(v));
        }
        return out;
    }

private:
    std::size_t cols_;
    IsZero is_zero_;
    std::vector<std::pair<std::size_t, std::vector<F>>> rows_;
};

template <class F>
std::vector<std::vector<F>> nullspace(const std::vector<std::vector<F>>& a, std::size_t cols,
                                      typename EchelonBasis<F>::IsZero is_zero) {
    EchelonBasis<F> basis(cols, std::move(is_zero));
    for (const auto& r : a) basis.add(r);
    return basis.nullspace();
}

/// Solves a x = b; returns one particular solution or nullopt if inconsistent.
template <class F>
std::optional<std::vector<F>> solve(const std::vector<std::vector<F>>& a, const std::vector<F>& b, std::size_t cols,
                                    typename EchelonBasis<F>::IsZero is_zero) {
    EchelonBasis<F> basis(cols + 1, is_zero);
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto row = a[i];
        row.push_back(b[i]);
        basis.add(std::move(row));
    }
    std::vector<F> x(cols, F(0));
    for (const auto& [p, r] : basis.rows()) {
        if (p == cols) return std::nullopt;
        x[p] = r[cols];
    }
    return x;
}

/// Determinant by Gaussian elimination (small matrices only).
template <class F>
F determinant(std::vector<std::vector<F>> a, typename EchelonBasis<F>::IsZero is_zero) {
    const std::size_t n = a.size();
    F det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && is_zero(a[p][c])) ++p;
        if (p == n) return F(0);
        if (p != c) {
            std::swap(a[p], a[c]);
            det = F(0) - det;
        }
        det = det * a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (is_zero(a[r][c])) continue;
            F f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[r][j] = a[r][j] - f * a[c][j];
        }
    }
    return det;
}

/// Inverse by Gauss-Jordan; nullopt when singular.
template <class F>
std::optional<std::vector<std::vector<F>>> inverse(std::vector<std::vector<F>> a,
                                                   typename EchelonBasis<F>::IsZero is_zero) {
    const std::size_t n = a.size();
    std::vector<std::vector<F>> inv(n, std::vector<F>(n, F(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = F(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && is_zero(a[p][c])) ++p;
        if (p == n) return std::nullopt;
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        F d = F(1) / a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] = a[c][j] * d;
            inv[c][j] = inv[c][j] * d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || is_zero(a[r][c])) continue;
            F f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] = a[r][j] - f * a[c][j];
                inv[r][j] = inv[r][j] - f * inv[c][j];
            }
        }
    }
    return inv;
}

}  // namespace hamtrio::linalg
