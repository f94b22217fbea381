#pragma once

// Degree-truncated graded algebras given by a basis per degree and structure
// constants. Both Groebner-derived algebras and algebras ingested from tables
// end up in this representation, and the resolution engine only sees this.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalars.hpp"

namespace pkoszul {

/// Sparse vector as (index, coefficient) pairs sorted by index, no zeros.
using SparseVector = std::vector<std::pair<int, Residue>>;

struct BasisElement {
    int source = 0;
    int target = 0;
    std::string label;
};

/// Facts that bound generator degrees of resolutions beyond the truncation.
struct GrowthBounds {
    /// A_k = 0 for all k > top_degree (known only when some A_k vanishes below the truncation).
    std::optional<int> top_degree;
    /// Maximal leading-word length of a Groebner basis known to be complete in all degrees.
    std::optional<int> complete_tip_degree;
    /// A_k = A_1 * A_{k-1} for every k up to the truncation.
    bool generated_in_degree_one = true;
};

class GradedAlgebraData {
public:
    GradedAlgebraData() = default;

    /// products[k][l][a * dim(l) + b] is the product of basis element a of degree k
    /// with basis element b of degree l, expanded in the degree k+l basis (k+l <= max degree).
    GradedAlgebraData(PrimeField f, std::vector<std::string> vertex_labels,
                      std::vector<std::vector<BasisElement>> basis,
                      std::vector<std::vector<std::vector<SparseVector>>> products)
        : field_(f),
          vertices_(std::move(vertex_labels)),
          basis_(std::move(basis)),
          products_(std::move(products)) {
        if (basis_.empty()) throw input_error("algebra needs a degree-0 part");
        index();
        bounds_.generated_in_degree_one = check_generated_in_degree_one();
        for (int k = 1; k <= max_degree(); ++k)
            if (dim(k) == 0 && bounds_.generated_in_degree_one) {
                bounds_.top_degree = k - 1;
                break;
            }
    }

    const PrimeField& field() const { return field_; }
    int max_degree() const { return static_cast<int>(basis_.size()) - 1; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    const std::vector<std::string>& vertex_labels() const { return vertices_; }
    const std::string& vertex_label(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }

    int dim(int k) const {
        return k < 0 || k > max_degree() ? 0 : static_cast<int>(basis_[static_cast<std::size_t>(k)].size());
    }
    const std::vector<BasisElement>& basis(int k) const { return basis_.at(static_cast<std::size_t>(k)); }
    const BasisElement& element(int k, int i) const { return basis(k).at(static_cast<std::size_t>(i)); }

    /// Basis indices of degree k from vertex s to vertex t, in basis order.
    const std::vector<int>& between(int k, int s, int t) const {
        return pairs_[static_cast<std::size_t>(k)][static_cast<std::size_t>(s * vertex_count() + t)];
    }
    /// Basis indices of degree k starting at vertex s, in basis order.
    const std::vector<int>& starting_at(int k, int s) const {
        return from_[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)];
    }
    int position_from(int k, int i) const { return from_pos_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]; }

    /// Position of basis element i of degree k inside its between() list.
    int position_between(int k, int i) const { return pair_pos_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]; }

    const SparseVector& multiply(int k, int a, int l, int b) const {
        if (k < 0 || l < 0 || k + l > max_degree())
            throw input_error("product in degree " + std::to_string(k + l) + " is beyond the truncation " +
                              std::to_string(max_degree()));
        return products_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]
                        [static_cast<std::size_t>(a) * static_cast<std::size_t>(dim(l)) + static_cast<std::size_t>(b)];
    }

    /// Index of the idempotent of vertex v in degree 0.
    int idempotent(int v) const { return between(0, v, v).front(); }

    const GrowthBounds& bounds() const { return bounds_; }
    void set_complete_tip_degree(std::optional<int> g) { bounds_.complete_tip_degree = g; }

    const std::vector<std::vector<std::vector<SparseVector>>>& product_tables() const { return products_; }

    /// Restriction to degrees <= d.
    GradedAlgebraData truncated(int d) const {
        if (d >= max_degree()) return *this;
        std::vector<std::vector<BasisElement>> b(basis_.begin(), basis_.begin() + d + 1);
        std::vector<std::vector<std::vector<SparseVector>>> p(static_cast<std::size_t>(d) + 1);
        for (int k = 0; k <= d; ++k)
            p[static_cast<std::size_t>(k)].assign(products_[static_cast<std::size_t>(k)].begin(),
                                                  products_[static_cast<std::size_t>(k)].begin() + (d - k) + 1);
        GradedAlgebraData r(field_, vertices_, std::move(b), std::move(p));
        r.bounds_.complete_tip_degree = bounds_.complete_tip_degree;
        if (!r.bounds_.top_degree) r.bounds_.top_degree = bounds_.top_degree;
        return r;
    }

    /// First (i,j,k) basis triple (as degree/index pairs) where (ab)c != a(bc), if any.
    std::optional<std::array<std::pair<int, int>, 3>> associativity_violation() const {
        const int D = max_degree();
        for (int i = 0; i <= D; ++i)
            for (int j = 0; i + j <= D; ++j)
                for (int k = 0; i + j + k <= D; ++k)
                    for (int a = 0; a < dim(i); ++a)
                        for (int b = 0; b < dim(j); ++b)
                            for (int c = 0; c < dim(k); ++c) {
                                auto left = times_right(multiply(i, a, j, b), i + j, k, c);
                                auto right = times_left(i, a, multiply(j, b, k, c), j + k);
                                if (left != right) return std::array{std::pair{i, a}, std::pair{j, b}, std::pair{k, c}};
                            }
        return std::nullopt;
    }

    /// (sum x_e e) * basis(l, c), all e of degree k
    SparseVector times_right(const SparseVector& x, int k, int l, int c) const {
        std::vector<Residue> acc(static_cast<std::size_t>(dim(k + l)), 0);
        for (auto [e, coeff] : x)
            for (auto [r, v] : multiply(k, e, l, c)) acc[static_cast<std::size_t>(r)] = field_.fma(acc[static_cast<std::size_t>(r)], coeff, v);
        return sparse(acc);
    }
    /// basis(k, a) * (sum x_e e), all e of degree l
    SparseVector times_left(int k, int a, const SparseVector& x, int l) const {
        std::vector<Residue> acc(static_cast<std::size_t>(dim(k + l)), 0);
        for (auto [e, coeff] : x)
            for (auto [r, v] : multiply(k, a, l, e)) acc[static_cast<std::size_t>(r)] = field_.fma(acc[static_cast<std::size_t>(r)], coeff, v);
        return sparse(acc);
    }

    static SparseVector sparse(const std::vector<Residue>& dense) {
        SparseVector s;
        for (std::size_t i = 0; i < dense.size(); ++i)
            if (dense[i]) s.emplace_back(static_cast<int>(i), dense[i]);
        return s;
    }

private:
    void index() {
        const int n = vertex_count();
        const int D = max_degree();
        if (static_cast<int>(products_.size()) != D + 1) throw input_error("product table has wrong number of degrees");
        pairs_.assign(static_cast<std::size_t>(D) + 1, std::vector<std::vector<int>>(static_cast<std::size_t>(n * n)));
        pair_pos_.assign(static_cast<std::size_t>(D) + 1, {});
        from_.assign(static_cast<std::size_t>(D) + 1, std::vector<std::vector<int>>(static_cast<std::size_t>(n)));
        from_pos_.assign(static_cast<std::size_t>(D) + 1, {});
        for (int k = 0; k <= D; ++k) {
            auto& pos = pair_pos_[static_cast<std::size_t>(k)];
            pos.resize(basis_[static_cast<std::size_t>(k)].size());
            for (int i = 0; i < dim(k); ++i) {
                const auto& e = element(k, i);
                if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n)
                    throw input_error("basis element with unknown vertex in degree " + std::to_string(k));
                auto& list = pairs_[static_cast<std::size_t>(k)][static_cast<std::size_t>(e.source * n + e.target)];
                pos[static_cast<std::size_t>(i)] = static_cast<int>(list.size());
                list.push_back(i);
                auto& fl = from_[static_cast<std::size_t>(k)][static_cast<std::size_t>(e.source)];
                from_pos_[static_cast<std::size_t>(k)].push_back(static_cast<int>(fl.size()));
                fl.push_back(i);
            }
            if (static_cast<int>(products_[static_cast<std::size_t>(k)].size()) != D - k + 1)
                throw input_error("product table row " + std::to_string(k) + " has wrong length");
            for (int l = 0; k + l <= D; ++l)
                if (products_[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)].size() !=
                    static_cast<std::size_t>(dim(k)) * static_cast<std::size_t>(dim(l)))
                    throw input_error("product table block (" + std::to_string(k) + "," + std::to_string(l) + ") has wrong size");
        }
        if (dim(0) != n) throw input_error("degree-0 part must consist of one idempotent per vertex");
        for (int v = 0; v < n; ++v)
            if (between(0, v, v).size() != 1) throw input_error("vertex " + vertex_label(v) + " lacks an idempotent");
    }

    bool check_generated_in_degree_one() const {
        for (int k = 2; k <= max_degree(); ++k) {
            SpanBuilder span(static_cast<std::size_t>(dim(k)), field_);
            for (int a = 0; a < dim(1); ++a)
                for (int b = 0; b < dim(k - 1); ++b) {
                    std::vector<Residue> v(static_cast<std::size_t>(dim(k)), 0);
                    for (auto [r, c] : multiply(1, a, k - 1, b)) v[static_cast<std::size_t>(r)] = c;
                    span.add(std::move(v));
                }
            if (static_cast<int>(span.rank()) != dim(k)) return false;
        }
        return true;
    }

    PrimeField field_;
    std::vector<std::string> vertices_;
    std::vector<std::vector<BasisElement>> basis_;
    std::vector<std::vector<std::vector<SparseVector>>> products_;
    std::vector<std::vector<std::vector<int>>> pairs_;
    std::vector<std::vector<int>> pair_pos_;
    std::vector<std::vector<std::vector<int>>> from_;
    std::vector<std::vector<int>> from_pos_;
    GrowthBounds bounds_;
};

}  // namespace pkoszul
