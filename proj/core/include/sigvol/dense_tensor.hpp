#pragma once

#include <span>
#include <vector>

#include "sigvol/tensor.hpp"

namespace sigvol {

/// Level-major dense indexing of all words of length <= N over {0..d}.
///
/// A word i1..in sits at offset(n) + sum_k i_k (d+1)^{n-k}, so the level-n block
/// of a concatenation a_k (x) b_{n-k} is a plain outer product.
class TensorLayout {
public:
    TensorLayout(int dimension, std::size_t truncation);

    int dimension() const noexcept { return dimension_; }
    std::size_t truncation() const noexcept { return truncation_; }
    std::size_t alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return offsets_.back(); }
    std::size_t offset(std::size_t level) const { return offsets_[level]; }
    std::size_t level_size(std::size_t level) const { return offsets_[level + 1] - offsets_[level]; }

    std::size_t index(const Word& w) const;
    Word word(std::size_t index) const;
    std::size_t level_of(std::size_t index) const;

    friend bool operator==(const TensorLayout&, const TensorLayout&) = default;

private:
    int dimension_;
    std::size_t truncation_;
    std::size_t alphabet_;
    std::vector<std::size_t> offsets_;
};

/// Dense <-> sparse conversions. `to_dense` rejects words beyond the layout.
std::vector<double> to_dense(const TensorLayout& layout, const GradedTensor& a);
GradedTensor to_sparse(const TensorLayout& layout, std::span<const double> dense);

/// out = a (x) b truncated to the layout. `out` must not alias the inputs.
void dense_concat(const TensorLayout& layout, std::span<const double> a, std::span<const double> b,
                  std::span<double> out);

/// Tensor exponential of a single increment: level n is dx^{(x)n} / n!.
void dense_segment_exponential(const TensorLayout& layout, std::span<const double> dx, std::span<double> out);

/// A DualElement compiled against a layout for repeated pairing.
class CompiledDual {
public:
    CompiledDual() = default;
    CompiledDual(const TensorLayout& layout, const DualElement& ell);

    double operator()(std::span<const double> dense) const {
        double s = 0.0;
        for (std::size_t i = 0; i < index_.size(); ++i) s += coeff_[i] * dense[index_[i]];
        return s;
    }

private:
    std::vector<std::size_t> index_;
    std::vector<double> coeff_;
};

} // namespace sigvol
