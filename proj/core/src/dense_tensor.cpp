#include "sigvol/dense_tensor.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "sigvol/error.hpp"

namespace sigvol {

TensorLayout::TensorLayout(int dimension, std::size_t truncation)
    : dimension_(dimension), truncation_(truncation), alphabet_(static_cast<std::size_t>(dimension) + 1) {
    if (dimension < 1) throw InvalidArgument("layout dimension must be positive");
    offsets_.reserve(truncation + 2);
    std::size_t off = 0, block = 1;
    for (std::size_t n = 0; n <= truncation; ++n) {
        offsets_.push_back(off);
        off += block;
        block *= alphabet_;
    }
    offsets_.push_back(off);
}

std::size_t TensorLayout::index(const Word& w) const {
    if (w.size() > truncation_)
        throw TruncationError(fmt::format("word {} exceeds truncation {}", w.to_string(), truncation_));
    std::size_t idx = 0;
    for (Letter l : w.letters()) {
        if (l >= alphabet_) throw DimensionMismatch(fmt::format("word {} exceeds d = {}", w.to_string(), dimension_));
        idx = idx * alphabet_ + l;
    }
    return offsets_[w.size()] + idx;
}

std::size_t TensorLayout::level_of(std::size_t index) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

Word TensorLayout::word(std::size_t index) const {
    const std::size_t level = level_of(index);
    std::size_t rem = index - offsets_[level];
    std::vector<Letter> letters(level);
    for (std::size_t k = level; k > 0; --k) {
        letters[k - 1] = static_cast<Letter>(rem % alphabet_);
        rem /= alphabet_;
    }
    return Word(std::move(letters));
}

std::vector<double> to_dense(const TensorLayout& layout, const GradedTensor& a) {
    if (a.dimension() != layout.dimension()) throw DimensionMismatch("to_dense: dimension mismatch");
    std::vector<double> out(layout.size(), 0.0);
    for (const auto& [w, c] : a.coeffs()) out[layout.index(w)] = c;
    return out;
}

GradedTensor to_sparse(const TensorLayout& layout, std::span<const double> dense) {
    GradedTensor::Map m;
    for (std::size_t i = 0; i < layout.size(); ++i)
        if (dense[i] != 0.0) m.emplace_hint(m.end(), layout.word(i), dense[i]);
    return GradedTensor(layout.dimension(), layout.truncation(), std::move(m));
}

void dense_concat(const TensorLayout& layout, std::span<const double> a, std::span<const double> b,
                  std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t N = layout.truncation();
    for (std::size_t n = 0; n <= N; ++n) {
        double* dst = out.data() + layout.offset(n);
        for (std::size_t k = 0; k <= n; ++k) {
            const double* ak = a.data() + layout.offset(k);
            const double* bk = b.data() + layout.offset(n - k);
            const std::size_t na = layout.level_size(k), nb = layout.level_size(n - k);
            for (std::size_t i = 0; i < na; ++i) {
                const double ai = ak[i];
                if (ai == 0.0) continue;
                double* row = dst + i * nb;
                for (std::size_t j = 0; j < nb; ++j) row[j] += ai * bk[j];
            }
        }
    }
}

void dense_segment_exponential(const TensorLayout& layout, std::span<const double> dx, std::span<double> out) {
    const std::size_t A = layout.alphabet();
    out[0] = 1.0;
    for (std::size_t n = 1; n <= layout.truncation(); ++n) {
        const double* prev = out.data() + layout.offset(n - 1);
        double* cur = out.data() + layout.offset(n);
        const std::size_t np = layout.level_size(n - 1);
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t j = 0; j < A; ++j) cur[i * A + j] = prev[i] * dx[j] * inv_n;
    }
}

CompiledDual::CompiledDual(const TensorLayout& layout, const DualElement& ell) {
    if (ell.dimension() != layout.dimension()) throw DimensionMismatch("dual element dimension mismatch");
    if (ell.degree() > layout.truncation())
        throw TruncationError(fmt::format("signature truncation {} below the support length {} of the functional",
                                          layout.truncation(), ell.degree()));
    for (const auto& [w, c] : ell.tensor().coeffs()) {
        index_.push_back(layout.index(w));
        coeff_.push_back(c);
    }
}

} // namespace sigvol
