#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sigvol/weight.hpp"
#include "sigvol/word.hpp"

namespace sigvol {

/// Truncated element of the weighted free tensor algebra over R^{d+1}.
///
/// Coefficients live in a sparse word -> real map in canonical word order.
/// Every stored word has length <= truncation() and every letter lies in [0, d].
/// Exact zeros are pruned; no epsilon pruning happens anywhere.
class GradedTensor {
public:
    using Map = std::map<Word, double>;

    GradedTensor(int dimension, std::size_t truncation);
    GradedTensor(int dimension, std::size_t truncation, Map coeffs);

    /// The unit e_∅.
    static GradedTensor unit(int dimension, std::size_t truncation);
    /// c * e_word.
    static GradedTensor basis(int dimension, std::size_t truncation, const Word& word, double c = 1.0);

    int dimension() const noexcept { return dimension_; }
    std::size_t truncation() const noexcept { return truncation_; }
    const Map& coeffs() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    double coeff(const Word& word) const;
    /// Length of the longest stored word; 0 for zero tensors.
    std::size_t degree() const noexcept;

    /// Same coefficients viewed at another truncation. Requires degree() <= n.
    GradedTensor with_truncation(std::size_t n) const;

    GradedTensor operator+(const GradedTensor& other) const;
    GradedTensor operator-(const GradedTensor& other) const;
    GradedTensor operator-() const;
    friend GradedTensor operator*(double s, const GradedTensor& a);

    friend bool operator==(const GradedTensor&, const GradedTensor&) = default;

private:
    int dimension_;
    std::size_t truncation_;
    Map coeffs_;
};

/// Finitely supported linear functional on the tensor algebra; the volatility
/// symbol of a signature model and transform directions are stored this way.
class DualElement {
public:
    explicit DualElement(GradedTensor coeffs) : coeffs_(std::move(coeffs)) {}
    DualElement(int dimension, GradedTensor::Map coeffs);

    static DualElement zero(int dimension) { return DualElement(GradedTensor(dimension, 0)); }

    int dimension() const noexcept { return coeffs_.dimension(); }
    /// Longest word carrying a non-zero coefficient.
    std::size_t degree() const noexcept { return coeffs_.degree(); }
    const GradedTensor& tensor() const noexcept { return coeffs_; }
    double coeff(const Word& word) const { return coeffs_.coeff(word); }
    bool is_zero() const noexcept { return coeffs_.is_zero(); }

    friend bool operator==(const DualElement&, const DualElement&) = default;

private:
    GradedTensor coeffs_;
};

/// Sum over all order-preserving interlacings, truncated at `n`.
GradedTensor shuffle_product(const GradedTensor& a, const GradedTensor& b, std::size_t n);
/// Shuffle of two basis words, untruncated.
GradedTensor::Map shuffle_words(const Word& a, const Word& b);

GradedTensor concat_product(const GradedTensor& a, const GradedTensor& b, std::size_t n);

/// A(e_{i1..in}) = (-1)^n e_{in..i1}.
GradedTensor antipode(const GradedTensor& a);

struct WeightedNorms {
    double norm_w = 0.0;      ///< sum_n w(n) |a_n|
    double norm_2w = 0.0;     ///< (sum_n w(n) |a_n|^2)^{1/2}
    double norm_2winv = 0.0;  ///< (sum_n |a_n|^2 / w(n))^{1/2}
};

/// Weighted norms with |a_n| the Euclidean norm of the level-n coefficients.
WeightedNorms weighted_norms(const GradedTensor& a, const Weight& w);
/// Euclidean norm of each level 0..truncation().
std::vector<double> level_norms(const GradedTensor& a);

double dual_pairing(const DualElement& ell, const GradedTensor& a);

/// Drops every word longer than `n`.
GradedTensor project_leq(const GradedTensor& a, std::size_t n);

struct WeightReport {
    bool unit_at_zero = false;   ///< w(0) == 1
    bool monotone = false;       ///< non-decreasing on [0, n_max]
    double c_w_estimate = 0.0;   ///< max w(m+n) / (w(m) w(n)) over m, n <= n_max
    double growth_r = 0.0;       ///< w(n_max)^{1/n_max}
};

WeightReport weight_check(const Weight& w, std::size_t n_max);

/// Text form: one line per word, `word=1.2 coeff=<17 significant digits>`, canonical order.
std::string to_text(const GradedTensor& a);
/// Parses the text form. Blank lines and lines starting with '#' are ignored;
/// truncation defaults to the longest word read.
GradedTensor parse_tensor(std::string_view text, int dimension);

} // namespace sigvol
