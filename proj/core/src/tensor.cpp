#include "sigvol/tensor.hpp"

#include <cmath>
#include <fmt/format.h>
#include <sstream>

#include "sigvol/error.hpp"

namespace sigvol {

namespace {

void require_same_dimension(const GradedTensor& a, const GradedTensor& b, const char* op) {
    if (a.dimension() != b.dimension())
        throw DimensionMismatch(fmt::format("{}: dimensions {} and {} differ", op, a.dimension(), b.dimension()));
}

void accumulate(GradedTensor::Map& into, const Word& w, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = into.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) into.erase(it);
    }
}

} // namespace

GradedTensor::GradedTensor(int dimension, std::size_t truncation) : dimension_(dimension), truncation_(truncation) {
    if (dimension < 1) throw InvalidArgument("tensor dimension must be positive");
}

GradedTensor::GradedTensor(int dimension, std::size_t truncation, Map coeffs)
    : GradedTensor(dimension, truncation) {
    for (auto it = coeffs.begin(); it != coeffs.end();) {
        const auto& [w, c] = *it;
        if (w.size() > truncation)
            throw TruncationError(fmt::format("word {} longer than truncation {}", w.to_string(), truncation));
        if (w.max_letter() > dimension)
            throw DimensionMismatch(fmt::format("word {} uses a letter above d = {}", w.to_string(), dimension));
        if (!std::isfinite(c)) throw InvalidArgument("non-finite coefficient on word " + w.to_string());
        it = (c == 0.0) ? coeffs.erase(it) : std::next(it);
    }
    coeffs_ = std::move(coeffs);
}

GradedTensor GradedTensor::unit(int dimension, std::size_t truncation) {
    return basis(dimension, truncation, Word{}, 1.0);
}

GradedTensor GradedTensor::basis(int dimension, std::size_t truncation, const Word& word, double c) {
    return GradedTensor(dimension, truncation, Map{{word, c}});
}

double GradedTensor::coeff(const Word& word) const {
    auto it = coeffs_.find(word);
    return it == coeffs_.end() ? 0.0 : it->second;
}

std::size_t GradedTensor::degree() const noexcept {
    return coeffs_.empty() ? 0 : coeffs_.rbegin()->first.size();
}

GradedTensor GradedTensor::with_truncation(std::size_t n) const { return GradedTensor(dimension_, n, coeffs_); }

GradedTensor GradedTensor::operator+(const GradedTensor& other) const {
    require_same_dimension(*this, other, "sum");
    Map out = coeffs_;
    for (const auto& [w, c] : other.coeffs_) accumulate(out, w, c);
    return GradedTensor(dimension_, std::max(truncation_, other.truncation_), std::move(out));
}

GradedTensor GradedTensor::operator-(const GradedTensor& other) const { return *this + (-other); }

GradedTensor GradedTensor::operator-() const { return -1.0 * *this; }

GradedTensor operator*(double s, const GradedTensor& a) {
    GradedTensor::Map out;
    if (s != 0.0)
        for (const auto& [w, c] : a.coeffs_) out.emplace(w, s * c);
    return GradedTensor(a.dimension_, a.truncation_, std::move(out));
}

namespace {
std::size_t longest(const GradedTensor::Map& coeffs) {
    std::size_t deg = 0;
    for (const auto& [w, c] : coeffs)
        if (c != 0.0) deg = std::max(deg, w.size());
    return deg;
}
} // namespace

DualElement::DualElement(int dimension, GradedTensor::Map coeffs)
    : coeffs_(dimension, longest(coeffs), GradedTensor::Map(coeffs)) {}

GradedTensor::Map shuffle_words(const Word& a, const Word& b) {
    // table[i][j] holds the shuffle of the first i letters of a with the first j letters of b.
    const std::size_t m = a.size(), n = b.size();
    std::vector<std::vector<GradedTensor::Map>> table(m + 1, std::vector<GradedTensor::Map>(n + 1));
    table[0][0].emplace(Word{}, 1.0);
    for (std::size_t i = 0; i <= m; ++i) {
        for (std::size_t j = 0; j <= n; ++j) {
            if (i == 0 && j == 0) continue;
            auto& cell = table[i][j];
            if (i > 0)
                for (const auto& [w, c] : table[i - 1][j]) accumulate(cell, w.appended(a[i - 1]), c);
            if (j > 0)
                for (const auto& [w, c] : table[i][j - 1]) accumulate(cell, w.appended(b[j - 1]), c);
        }
    }
    return std::move(table[m][n]);
}

GradedTensor shuffle_product(const GradedTensor& a, const GradedTensor& b, std::size_t n) {
    require_same_dimension(a, b, "shuffle_product");
    GradedTensor::Map out;
    for (const auto& [wa, ca] : a.coeffs()) {
        for (const auto& [wb, cb] : b.coeffs()) {
            if (wa.size() + wb.size() > n) continue;
            for (const auto& [w, c] : shuffle_words(wa, wb)) accumulate(out, w, ca * cb * c);
        }
    }
    return GradedTensor(a.dimension(), n, std::move(out));
}

GradedTensor concat_product(const GradedTensor& a, const GradedTensor& b, std::size_t n) {
    require_same_dimension(a, b, "concat_product");
    GradedTensor::Map out;
    for (const auto& [wa, ca] : a.coeffs()) {
        if (wa.size() > n) continue;
        for (const auto& [wb, cb] : b.coeffs()) {
            if (wa.size() + wb.size() > n) break;  // canonical order: lengths only grow from here
            accumulate(out, wa.concat(wb), ca * cb);
        }
    }
    return GradedTensor(a.dimension(), n, std::move(out));
}

GradedTensor antipode(const GradedTensor& a) {
    GradedTensor::Map out;
    for (const auto& [w, c] : a.coeffs()) out.emplace(w.reversed(), (w.size() % 2 == 0) ? c : -c);
    return GradedTensor(a.dimension(), a.truncation(), std::move(out));
}

std::vector<double> level_norms(const GradedTensor& a) {
    std::vector<double> sq(a.truncation() + 1, 0.0);
    for (const auto& [w, c] : a.coeffs()) sq[w.size()] += c * c;
    for (auto& v : sq) v = std::sqrt(v);
    return sq;
}

WeightedNorms weighted_norms(const GradedTensor& a, const Weight& w) {
    WeightedNorms out;
    const auto levels = level_norms(a);
    double s2w = 0.0, s2winv = 0.0;
    for (std::size_t n = 0; n < levels.size(); ++n) {
        const double wn = w(n), an = levels[n];
        out.norm_w += wn * an;
        s2w += wn * an * an;
        s2winv += an * an / wn;
    }
    out.norm_2w = std::sqrt(s2w);
    out.norm_2winv = std::sqrt(s2winv);
    return out;
}

double dual_pairing(const DualElement& ell, const GradedTensor& a) {
    require_same_dimension(ell.tensor(), a, "dual_pairing");
    double sum = 0.0;
    const auto& lm = ell.tensor().coeffs();
    const auto& am = a.coeffs();
    // Merge-walk both sorted maps.
    auto li = lm.begin();
    auto ai = am.begin();
    while (li != lm.end() && ai != am.end()) {
        if (li->first < ai->first) ++li;
        else if (ai->first < li->first) ++ai;
        else sum += (li++)->second * (ai++)->second;
    }
    return sum;
}

GradedTensor project_leq(const GradedTensor& a, std::size_t n) {
    GradedTensor::Map out;
    for (const auto& [w, c] : a.coeffs())
        if (w.size() <= n) out.emplace(w, c);
    return GradedTensor(a.dimension(), std::min(n, a.truncation()), std::move(out));
}

WeightReport weight_check(const Weight& w, std::size_t n_max) {
    if (n_max < 2) throw InvalidArgument("weight_check needs n_max >= 2");
    WeightReport r;
    r.unit_at_zero = (w(0) == 1.0);
    r.monotone = true;
    for (std::size_t n = 1; n <= n_max; ++n)
        if (w(n) < w(n - 1)) r.monotone = false;
    for (std::size_t m = 0; m <= n_max; ++m)
        for (std::size_t n = 0; n <= n_max; ++n)
            r.c_w_estimate = std::max(r.c_w_estimate, w(m + n) / (w(m) * w(n)));
    r.growth_r = std::pow(w(n_max), 1.0 / static_cast<double>(n_max));
    return r;
}

std::string to_text(const GradedTensor& a) {
    std::string out;
    for (const auto& [w, c] : a.coeffs()) out += fmt::format("word={} coeff={:.17g}\n", w.to_string(), c);
    return out;
}

GradedTensor parse_tensor(std::string_view text, int dimension) {
    GradedTensor::Map coeffs;
    std::size_t max_len = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
            continue;
        auto wpos = line.find("word=");
        auto cpos = line.find("coeff=");
        if (wpos == std::string::npos || cpos == std::string::npos || cpos < wpos)
            throw InvalidArgument(fmt::format("tensor line {}: expected 'word=... coeff=...'", lineno));
        Word w = Word::parse(std::string_view(line).substr(wpos + 5, cpos - wpos - 5));
        double c = 0.0;
        try {
            std::size_t used = 0;
            const std::string num = line.substr(cpos + 6);
            c = std::stod(num, &used);
            if (num.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InvalidArgument(fmt::format("tensor line {}: bad coefficient", lineno));
        }
        if (coeffs.count(w)) throw InvalidArgument(fmt::format("tensor line {}: duplicate word {}", lineno, w.to_string()));
        max_len = std::max(max_len, w.size());
        coeffs.emplace(std::move(w), c);
    }
    return GradedTensor(dimension, max_len, std::move(coeffs));
}

} // namespace sigvol
