#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sigvol/tensor.hpp"
#include "sigvol/weight.hpp"

namespace sigvol {

/// One entry of the completeness-depth table: a finite value, +inf, or a qualitative tag.
struct DepthValue {
    enum class Kind { finite, infinite, kernel_dependent, unspecified };
    Kind kind = Kind::unspecified;
    std::size_t value = 0;

    static DepthValue finite_at(std::size_t n) { return {Kind::finite, n}; }
    static DepthValue infinite() { return {Kind::infinite, 0}; }
    static DepthValue kernel_dependent() { return {Kind::kernel_dependent, 0}; }
    static DepthValue unspecified() { return {Kind::unspecified, 0}; }

    std::string to_string() const;
    friend bool operator==(const DepthValue&, const DepthValue&) = default;
};

struct DepthMeta {
    DepthValue completeness;     ///< price-filtration completeness depth
    DepthValue polynomial_degree;  ///< terminal-price polynomial degree of the static completion
    friend bool operator==(const DepthMeta&, const DepthMeta&) = default;
};

struct ModelPreset {
    std::string name;
    std::optional<DualElement> ell;  ///< absent for metadata-only entries
    std::vector<double> eta;
    Weight weight = Weight::geometric(2.0);
    DepthMeta depth;
    std::string riccati_structure;
    std::string notes;
    std::string warning;  ///< non-empty when the expansion is a known poor approximation

    bool metadata_only() const noexcept { return !ell.has_value(); }
};

/// Tunables for the presets; defaults are configuration, not ground truth.
struct PresetParams {
    double sigma = 0.2;   ///< Black-Scholes volatility
    double sigma0 = 0.2;  ///< first-order level
    double sigma1 = 0.1;  ///< first-order loading on the Brownian letter
    int letter = 1;
    int dimension = 1;
};

ModelPreset preset(const std::string& name, const PresetParams& params = {});
std::vector<std::string> preset_names();

struct Kernel {
    enum class Kind { exponential, power };
    Kind kind = Kind::exponential;
    double rate = 1.0;    ///< exponential: K(u) = exp(-rate u)
    double hurst = 0.1;   ///< power: K(u) = u^{H - 1/2}
    double center = 1.0;  ///< power: Taylor expansion point

    static Kernel exponential(double rate) { return {Kind::exponential, rate, 0.1, 1.0}; }
    static Kernel power(double hurst, double center) { return {Kind::power, 1.0, hurst, center}; }
    /// Pointwise kernel value.
    double operator()(double u) const;
};

/// Monomial coefficients a_0..a_degree of the kernel's Taylor polynomial in u.
std::vector<double> kernel_taylor(const Kernel& kernel, std::size_t degree);

/// Linear functional whose pairing with the prolonged signature approximates
/// scale * int_0^t K(t-s) dW^letter_s, using int (t-s)^k dW = k! <e_{letter 0..0}, W^_t>.
DualElement kernel_expansion(const Kernel& kernel, std::size_t degree, int letter, double scale, int dimension = 1);

} // namespace sigvol
