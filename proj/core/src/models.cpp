#include "sigvol/models.hpp"

#include <cmath>
#include <fmt/format.h>

#include "sigvol/error.hpp"

namespace sigvol {

std::string DepthValue::to_string() const {
    switch (kind) {
    case Kind::finite: return std::to_string(value);
    case Kind::infinite: return "inf";
    case Kind::kernel_dependent: return "kernel-dependent";
    case Kind::unspecified: return "unspecified";
    }
    return {};
}

double Kernel::operator()(double u) const {
    if (kind == Kind::exponential) return std::exp(-rate * u);
    return std::pow(u, hurst - 0.5);
}

std::vector<double> kernel_taylor(const Kernel& kernel, std::size_t degree) {
    std::vector<double> a(degree + 1, 0.0);
    if (kernel.kind == Kernel::Kind::exponential) {
        double term = 1.0;
        for (std::size_t k = 0; k <= degree; ++k) {
            a[k] = term;
            term *= -kernel.rate / static_cast<double>(k + 1);
        }
        return a;
    }
    if (!(kernel.center > 0.0)) throw InvalidArgument("power kernel expansion needs a positive center");
    // Taylor in (u - c), then expand each (u - c)^k binomially into monomials.
    const double p = kernel.hurst - 0.5;
    const double c = kernel.center;
    double generalised_binom = 1.0;  // binom(p, k)
    for (std::size_t k = 0; k <= degree; ++k) {
        const double b = generalised_binom * std::pow(c, p - static_cast<double>(k));
        double choose = 1.0;  // binom(k, m)
        for (std::size_t m = 0; m <= k; ++m) {
            a[m] += b * choose * std::pow(-c, static_cast<double>(k - m));
            choose *= static_cast<double>(k - m) / static_cast<double>(m + 1);
        }
        generalised_binom *= (p - static_cast<double>(k)) / static_cast<double>(k + 1);
    }
    return a;
}

DualElement kernel_expansion(const Kernel& kernel, std::size_t degree, int letter, double scale, int dimension) {
    if (letter < 1 || letter > dimension)
        throw InvalidArgument(fmt::format("kernel letter {} outside 1..{}", letter, dimension));
    const auto a = kernel_taylor(kernel, degree);
    GradedTensor::Map coeffs;
    double factorial = 1.0;
    for (std::size_t k = 0; k <= degree; ++k) {
        if (k > 0) factorial *= static_cast<double>(k);
        const double v = scale * a[k] * factorial;
        if (v != 0.0) coeffs[Word{static_cast<Letter>(letter)}.concat(Word::repeat(kTimeLetter, k))] = v;
    }
    return DualElement(dimension, std::move(coeffs));
}

namespace {

ModelPreset black_scholes(const PresetParams& p) {
    ModelPreset m;
    m.name = "black_scholes";
    m.ell = DualElement(GradedTensor(p.dimension, 0, {{Word{}, p.sigma}}));
    m.depth = {DepthValue::finite_at(0), DepthValue::finite_at(1)};
    m.riccati_structure = "scalar, constant coefficient";
    m.notes = "constant volatility; dynamically complete";
    return m;
}

ModelPreset first_order(const PresetParams& p) {
    ModelPreset m;
    m.name = "first_order";
    m.ell = DualElement(
        GradedTensor(p.dimension, 1, {{Word{}, p.sigma0}, {Word{static_cast<Letter>(p.letter)}, p.sigma1}}));
    m.depth = {DepthValue::finite_at(1), DepthValue::finite_at(2)};
    m.riccati_structure = "finite level-one subsystem";
    m.notes = "volatility sigma0 + sigma1 W^j; sigma0, sigma1 and eta = e_1 are configuration defaults";
    return m;
}

ModelPreset heston_meta(const PresetParams&) {
    ModelPreset m;
    m.name = "heston_meta";
    m.depth = {DepthValue::finite_at(2), DepthValue::finite_at(4)};
    m.riccati_structure = "classical two-factor affine Riccati";
    m.notes = "metadata only: no explicit signature embedding coefficients are available";
    return m;
}

ModelPreset rough_bergomi_approx(const PresetParams& p) {
    // sigma0 (1 + nu W^H) with W^H from a Taylor-expanded power kernel.
    constexpr double hurst = 0.1, nu = 0.5, horizon = 1.0;
    constexpr std::size_t degree = 4;
    const double kernel_scale = std::sqrt(2.0 * hurst);
    const auto memory = kernel_expansion(Kernel::power(hurst, horizon), degree, p.letter, p.sigma0 * nu * kernel_scale,
                                         p.dimension);
    ModelPreset m;
    m.name = "rough_bergomi_approx";
    m.ell = DualElement(GradedTensor(p.dimension, 0, {{Word{}, p.sigma0}}).with_truncation(degree + 1) +
                        memory.tensor().with_truncation(degree + 1));
    m.depth = {DepthValue::infinite(), DepthValue::infinite()};
    m.riccati_structure = "infinite Volterra/signature system";
    m.notes = fmt::format("linearised volatility with power kernel H={} expanded to degree {} about u={}", hurst, degree,
                          horizon);
    m.warning = "power-kernel polynomial expansion is not uniform near u=0; demonstration of infinite depth only";
    return m;
}

ModelPreset quintic_ou_approx(const PresetParams& p) {
    // sigma0 * poly(X) with X the degree-0 kernel expansion (X = W^j); shuffle powers carry the polynomial.
    constexpr double alpha[] = {1.0, 1.0, 0.0, 0.214, 0.0, 0.227};
    constexpr double factor_scale = 0.3;
    const auto factor = kernel_expansion(Kernel::exponential(0.0), 0, p.letter, factor_scale, p.dimension);
    GradedTensor x = factor.tensor().with_truncation(5);
    GradedTensor power = GradedTensor::unit(p.dimension, 5);
    GradedTensor total(p.dimension, 5);
    for (double a : alpha) {
        if (a != 0.0) total = total + a * power;
        power = shuffle_product(power, x, 5);
    }
    ModelPreset m;
    m.name = "quintic_ou_approx";
    m.ell = DualElement(p.sigma0 * total);
    m.depth = {DepthValue::finite_at(5), DepthValue::unspecified()};
    m.riccati_structure = "finite polynomial subsystem";
    m.notes = "quintic polynomial (1, 1, 0, 0.214, 0, 0.227) of a Brownian-driven factor; static degree not fixed";
    return m;
}

ModelPreset guyon_lekeufack_approx(const PresetParams& p) {
    constexpr double rate = 1.0, beta = 0.1;
    constexpr std::size_t degree = 3;
    const auto trend = kernel_expansion(Kernel::exponential(rate), degree, p.letter, beta, p.dimension);
    ModelPreset m;
    m.name = "guyon_lekeufack_approx";
    m.ell = DualElement(GradedTensor(p.dimension, degree + 1, {{Word{}, p.sigma0}}) + trend.tensor());
    m.depth = {DepthValue::kernel_dependent(), DepthValue::kernel_dependent()};
    m.riccati_structure = "finite or infinite kernel expansion";
    m.notes = fmt::format("sigma0 + beta * exponentially weighted return factor, rate {}, degree {}", rate, degree);
    return m;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"black_scholes",        "first_order",       "heston_meta",
            "rough_bergomi_approx", "quintic_ou_approx", "guyon_lekeufack_approx"};
}

ModelPreset preset(const std::string& name, const PresetParams& params) {
    if (params.dimension < 1) throw InvalidArgument("preset dimension must be >= 1");
    if (params.letter < 1 || params.letter > params.dimension)
        throw InvalidArgument(fmt::format("preset letter {} outside 1..{}", params.letter, params.dimension));
    ModelPreset m;
    if (name == "black_scholes") m = black_scholes(params);
    else if (name == "first_order") m = first_order(params);
    else if (name == "heston_meta") m = heston_meta(params);
    else if (name == "rough_bergomi_approx") m = rough_bergomi_approx(params);
    else if (name == "quintic_ou_approx") m = quintic_ou_approx(params);
    else if (name == "guyon_lekeufack_approx") m = guyon_lekeufack_approx(params);
    else throw InvalidArgument("unknown model preset: '" + name + "'");
    m.eta.assign(static_cast<std::size_t>(params.dimension), 0.0);
    m.eta[static_cast<std::size_t>(params.letter - 1)] = 1.0;
    return m;
}

} // namespace sigvol
