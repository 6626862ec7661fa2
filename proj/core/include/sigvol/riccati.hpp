#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sigvol/dense_tensor.hpp"
#include "sigvol/ode.hpp"
#include "sigvol/sde.hpp"
#include "sigvol/tensor.hpp"
#include "sigvol/weight.hpp"

namespace sigvol {

/// Log-price block adjoined to the signature state: X = log S with dX = xi dB - xi^2 dt / 2.
struct LogPriceBlock {
    DualElement ell;
    std::vector<double> eta;  ///< empty means e_1
};

/// Sparse generator constants of the truncated prolonged-signature diffusion.
///
/// State coordinates are the words |I| <= N in layout order, followed by the
/// log-price X when the table is extended. Entries read
///   A Y_target       = sum coeff * Y_source
///   Gamma(Y_a, Y_b)  = sum coeff * Y_output      (a <= b, stored once)
struct GeneratorTable {
    struct Drift {
        std::size_t target;
        std::size_t source;
        double coeff;
    };
    struct CarreDuChamp {
        std::size_t first;
        std::size_t second;
        std::size_t output;
        double coeff;
    };

    TensorLayout layout;
    std::optional<LogPriceBlock> log_price;
    std::vector<Drift> drift;
    std::vector<CarreDuChamp> gamma;

    bool extended() const noexcept { return log_price.has_value(); }
    std::size_t state_size() const noexcept { return layout.size() + (extended() ? 1 : 0); }
    /// Index of X; only meaningful for extended tables.
    std::size_t log_price_index() const noexcept { return layout.size(); }
    /// Word spelling of a state coordinate, or "X" for the log-price.
    std::string label(std::size_t index) const;
    /// State index of a word or of "X".
    std::size_t index_of(const std::string& label) const;

    /// Coefficient of Y_source in A Y_target (0 when absent).
    double drift_coeff(std::size_t target, std::size_t source) const;
    /// Coefficient of Y_output in Gamma(Y_a, Y_b) (0 when absent).
    double gamma_coeff(std::size_t a, std::size_t b, std::size_t output) const;
};

/// Smallest truncation that holds the vector field for transform directions of
/// support length `direction_degree` (and the log-price block when `ell_degree` is set).
std::size_t required_truncation(std::size_t direction_degree, std::optional<std::size_t> ell_degree);

/// Builds drift and carre-du-champ constants at truncation N.
///
/// Signature block (Stratonovich to Ito):
///   A Y_{I0} gets Y_I;  A Y_{I'jj} gets Y_{I'} / 2 for Brownian j;
///   Gamma(Y_{J'j}, Y_{K'j}) = coefficients of e_{J'} shuffle e_{K'}.
/// Log-price block:
///   A X = -<ell sh ell, .> / 2,  Gamma(X, X) = <ell sh ell, .>,
///   Gamma(X, Y_{Ij}) = eta_j <ell sh e_I, .>.
/// Outputs longer than N are truncated away. Throws TruncationError when the
/// extended window N >= required_truncation(direction_degree, deg ell) fails.
GeneratorTable build_generator(std::size_t truncation, int dimension, std::optional<LogPriceBlock> log_price = {},
                               std::size_t direction_degree = 0);

/// Transform direction u over the table's state coordinates.
struct RiccatiState {
    std::vector<double> u;
    double tau = 0.0;

    /// Places a dual element (and u_X for extended tables) into state coordinates.
    static RiccatiState from_direction(const GeneratorTable& table, const DualElement& direction, double u_x = 0.0);
    /// Longest word with a non-zero coefficient.
    std::size_t degree(const GeneratorTable& table) const;
};

/// R(u)_I = sum_J b u_J + 1/2 sum_{J,K} Gamma^I_{J,K} u_J u_K.
std::vector<double> riccati_rhs(const RiccatiState& u, const GeneratorTable& table);

struct RiccatiOptions {
    FlowOptions flow;
    Weight weight = Weight::geometric(2.0);  ///< norm used for explosion detection
};

/// ||u||_w over the signature block plus |u_X|.
double riccati_norm(const GeneratorTable& table, const Weight& w, std::span<const double> u);

FlowOutcome integrate_flow(const RiccatiState& u0, double horizon, const GeneratorTable& table,
                           const RiccatiOptions& options = {});

/// Lambda_0 = exp(psi_empty(T) + u_X x0). Throws DegenerateSystem when the flow explodes.
double transform_value(const RiccatiState& u0, double horizon, const GeneratorTable& table, double x0,
                       const RiccatiOptions& options = {});
/// Same, from an already integrated flow.
double transform_value(const FlowOutcome& flow, const GeneratorTable& table, double x0);

/// Checks pi_M R_N(u) == R_M(pi_M u) coefficient by coefficient, exactly, for the
/// direction (u, u_X). Requires M <= N, matching log-price blocks and
/// M >= required_truncation(deg u, deg ell); throws TruncationError otherwise.
bool projection_compatibility(const DualElement& direction, double u_x, const GeneratorTable& table_n,
                              const GeneratorTable& table_m);

struct MonteCarloTransform {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n_paths = 0;
};

/// Sample mean of exp(<u, W^_T> + u_X log S_T) under the simulated model.
MonteCarloTransform transform_monte_carlo(const SigVolParams& params, const DualElement& direction, double u_x,
                                          std::size_t n_paths, std::uint64_t seed);

/// Comparison deadline 2 / (a y0) for y' >= a y^2 / 2 from y0.
double scalar_explosion_bound(double a, double y0);

} // namespace sigvol
