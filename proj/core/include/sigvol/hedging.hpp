#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sigvol/sde.hpp"
#include "sigvol/signature.hpp"
#include "sigvol/weight.hpp"

namespace sigvol {

struct PayoffSpec {
    enum class Kind { call, digital, asian, variance_swap };
    Kind kind = Kind::call;
    double strike = 1.0;

    /// `call:K=1`, `digital:K=1.1`, `asian:K=1`, `varswap`.
    static PayoffSpec parse(const std::string& text);
    std::string to_string() const;
};

/// Payoff of one simulated path. Asian averages use the trapezoid rule; the
/// variance swap pays the left-point sum of xi^2 dt.
double payoff(const PayoffSpec& spec, const PricePath& path);

/// Feature selection for the hedging regression.
struct HedgeBasis {
    std::size_t integrand_depth = 2;  ///< dynamic features <e_K, W^_t> for |K| <= depth
    /// Terminal words N_low < |I| <= M; absent means no residual expansion.
    std::optional<std::pair<std::size_t, std::size_t>> residual_window;
    std::vector<double> static_strikes;  ///< explicit call strikes
    std::size_t static_quantiles = 7;    ///< when > 0 and no explicit strikes: equally spaced S_T quantiles
    std::optional<double> ridge;         ///< absent: 1e-8 trace(G) / dim
    double drop_tol = 1e-6;              ///< relative norm below which a quotient direction is dropped

    void validate() const;
    /// Signature truncation needed to build the design.
    std::size_t required_truncation() const;
};

struct HedgeSample {
    PricePath price;
    SignatureStream signature;
};

/// Per-path regression columns.
struct Design {
    std::vector<Word> dynamic_words;
    std::vector<double> strikes;
    std::vector<Word> residual_words;
    Eigen::MatrixXd dynamic;   ///< G_K = sum_k <e_K, W^_{t_k}> (S_{k+1} - S_k)
    Eigen::MatrixXd statics;   ///< (S_T - K)^+
    Eigen::MatrixXd residual;  ///< Y_I = <e_I, W^_T>
    Eigen::VectorXd terminal_price;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(terminal_price.size()); }
    std::size_t columns() const noexcept {
        return 1 + static_cast<std::size_t>(dynamic.cols() + statics.cols() + residual.cols());
    }
    /// Copy keeping only dynamic features with |K| <= depth.
    Design restrict_dynamic(std::size_t depth) const;
};

/// Row-at-a-time design assembly; static strikes from quantiles are fixed in `finish`.
class DesignBuilder {
public:
    DesignBuilder(const HedgeBasis& basis, int dimension, std::size_t rows);
    void add(std::size_t row, const PricePath& price, const SignatureStream& signature);
    Design finish();

private:
    HedgeBasis basis_;
    Design design_;
};

Design build_design(std::span<const HedgeSample> dataset, const HedgeBasis& basis);

struct GKWResult {
    double price = 0.0;
    std::vector<std::pair<Word, double>> dynamic_coeffs;
    std::vector<std::pair<double, double>> static_coeffs;  ///< (strike, coefficient)
    std::vector<std::pair<Word, double>> residual_coeffs;
    std::vector<Word> dropped_residual_words;
    std::vector<std::string> dropped_columns;  ///< hedge columns removed as redundant
    double hedge_error_norm = 0.0;  ///< L2 norm of X - price - hedge after static completion
    double residual_norm = 0.0;     ///< L2 norm of the final remainder
    double residual_norm_se = 0.0;
    double payoff_norm = 0.0;       ///< L2 norm of X
    double kappa_bound = 0.0;       ///< kappa(w, N_low); NaN when the weight tail diverges
    double gram_min_eigenvalue = 0.0;
    double ridge = 0.0;
    std::size_t samples = 0;
    bool undersampled = false;      ///< fewer than 10 samples per column
    Eigen::VectorXd remainder;
};

/// Four-step finite GKW projection: hedge regression, orthogonalisation of the
/// residual coordinates, quotient Gram solve, remainder. Throws DegenerateSystem
/// when a system stays singular with zero ridge.
GKWResult gkw_project(std::span<const double> payoffs, const Design& design, const HedgeBasis& basis,
                      const Weight& weight = Weight::geometric(2.0));

/// (sum_{n>N} w(n)^{-2})^{1/2}. Throws InvalidArgument for non-summable tails.
double kappa_tail(const Weight& w, std::size_t level);

/// Simulated design and payoffs for one model.
struct HedgeExperiment {
    Design design;
    std::vector<double> payoffs;
    std::vector<std::vector<double>> terminal_signatures;  ///< only when requested
    TensorLayout terminal_layout{1, 0};
};

HedgeExperiment simulate_hedge_experiment(const SigVolParams& params, const PayoffSpec& payoff_spec,
                                          const HedgeBasis& basis, std::size_t n_paths, std::uint64_t seed,
                                          std::size_t terminal_truncation = 0);

struct DepthScanRow {
    std::size_t depth;
    double residual_norm;
    double residual_se;
    double payoff_norm;
};

/// Hedging error per integrand depth on one shared path set (no static or residual columns).
std::vector<DepthScanRow> depth_scan(const SigVolParams& params, const PayoffSpec& payoff_spec,
                                     const std::vector<std::size_t>& depths, std::size_t n_paths, std::uint64_t seed);

struct GramShuffleCheck {
    Word first, second;
    double gram;       ///< sample mean of Y_I Y_J
    double shuffle;    ///< sample mean of <e_I sh e_J, W^_T>
    double se;         ///< standard error of the paired difference's components
};

/// Compares sample E[Y_I Y_J] with sample E[<e_I sh e_J, W^_T>] for all pairs of `words`.
std::vector<GramShuffleCheck> gram_shuffle_check(const std::vector<std::vector<double>>& terminal_signatures,
                                                 const TensorLayout& layout, const std::vector<Word>& words);

} // namespace sigvol
