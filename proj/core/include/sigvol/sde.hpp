#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sigvol/signature.hpp"
#include "sigvol/stats.hpp"
#include "sigvol/tensor.hpp"
#include "sigvol/weight.hpp"

namespace sigvol {

/// Parameters of dS = S <ell, W^_t> dB with B = eta . W.
struct SigVolParams {
    DualElement ell;
    Weight weight = Weight::geometric(2.0);
    double s0 = 1.0;
    std::vector<double> eta;  ///< unit vector in R^d; empty means e_1
    double horizon = 1.0;
    std::size_t steps = 100;

    int dimension() const noexcept { return ell.dimension(); }
    /// eta, defaulted to e_1.
    std::vector<double> direction() const;
    /// Throws InvalidArgument when an invariant fails.
    void validate() const;
};

/// One simulated price trajectory on the grid.
struct PricePath {
    std::vector<double> times;
    std::vector<double> xi;  ///< <ell, W^_t>
    std::vector<double> B;   ///< eta . W_t
    std::vector<double> M;   ///< sum of xi dB (left point)
    std::vector<double> qv;  ///< sum of xi^2 dt (left point)
    std::vector<double> S;   ///< s0 exp(M - qv / 2)

    double terminal() const { return S.back(); }
};

/// Pointwise pairing of ell with the signature stream.
std::vector<double> volatility_path(const SigVolParams& params, const SignatureStream& sig);

/// Discretisation switches. `midpoint` changes only the ds-integral (trapezoid
/// instead of left point); the dB-integral is always predictable. `log_drift`
/// exists to build negative controls for the martingale check. Production
/// callers leave both at their defaults.
struct SimulationHooks {
    enum class Evaluation { left_point, midpoint };
    Evaluation evaluation = Evaluation::left_point;
    double log_drift = 0.0;
};

PricePath simulate_price_path(const SigVolParams& params, const PathGrid& path, const SignatureStream& sig,
                              const SimulationHooks& hooks = {});
/// Computes the signature stream at the support length of ell first.
PricePath simulate_price_path(const SigVolParams& params, const PathGrid& path, const SimulationHooks& hooks = {});

std::vector<PricePath> simulate_price(const SigVolParams& params, const BrownianPathSet& paths,
                                      const SimulationHooks& hooks = {});

/// Terminal prices S_T accumulated path by path without keeping trajectories.
MomentAccumulator terminal_price_moments(const SigVolParams& params, const BrownianPathSet& paths,
                                         const SimulationHooks& hooks = {});

struct H1Report {
    double value = 0.0;  ///< sum_n w(n) |ell_n|^2, +inf when flagged divergent
    bool divergent = false;
    std::vector<double> partial_sums;  ///< over n = 0 .. tail_terms
};

/// Exact weighted square sum for a finitely supported ell.
H1Report check_H1(const DualElement& ell, const Weight& w, std::size_t tail_terms);
/// Partial-sum diagnostic for an analytic family given by its level norms |ell_n|.
H1Report check_H1(const std::function<double(std::size_t)>& level_norm, const Weight& w, std::size_t tail_terms);

struct H3Report {
    double mean = 0.0;
    double ci_halfwidth = 0.0;
    bool suspicious_heavy_tail = false;
    std::size_t n_paths = 0;
    std::string note;
};

/// Monte Carlo estimate of E exp(lambda int_0^T xi_s^2 ds). Diagnostic only.
H3Report estimate_H3(const SigVolParams& params, double lambda, std::size_t n_paths, std::uint64_t seed);

struct MartingaleReport {
    double mean_ST = 0.0;
    double se = 0.0;
    double z_score = 0.0;
};

MartingaleReport martingale_check(std::span<const PricePath> prices);
MartingaleReport martingale_check(const MomentAccumulator& terminal, double s0);

/// CSV with header `path_id,t,xi,B,M,qv,S`, 17 significant digits.
void write_price_csv(std::ostream& out, std::span<const PricePath> prices);

} // namespace sigvol
