#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sigvol::cli {

/// Everything a subcommand needs. Built from defaults, then the JSON config file,
/// then command-line flags (last writer wins).
struct RunConfig {
    std::string command;

    // model
    std::string model = "black_scholes";
    std::optional<std::string> ell;  ///< inline `word=coeff,...`; overrides the preset symbol
    int dimension = 1;
    int letter = 1;
    std::optional<std::vector<double>> eta;
    std::optional<std::string> weight;
    double sigma = 0.2;
    double sigma0 = 0.2;
    double sigma1 = 0.1;
    double horizon = 1.0;
    double s0 = 1.0;

    // simulation
    std::size_t steps = 100;
    std::size_t paths = 10000;
    std::optional<std::size_t> trunc;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;

    // transform
    std::string direction;  ///< `word=coeff,...`, empty means u = 0
    double u_x = 0.0;

    // hedge
    std::string payoff = "call:K=1";
    std::size_t depth = 2;
    std::optional<std::pair<std::size_t, std::size_t>> window;
    std::optional<std::vector<double>> strikes;
    std::size_t quantiles = 7;
    std::optional<double> ridge;
    double drop_tol = 1e-6;

    // hypotheses
    double lambda = 0.1;
    std::size_t tail_terms = 64;

    // depth-report
    std::vector<std::size_t> depths{0, 1, 2};
    std::string scan_payoff = "asian:K=1";

    void validate() const;
};

/// Merges a JSON document into `cfg`. Unknown keys are rejected.
void apply_json(RunConfig& cfg, const std::string& text);

/// `N_low:M`.
std::pair<std::size_t, std::size_t> parse_window(const std::string& text);
/// Comma-separated reals.
std::vector<double> parse_reals(const std::string& text);

} // namespace sigvol::cli
