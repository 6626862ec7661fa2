#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sigvol {

using VectorField = std::function<void(std::span<const double> y, std::span<double> dydt)>;
using StateNorm = std::function<double(std::span<const double> y)>;

struct FlowOptions {
    double tol = 1e-10;                  ///< mixed absolute/relative local error tolerance
    double explosion_threshold = 1e6;    ///< norm above which the flow is declared exploded
    double min_step = 1e-12;             ///< step-size floor; falling below it counts as explosion
    double initial_step = 1e-3;
    bool record_trajectory = false;      ///< keep every accepted step
};

struct AcceptedStep {
    double tau;
    std::vector<double> state;
};

struct Solved {
    std::vector<double> state;
    std::size_t steps = 0;
};

struct Exploded {
    double t_star = 0.0;   ///< detection time, strictly below the horizon
    double norm = 0.0;     ///< norm at detection
    std::string diagnostic;
};

struct FlowOutcome {
    std::variant<Solved, Exploded> result;
    std::vector<AcceptedStep> trajectory;  ///< empty unless recording was requested

    bool exploded() const noexcept { return std::holds_alternative<Exploded>(result); }
    const Solved& solved() const { return std::get<Solved>(result); }
    const Exploded& explosion() const { return std::get<Exploded>(result); }
};

/// Dormand-Prince 5(4) with step halving on rejected steps and explosion detection.
FlowOutcome integrate(const VectorField& field, std::vector<double> y0, double horizon, const FlowOptions& options,
                      const StateNorm& norm);

/// Max-abs norm, the default for `integrate` callers without a weighted norm.
double max_abs_norm(std::span<const double> y);

} // namespace sigvol
