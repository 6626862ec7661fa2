#include "sigvol/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>

#include "sigvol/error.hpp"

namespace sigvol {

namespace {

// Dormand-Prince tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kB5{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr std::array<double, 7> kB4{5179.0 / 57600, 0.0,          7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

} // namespace

double max_abs_norm(std::span<const double> y) {
    double m = 0.0;
    for (double v : y) m = std::max(m, std::abs(v));
    return m;
}

FlowOutcome integrate(const VectorField& field, std::vector<double> y0, double horizon, const FlowOptions& options,
                      const StateNorm& norm) {
    if (!(options.tol > 0.0)) throw InvalidArgument("integrator tolerance must be positive");
    if (!(horizon >= 0.0)) throw InvalidArgument("integration horizon must be non-negative");
    const std::size_t n = y0.size();
    FlowOutcome out;
    std::vector<double> y = std::move(y0), y_new(n), err(n), tmp(n);
    std::array<std::vector<double>, 7> k;
    for (auto& v : k) v.resize(n);

    if (options.record_trajectory) out.trajectory.push_back({0.0, y});
    double t = 0.0;
    double h = std::min(options.initial_step, horizon);
    std::size_t accepted = 0;
    if (horizon == 0.0) {
        out.result = Solved{std::move(y), 0};
        return out;
    }
    field(y, k[0]);
    while (t < horizon) {
        const bool last = t + h >= horizon;
        if (last) h = horizon - t;
        for (std::size_t s = 1; s < 7; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = y[i];
                for (std::size_t j = 0; j < s; ++j) acc += h * kA[s][j] * k[j][i];
                tmp[i] = acc;
            }
            field(tmp, k[s]);
        }
        // Stage 7 is evaluated at the fifth-order solution, so tmp already holds y_new.
        double err_norm = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            y_new[i] = tmp[i];
            double e = 0.0;
            for (std::size_t j = 0; j < 7; ++j) e += (kB5[j] - kB4[j]) * k[j][i];
            e *= h;
            const double scale = options.tol * (1.0 + std::max(std::abs(y[i]), std::abs(y_new[i])));
            err_norm = std::max(err_norm, std::abs(e) / scale);
            if (!std::isfinite(y_new[i]) || !std::isfinite(e)) finite = false;
        }
        if (!finite || err_norm > 1.0) {
            h *= 0.5;
            if (h < options.min_step) {
                out.result = Exploded{t, norm(y),
                                      fmt::format("step size fell below {:g} at t = {:.17g}", options.min_step, t)};
                return out;
            }
            continue;
        }
        t = last ? horizon : t + h;
        y.swap(y_new);
        std::swap(k[0], k[6]);  // first-same-as-last
        ++accepted;
        if (options.record_trajectory) out.trajectory.push_back({t, y});
        const double current = norm(y);
        if (!(current <= options.explosion_threshold) && t < horizon) {
            out.result = Exploded{t, current, fmt::format("norm {:.6g} exceeded threshold {:g}", current,
                                                          options.explosion_threshold)};
            return out;
        }
        const double grow = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 4.0;
        h *= std::clamp(grow, 1.0, 4.0);
    }
    out.result = Solved{std::move(y), accepted};
    return out;
}

} // namespace sigvol
