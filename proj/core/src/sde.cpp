#include "sigvol/sde.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <ostream>

#include "sigvol/error.hpp"

namespace sigvol {

std::vector<double> SigVolParams::direction() const {
    if (!eta.empty()) return eta;
    std::vector<double> e(static_cast<std::size_t>(dimension()), 0.0);
    e[0] = 1.0;
    return e;
}

void SigVolParams::validate() const {
    if (!(s0 > 0.0) || !std::isfinite(s0)) throw InvalidArgument("s0 must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("horizon T must be positive");
    if (steps < 1) throw InvalidArgument("grid needs at least one step");
    const auto e = direction();
    if (e.size() != static_cast<std::size_t>(dimension()))
        throw DimensionMismatch(fmt::format("eta has {} components, model dimension is {}", e.size(), dimension()));
    double norm2 = 0.0;
    for (double v : e) norm2 += v * v;
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) throw InvalidArgument("eta must be a unit vector");
}

std::vector<double> volatility_path(const SigVolParams& params, const SignatureStream& sig) {
    if (sig.layout().dimension() != params.dimension()) throw DimensionMismatch("volatility_path: dimension mismatch");
    const CompiledDual pair(sig.layout(), params.ell);  // throws when the stream is truncated too low
    std::vector<double> xi(sig.points());
    for (std::size_t k = 0; k < sig.points(); ++k) xi[k] = pair(sig.row(k));
    return xi;
}

PricePath simulate_price_path(const SigVolParams& params, const PathGrid& path, const SignatureStream& sig,
                              const SimulationHooks& hooks) {
    if (path.dimension() != params.dimension()) throw DimensionMismatch("simulate_price: path dimension mismatch");
    if (sig.points() != path.steps() + 1) throw InvalidArgument("signature stream does not match the path grid");
    const auto eta = params.direction();
    const std::size_t n = path.steps() + 1;
    PricePath p;
    p.times = path.times();
    p.xi = volatility_path(params, sig);
    p.B.resize(n);
    p.M.assign(n, 0.0);
    p.qv.assign(n, 0.0);
    p.S.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double b = 0.0;
        for (std::size_t j = 0; j < eta.size(); ++j) b += eta[j] * path.brownian(k, static_cast<int>(j) + 1);
        p.B[k] = b;
    }
    p.S[0] = params.s0;
    double drift = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double dt = p.times[k + 1] - p.times[k];
        const double x = p.xi[k];
        const double x2 = hooks.evaluation == SimulationHooks::Evaluation::midpoint
                              ? 0.5 * (x * x + p.xi[k + 1] * p.xi[k + 1])
                              : x * x;
        p.M[k + 1] = p.M[k] + x * (p.B[k + 1] - p.B[k]);
        p.qv[k + 1] = p.qv[k] + x2 * dt;
        drift += hooks.log_drift * dt;
        p.S[k + 1] = params.s0 * std::exp(p.M[k + 1] - 0.5 * p.qv[k + 1] + drift);
    }
    return p;
}

PricePath simulate_price_path(const SigVolParams& params, const PathGrid& path, const SimulationHooks& hooks) {
    return simulate_price_path(params, path, signature_piecewise_linear(path, params.ell.degree()), hooks);
}

std::vector<PricePath> simulate_price(const SigVolParams& params, const BrownianPathSet& paths,
                                      const SimulationHooks& hooks) {
    params.validate();
    std::vector<PricePath> out;
    out.reserve(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) out.push_back(simulate_price_path(params, paths.path(i), hooks));
    return out;
}

MomentAccumulator terminal_price_moments(const SigVolParams& params, const BrownianPathSet& paths,
                                         const SimulationHooks& hooks) {
    params.validate();
    MomentAccumulator acc;
    for (std::size_t i = 0; i < paths.size(); ++i) acc.add(simulate_price_path(params, paths.path(i), hooks).terminal());
    return acc;
}

namespace {

// Doubling-increment test on partial sums: a plateau means convergence; increments
// that do not shrink between successive doublings mean divergence.
bool diverges(const std::vector<double>& partial) {
    const std::size_t n = partial.size() - 1;
    if (n < 8) return false;
    const double last = partial[n];
    const double d1 = last - partial[n / 2];
    const double d2 = partial[n / 2] - partial[n / 4];
    if (d1 <= 1e-9 * std::max(std::abs(last), 1e-300)) return false;
    return d2 > 0.0 && d1 / d2 >= 0.9;
}

} // namespace

H1Report check_H1(const DualElement& ell, const Weight& w, std::size_t tail_terms) {
    const auto levels = level_norms(ell.tensor());
    H1Report r;
    const std::size_t terms = std::max(tail_terms, levels.size() - 1);
    double s = 0.0;
    for (std::size_t n = 0; n <= terms; ++n) {
        const double ln = n < levels.size() ? levels[n] : 0.0;
        s += w(n) * ln * ln;
        r.partial_sums.push_back(s);
    }
    r.value = s;
    r.divergent = false;
    return r;
}

H1Report check_H1(const std::function<double(std::size_t)>& level_norm, const Weight& w, std::size_t tail_terms) {
    H1Report r;
    double s = 0.0;
    for (std::size_t n = 0; n <= tail_terms; ++n) {
        const double ln = std::abs(level_norm(n));
        if (ln > 0.0) s += std::exp(w.log_at(n) + 2.0 * std::log(ln));
        r.partial_sums.push_back(s);
    }
    r.divergent = diverges(r.partial_sums);
    r.value = r.divergent ? std::numeric_limits<double>::infinity() : s;
    return r;
}

H3Report estimate_H3(const SigVolParams& params, double lambda, std::size_t n_paths, std::uint64_t seed) {
    if (!(lambda > 0.0)) throw InvalidArgument("H3 check needs lambda > 0");
    params.validate();
    const auto paths = simulate_brownian_grid(params.dimension(), params.horizon, params.steps, n_paths, seed);
    std::vector<double> samples;
    samples.reserve(n_paths);
    MomentAccumulator acc;
    for (std::size_t i = 0; i < n_paths; ++i) {
        const auto p = simulate_price_path(params, paths.path(i));
        const double v = std::exp(lambda * p.qv.back());
        samples.push_back(v);
        acc.add(v);
    }
    H3Report r;
    r.n_paths = n_paths;
    r.mean = acc.mean();
    r.ci_halfwidth = 1.96 * acc.standard_error();
    std::sort(samples.begin(), samples.end(), std::greater<>());
    const std::size_t top = std::max<std::size_t>(1, (n_paths + 999) / 1000);
    double top_sum = 0.0, total = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        total += samples[i];
        if (i < top) top_sum += samples[i];
    }
    r.suspicious_heavy_tail = n_paths >= 1000 && top_sum > 0.5 * total;
    r.note = "Monte Carlo cannot establish finiteness of an exponential moment; this is a diagnostic estimate";
    return r;
}

MartingaleReport martingale_check(const MomentAccumulator& terminal, double s0) {
    if (terminal.count < 2) throw InvalidArgument("martingale check needs at least two paths");
    MartingaleReport r;
    r.mean_ST = terminal.mean();
    r.se = terminal.standard_error();
    const double diff = r.mean_ST - s0;
    if (r.se > 0.0) r.z_score = diff / r.se;
    else r.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    return r;
}

MartingaleReport martingale_check(std::span<const PricePath> prices) {
    if (prices.size() < 2) throw InvalidArgument("martingale check needs at least two paths");
    MomentAccumulator acc;
    for (const auto& p : prices) acc.add(p.terminal());
    return martingale_check(acc, prices.front().S.front());
}

void write_price_csv(std::ostream& out, std::span<const PricePath> prices) {
    out << "path_id,t,xi,B,M,qv,S\n";
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const auto& p = prices[i];
        for (std::size_t k = 0; k < p.times.size(); ++k)
            out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", i, p.times[k], p.xi[k], p.B[k],
                               p.M[k], p.qv[k], p.S[k]);
    }
}

} // namespace sigvol
