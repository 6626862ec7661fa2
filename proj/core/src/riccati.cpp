#include "sigvol/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <map>

#include "sigvol/error.hpp"

namespace sigvol {

namespace {

constexpr const char* kLogPriceLabel = "X";

std::vector<double> eta_or_default(const LogPriceBlock& block, int dimension) {
    if (!block.eta.empty()) {
        if (block.eta.size() != static_cast<std::size_t>(dimension))
            throw DimensionMismatch("log-price block: eta length differs from the dimension");
        return block.eta;
    }
    std::vector<double> e(static_cast<std::size_t>(dimension), 0.0);
    e[0] = 1.0;
    return e;
}

} // namespace

std::string GeneratorTable::label(std::size_t index) const {
    if (extended() && index == log_price_index()) return kLogPriceLabel;
    return layout.word(index).to_string();
}

std::size_t GeneratorTable::index_of(const std::string& text) const {
    if (text == kLogPriceLabel) {
        if (!extended()) throw InvalidArgument("table has no log-price coordinate");
        return log_price_index();
    }
    return layout.index(Word::parse(text));
}

double GeneratorTable::drift_coeff(std::size_t target, std::size_t source) const {
    double c = 0.0;
    for (const auto& e : drift)
        if (e.target == target && e.source == source) c += e.coeff;
    return c;
}

double GeneratorTable::gamma_coeff(std::size_t a, std::size_t b, std::size_t output) const {
    if (a > b) std::swap(a, b);
    double c = 0.0;
    for (const auto& e : gamma)
        if (e.first == a && e.second == b && e.output == output) c += e.coeff;
    return c;
}

std::size_t required_truncation(std::size_t direction_degree, std::optional<std::size_t> ell_degree) {
    if (!ell_degree) return 2 * direction_degree;
    return std::max(2 * direction_degree + *ell_degree, 2 * *ell_degree);
}

GeneratorTable build_generator(std::size_t truncation, int dimension, std::optional<LogPriceBlock> log_price,
                               std::size_t direction_degree) {
    GeneratorTable table{TensorLayout(dimension, truncation), std::move(log_price), {}, {}};
    const auto& layout = table.layout;
    std::vector<double> eta;
    if (table.log_price) {
        const auto& ell = table.log_price->ell;
        if (ell.dimension() != dimension) throw DimensionMismatch("log-price block: ell dimension mismatch");
        const std::size_t need = required_truncation(direction_degree, ell.degree());
        if (truncation < need)
            throw TruncationError(fmt::format(
                "truncation {} below the shuffle window {} (directions of length {}, ell of length {})", truncation,
                need, direction_degree, ell.degree()));
        eta = eta_or_default(*table.log_price, dimension);
    }

    const std::size_t words = layout.size();
    // Drift of the signature block.
    for (std::size_t t = 1; t < words; ++t) {
        const Word w = layout.word(t);
        if (w.back() == kTimeLetter) table.drift.push_back({t, layout.index(w.prefix()), 1.0});
        if (w.size() >= 2 && w.back() != kTimeLetter && w[w.size() - 2] == w.back())
            table.drift.push_back({t, layout.index(w.prefix().prefix()), 0.5});
    }
    // Carre-du-champ of the signature block: only pairs ending in the same Brownian letter.
    for (std::size_t a = 1; a < words; ++a) {
        const Word wa = layout.word(a);
        if (wa.back() == kTimeLetter) continue;
        for (std::size_t b = a; b < words; ++b) {
            const Word wb = layout.word(b);
            if (wb.back() != wa.back()) continue;
            if (wa.size() + wb.size() - 2 > truncation) continue;
            for (const auto& [w, c] : shuffle_words(wa.prefix(), wb.prefix()))
                table.gamma.push_back({a, b, layout.index(w), c});
        }
    }
    if (table.log_price) {
        const std::size_t x = table.log_price_index();
        const auto& ell = table.log_price->ell.tensor();
        const auto ell_sq = shuffle_product(ell, ell, 2 * ell.degree());
        for (const auto& [w, c] : ell_sq.coeffs()) {
            if (w.size() > truncation) continue;
            table.drift.push_back({x, layout.index(w), -0.5 * c});
        }
        for (std::size_t b = 1; b < words; ++b) {
            const Word wb = layout.word(b);
            const Letter j = wb.back();
            if (j == kTimeLetter || eta[j - 1] == 0.0) continue;
            const auto basis = GradedTensor::basis(dimension, wb.size() - 1, wb.prefix());
            const auto prod = shuffle_product(ell, basis, ell.degree() + wb.size() - 1);
            for (const auto& [w, c] : prod.coeffs()) {
                if (w.size() > truncation) continue;
                table.gamma.push_back({b, x, layout.index(w), eta[j - 1] * c});
            }
        }
        for (const auto& [w, c] : ell_sq.coeffs()) {
            if (w.size() > truncation) continue;
            table.gamma.push_back({x, x, layout.index(w), c});
        }
    }
    return table;
}

RiccatiState RiccatiState::from_direction(const GeneratorTable& table, const DualElement& direction, double u_x) {
    if (direction.dimension() != table.layout.dimension()) throw DimensionMismatch("direction dimension mismatch");
    if (direction.degree() > table.layout.truncation())
        throw TruncationError(fmt::format("direction of length {} exceeds the table truncation {}",
                                          direction.degree(), table.layout.truncation()));
    if (u_x != 0.0 && !table.extended()) throw InvalidArgument("u_X given but the table has no log-price block");
    RiccatiState s;
    s.u = to_dense(table.layout, direction.tensor());
    if (table.extended()) s.u.push_back(u_x);
    return s;
}

std::size_t RiccatiState::degree(const GeneratorTable& table) const {
    std::size_t deg = 0;
    for (std::size_t i = 0; i < table.layout.size(); ++i)
        if (u[i] != 0.0) deg = std::max(deg, table.layout.level_of(i));
    return deg;
}

namespace {

void rhs_into(const GeneratorTable& table, std::span<const double> u, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& e : table.drift) out[e.source] += e.coeff * u[e.target];
    for (const auto& g : table.gamma) {
        const double w = (g.first == g.second) ? 0.5 : 1.0;
        out[g.output] += w * g.coeff * u[g.first] * u[g.second];
    }
}

} // namespace

std::vector<double> riccati_rhs(const RiccatiState& u, const GeneratorTable& table) {
    if (u.u.size() != table.state_size())
        throw DimensionMismatch(fmt::format("Riccati state has {} coordinates, table expects {}", u.u.size(),
                                            table.state_size()));
    std::vector<double> out(table.state_size());
    rhs_into(table, u.u, out);
    return out;
}

double riccati_norm(const GeneratorTable& table, const Weight& w, std::span<const double> u) {
    std::vector<double> level_sq(table.layout.truncation() + 1, 0.0);
    for (std::size_t i = 0; i < table.layout.size(); ++i) level_sq[table.layout.level_of(i)] += u[i] * u[i];
    double s = 0.0;
    for (std::size_t n = 0; n < level_sq.size(); ++n) s += w(n) * std::sqrt(level_sq[n]);
    if (table.extended()) s += std::abs(u[table.log_price_index()]);
    return s;
}

FlowOutcome integrate_flow(const RiccatiState& u0, double horizon, const GeneratorTable& table,
                           const RiccatiOptions& options) {
    if (u0.u.size() != table.state_size()) throw DimensionMismatch("Riccati state size does not match the table");
    const VectorField field = [&table](std::span<const double> y, std::span<double> dy) { rhs_into(table, y, dy); };
    const StateNorm norm = [&table, &options](std::span<const double> y) {
        return riccati_norm(table, options.weight, y);
    };
    return integrate(field, u0.u, horizon, options.flow, norm);
}

double transform_value(const FlowOutcome& flow, const GeneratorTable& table, double x0) {
    if (flow.exploded())
        throw DegenerateSystem(fmt::format("Riccati flow exploded at t = {:.17g}: {}", flow.explosion().t_star,
                                           flow.explosion().diagnostic));
    const auto& psi = flow.solved().state;
    double exponent = psi[0];  // the signature at t = 0 is e_empty
    if (table.extended()) exponent += psi[table.log_price_index()] * x0;
    return std::exp(exponent);
}

double transform_value(const RiccatiState& u0, double horizon, const GeneratorTable& table, double x0,
                       const RiccatiOptions& options) {
    return transform_value(integrate_flow(u0, horizon, table, options), table, x0);
}

bool projection_compatibility(const DualElement& direction, double u_x, const GeneratorTable& table_n,
                              const GeneratorTable& table_m) {
    const std::size_t n = table_n.layout.truncation(), m = table_m.layout.truncation();
    if (m > n) throw InvalidArgument("projection_compatibility needs M <= N");
    if (table_n.extended() != table_m.extended()) throw InvalidArgument("tables disagree on the log-price block");
    std::optional<std::size_t> ell_degree;
    if (table_n.extended()) {
        if (!(table_n.log_price->ell == table_m.log_price->ell)) throw InvalidArgument("tables use different ell");
        ell_degree = table_n.log_price->ell.degree();
    }
    const std::size_t need = required_truncation(direction.degree(), ell_degree);
    if (m < need)
        throw TruncationError(fmt::format("window violated: M = {} but directions of length {} need M >= {}", m,
                                          direction.degree(), need));
    const auto rn = riccati_rhs(RiccatiState::from_direction(table_n, direction, u_x), table_n);
    const auto rm = riccati_rhs(RiccatiState::from_direction(table_m, direction, u_x), table_m);
    for (std::size_t i = 0; i < table_m.layout.size(); ++i)
        if (rm[i] != rn[table_n.layout.index(table_m.layout.word(i))]) return false;
    if (table_m.extended() && rm[table_m.log_price_index()] != rn[table_n.log_price_index()]) return false;
    return true;
}

MonteCarloTransform transform_monte_carlo(const SigVolParams& params, const DualElement& direction, double u_x,
                                          std::size_t n_paths, std::uint64_t seed) {
    params.validate();
    if (direction.dimension() != params.dimension()) throw DimensionMismatch("direction dimension mismatch");
    if (n_paths < 2) throw InvalidArgument("transform_monte_carlo needs at least two paths");
    const auto paths = simulate_brownian_grid(params.dimension(), params.horizon, params.steps, n_paths, seed);
    const TensorLayout layout(params.dimension(), std::max(direction.degree(), params.ell.degree()));
    const CompiledDual pair_u(layout, direction);
    MomentAccumulator acc;
    for (std::size_t i = 0; i < n_paths; ++i) {
        const auto path = paths.path(i);
        const auto sig = signature_piecewise_linear(path, layout.truncation());
        const auto price = simulate_price_path(params, path, sig);
        acc.add(std::exp(pair_u(sig.terminal()) + u_x * std::log(price.terminal())));
    }
    return {acc.mean(), acc.standard_error(), n_paths};
}

double scalar_explosion_bound(double a, double y0) {
    if (!(a > 0.0) || !(y0 > 0.0)) throw InvalidArgument("scalar_explosion_bound needs a > 0 and y0 > 0");
    return 2.0 / (a * y0);
}

} // namespace sigvol
