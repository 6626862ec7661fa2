#include "sigvol/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "sigvol/error.hpp"

namespace sigvol {

PayoffSpec PayoffSpec::parse(const std::string& text) {
    PayoffSpec spec;
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    if (kind == "call") spec.kind = Kind::call;
    else if (kind == "digital") spec.kind = Kind::digital;
    else if (kind == "asian") spec.kind = Kind::asian;
    else if (kind == "varswap" || kind == "variance_swap") spec.kind = Kind::variance_swap;
    else throw InvalidArgument("unknown payoff kind: '" + kind + "'");
    if (colon != std::string::npos) {
        const std::string rest = text.substr(colon + 1);
        if (rest.rfind("K=", 0) != 0) throw InvalidArgument("payoff parameters must read K=<strike>: '" + text + "'");
        try {
            std::size_t used = 0;
            spec.strike = std::stod(rest.substr(2), &used);
            if (used != rest.size() - 2) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InvalidArgument("malformed strike in payoff: '" + text + "'");
        }
    }
    return spec;
}

std::string PayoffSpec::to_string() const {
    switch (kind) {
    case Kind::call: return fmt::format("call:K={:g}", strike);
    case Kind::digital: return fmt::format("digital:K={:g}", strike);
    case Kind::asian: return fmt::format("asian:K={:g}", strike);
    case Kind::variance_swap: return "varswap";
    }
    return {};
}

double payoff(const PayoffSpec& spec, const PricePath& path) {
    const double st = path.terminal();
    switch (spec.kind) {
    case PayoffSpec::Kind::call: return std::max(st - spec.strike, 0.0);
    case PayoffSpec::Kind::digital: return st >= spec.strike ? 1.0 : 0.0;
    case PayoffSpec::Kind::asian: {
        double integral = 0.0;
        for (std::size_t k = 0; k + 1 < path.S.size(); ++k)
            integral += 0.5 * (path.S[k] + path.S[k + 1]) * (path.times[k + 1] - path.times[k]);
        const double horizon = path.times.back() - path.times.front();
        return std::max(integral / horizon - spec.strike, 0.0);
    }
    case PayoffSpec::Kind::variance_swap: return path.qv.back();
    }
    throw InvalidArgument("unknown payoff kind");
}

void HedgeBasis::validate() const {
    if (residual_window && !(residual_window->first < residual_window->second))
        throw InvalidArgument("residual window needs N_low < M");
    if (ridge && !(*ridge >= 0.0)) throw InvalidArgument("ridge must be non-negative");
    if (!(drop_tol >= 0.0)) throw InvalidArgument("drop tolerance must be non-negative");
    for (double k : static_strikes)
        if (!std::isfinite(k)) throw InvalidArgument("static strikes must be finite");
}

std::size_t HedgeBasis::required_truncation() const {
    return std::max(integrand_depth, residual_window ? residual_window->second : std::size_t{0});
}

Design Design::restrict_dynamic(std::size_t depth) const {
    Design out;
    out.strikes = strikes;
    out.residual_words = residual_words;
    out.statics = statics;
    out.residual = residual;
    out.terminal_price = terminal_price;
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < dynamic_words.size(); ++i)
        if (dynamic_words[i].size() <= depth) {
            keep.push_back(static_cast<Eigen::Index>(i));
            out.dynamic_words.push_back(dynamic_words[i]);
        }
    out.dynamic = dynamic(Eigen::all, keep);
    return out;
}

DesignBuilder::DesignBuilder(const HedgeBasis& basis, int dimension, std::size_t rows) : basis_(basis) {
    basis_.validate();
    design_.dynamic_words = enumerate_words(dimension, 0, basis_.integrand_depth);
    if (basis_.residual_window)
        design_.residual_words =
            enumerate_words(dimension, basis_.residual_window->first + 1, basis_.residual_window->second);
    const auto n = static_cast<Eigen::Index>(rows);
    design_.dynamic.setZero(n, static_cast<Eigen::Index>(design_.dynamic_words.size()));
    design_.residual.setZero(n, static_cast<Eigen::Index>(design_.residual_words.size()));
    design_.terminal_price.setZero(n);
}

void DesignBuilder::add(std::size_t row, const PricePath& price, const SignatureStream& signature) {
    const auto& layout = signature.layout();
    if (layout.truncation() < basis_.required_truncation())
        throw TruncationError(fmt::format("signature truncation {} below the basis requirement {}", layout.truncation(),
                                          basis_.required_truncation()));
    if (signature.points() != price.S.size()) throw InvalidArgument("signature stream and price path disagree");
    const auto r = static_cast<Eigen::Index>(row);
    for (std::size_t c = 0; c < design_.dynamic_words.size(); ++c) {
        const std::size_t idx = layout.index(design_.dynamic_words[c]);
        double gain = 0.0;
        for (std::size_t k = 0; k + 1 < price.S.size(); ++k) gain += signature.row(k)[idx] * (price.S[k + 1] - price.S[k]);
        design_.dynamic(r, static_cast<Eigen::Index>(c)) = gain;
    }
    const auto terminal = signature.terminal();
    for (std::size_t c = 0; c < design_.residual_words.size(); ++c)
        design_.residual(r, static_cast<Eigen::Index>(c)) = terminal[layout.index(design_.residual_words[c])];
    design_.terminal_price(r) = price.terminal();
}

Design DesignBuilder::finish() {
    std::vector<double> strikes = basis_.static_strikes;
    if (strikes.empty() && basis_.static_quantiles > 0) {
        std::vector<double> sorted(design_.terminal_price.data(),
                                   design_.terminal_price.data() + design_.terminal_price.size());
        std::sort(sorted.begin(), sorted.end());
        const std::size_t q = basis_.static_quantiles;
        for (std::size_t i = 1; i <= q; ++i) {
            const double level = static_cast<double>(i) / static_cast<double>(q + 1);
            const auto rank = static_cast<std::size_t>(std::ceil(level * static_cast<double>(sorted.size())));
            strikes.push_back(sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1]);
        }
    }
    design_.strikes = strikes;
    const auto n = design_.terminal_price.size();
    design_.statics.resize(n, static_cast<Eigen::Index>(strikes.size()));
    for (Eigen::Index c = 0; c < design_.statics.cols(); ++c)
        for (Eigen::Index r = 0; r < n; ++r)
            design_.statics(r, c) = std::max(design_.terminal_price(r) - strikes[static_cast<std::size_t>(c)], 0.0);
    return std::move(design_);
}

Design build_design(std::span<const HedgeSample> dataset, const HedgeBasis& basis) {
    if (dataset.empty()) throw InvalidArgument("build_design needs at least one path");
    DesignBuilder builder(basis, dataset.front().signature.layout().dimension(), dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) builder.add(i, dataset[i].price, dataset[i].signature);
    return builder.finish();
}

namespace {

double default_ridge(const Eigen::MatrixXd& gram) {
    if (gram.rows() == 0) return 0.0;
    return 1e-8 * gram.trace() / static_cast<double>(gram.rows());
}

double min_eigenvalue(const Eigen::MatrixXd& gram) {
    if (gram.rows() == 0) return std::numeric_limits<double>::quiet_NaN();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Sequential Gram-Schmidt against `basis` (orthonormal columns, grown in place).
// Returns true and appends the normalised direction when the column survives the drop rule.
bool orthogonalise(Eigen::MatrixXd& basis, Eigen::Index& used, Eigen::VectorXd column, double raw_norm,
                   double drop_tol) {
    for (int pass = 0; pass < 2; ++pass)  // second pass restores orthogonality lost to rounding
        for (Eigen::Index j = 0; j < used; ++j) column -= basis.col(j).dot(column) * basis.col(j);
    const double norm = column.norm();
    if (raw_norm == 0.0 || norm <= drop_tol * raw_norm) return false;
    basis.col(used++) = column / norm;
    return true;
}

Eigen::VectorXd solve_ridge(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs, double ridge,
                            const std::vector<std::string>& names, const char* stage) {
    if (gram.rows() == 0) return Eigen::VectorXd();
    Eigen::MatrixXd system = gram;
    system.diagonal().array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(system, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    // Relative floor: a rounding-level eigenvalue is a null direction, not information.
    if (ldlt.info() != Eigen::Success || !(min_eig > 1e-12 * es.eigenvalues().maxCoeff())) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : " ") + n;
        throw DegenerateSystem(fmt::format("{} Gram system is singular (min eigenvalue {:.3g}); columns: {}", stage,
                                           min_eig, list));
    }
    return ldlt.solve(rhs);
}

} // namespace

GKWResult gkw_project(std::span<const double> payoffs, const Design& design, const HedgeBasis& basis,
                      const Weight& weight) {
    basis.validate();
    const auto n = static_cast<Eigen::Index>(design.rows());
    if (n == 0) throw InvalidArgument("gkw_project needs a non-empty design");
    if (static_cast<Eigen::Index>(payoffs.size()) != n) throw InvalidArgument("payoff count differs from design rows");
    const double nd = static_cast<double>(n);
    const Eigen::Map<const Eigen::VectorXd> x(payoffs.data(), n);

    GKWResult out;
    out.samples = static_cast<std::size_t>(n);
    out.undersampled = design.rows() < 10 * design.columns();
    out.payoff_norm = std::sqrt(x.squaredNorm() / nd);

    // Step 1: hedge regression on constant + dynamic gains + static calls.
    const Eigen::Index p = design.dynamic.cols() + design.statics.cols();
    Eigen::MatrixXd hedge(n, p);
    hedge << design.dynamic, design.statics;
    std::vector<std::string> names;
    for (const auto& w : design.dynamic_words) names.push_back("G[" + w.to_string() + "]");
    for (double k : design.strikes) names.push_back(fmt::format("call[{:.17g}]", k));

    Eigen::MatrixXd q(n, 1 + p + design.residual.cols());
    Eigen::Index used = 0;
    orthogonalise(q, used, Eigen::VectorXd::Ones(n), std::sqrt(nd), 0.0);
    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0; j < p; ++j) {
        if (orthogonalise(q, used, hedge.col(j), hedge.col(j).norm(), basis.drop_tol)) kept.push_back(j);
        else out.dropped_columns.push_back(names[static_cast<std::size_t>(j)]);
    }
    const Eigen::Index hedge_span = used;
    Eigen::MatrixXd centred = hedge(Eigen::all, kept);
    const Eigen::RowVectorXd col_means = centred.colwise().mean();
    centred.rowwise() -= col_means;
    const double x_mean = x.mean();
    const Eigen::MatrixXd gram1 = centred.transpose() * centred / nd;
    const double ridge1 = basis.ridge.value_or(default_ridge(gram1));
    std::vector<std::string> kept_names;
    for (auto j : kept) kept_names.push_back(names[static_cast<std::size_t>(j)]);
    const Eigen::VectorXd beta = solve_ridge(gram1, centred.transpose() * (x.array() - x_mean).matrix() / nd, ridge1,
                                             kept_names, "hedge");
    Eigen::VectorXd full_beta = Eigen::VectorXd::Zero(p);
    for (std::size_t i = 0; i < kept.size(); ++i) full_beta(kept[i]) = beta(static_cast<Eigen::Index>(i));
    const double intercept = x_mean - (kept.empty() ? 0.0 : col_means.dot(beta));
    const Eigen::VectorXd r1 = x.array() - intercept - (hedge * full_beta).array();
    out.ridge = ridge1;

    double price = intercept;
    for (Eigen::Index s = 0; s < design.statics.cols(); ++s)
        price += full_beta(design.dynamic.cols() + s) * design.statics.col(s).mean();
    out.price = price;
    for (std::size_t i = 0; i < design.dynamic_words.size(); ++i)
        out.dynamic_coeffs.emplace_back(design.dynamic_words[i], full_beta(static_cast<Eigen::Index>(i)));
    for (std::size_t s = 0; s < design.strikes.size(); ++s)
        out.static_coeffs.emplace_back(design.strikes[s],
                                       full_beta(design.dynamic.cols() + static_cast<Eigen::Index>(s)));
    out.hedge_error_norm = std::sqrt(r1.squaredNorm() / nd);

    // Step 2: residual coordinates modulo the hedge span.
    const Eigen::MatrixXd span_basis = q.leftCols(hedge_span);
    const Eigen::MatrixXd quotient = design.residual - span_basis * (span_basis.transpose() * design.residual);

    // Step 3: drop null and redundant quotient classes, then solve the quotient normal equations.
    std::vector<Eigen::Index> kept_res;
    std::vector<std::string> kept_res_names;
    for (Eigen::Index j = 0; j < quotient.cols(); ++j) {
        const Word& w = design.residual_words[static_cast<std::size_t>(j)];
        if (orthogonalise(q, used, quotient.col(j), design.residual.col(j).norm(), basis.drop_tol)) {
            kept_res.push_back(j);
            kept_res_names.push_back(w.to_string());
        } else {
            out.dropped_residual_words.push_back(w);
        }
    }
    const Eigen::MatrixXd yq = quotient(Eigen::all, kept_res);
    const Eigen::MatrixXd gram_q = yq.transpose() * yq / nd;
    const double ridge_q = basis.ridge.value_or(default_ridge(gram_q));
    const Eigen::VectorXd c = solve_ridge(gram_q, yq.transpose() * r1 / nd, ridge_q, kept_res_names, "quotient");
    for (std::size_t i = 0; i < kept_res.size(); ++i)
        out.residual_coeffs.emplace_back(design.residual_words[static_cast<std::size_t>(kept_res[i])],
                                         c(static_cast<Eigen::Index>(i)));
    out.gram_min_eigenvalue = gram_q.rows() > 0 ? min_eigenvalue(gram_q) : min_eigenvalue(gram1);

    // Step 4: remainder.
    out.remainder = kept_res.empty() ? r1 : Eigen::VectorXd(r1 - yq * c);
    const double ms = out.remainder.squaredNorm() / nd;
    out.residual_norm = std::sqrt(ms);
    if (out.residual_norm > 0.0 && n > 1) {
        const Eigen::ArrayXd sq = out.remainder.array().square();
        const double var = (sq - ms).square().sum() / (nd - 1.0);
        out.residual_norm_se = std::sqrt(var / nd) / (2.0 * out.residual_norm);
    }

    const std::size_t n_low = basis.residual_window ? basis.residual_window->first : basis.integrand_depth;
    try {
        out.kappa_bound = kappa_tail(weight, n_low);
    } catch (const InvalidArgument&) {
        out.kappa_bound = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

double kappa_tail(const Weight& w, std::size_t level) {
    const double big_n = static_cast<double>(level);
    switch (w.kind()) {
    case Weight::Kind::geometric: {
        const double r = w.parameter();
        if (!(r > 1.0)) throw InvalidArgument("kappa tail diverges for geometric weight with r <= 1");
        return std::pow(r, -(big_n + 1.0)) / std::sqrt(1.0 - 1.0 / (r * r));
    }
    case Weight::Kind::polynomial: {
        const double s = 2.0 * w.parameter();
        if (!(s > 1.0)) throw InvalidArgument("kappa tail diverges for polynomial weight with alpha <= 1/2");
        // sum_{k >= N+2} k^{-s}: direct head, Euler-Maclaurin tail.
        const double first = big_n + 2.0;
        constexpr int head = 1000;
        double sum = 0.0;
        for (int i = head - 1; i >= 0; --i) sum += std::pow(first + i, -s);
        const double a = first + head;
        double tail = std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
        // -B_{2j}/(2j)! f^{(2j-1)}(a) with f^{(m)}(a) = (-1)^m s(s+1)..(s+m-1) a^{-s-m}
        constexpr double bernoulli[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};
        double rising = s, factorial = 2.0;
        for (int j = 1; j <= 4; ++j) {
            const int m = 2 * j - 1;
            const double deriv = -rising * std::pow(a, -s - m);
            tail -= bernoulli[j - 1] / factorial * deriv;
            rising *= (s + m) * (s + m + 1);
            factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        }
        return std::sqrt(sum + tail);
    }
    case Weight::Kind::constant: throw InvalidArgument("kappa tail diverges for the constant weight");
    }
    throw InvalidArgument("unknown weight kind");
}

HedgeExperiment simulate_hedge_experiment(const SigVolParams& params, const PayoffSpec& payoff_spec,
                                          const HedgeBasis& basis, std::size_t n_paths, std::uint64_t seed,
                                          std::size_t terminal_truncation) {
    params.validate();
    basis.validate();
    const auto paths = simulate_brownian_grid(params.dimension(), params.horizon, params.steps, n_paths, seed);
    const std::size_t trunc = std::max({basis.required_truncation(), params.ell.degree(), terminal_truncation});
    DesignBuilder builder(basis, params.dimension(), n_paths);
    HedgeExperiment ex;
    ex.payoffs.resize(n_paths);
    if (terminal_truncation > 0) {
        ex.terminal_layout = TensorLayout(params.dimension(), terminal_truncation);
        ex.terminal_signatures.resize(n_paths);
    }
    for (std::size_t i = 0; i < n_paths; ++i) {
        const auto path = paths.path(i);
        const auto sig = signature_piecewise_linear(path, trunc);
        const auto price = simulate_price_path(params, path, sig);
        builder.add(i, price, sig);
        ex.payoffs[i] = payoff(payoff_spec, price);
        if (terminal_truncation > 0) {
            const auto t = sig.terminal();
            ex.terminal_signatures[i].assign(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(ex.terminal_layout.size()));
        }
    }
    ex.design = builder.finish();
    return ex;
}

std::vector<DepthScanRow> depth_scan(const SigVolParams& params, const PayoffSpec& payoff_spec,
                                     const std::vector<std::size_t>& depths, std::size_t n_paths, std::uint64_t seed) {
    if (depths.empty()) throw InvalidArgument("depth_scan needs at least one depth");
    for (std::size_t i = 1; i < depths.size(); ++i)
        if (!(depths[i] > depths[i - 1])) throw InvalidArgument("depth_scan depths must be increasing");
    HedgeBasis basis;
    basis.integrand_depth = depths.back();
    basis.static_quantiles = 0;
    const auto ex = simulate_hedge_experiment(params, payoff_spec, basis, n_paths, seed);
    std::vector<DepthScanRow> rows;
    for (std::size_t depth : depths) {
        HedgeBasis b = basis;
        b.integrand_depth = depth;
        const auto res = gkw_project(ex.payoffs, ex.design.restrict_dynamic(depth), b, params.weight);
        rows.push_back({depth, res.residual_norm, res.residual_norm_se, res.payoff_norm});
    }
    return rows;
}

std::vector<GramShuffleCheck> gram_shuffle_check(const std::vector<std::vector<double>>& terminal_signatures,
                                                 const TensorLayout& layout, const std::vector<Word>& words) {
    if (terminal_signatures.empty()) throw InvalidArgument("gram_shuffle_check needs samples");
    std::vector<GramShuffleCheck> out;
    for (std::size_t a = 0; a < words.size(); ++a) {
        for (std::size_t b = a; b < words.size(); ++b) {
            const auto& wi = words[a];
            const auto& wj = words[b];
            if (wi.size() + wj.size() > layout.truncation())
                throw TruncationError("terminal signatures too short for the shuffle of " + wi.to_string() + " and " +
                                      wj.to_string());
            const auto sh = shuffle_words(wi, wj);
            const std::size_t ii = layout.index(wi), jj = layout.index(wj);
            MomentAccumulator prod, shuf;
            for (const auto& sig : terminal_signatures) {
                prod.add(sig[ii] * sig[jj]);
                double s = 0.0;
                for (const auto& [w, c] : sh) s += c * sig[layout.index(w)];
                shuf.add(s);
            }
            out.push_back({wi, wj, prod.mean(), shuf.mean(), std::max(prod.standard_error(), shuf.standard_error())});
        }
    }
    return out;
}

} // namespace sigvol
