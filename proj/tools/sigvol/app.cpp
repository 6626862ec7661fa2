#include "sigvol/app.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sigvol/config.hpp"
#include "sigvol/error.hpp"
#include "sigvol/hedging.hpp"
#include "sigvol/models.hpp"
#include "sigvol/riccati.hpp"
#include "sigvol/rng.hpp"
#include "sigvol/sde.hpp"

namespace sigvol::cli {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

/// `section,key,value` report rows.
class Report {
public:
    void row(const std::string& section, const std::string& key, const std::string& value) {
        text_ += csv_field(section) + ',' + csv_field(key) + ',' + csv_field(value) + '\n';
    }
    void row(const std::string& section, const std::string& key, double value) { row(section, key, num(value)); }
    void flag(const std::string& section, const std::string& key, bool value) {
        row(section, key, std::string(value ? "true" : "false"));
    }
    std::string str() const { return "section,key,value\n" + text_; }

private:
    std::string text_;
};

/// Writes `content` to <out>/<name> when an output directory is set, otherwise to stdout.
void emit(const RunConfig& cfg, const std::string& name, const std::string& content, std::ostream& out) {
    if (!cfg.out) {
        out << content;
        return;
    }
    std::filesystem::create_directories(*cfg.out);
    const auto path = std::filesystem::path(*cfg.out) / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InvalidArgument("cannot write " + path.string());
    file << content;
    out << "wrote " << path.string() << '\n';
}

GradedTensor::Map parse_terms(const std::string& text) {
    GradedTensor::Map m;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidArgument("term must read word=coeff, got '" + item + "'");
        const Word w = Word::parse(item.substr(0, eq));
        try {
            std::size_t used = 0;
            const std::string c = item.substr(eq + 1);
            m[w] += std::stod(c, &used);
            if (used != c.size()) throw std::invalid_argument("trailing");
        } catch (const std::logic_error&) {
            throw InvalidArgument("malformed coefficient in '" + item + "'");
        }
    }
    return m;
}

ModelPreset resolve_preset(const RunConfig& cfg) {
    PresetParams pp;
    pp.sigma = cfg.sigma;
    pp.sigma0 = cfg.sigma0;
    pp.sigma1 = cfg.sigma1;
    pp.letter = cfg.letter;
    pp.dimension = cfg.dimension;
    return preset(cfg.model, pp);
}

struct ResolvedModel {
    ModelPreset meta;
    std::optional<SigVolParams> params;  ///< absent for metadata-only presets without inline ell
};

ResolvedModel resolve_model(const RunConfig& cfg) {
    ResolvedModel r{resolve_preset(cfg), std::nullopt};
    std::optional<DualElement> ell = r.meta.ell;
    if (cfg.ell) ell = DualElement(cfg.dimension, parse_terms(*cfg.ell));
    if (!ell) return r;
    SigVolParams p{*ell, Weight::geometric(2.0), 1.0, {}, 1.0, 100};
    p.weight = cfg.weight ? Weight::parse(*cfg.weight) : r.meta.weight;
    p.s0 = cfg.s0;
    p.eta = cfg.eta ? *cfg.eta : r.meta.eta;
    p.horizon = cfg.horizon;
    p.steps = cfg.steps;
    p.validate();
    r.params = p;
    return r;
}

const SigVolParams& need_params(const ResolvedModel& m) {
    if (!m.params) throw InvalidArgument("model '" + m.meta.name + "' is metadata only; supply --ell");
    return *m.params;
}

std::uint64_t need_seed(const RunConfig& cfg) {
    if (!cfg.seed) throw InvalidArgument("--seed is required for '" + cfg.command + "'");
    return *cfg.seed;
}

void note_warning(const ResolvedModel& m, std::ostream& err) {
    if (!m.meta.warning.empty()) err << "warning: " << m.meta.name << ": " << m.meta.warning << '\n';
}

// ---------------------------------------------------------------- selftest

PathGrid random_pl_path(int d, std::uint64_t path, std::size_t segments) {
    const auto width = static_cast<std::size_t>(d + 1);
    std::vector<double> times{0.0}, values(width, 0.0);
    for (std::size_t k = 1; k <= segments; ++k) {
        const auto step = static_cast<std::uint32_t>(k);
        const double t = times.back() + 0.1 + counter_uniform(2024, path, step, 0);
        times.push_back(t);
        values.push_back(t);
        for (int j = 1; j <= d; ++j)
            values.push_back(values[(k - 1) * width + static_cast<std::size_t>(j)] +
                             counter_normal(2024, path, step, static_cast<std::uint16_t>(j), Stream::auxiliary));
    }
    return PathGrid(std::move(times), std::move(values), d);
}

PathGrid subpath(const PathGrid& path, std::size_t from) {
    const auto width = static_cast<std::size_t>(path.dimension() + 1);
    std::vector<double> times(path.times().begin() + static_cast<std::ptrdiff_t>(from), path.times().end());
    std::vector<double> values;
    values.reserve(times.size() * width);
    for (std::size_t k = from; k <= path.steps(); ++k)
        for (double v : path.value(k)) values.push_back(v);
    return PathGrid(std::move(times), std::move(values), path.dimension());
}

int run_selftest(const RunConfig& cfg, std::ostream& out) {
    Report rep;
    bool all = true;
    auto record = [&](const std::string& name, bool pass, double metric) {
        rep.row("selftest", name, std::string(pass ? "pass" : "fail"));
        rep.row("metric", name, metric);
        all = all && pass;
    };

    const auto e1 = GradedTensor::basis(1, 2, Word{1});
    record("shuffle_normalisation", shuffle_product(e1, e1, 2) == GradedTensor::basis(1, 2, Word{1, 1}, 2.0), 0.0);

    constexpr std::size_t levels = 5, segments = 6;
    bool involution = true;
    double shuffle_err = 0.0, chen_err = 0.0;
    for (std::uint64_t p = 0; p < 20; ++p) {
        const int d = 1 + static_cast<int>(p % 3);
        const auto path = random_pl_path(d, p, segments);
        const auto stream = signature_piecewise_linear(path, levels);
        const auto x = stream.at(segments);
        involution = involution && antipode(antipode(x)) == x;
        for (const auto& a : enumerate_words(d, 1, 2))
            for (const auto& b : enumerate_words(d, 1, levels - a.size())) {
                double sh = 0.0;
                for (const auto& [w, c] : shuffle_words(a, b)) sh += c * x.coeff(w);
                shuffle_err = std::max(shuffle_err, std::abs(x.coeff(a) * x.coeff(b) - sh) / (1.0 + std::abs(sh)));
            }
        for (std::size_t split = 1; split < segments; ++split) {
            const auto tail = signature_piecewise_linear(subpath(path, split), levels);
            const auto chained = concat_product(stream.at(split), tail.at(segments - split), levels);
            for (const auto& [w, c] : (chained - x).coeffs())
                chen_err = std::max(chen_err, std::abs(c) / (1.0 + std::abs(x.coeff(w))));
        }
    }
    record("antipode_involution", involution, 0.0);
    record("shuffle_identity", shuffle_err <= 1e-10, shuffle_err);
    record("chen_identity", chen_err <= 1e-12, chen_err);

    using C = Philox4x32::Counter;
    const bool kat = Philox4x32(Philox4x32::Key{0, 0})(C{0, 0, 0, 0}) ==
                     C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8};
    record("philox_known_answer", kat, 0.0);

    const double sigma = 0.2;
    const auto table = build_generator(2, 1, LogPriceBlock{DualElement(1, {{Word{}, sigma}}), {}}, 1);
    const auto flow = integrate_flow(RiccatiState::from_direction(table, DualElement::zero(1), 2.0), 1.0, table);
    const double psi = flow.exploded() ? std::nan("") : flow.solved().state[0];
    const double bs_err = std::abs(psi - 0.5 * sigma * sigma * (4.0 - 2.0));
    record("riccati_black_scholes", bs_err <= 1e-8, bs_err);

    const double kappa = kappa_tail(Weight::geometric(2.0), 1);
    record("kappa_closed_form", std::abs(kappa * kappa - 1.0 / 12.0) <= 1e-15, kappa);

    emit(cfg, "selftest.csv", rep.str(), out);
    return all ? 0 : 1;
}

// ---------------------------------------------------------------- simulate

int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto model = resolve_model(cfg);
    note_warning(model, err);
    const auto& params = need_params(model);
    const std::size_t trunc = cfg.trunc.value_or(params.ell.degree());
    if (trunc < params.ell.degree())
        throw TruncationError(fmt::format("--trunc {} below the support length {} of ell", trunc, params.ell.degree()));
    const auto paths = simulate_brownian_grid(params.dimension(), params.horizon, params.steps, cfg.paths,
                                              need_seed(cfg));
    std::vector<PricePath> prices;
    prices.reserve(cfg.paths);
    for (std::size_t i = 0; i < cfg.paths; ++i) {
        const auto path = paths.path(i);
        prices.push_back(simulate_price_path(params, path, signature_piecewise_linear(path, trunc)));
    }
    std::ostringstream csv;
    write_price_csv(csv, prices);
    emit(cfg, "paths.csv", csv.str(), out);
    return 0;
}

// ---------------------------------------------------------------- hypotheses

int run_hypotheses(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto model = resolve_model(cfg);
    note_warning(model, err);
    const auto& params = need_params(model);
    const auto seed = need_seed(cfg);
    Report rep;
    rep.row("model", "name", model.meta.name);
    rep.row("model", "weight", params.weight.to_string());

    const auto wc = weight_check(params.weight, 10);
    rep.flag("H2", "unit_at_zero", wc.unit_at_zero);
    rep.flag("H2", "monotone", wc.monotone);
    rep.row("H2", "c_w_estimate", wc.c_w_estimate);
    rep.row("H2", "growth_r", wc.growth_r);

    const auto h1 = check_H1(params.ell, params.weight, cfg.tail_terms);
    rep.row("H1", "value", h1.value);
    rep.flag("H1", "divergent", h1.divergent);

    const auto h3 = estimate_H3(params, cfg.lambda, cfg.paths, seed);
    rep.row("H3", "lambda", cfg.lambda);
    rep.row("H3", "mean", h3.mean);
    rep.row("H3", "ci_halfwidth", h3.ci_halfwidth);
    rep.flag("H3", "suspicious_heavy_tail", h3.suspicious_heavy_tail);
    rep.row("H3", "n_paths", static_cast<double>(h3.n_paths));
    rep.row("H3", "note", h3.note);

    const auto paths = simulate_brownian_grid(params.dimension(), params.horizon, params.steps, cfg.paths, seed);
    const auto mart = martingale_check(terminal_price_moments(params, paths), params.s0);
    rep.row("martingale", "mean_ST", mart.mean_ST);
    rep.row("martingale", "se", mart.se);
    rep.row("martingale", "z_score", mart.z_score);

    emit(cfg, "hypotheses.csv", rep.str(), out);
    return 0;
}

// ---------------------------------------------------------------- transform

int run_transform(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto model = resolve_model(cfg);
    note_warning(model, err);
    const int d = cfg.dimension;
    const DualElement direction(d, parse_terms(cfg.direction));

    std::optional<LogPriceBlock> block;
    std::optional<std::size_t> ell_degree;
    if (model.params) {
        block = LogPriceBlock{model.params->ell, model.params->direction()};
        ell_degree = model.params->ell.degree();
    } else if (cfg.u_x != 0.0) {
        throw InvalidArgument("uX needs a model with a volatility symbol");
    }
    const std::size_t need = required_truncation(direction.degree(), ell_degree);
    const std::size_t trunc = cfg.trunc.value_or(std::max<std::size_t>(need, 1));
    const auto table = build_generator(trunc, d, block, direction.degree());

    RiccatiOptions opts;
    opts.flow.record_trajectory = true;
    if (model.params) opts.weight = model.params->weight;
    const auto flow = integrate_flow(RiccatiState::from_direction(table, direction, cfg.u_x), cfg.horizon, table, opts);

    std::string csv = "tau,component_word,psi_value\n";
    for (const auto& step : flow.trajectory)
        for (std::size_t i = 0; i < step.state.size(); ++i)
            if (step.state[i] != 0.0) csv += num(step.tau) + ',' + table.label(i) + ',' + num(step.state[i]) + '\n';
    const double x0 = std::log(cfg.s0);
    if (flow.exploded()) {
        csv += "exploded_at=" + num(flow.explosion().t_star) + '\n';
        emit(cfg, "transform.csv", csv, out);
        err << "Riccati flow exploded: " << flow.explosion().diagnostic << '\n';
        return static_cast<int>(Status::degenerate);
    }
    const double lambda0 = transform_value(flow, table, x0);
    csv += "lambda0=" + num(lambda0) + '\n';
    emit(cfg, "transform.csv", csv, out);

    if (cfg.seed && model.params) {
        const auto mc = transform_monte_carlo(*model.params, direction, cfg.u_x, cfg.paths, *cfg.seed);
        out << "mc_lambda0=" << num(mc.mean) << '\n';
        out << "mc_se=" << num(mc.se) << '\n';
        out << "mc_z=" << num(mc.se > 0.0 ? (mc.mean - lambda0) / mc.se : 0.0) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------- hedge

HedgeBasis basis_from(const RunConfig& cfg) {
    HedgeBasis b;
    b.integrand_depth = cfg.depth;
    b.residual_window = cfg.window;
    if (cfg.strikes) b.static_strikes = *cfg.strikes;
    else b.static_quantiles = cfg.quantiles;
    b.ridge = cfg.ridge;
    b.drop_tol = cfg.drop_tol;
    b.validate();
    return b;
}

int run_hedge(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto model = resolve_model(cfg);
    note_warning(model, err);
    const auto& params = need_params(model);
    const auto seed = need_seed(cfg);
    const auto spec = PayoffSpec::parse(cfg.payoff);
    const auto basis = basis_from(cfg);
    if (cfg.trunc && *cfg.trunc < basis.required_truncation())
        throw TruncationError(fmt::format("--trunc {} below the basis requirement {}", *cfg.trunc,
                                          basis.required_truncation()));
    const auto ex = simulate_hedge_experiment(params, spec, basis, cfg.paths, seed);
    const auto r = gkw_project(ex.payoffs, ex.design, basis, params.weight);

    Report rep;
    rep.row("meta", "model", model.meta.name);
    rep.row("meta", "payoff", spec.to_string());
    rep.row("meta", "paths", static_cast<double>(cfg.paths));
    rep.row("meta", "seed", std::to_string(seed));
    rep.row("price", "price", r.price);
    for (const auto& [w, c] : r.dynamic_coeffs) rep.row("dynamic", w.to_string(), c);
    for (const auto& [k, c] : r.static_coeffs) rep.row("static", num(k), c);
    for (const auto& [w, c] : r.residual_coeffs) rep.row("residual", w.to_string(), c);
    for (const auto& w : r.dropped_residual_words) rep.row("dropped_residual", w.to_string(), std::string("null"));
    for (const auto& c : r.dropped_columns) rep.row("dropped_column", c, std::string("redundant"));
    rep.row("summary", "payoff_norm", r.payoff_norm);
    rep.row("summary", "hedge_error_norm", r.hedge_error_norm);
    rep.row("summary", "residual_norm", r.residual_norm);
    rep.row("summary", "residual_norm_se", r.residual_norm_se);
    rep.row("summary", "relative_residual", r.payoff_norm > 0.0 ? r.residual_norm / r.payoff_norm : 0.0);
    rep.row("summary", "kappa_bound", r.kappa_bound);
    rep.row("summary", "kappa_times_payoff_norm", r.kappa_bound * r.payoff_norm);
    rep.row("summary", "gram_min_eigenvalue", r.gram_min_eigenvalue);
    rep.row("summary", "ridge", r.ridge);
    rep.flag("summary", "undersampled", r.undersampled);
    if (r.undersampled) err << "warning: fewer than 10 samples per design column\n";
    emit(cfg, "hedge.csv", rep.str(), out);
    return 0;
}

// ---------------------------------------------------------------- depth-report

int run_depth_report(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Report rep;
    PresetParams pp;
    for (const auto& name : preset_names()) {
        const auto m = preset(name, pp);
        rep.row("table", name + ".completeness_depth", m.depth.completeness.to_string());
        rep.row("table", name + ".polynomial_degree", m.depth.polynomial_degree.to_string());
        rep.row("table", name + ".riccati", m.riccati_structure);
        rep.flag("table", name + ".metadata_only", m.metadata_only());
    }
    const auto model = resolve_model(cfg);
    note_warning(model, err);
    if (model.params) {
        const auto seed = need_seed(cfg);
        const auto spec = PayoffSpec::parse(cfg.scan_payoff);
        const auto rows = depth_scan(*model.params, spec, cfg.depths, cfg.paths, seed);
        rep.row("scan", "model", model.meta.name);
        rep.row("scan", "payoff", spec.to_string());
        bool monotone = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto key = "depth_" + std::to_string(rows[i].depth);
            rep.row("scan", key + ".residual_norm", rows[i].residual_norm);
            rep.row("scan", key + ".residual_se", rows[i].residual_se);
            rep.row("scan", key + ".relative", rows[i].payoff_norm > 0 ? rows[i].residual_norm / rows[i].payoff_norm : 0.0);
            if (i > 0) monotone = monotone && rows[i].residual_norm <= rows[i - 1].residual_norm + 2.0 * rows[i].residual_se;
        }
        rep.flag("scan", "monotone_within_2se", monotone);
    }
    emit(cfg, "depth.csv", rep.str(), out);
    return 0;
}

// ---------------------------------------------------------------- argument parsing

struct Flags {
    std::optional<std::string> config, model, ell, eta, weight, out, direction, payoff, window, strikes, depths,
        scan_payoff;
    std::optional<int> dimension, letter;
    std::optional<double> sigma, sigma0, sigma1, horizon, s0, u_x, ridge, lambda, drop_tol;
    std::optional<std::size_t> steps, paths, trunc, depth, quantiles, tail_terms;
    std::optional<std::uint64_t> seed;
};

template <class T>
void over(T& dst, const std::optional<T>& src) {
    if (src) dst = *src;
}
template <class T>
void over(std::optional<T>& dst, const std::optional<T>& src) {
    if (src) dst = src;
}

RunConfig merge(const std::string& command, const Flags& f) {
    RunConfig cfg;
    cfg.command = command;
    if (f.config) {
        std::ifstream in(*f.config, std::ios::binary);
        if (!in) throw InvalidArgument("cannot read config file " + *f.config);
        std::stringstream buffer;
        buffer << in.rdbuf();
        apply_json(cfg, buffer.str());
    }
    over(cfg.model, f.model);
    over(cfg.ell, f.ell);
    if (f.eta) cfg.eta = parse_reals(*f.eta);
    over(cfg.weight, f.weight);
    over(cfg.out, f.out);
    over(cfg.direction, f.direction);
    over(cfg.payoff, f.payoff);
    if (f.window) cfg.window = parse_window(*f.window);
    if (f.strikes) cfg.strikes = parse_reals(*f.strikes);
    if (f.depths) {
        cfg.depths.clear();
        for (double v : parse_reals(*f.depths)) {
            if (v < 0 || v != std::floor(v)) throw InvalidArgument("depths must be non-negative integers");
            cfg.depths.push_back(static_cast<std::size_t>(v));
        }
    }
    over(cfg.scan_payoff, f.scan_payoff);
    over(cfg.dimension, f.dimension);
    over(cfg.letter, f.letter);
    over(cfg.sigma, f.sigma);
    over(cfg.sigma0, f.sigma0);
    over(cfg.sigma1, f.sigma1);
    over(cfg.horizon, f.horizon);
    over(cfg.s0, f.s0);
    over(cfg.u_x, f.u_x);
    over(cfg.ridge, f.ridge);
    over(cfg.lambda, f.lambda);
    over(cfg.drop_tol, f.drop_tol);
    over(cfg.steps, f.steps);
    over(cfg.paths, f.paths);
    over(cfg.trunc, f.trunc);
    over(cfg.depth, f.depth);
    over(cfg.quantiles, f.quantiles);
    over(cfg.tail_terms, f.tail_terms);
    over(cfg.seed, f.seed);
    // A preset's own dimension follows the Brownian letter it loads.
    if (!f.dimension && cfg.letter > cfg.dimension) cfg.dimension = cfg.letter;
    cfg.validate();
    return cfg;
}

int finish(Status s, std::ostream& out) {
    static constexpr const char* names[] = {"ok", "invalid", "degenerate"};
    out << "status=" << names[static_cast<int>(s)] << '\n';
    return static_cast<int>(s);
}

} // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"signature volatility toolkit"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--config", f.config, "JSON run configuration");
    app.add_option("--seed", f.seed, "top-level seed");
    app.add_option("--out", f.out, "output directory (default: stdout)");
    app.add_option("--paths", f.paths, "Monte Carlo paths");
    app.add_option("--steps", f.steps, "grid steps");
    app.add_option("--trunc", f.trunc, "signature / Riccati truncation level");
    app.add_option("--model", f.model, "preset name");
    app.add_option("--ell", f.ell, "inline volatility symbol word=coeff,...");
    app.add_option("--dimension,-d", f.dimension, "Brownian dimension");
    app.add_option("--letter", f.letter, "Brownian letter used by presets");
    app.add_option("--eta", f.eta, "price driver direction, comma separated");
    app.add_option("--weight", f.weight, "geometric:r | polynomial:a | constant");
    app.add_option("--sigma", f.sigma);
    app.add_option("--sigma0", f.sigma0);
    app.add_option("--sigma1", f.sigma1);
    app.add_option("--T", f.horizon, "horizon");
    app.add_option("--s0", f.s0, "initial price");
    app.add_option("--u,--direction", f.direction, "transform direction word=coeff,...");
    app.add_option("--uX", f.u_x, "log-price transform coefficient");
    app.add_option("--payoff", f.payoff, "call:K=.. | digital:K=.. | asian:K=.. | varswap");
    app.add_option("--depth", f.depth, "integrand depth");
    app.add_option("--window", f.window, "residual window N_low:M");
    app.add_option("--strikes", f.strikes, "static call strikes, comma separated");
    app.add_option("--quantiles", f.quantiles, "static strikes from S_T quantiles when no strikes given");
    app.add_option("--ridge", f.ridge);
    app.add_option("--drop-tol", f.drop_tol);
    app.add_option("--lambda", f.lambda, "H3 exponent");
    app.add_option("--tail-terms", f.tail_terms);
    app.add_option("--depths", f.depths, "depth-report scan depths, comma separated");
    app.add_option("--scan-payoff", f.scan_payoff, "depth-report payoff");

    const char* commands[][2] = {{"selftest", "algebraic identity suite"},
                                 {"simulate", "price paths to CSV"},
                                 {"hypotheses", "H1/H2/H3 and martingale report"},
                                 {"transform", "Riccati transform with Monte Carlo cross-check"},
                                 {"hedge", "GKW hedging report"},
                                 {"depth-report", "completeness depth table and empirical scan"}};
    for (const auto& c : commands) app.add_subcommand(c[0], c[1])->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return finish(Status::ok, out);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return finish(Status::invalid, out);
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const auto cfg = merge(command, f);
        int code = 0;
        if (command == "selftest") code = run_selftest(cfg, out);
        else if (command == "simulate") code = run_simulate(cfg, out, err);
        else if (command == "hypotheses") code = run_hypotheses(cfg, out, err);
        else if (command == "transform") code = run_transform(cfg, out, err);
        else if (command == "hedge") code = run_hedge(cfg, out, err);
        else code = run_depth_report(cfg, out, err);
        return finish(static_cast<Status>(code), out);
    } catch (const DegenerateSystem& e) {
        err << "degenerate: " << e.what() << '\n';
        return finish(Status::degenerate, out);
    } catch (const InvalidArgument& e) {
        err << "invalid: " << e.what() << '\n';
        return finish(Status::invalid, out);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "invalid: " << e.what() << '\n';
        return finish(Status::invalid, out);
    }
}

} // namespace sigvol::cli
