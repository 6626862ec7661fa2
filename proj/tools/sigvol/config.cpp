#include "sigvol/config.hpp"

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "sigvol/error.hpp"

namespace sigvol::cli {

namespace {

using json = nlohmann::json;

template <class T>
void take(const json& obj, const char* key, T& dst) {
    if (obj.contains(key)) dst = obj.at(key).get<T>();
}

template <class T>
void take(const json& obj, const char* key, std::optional<T>& dst) {
    if (obj.contains(key)) dst = obj.at(key).get<T>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw InvalidArgument("unknown config key '" + key + "' in " + where);
    }
}

const json& block(const json& root, const char* name) {
    static const json empty = json::object();
    if (!root.contains(name)) return empty;
    const json& b = root.at(name);
    if (!b.is_object()) throw InvalidArgument(std::string("config block '") + name + "' must be an object");
    return b;
}

} // namespace

void RunConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive");
    };
    positive(horizon, "T");
    positive(s0, "s0");
    if (steps < 1) throw InvalidArgument("steps must be >= 1");
    if (paths < 2) throw InvalidArgument("paths must be >= 2");
    if (dimension < 1 || dimension > 255) throw InvalidArgument("dimension must lie in 1..255");
    if (letter < 1 || letter > dimension) throw InvalidArgument("letter must lie in 1..dimension");
    if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
    if (ridge && !(*ridge >= 0.0)) throw InvalidArgument("ridge must be non-negative");
    if (!(drop_tol >= 0.0)) throw InvalidArgument("drop_tol must be non-negative");
    if (window && !(window->first < window->second)) throw InvalidArgument("window needs N_low < M");
    if (depths.empty()) throw InvalidArgument("depths must not be empty");
    if (!std::isfinite(u_x)) throw InvalidArgument("uX must be finite");
}

void apply_json(RunConfig& cfg, const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw InvalidArgument("config root must be an object");
    reject_unknown(root,
                   {"model", "ell", "dimension", "letter", "eta", "weight", "sigma", "sigma0", "sigma1", "T", "s0",
                    "steps", "paths", "trunc", "seed", "out", "transform", "hedge", "hypotheses", "depth_report"},
                   "the root");
    try {
        take(root, "model", cfg.model);
        take(root, "ell", cfg.ell);
        take(root, "dimension", cfg.dimension);
        take(root, "letter", cfg.letter);
        take(root, "eta", cfg.eta);
        take(root, "weight", cfg.weight);
        take(root, "sigma", cfg.sigma);
        take(root, "sigma0", cfg.sigma0);
        take(root, "sigma1", cfg.sigma1);
        take(root, "T", cfg.horizon);
        take(root, "s0", cfg.s0);
        take(root, "steps", cfg.steps);
        take(root, "paths", cfg.paths);
        take(root, "trunc", cfg.trunc);
        take(root, "seed", cfg.seed);
        take(root, "out", cfg.out);

        const auto& tr = block(root, "transform");
        reject_unknown(tr, {"u", "uX"}, "transform");
        take(tr, "u", cfg.direction);
        take(tr, "uX", cfg.u_x);

        const auto& he = block(root, "hedge");
        reject_unknown(he, {"payoff", "depth", "window", "strikes", "quantiles", "ridge", "drop_tol"}, "hedge");
        take(he, "payoff", cfg.payoff);
        take(he, "depth", cfg.depth);
        if (he.contains("window")) cfg.window = parse_window(he.at("window").get<std::string>());
        take(he, "strikes", cfg.strikes);
        take(he, "quantiles", cfg.quantiles);
        take(he, "ridge", cfg.ridge);
        take(he, "drop_tol", cfg.drop_tol);

        const auto& hy = block(root, "hypotheses");
        reject_unknown(hy, {"lambda", "tail_terms"}, "hypotheses");
        take(hy, "lambda", cfg.lambda);
        take(hy, "tail_terms", cfg.tail_terms);

        const auto& dr = block(root, "depth_report");
        reject_unknown(dr, {"depths", "payoff"}, "depth_report");
        take(dr, "depths", cfg.depths);
        take(dr, "payoff", cfg.scan_payoff);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config value has the wrong type: ") + e.what());
    }
}

std::pair<std::size_t, std::size_t> parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidArgument("window must read N_low:M, got '" + text + "'");
    try {
        std::size_t a = 0, b = 0;
        const auto lo = std::stoul(text.substr(0, colon), &a);
        const auto hi = std::stoul(text.substr(colon + 1), &b);
        if (a != colon || b != text.size() - colon - 1) throw std::invalid_argument("trailing");
        return {lo, hi};
    } catch (const std::exception&) {
        throw InvalidArgument("window must read N_low:M, got '" + text + "'");
    }
}

std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InvalidArgument("not a number: '" + item + "'");
        }
    }
    return out;
}

} // namespace sigvol::cli
