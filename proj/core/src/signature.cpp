#include "sigvol/signature.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <ostream>

#include "sigvol/error.hpp"
#include "sigvol/rng.hpp"

namespace sigvol {

PathGrid::PathGrid(std::vector<double> times, std::vector<double> values, int dimension)
    : dimension_(dimension), times_(std::move(times)), values_(std::move(values)) {
    if (dimension < 1) throw InvalidArgument("path dimension must be positive");
    if (times_.empty()) throw InvalidArgument("path grid needs at least one time");
    if (values_.size() != times_.size() * width())
        throw InvalidArgument(fmt::format("path grid holds {} values, expected {}", values_.size(),
                                          times_.size() * width()));
    for (std::size_t k = 0; k < times_.size(); ++k) {
        if (k > 0 && !(times_[k] > times_[k - 1])) throw InvalidArgument("path grid times must be strictly increasing");
        if (values_[k * width()] != times_[k])
            throw InvalidArgument(fmt::format("time coordinate at grid point {} differs from the grid time", k));
    }
}

std::span<const double> PathGrid::value(std::size_t k) const { return {values_.data() + k * width(), width()}; }

std::vector<double> PathGrid::increment(std::size_t k) const {
    std::vector<double> dx(width());
    for (std::size_t j = 0; j < width(); ++j) dx[j] = values_[(k + 1) * width() + j] - values_[k * width() + j];
    return dx;
}

SignatureStream::SignatureStream(TensorLayout layout, std::size_t points)
    : layout_(std::move(layout)), points_(points), data_(points * layout_.size(), 0.0) {}

GradedTensor segment_exponential(std::span<const double> dx, std::size_t truncation) {
    if (dx.size() < 2) throw InvalidArgument("segment increment needs at least the time coordinate and one more");
    TensorLayout layout(static_cast<int>(dx.size()) - 1, truncation);
    std::vector<double> dense(layout.size());
    dense_segment_exponential(layout, dx, dense);
    return to_sparse(layout, dense);
}

SignatureStream signature_piecewise_linear(const PathGrid& path, std::size_t truncation) {
    TensorLayout layout(path.dimension(), truncation);
    SignatureStream stream(layout, path.steps() + 1);
    stream.row(0)[0] = 1.0;
    std::vector<double> seg(layout.size());
    for (std::size_t k = 0; k < path.steps(); ++k) {
        dense_segment_exponential(layout, path.increment(k), seg);
        dense_concat(layout, stream.row(k), seg, stream.row(k + 1));
    }
    return stream;
}

std::vector<double> terminal_signature(const PathGrid& path, const TensorLayout& layout) {
    if (layout.dimension() != path.dimension()) throw DimensionMismatch("terminal_signature: dimension mismatch");
    std::vector<double> cur(layout.size(), 0.0), next(layout.size()), seg(layout.size());
    cur[0] = 1.0;
    for (std::size_t k = 0; k < path.steps(); ++k) {
        dense_segment_exponential(layout, path.increment(k), seg);
        dense_concat(layout, cur, seg, next);
        cur.swap(next);
    }
    return cur;
}

BrownianPathSet::BrownianPathSet(int dimension, double horizon, std::size_t steps, std::size_t n_paths,
                                 std::uint64_t seed)
    : dimension_(dimension), horizon_(horizon), steps_(steps), n_paths_(n_paths), seed_(seed) {
    if (dimension < 1) throw InvalidArgument("Brownian dimension must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("horizon T must be positive");
    if (steps < 1) throw InvalidArgument("grid needs at least one step");
    if (n_paths < 1) throw InvalidArgument("need at least one path");
    times_.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) times_[k] = horizon * static_cast<double>(k) / static_cast<double>(steps);
}

std::vector<double> BrownianPathSet::increments(std::size_t i) const {
    const auto d = static_cast<std::size_t>(dimension_);
    std::vector<double> dw(steps_ * d);
    for (std::size_t k = 0; k < steps_; ++k) {
        const double sd = std::sqrt(times_[k + 1] - times_[k]);
        for (std::size_t j = 0; j < d; ++j)
            dw[k * d + j] = sd * counter_normal(seed_, i, static_cast<std::uint32_t>(k), static_cast<std::uint16_t>(j + 1));
    }
    return dw;
}

namespace {

PathGrid path_from_increments(const std::vector<double>& times, std::span<const double> dw, int dimension) {
    const auto d = static_cast<std::size_t>(dimension);
    const std::size_t w = d + 1;
    std::vector<double> values(times.size() * w, 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        values[k * w] = times[k];
        if (k == 0) continue;
        for (std::size_t j = 0; j < d; ++j) values[k * w + 1 + j] = values[(k - 1) * w + 1 + j] + dw[(k - 1) * d + j];
    }
    return PathGrid(times, std::move(values), dimension);
}

} // namespace

PathGrid BrownianPathSet::path(std::size_t i) const {
    if (i >= n_paths_) throw InvalidArgument(fmt::format("path index {} out of range", i));
    return path_from_increments(times_, increments(i), dimension_);
}

BrownianPathSet simulate_brownian_grid(int dimension, double horizon, std::size_t steps, std::size_t n_paths,
                                       std::uint64_t seed) {
    return BrownianPathSet(dimension, horizon, steps, n_paths, seed);
}

double moment_bound(std::size_t level, double span, double p, double c_p) {
    if (!(span > 0.0)) throw InvalidArgument("moment_bound needs a positive span");
    if (c_p < 0.0) c_p = std::pow(2.0, p);
    const double n = static_cast<double>(level);
    return c_p * std::exp(0.5 * p * n * std::log(span) - 0.5 * p * std::lgamma(n + 1.0));
}

PathGrid dyadic_brownian_path(int dimension, double horizon, std::size_t k, std::uint64_t seed, std::uint64_t path) {
    if (k > 24) throw InvalidArgument("dyadic refinement level too large");
    const std::size_t n = std::size_t{1} << k;
    const auto d = static_cast<std::size_t>(dimension);
    // w[i * d + j] = W^{j+1}(i T / 2^k), filled coarse to fine.
    std::vector<double> w((n + 1) * d, 0.0);
    for (std::size_t j = 0; j < d; ++j)
        w[n * d + j] = std::sqrt(horizon) * counter_normal(seed, path, 0, static_cast<std::uint16_t>(j + 1), Stream::dyadic_bridge);
    for (std::size_t level = 1; level <= k; ++level) {
        const std::size_t stride = n >> (level - 1);
        const std::size_t half = stride / 2;
        const double h = horizon / static_cast<double>(std::size_t{1} << (level - 1));
        const double sd = std::sqrt(h / 4.0);
        for (std::size_t left = 0, idx = 0; left < n; left += stride, ++idx) {
            const std::size_t mid = left + half, right = left + stride;
            // The counter step packs (level, interval index) so every midpoint has its own draw.
            const auto step = static_cast<std::uint32_t>((level << 24) | idx);
            for (std::size_t j = 0; j < d; ++j) {
                const double z = counter_normal(seed, path, step, static_cast<std::uint16_t>(j + 1), Stream::dyadic_bridge);
                w[mid * d + j] = 0.5 * (w[left * d + j] + w[right * d + j]) + sd * z;
            }
        }
    }
    std::vector<double> times(n + 1), values((n + 1) * (d + 1));
    for (std::size_t i = 0; i <= n; ++i) {
        times[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
        values[i * (d + 1)] = times[i];
        for (std::size_t j = 0; j < d; ++j) values[i * (d + 1) + 1 + j] = w[i * d + j];
    }
    return PathGrid(std::move(times), std::move(values), dimension);
}

StratonovichResult stratonovich_signature(int dimension, double horizon, std::size_t truncation, std::uint64_t seed,
                                          std::uint64_t path, const Weight& w, double tol, std::size_t k_min,
                                          std::size_t k_max) {
    if (!(tol > 0.0)) throw InvalidArgument("refinement tolerance must be positive");
    if (k_min > k_max) throw InvalidArgument("k_min must not exceed k_max");
    TensorLayout layout(dimension, truncation);
    auto prev = to_sparse(layout, terminal_signature(dyadic_brownian_path(dimension, horizon, k_min, seed, path), layout));
    double change = std::numeric_limits<double>::infinity();
    for (std::size_t k = k_min + 1; k <= k_max; ++k) {
        auto cur = to_sparse(layout, terminal_signature(dyadic_brownian_path(dimension, horizon, k, seed, path), layout));
        change = weighted_norms(cur - prev, w).norm_w;
        prev = std::move(cur);
        if (change < tol) return {std::move(prev), k, change, true};
    }
    return {std::move(prev), k_max, change, false};
}

namespace {

template <class T>
void put_le(std::ostream& out, T value) {
    auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
    out.write(reinterpret_cast<const char*>(bits.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bits{};
    if (!in.read(reinterpret_cast<char*>(bits.data()), sizeof(T))) throw InvalidArgument("truncated path cache");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
    return std::bit_cast<T>(bits);
}

} // namespace

void write_path_cache(std::ostream& out, const BrownianPathSet& paths) {
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(paths.dimension()));
    put_le<double>(out, paths.horizon());
    put_le<std::uint64_t>(out, paths.steps());
    put_le<std::uint64_t>(out, paths.size());
    put_le<std::uint64_t>(out, paths.seed());
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (double v : paths.increments(i)) put_le<double>(out, v);
}

PathCache read_path_cache(std::istream& in) {
    PathCache c;
    const auto d = get_le<std::uint64_t>(in);
    if (d < 1 || d > 255) throw InvalidArgument("path cache: bad dimension");
    c.dimension = static_cast<int>(d);
    c.horizon = get_le<double>(in);
    c.steps = get_le<std::uint64_t>(in);
    c.n_paths = get_le<std::uint64_t>(in);
    c.seed = get_le<std::uint64_t>(in);
    if (!(c.horizon > 0.0) || c.steps < 1 || c.n_paths < 1) throw InvalidArgument("path cache: bad header");
    const std::size_t count = c.n_paths * c.steps * d;
    c.increments.resize(count);
    for (auto& v : c.increments) v = get_le<double>(in);
    return c;
}

PathGrid PathCache::path(std::size_t i) const {
    if (i >= n_paths) throw InvalidArgument("path index out of range");
    std::vector<double> times(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) times[k] = horizon * static_cast<double>(k) / static_cast<double>(steps);
    const std::size_t block = steps * static_cast<std::size_t>(dimension);
    return path_from_increments(times, std::span<const double>(increments).subspan(i * block, block), dimension);
}

} // namespace sigvol
