#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sigvol/dense_tensor.hpp"
#include "sigvol/tensor.hpp"

namespace sigvol {

/// Time-augmented path sampled on a strictly increasing grid.
///
/// Each row holds d+1 coordinates; coordinate 0 equals the grid time.
class PathGrid {
public:
    PathGrid(std::vector<double> times, std::vector<double> values, int dimension);

    int dimension() const noexcept { return dimension_; }
    std::size_t steps() const noexcept { return times_.size() - 1; }
    const std::vector<double>& times() const noexcept { return times_; }
    std::span<const double> value(std::size_t k) const;
    /// values[k+1] - values[k], length d+1.
    std::vector<double> increment(std::size_t k) const;
    /// Brownian coordinate j (1..d) at grid point k.
    double brownian(std::size_t k, int j) const { return values_[k * width() + static_cast<std::size_t>(j)]; }

private:
    std::size_t width() const noexcept { return static_cast<std::size_t>(dimension_) + 1; }

    int dimension_;
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Truncated signatures X_{0,t_k} of a path at every grid time, stored densely.
class SignatureStream {
public:
    SignatureStream(TensorLayout layout, std::size_t points);

    const TensorLayout& layout() const noexcept { return layout_; }
    std::size_t points() const noexcept { return points_; }
    std::span<const double> row(std::size_t k) const { return {data_.data() + k * layout_.size(), layout_.size()}; }
    std::span<double> row(std::size_t k) { return {data_.data() + k * layout_.size(), layout_.size()}; }
    std::span<const double> terminal() const { return row(points_ - 1); }

    double coeff(std::size_t k, const Word& w) const { return row(k)[layout_.index(w)]; }
    GradedTensor at(std::size_t k) const { return to_sparse(layout_, row(k)); }

private:
    TensorLayout layout_;
    std::size_t points_;
    std::vector<double> data_;
};

/// Signature of one linear piece with increment dx (length d+1).
GradedTensor segment_exponential(std::span<const double> dx, std::size_t truncation);

/// Chains segment exponentials along the grid with the Chen identity.
SignatureStream signature_piecewise_linear(const PathGrid& path, std::size_t truncation);

/// Terminal piecewise-linear signature only, without storing the stream.
std::vector<double> terminal_signature(const PathGrid& path, const TensorLayout& layout);

/// Brownian paths on a uniform grid, generated on demand.
///
/// Path i depends only on (seed, i): increments are drawn from the counter-based
/// generator keyed by (seed, path, step, coordinate).
class BrownianPathSet {
public:
    BrownianPathSet(int dimension, double horizon, std::size_t steps, std::size_t n_paths, std::uint64_t seed);

    int dimension() const noexcept { return dimension_; }
    double horizon() const noexcept { return horizon_; }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return n_paths_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<double>& times() const noexcept { return times_; }

    PathGrid path(std::size_t i) const;
    /// Brownian increments of path i, row-major (step, coordinate 1..d).
    std::vector<double> increments(std::size_t i) const;

private:
    int dimension_;
    double horizon_;
    std::size_t steps_;
    std::size_t n_paths_;
    std::uint64_t seed_;
    std::vector<double> times_;
};

BrownianPathSet simulate_brownian_grid(int dimension, double horizon, std::size_t steps, std::size_t n_paths,
                                       std::uint64_t seed);

/// C_p (t-s)^{p n / 2} / (n!)^{p/2}; C_p defaults to 2^p.
double moment_bound(std::size_t level, double span, double p, double c_p = -1.0);

/// Brownian path on a dyadic grid of 2^k steps over [0, T] built by midpoint
/// (Levy) refinement, so level k+1 refines level k of the same path.
PathGrid dyadic_brownian_path(int dimension, double horizon, std::size_t k, std::uint64_t seed, std::uint64_t path);

struct StratonovichResult {
    GradedTensor signature;
    std::size_t refinement_level;  ///< k such that 2^k steps were used
    double last_change;            ///< weighted norm of the last refinement difference
    bool converged;
};

/// Stratonovich signature as the piecewise-linear limit: refines the dyadic grid
/// until successive truncated signatures differ by less than `tol` in ||.||_w.
StratonovichResult stratonovich_signature(int dimension, double horizon, std::size_t truncation,
                                          std::uint64_t seed, std::uint64_t path, const Weight& w,
                                          double tol = 1e-4, std::size_t k_min = 2, std::size_t k_max = 16);

/// Binary path cache: little-endian header (u64 d, f64 T, u64 steps, u64 n_paths,
/// u64 seed) followed by row-major f64 Brownian increments (path, step, coordinate).
void write_path_cache(std::ostream& out, const BrownianPathSet& paths);

struct PathCache {
    int dimension;
    double horizon;
    std::size_t steps;
    std::size_t n_paths;
    std::uint64_t seed;
    std::vector<double> increments;

    PathGrid path(std::size_t i) const;
};

PathCache read_path_cache(std::istream& in);

} // namespace sigvol
