// Gamma-process degradation and its discretization into Markov transition
// matrices over condition states 1..m (state m = failed).
#pragma once

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbm {

/// Random effect on the gamma rate: rate ~ Gamma(shape kappa, rate lambda).
struct RandomEffect {
    double kappa = 1.0;
    double lambda = 1.0;
};

/**
 * @brief Stationary gamma degradation process.
 *
 * Over an interval of length t the increment is Gamma(alpha * t, rate). With a
 * random effect the rate itself is gamma distributed and `rate` is unused.
 */
struct GammaProcessParams {
    double alpha = 1.0;
    double rate = 1.0;
    std::optional<RandomEffect> random_effect;

    static GammaProcessParams fixed(double alpha, double rate) {
        GammaProcessParams p;
        p.alpha = alpha;
        p.rate = rate;
        return p;
    }

    static GammaProcessParams with_random_effect(double alpha, double kappa, double lambda) {
        GammaProcessParams p;
        p.alpha = alpha;
        p.rate = 0.0;
        p.random_effect = RandomEffect{kappa, lambda};
        return p;
    }

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) {
            throw std::domain_error("gamma process: alpha must be positive and finite");
        }
        if (random_effect) {
            if (!(random_effect->kappa > 0.0) || !(random_effect->lambda > 0.0) ||
                !std::isfinite(random_effect->kappa) || !std::isfinite(random_effect->lambda)) {
                throw std::domain_error("gamma process: kappa and lambda must be positive");
            }
        } else if (!(rate > 0.0) || !std::isfinite(rate)) {
            throw std::domain_error("gamma process: rate must be positive and finite");
        }
    }
};

namespace detail {

inline void check_cdf_args(double x, double shape) {
    if (std::isnan(x) || x < 0.0) {
        throw std::domain_error("increment cdf: x must be nonnegative");
    }
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw std::domain_error("increment cdf: shape must be positive and finite");
    }
}

}  // namespace detail

/// P(X <= x) for X ~ Gamma(shape, rate).
inline double gamma_increment_cdf(double x, double shape, double rate) {
    detail::check_cdf_args(x, shape);
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::domain_error("increment cdf: rate must be positive and finite");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::gamma_p(shape, x * rate);
}

/**
 * @brief Marginal CDF of X where X | g ~ Gamma(shape, g) and g ~ Gamma(kappa, lambda).
 *
 * X / (X + lambda) is Beta(shape, kappa) distributed, which gives
 * P(X <= x) = I_{x / (x + lambda)}(shape, kappa).
 */
inline double compound_gamma_increment_cdf(double x, double shape, double kappa, double lambda) {
    detail::check_cdf_args(x, shape);
    if (!(kappa > 0.0) || !(lambda > 0.0) || !std::isfinite(kappa) || !std::isfinite(lambda)) {
        throw std::domain_error("compound increment cdf: kappa and lambda must be positive");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::ibeta(shape, kappa, x / (x + lambda));
}

/// Increment CDF over an interval of length `interval`.
inline double increment_cdf(const GammaProcessParams& p, double x, double interval) {
    const double shape = p.alpha * interval;
    if (p.random_effect) {
        return compound_gamma_increment_cdf(x, shape, p.random_effect->kappa, p.random_effect->lambda);
    }
    return gamma_increment_cdf(x, shape, p.rate);
}

/**
 * @brief Discretization of [0, inf) degradation into m condition states.
 *
 * States 1..m-1 are working bins partitioning [0, L); state m is [L, inf).
 * Vectors are indexed by state - 1.
 */
struct StateGrid {
    int m = 0;
    double failure_threshold = 0.0;
    std::vector<double> bin_edges;              ///< upper edge of each working bin, last == L
    std::vector<double> representative_levels;  ///< one per working state

    double lower_edge(int state) const { return state == 1 ? 0.0 : bin_edges[state - 2]; }
    double upper_edge(int state) const { return bin_edges[state - 1]; }
    double level(int state) const { return representative_levels[state - 1]; }
};

/**
 * @brief Equal-width working bins; state 1 sits at level 0 (as new), the
 * other working states at their bin midpoints.
 */
inline StateGrid make_state_grid(double failure_threshold, int m) {
    if (m < 2) {
        throw std::invalid_argument("state grid: m must be at least 2");
    }
    if (!(failure_threshold > 0.0) || !std::isfinite(failure_threshold)) {
        throw std::invalid_argument("state grid: failure threshold must be positive");
    }
    StateGrid grid;
    grid.m = m;
    grid.failure_threshold = failure_threshold;
    const int bins = m - 1;
    const double width = failure_threshold / bins;
    grid.bin_edges.resize(static_cast<std::size_t>(bins));
    grid.representative_levels.resize(static_cast<std::size_t>(bins));
    for (int b = 1; b <= bins; ++b) {
        grid.bin_edges[b - 1] = (b == bins) ? failure_threshold : width * b;
        grid.representative_levels[b - 1] = (b == 1) ? 0.0 : width * (b - 0.5);
    }
    return grid;
}

/// Row-stochastic m x m matrix; states are 1-based in the accessors.
class TransitionMatrix {
public:
    TransitionMatrix() = default;
    explicit TransitionMatrix(int m)
        : m_(m), data_(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0) {}

    int m() const { return m_; }

    double operator()(int from, int to) const { return data_[index(from, to)]; }
    double& operator()(int from, int to) { return data_[index(from, to)]; }

    /// Probability of reaching the failed state m from `from`.
    double failure_prob(int from) const { return (*this)(from, m_); }

    /// Row `from` as a contiguous pointer of m entries.
    const double* row(int from) const { return data_.data() + index(from, 1); }

    /// Empty string when well-formed, otherwise the first problem found.
    std::string check(double tol = 1e-9) const {
        if (m_ < 2) return "matrix needs at least 2 states";
        for (int g = 1; g <= m_; ++g) {
            double sum = 0.0;
            for (int h = 1; h <= m_; ++h) {
                const double v = (*this)(g, h);
                if (!(v >= 0.0 && v <= 1.0)) {
                    return "entry (" + std::to_string(g) + "," + std::to_string(h) + ") outside [0,1]";
                }
                sum += v;
            }
            if (std::abs(sum - 1.0) > tol) {
                return "row " + std::to_string(g) + " does not sum to 1";
            }
        }
        return {};
    }

    friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

private:
    std::size_t index(int from, int to) const {
        return static_cast<std::size_t>(from - 1) * static_cast<std::size_t>(m_) +
               static_cast<std::size_t>(to - 1);
    }

    int m_ = 0;
    std::vector<double> data_;
};

/**
 * @brief Transition matrix of the discretized process over one inspection interval.
 *
 * From working state g at level d, the next state is the bin containing
 * d + X with X the increment; rows below g are zero. Row m is the absorbing
 * convention (failed components are always repaired before moving on).
 */
inline TransitionMatrix build_transition_matrix(const GammaProcessParams& params, const StateGrid& grid,
                                                double inspection_interval) {
    params.validate();
    if (!(inspection_interval > 0.0) || !std::isfinite(inspection_interval)) {
        throw std::invalid_argument("transition matrix: inspection interval must be positive");
    }
    const int m = grid.m;
    const double L = grid.failure_threshold;
    auto F = [&](double x) { return x <= 0.0 ? 0.0 : increment_cdf(params, x, inspection_interval); };

    TransitionMatrix q(m);
    for (int g = 1; g < m; ++g) {
        const double d = grid.level(g);
        double prev = F(grid.lower_edge(g) - d);
        for (int h = g; h < m; ++h) {
            const double upper = F(grid.upper_edge(h) - d);
            double p = upper - prev;
            if (p < 0.0 && p > -1e-14) p = 0.0;
            q(g, h) = p;
            prev = upper;
        }
        q(g, m) = 1.0 - F(L - d);
        double sum = 0.0;
        for (int h = g; h <= m; ++h) sum += q(g, h);
        if (sum > 0.0 && sum != 1.0) {
            for (int h = g; h <= m; ++h) q(g, h) /= sum;
        }
    }
    q(m, m) = 1.0;
    return q;
}

}  // namespace cbm
