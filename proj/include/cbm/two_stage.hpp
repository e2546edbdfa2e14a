// Solvers for the two-stage model: exhaustive enumeration, the exact
// set-moving algorithm and its capped heuristic variant.
#pragma once

#include "cbm/component_set.hpp"
#include "cbm/model.hpp"
#include "cbm/rng.hpp"
#include "cbm/structural.hpp"

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cbm {

/// Thrown when an exponential-size solver is asked to exceed its size guard.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TwoStageSolution {
    Partition partition;
    double cost = 0.0;
};

/**
 * Partition cost assembled from standalone per-component costs, with the
 * setup charges that joint maintenance saves subtracted back out. Equal to
 * two_stage_total_cost for every feasible partition.
 */
inline double decomposed_partition_cost(const SystemInstance& inst, const Partition& p) {
    require_feasible(inst, p);
    const double cs = inst.setup_cost;
    double total = 0.0;
    double q_sum = 0.0;
    double survive = 1.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        const auto& c = inst.components[i];
        if (p.n1.contains(i)) {
            const double q = c.q_fail_new();
            total += c.pm_cost + cs + q * (c.cm_cost + cs);  // TC^1
            q_sum += q;
            survive *= 1.0 - q;
        } else {
            const double q = c.q_fail_current();
            total += q * (c.cm_cost + cs);  // TC^0
            q_sum += q;
            survive *= 1.0 - q;
        }
        if (c.state == inst.m) total += c.cm_cost - c.pm_cost;
    }
    const double shared = static_cast<double>(std::max<std::size_t>(p.n1.count(), 1) - 1);
    return total - shared * cs - cs * q_sum + cs * (1.0 - survive);
}

inline constexpr std::size_t kBruteForceMaxComponents = 20;

/// Enumerates every feasible partition; ties go to the smallest N1 bitmask.
inline TwoStageSolution brute_force_two_stage(const SystemInstance& inst) {
    const std::size_t n = inst.size();
    if (n == 0) throw std::invalid_argument("brute force: empty instance");
    if (n > kBruteForceMaxComponents) {
        throw GuardError("brute force enumeration is limited to 20 components");
    }
    std::vector<double> q_cur(n), q_new(n);
    double fixed = 0.0;
    std::uint64_t forced = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = inst.components[i];
        q_cur[i] = c.q_fail_current();
        q_new[i] = c.q_fail_new();
        if (c.state == inst.m) {
            forced |= std::uint64_t{1} << i;
            fixed += c.cm_cost - c.pm_cost;
        }
    }
    const std::uint64_t limit = std::uint64_t{1} << n;
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 0;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        if ((mask & forced) != forced) continue;
        double cost = fixed + (mask != 0 ? inst.setup_cost : 0.0);
        double survive = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& c = inst.components[i];
            if ((mask >> i) & 1U) {
                cost += c.pm_cost + q_new[i] * c.cm_cost;
                survive *= 1.0 - q_new[i];
            } else {
                cost += q_cur[i] * c.cm_cost;
                survive *= 1.0 - q_cur[i];
            }
        }
        cost += (1.0 - survive) * inst.setup_cost;
        if (cost < best) {
            best = cost;
            best_mask = mask;
        }
    }
    TwoStageSolution sol{Partition::from_maintained(n, ComponentSet::from_mask(n, best_mask)), 0.0};
    sol.cost = two_stage_total_cost(inst, sol.partition);
    return sol;
}

enum class Destination { do_nothing, maintain };

struct MoveRecord {
    ComponentSet set;
    Destination destination = Destination::do_nothing;
    std::size_t cardinality = 0;
};

struct Algo1Trace {
    std::vector<MoveRecord> moves;
    std::size_t j_max = 0;  ///< largest cardinality searched
    std::uint64_t sets_examined = 0;
    bool capped = false;     ///< stopped at the cardinality cap with undetermined components left
    bool timed_out = false;
    bool tie_resolved = false;  ///< whole undetermined set committed by direct cost comparison
};

struct Algo1Options {
    std::size_t max_cardinality = std::numeric_limits<std::size_t>::max();
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct Algo1Result {
    Partition partition;    ///< undetermined components (if any) are left out of both sides
    ComponentSet undetermined;
    double cost = 0.0;      ///< cost with undetermined components placed in N0; NaN if none
    Algo1Trace trace;
};

/**
 * @brief Set-moving search for the cost-optimal partition.
 *
 * Failed components seed N1. Each pass enumerates every j-subset of the
 * undetermined set U (lexicographic) and tests it against the partitions
 * (N0* u U, N1*) for maintaining and (N0*, N1* u U) for leaving alone; all
 * qualifying subsets of the pass are committed together. Any progress resets
 * j to 1, otherwise j grows. `max_cardinality` stops the search early and
 * leaves U undetermined.
 */
inline Algo1Result algorithm1_search(const SystemInstance& inst, const Algo1Options& opts = {}) {
    const std::size_t n = inst.size();
    if (n == 0) throw std::invalid_argument("algorithm 1: empty instance");
    MoveCalculus calc(inst);

    Algo1Result res;
    ComponentSet n0_star(n);
    ComponentSet n1_star = calc.failed();
    ComponentSet undetermined = ComponentSet::full(n) - n1_star;
    std::size_t j = 1;
    std::uint64_t examined = 0;

    while (!undetermined.empty()) {
        if (j > opts.max_cardinality) {
            res.trace.capped = true;
            break;
        }
        if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline) {
            res.trace.timed_out = true;
            break;
        }
        const std::vector<std::size_t> pool = undetermined.indices();
        if (j > pool.size()) {
            // At N = U the two criteria coincide, so U always qualifies for one
            // side; reaching here means round-off left U exactly at the tie.
            const Partition keep{n0_star | undetermined, n1_star};
            const Partition move{n0_star, n1_star | undetermined};
            const bool maintain = two_stage_total_cost(inst, move) < two_stage_total_cost(inst, keep);
            (maintain ? n1_star : n0_star) |= undetermined;
            res.trace.moves.push_back(
                {undetermined, maintain ? Destination::maintain : Destination::do_nothing, pool.size()});
            res.trace.tie_resolved = true;
            undetermined = ComponentSet(n);
            break;
        }
        res.trace.j_max = std::max(res.trace.j_max, j);

        const ComponentSet& maintained_r = n1_star;             // reference (N0* u U, N1*)
        const ComponentSet maintained_s = n1_star | undetermined;  // reference (N0*, N1* u U)
        const double p_r = calc.survival(maintained_r);
        const double p_s = calc.survival(maintained_s);

        ComponentSet to_n1(n);
        ComponentSet to_n0(n);
        for_each_combination(pool, j, [&](const std::vector<std::size_t>& members) {
            ++examined;
            if (calc.delta_r(maintained_r, p_r, members).delta < 1.0) {
                for (auto i : members) to_n1.insert(i);
            } else if (calc.delta_s(maintained_s, p_s, members).delta >= 1.0) {
                for (auto i : members) to_n0.insert(i);
            }
            return true;
        });

        const std::size_t before = pool.size();
        // A component can qualify for both sides through different subsets of
        // the same pass; maintenance wins so the result stays a partition.
        to_n0 -= to_n1;
        if (!to_n0.empty()) res.trace.moves.push_back({to_n0, Destination::do_nothing, j});
        if (!to_n1.empty()) res.trace.moves.push_back({to_n1, Destination::maintain, j});
        undetermined -= (to_n1 | to_n0);
        n0_star |= to_n0;
        n1_star |= to_n1;

        j = (undetermined.count() < before) ? 1 : j + 1;
    }

    res.trace.sets_examined = examined;
    res.partition = Partition{n0_star, n1_star};
    res.undetermined = undetermined;
    const Partition completed{n0_star | undetermined, n1_star};
    res.cost = two_stage_total_cost(inst, completed);
    return res;
}

struct Algorithm1Output {
    Partition partition;
    double cost = 0.0;
    Algo1Trace trace;
};

inline Algorithm1Output algorithm1(const SystemInstance& inst) {
    auto r = algorithm1_search(inst);
    return {r.partition, r.cost, r.trace};
}

struct Algo2Config {
    std::size_t J = 3;    ///< largest cardinality searched before sampling
    std::size_t M = 100;  ///< partitions sampled, both extremes included
    std::uint64_t seed = 0;

    void validate() const {
        if (J < 1) throw std::invalid_argument("algorithm 2: J must be at least 1");
        if (M < 2) throw std::invalid_argument("algorithm 2: M must be at least 2");
    }
};

struct Algorithm2Output {
    Partition partition;
    double cost = 0.0;
    Algo1Trace trace;
    std::size_t undetermined_after_search = 0;
};

/**
 * Capped search followed by random completion of the undetermined set:
 * M candidates (all-do-nothing, all-maintain, then M-2 draws assigning each
 * undetermined component to N1 with probability 1/2); the cheapest wins,
 * earlier candidates on ties.
 */
inline Algorithm2Output algorithm2(const SystemInstance& inst, const Algo2Config& cfg,
                                   std::uint64_t substream = 0) {
    cfg.validate();
    Algo1Options opts;
    opts.max_cardinality = cfg.J;
    auto search = algorithm1_search(inst, opts);

    Algorithm2Output out;
    out.trace = search.trace;
    out.undetermined_after_search = search.undetermined.count();
    const std::size_t n = inst.size();
    const ComponentSet& u = search.undetermined;
    if (u.empty()) {
        out.partition = search.partition;
        out.cost = search.cost;
        return out;
    }

    const auto members = u.indices();
    auto evaluate = [&](const ComponentSet& maintain_part) {
        Partition p{search.partition.n0 | (u - maintain_part), search.partition.n1 | maintain_part};
        return std::pair{p, two_stage_total_cost(inst, p)};
    };

    auto [best_p, best_c] = evaluate(ComponentSet(n));
    if (auto [p, c] = evaluate(u); c < best_c) {
        best_p = p;
        best_c = c;
    }
    Rng rng(cfg.seed, 0x616c676f32ULL, substream);
    for (std::size_t k = 2; k < cfg.M; ++k) {
        ComponentSet pick(n);
        for (auto i : members) {
            if (rng.coin()) pick.insert(i);
        }
        if (auto [p, c] = evaluate(pick); c < best_c) {
            best_p = p;
            best_c = c;
        }
    }
    out.partition = best_p;
    out.cost = best_c;
    return out;
}

}  // namespace cbm
