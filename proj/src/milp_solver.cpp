#include "gridsched/milp_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>

namespace gridsched {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double gap_floor = 1e-10;

struct Node {
    double bound = 0.0;
    std::size_t seq = 0;
    std::vector<double> lower;
    std::vector<double> upper;
    std::shared_ptr<const Basis> basis;
    std::vector<double> x;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.seq > b.seq;
    }
};

}  // namespace

std::string_view milp_status_name(MilpStatus status) {
    switch (status) {
    case MilpStatus::optimal:
        return "optimal";
    case MilpStatus::gap_limit:
        return "gap_limit";
    case MilpStatus::feasible:
        return "feasible";
    case MilpStatus::infeasible:
        return "infeasible";
    case MilpStatus::unbounded:
        return "unbounded";
    case MilpStatus::unknown:
        return "unknown";
    case MilpStatus::numerical_failure:
        return "numerical_failure";
    }
    return "?";
}

bool has_solution(MilpStatus status) {
    return status == MilpStatus::optimal || status == MilpStatus::gap_limit || status == MilpStatus::feasible;
}

double relative_gap(double incumbent, double bound) {
    return std::max(0.0, incumbent - bound) / std::max(std::abs(incumbent), gap_floor);
}

MilpSolution solve_milp(const MilpModel& model, const MilpOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
        if (!options.time_limit) return false;
        std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
        return elapsed.count() > *options.time_limit;
    };

    const SimplexSolver lp(model, options.lp);
    const std::size_t n = model.num_vars();
    std::vector<std::size_t> int_cols;
    for (std::size_t j = 0; j < n; ++j) {
        if (model.integer[j]) int_cols.push_back(j);
    }

    MilpSolution result;
    double incumbent = inf;
    std::vector<double> incumbent_x;
    double pruned_bound = inf;  // smallest bound among nodes cut off by the gap rule
    bool lp_trouble = false;

    auto prune_margin = [&](double inc) {
        return std::max(1e-9 * std::max(1.0, std::abs(inc)), options.gap_target * std::abs(inc));
    };

    auto most_fractional = [&](const std::vector<double>& x) {
        std::size_t pick = n;
        double worst = options.integrality_tol;
        for (std::size_t j : int_cols) {
            const double f = x[j] - std::floor(x[j]);
            const double dist = std::min(f, 1.0 - f);
            if (dist > worst) {
                worst = dist;
                pick = j;
            }
        }
        return pick;
    };

    // Re-solves with every integer column pinned to its rounded value so
    // the continuous part is exact for the chosen integers.
    auto try_incumbent = [&](const Node& node, const LpSolution& relaxed) {
        std::vector<double> lo = node.lower;
        std::vector<double> hi = node.upper;
        for (std::size_t j : int_cols) {
            lo[j] = hi[j] = std::round(relaxed.x[j]);
        }
        LpSolution polished = lp.solve(lo, hi, &relaxed.basis);
        if (polished.status != LpStatus::optimal) {
            return;
        }
        if (polished.objective < incumbent - 1e-12 * std::max(1.0, std::abs(incumbent)) || incumbent_x.empty()) {
            incumbent = polished.objective;
            incumbent_x = std::move(polished.x);
        }
    };

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::size_t seq = 0;

    auto evaluate = [&](Node node) {
        ++result.node_count;
        LpSolution sol = lp.solve(node.lower, node.upper, node.basis.get());
        if (sol.status == LpStatus::infeasible) {
            return;
        }
        if (sol.status != LpStatus::optimal) {
            if (sol.status == LpStatus::unbounded && incumbent_x.empty() && result.node_count == 1) {
                result.status = MilpStatus::unbounded;
            }
            lp_trouble = true;
            return;
        }
        if (!incumbent_x.empty() && sol.objective >= incumbent - prune_margin(incumbent)) {
            pruned_bound = std::min(pruned_bound, sol.objective);
            return;
        }
        if (most_fractional(sol.x) == n) {
            try_incumbent(node, sol);
            return;
        }
        node.bound = sol.objective;
        node.seq = seq++;
        node.basis = std::make_shared<const Basis>(std::move(sol.basis));
        node.x = std::move(sol.x);
        open.push(std::move(node));
    };

    Node root;
    root.lower = model.lower;
    root.upper = model.upper;
    evaluate(std::move(root));
    if (result.status == MilpStatus::unbounded) {
        return result;
    }

    bool stopped_by_limit = false;
    bool stopped_by_gap = false;
    while (!open.empty()) {
        const double global_bound = std::min(open.top().bound, pruned_bound);
        if (!incumbent_x.empty() && options.gap_target > 0.0 &&
            relative_gap(incumbent, global_bound) <= options.gap_target) {
            stopped_by_gap = true;
            break;
        }
        if (result.node_count >= options.node_limit || out_of_time()) {
            stopped_by_limit = true;
            break;
        }
        Node node = open.top();
        open.pop();
        if (!incumbent_x.empty() && node.bound >= incumbent - prune_margin(incumbent)) {
            pruned_bound = std::min(pruned_bound, node.bound);
            continue;
        }
        const std::size_t j = most_fractional(node.x);
        const double value = node.x[j];

        Node down;
        down.lower = node.lower;
        down.upper = node.upper;
        down.upper[j] = std::floor(value);
        down.basis = node.basis;
        Node up;
        up.lower = std::move(node.lower);
        up.upper = std::move(node.upper);
        up.lower[j] = std::ceil(value);
        up.basis = node.basis;
        evaluate(std::move(down));
        evaluate(std::move(up));
    }

    double best_bound = pruned_bound;
    if (!open.empty()) best_bound = std::min(best_bound, open.top().bound);

    if (incumbent_x.empty()) {
        if (stopped_by_limit || lp_trouble) {
            result.status = lp_trouble && !stopped_by_limit ? MilpStatus::numerical_failure : MilpStatus::unknown;
        } else {
            result.status = MilpStatus::infeasible;
        }
        result.best_bound = best_bound;
        return result;
    }

    best_bound = std::min(best_bound, incumbent);
    result.x = std::move(incumbent_x);
    result.objective = incumbent;
    result.best_bound = best_bound;
    result.achieved_gap = relative_gap(incumbent, best_bound);
    if (stopped_by_limit || lp_trouble) {
        result.status = MilpStatus::feasible;
    } else if (stopped_by_gap || *result.achieved_gap > 1e-9) {
        result.status = MilpStatus::gap_limit;
    } else {
        result.status = MilpStatus::optimal;
        result.achieved_gap = 0.0;
        result.best_bound = incumbent;
    }
    return result;
}

}  // namespace gridsched
