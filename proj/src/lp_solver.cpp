#include "gridsched/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gridsched {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Working state of one solve. Column j < n is structural; j >= n is the
// slack of row j - n with the identity column.
class Simplex {
public:
    Simplex(std::size_t m, std::size_t n, const std::vector<std::size_t>& col_start,
            const std::vector<std::size_t>& col_row, const std::vector<double>& col_val,
            const std::vector<double>& cost, std::span<const double> rhs, std::vector<double> lower,
            std::vector<double> upper, const LpOptions& options)
        : m_(m),
          n_(n),
          col_start_(col_start),
          col_row_(col_row),
          col_val_(col_val),
          cost_(cost),
          rhs_(rhs.begin(), rhs.end()),
          lower_(std::move(lower)),
          upper_(std::move(upper)),
          opt_(options) {}

    LpSolution solve(const Basis* warm);

private:
    std::size_t total() const { return n_ + m_; }

    template <typename F>
    void for_column(std::size_t j, F&& f) const {
        if (j >= n_) {
            f(j - n_, 1.0);
            return;
        }
        for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
            f(col_row_[p], col_val_[p]);
        }
    }

    double nonbasic_value(std::size_t j) const {
        switch (state_[j]) {
        case ColumnState::at_lower:
            return lower_[j];
        case ColumnState::at_upper:
            return upper_[j];
        default:
            return 0.0;
        }
    }

    ColumnState resting_state(std::size_t j) const {
        if (std::isfinite(lower_[j])) return ColumnState::at_lower;
        if (std::isfinite(upper_[j])) return ColumnState::at_upper;
        return ColumnState::at_zero;
    }

    void cold_start();
    bool load_basis(const Basis& warm);
    bool refactor();
    void compute_primal();
    void compute_duals(bool phase_one);
    double infeasibility(std::size_t row) const;
    std::size_t choose_entering(bool phase_one, double& direction) const;
    double reduced_cost(std::size_t j) const;
    void column_of(std::size_t j, std::vector<double>& out) const;
    void finish(LpSolution& sol, LpStatus status) const;

    std::size_t m_, n_;
    const std::vector<std::size_t>& col_start_;
    const std::vector<std::size_t>& col_row_;
    const std::vector<double>& col_val_;
    const std::vector<double>& cost_;
    std::vector<double> rhs_;
    std::vector<double> lower_, upper_;
    LpOptions opt_;

    std::vector<ColumnState> state_;
    std::vector<std::size_t> basic_;
    std::vector<std::size_t> row_of_;  // basis position of a basic column
    std::vector<double> binv_;         // dense row-major inverse of the basis
    std::vector<double> xb_;
    std::vector<double> y_;
    bool bland_ = false;
};

void Simplex::cold_start() {
    state_.assign(total(), ColumnState::at_lower);
    for (std::size_t j = 0; j < n_; ++j) {
        state_[j] = resting_state(j);
    }
    basic_.resize(m_);
    row_of_.assign(total(), npos);
    for (std::size_t i = 0; i < m_; ++i) {
        basic_[i] = n_ + i;
        state_[n_ + i] = ColumnState::basic;
        row_of_[n_ + i] = i;
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        binv_[i * m_ + i] = 1.0;
    }
}

bool Simplex::load_basis(const Basis& warm) {
    if (warm.state.size() != total() || warm.basic.size() != m_) {
        return false;
    }
    state_ = warm.state;
    basic_ = warm.basic;
    // Nonbasic columns whose bounds changed to infinite need a new rest.
    for (std::size_t j = 0; j < total(); ++j) {
        if (state_[j] == ColumnState::at_lower && !std::isfinite(lower_[j])) state_[j] = resting_state(j);
        if (state_[j] == ColumnState::at_upper && !std::isfinite(upper_[j])) state_[j] = resting_state(j);
        if (state_[j] == ColumnState::at_zero && (std::isfinite(lower_[j]) || std::isfinite(upper_[j])))
            state_[j] = resting_state(j);
    }
    return refactor();
}

// Rebuilds the inverse by pivoting the basic structural columns into an
// identity basis one at a time. Columns that turn out dependent are
// dropped in favour of the slack of an uncovered row.
bool Simplex::refactor() {
    std::vector<char> slack_kept(m_, 0);
    std::vector<std::size_t> structural;
    for (std::size_t j : basic_) {
        if (j >= n_) {
            slack_kept[j - n_] = 1;
        } else {
            structural.push_back(j);
        }
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        binv_[i * m_ + i] = 1.0;
    }
    std::vector<std::size_t> owner(m_, npos);
    for (std::size_t i = 0; i < m_; ++i) {
        owner[i] = n_ + i;
    }
    std::vector<char> row_taken(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
        row_taken[i] = slack_kept[i];
    }

    // Sparse columns first keeps fill low.
    std::stable_sort(structural.begin(), structural.end(), [&](std::size_t a, std::size_t b) {
        return col_start_[a + 1] - col_start_[a] < col_start_[b + 1] - col_start_[b];
    });
    std::vector<double> alpha(m_);
    bool repaired = false;
    for (std::size_t j : structural) {
        column_of(j, alpha);
        std::size_t best = npos;
        double best_abs = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (!row_taken[i] && std::abs(alpha[i]) > best_abs) {
                best_abs = std::abs(alpha[i]);
                best = i;
            }
        }
        if (best == npos || best_abs < 1e-10) {
            state_[j] = resting_state(j);
            repaired = true;
            continue;
        }
        const double piv = alpha[best];
        double* prow = &binv_[best * m_];
        for (std::size_t k = 0; k < m_; ++k) prow[k] /= piv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == best || alpha[i] == 0.0) continue;
            const double f = alpha[i];
            double* irow = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) irow[k] -= f * prow[k];
        }
        row_taken[best] = 1;
        owner[best] = j;
    }
    row_of_.assign(total(), npos);
    for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t j = owner[i];
        basic_[i] = j;
        row_of_[j] = i;
        state_[j] = ColumnState::basic;
    }
    // Slacks displaced from the basis rest at a bound.
    for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t s = n_ + i;
        if (row_of_[s] == npos && state_[s] == ColumnState::basic) {
            state_[s] = resting_state(s);
        }
    }
    for (std::size_t j = 0; j < n_; ++j) {
        if (row_of_[j] == npos && state_[j] == ColumnState::basic) {
            state_[j] = resting_state(j);
        }
    }
    (void)repaired;
    return true;
}

void Simplex::column_of(std::size_t j, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for_column(j, [&](std::size_t row, double a) {
        for (std::size_t i = 0; i < m_; ++i) {
            out[i] += binv_[i * m_ + row] * a;
        }
    });
}

void Simplex::compute_primal() {
    std::vector<double> r = rhs_;
    for (std::size_t j = 0; j < total(); ++j) {
        if (state_[j] == ColumnState::basic) continue;
        const double x = nonbasic_value(j);
        if (x == 0.0) continue;
        for_column(j, [&](std::size_t row, double a) { r[row] -= a * x; });
    }
    xb_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        const double* brow = &binv_[i * m_];
        double s = 0.0;
        for (std::size_t k = 0; k < m_; ++k) s += brow[k] * r[k];
        xb_[i] = s;
    }
}

double Simplex::infeasibility(std::size_t i) const {
    const std::size_t j = basic_[i];
    if (xb_[i] < lower_[j] - opt_.feasibility_tol) return xb_[i] - lower_[j];
    if (xb_[i] > upper_[j] + opt_.feasibility_tol) return xb_[i] - upper_[j];
    return 0.0;
}

void Simplex::compute_duals(bool phase_one) {
    y_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        double cb;
        if (phase_one) {
            const double inf_i = infeasibility(i);
            cb = inf_i < 0.0 ? -1.0 : (inf_i > 0.0 ? 1.0 : 0.0);
        } else {
            const std::size_t j = basic_[i];
            cb = j < n_ ? cost_[j] : 0.0;
        }
        if (cb == 0.0) continue;
        const double* brow = &binv_[i * m_];
        for (std::size_t k = 0; k < m_; ++k) y_[k] += cb * brow[k];
    }
}

double Simplex::reduced_cost(std::size_t j) const {
    double d = 0.0;
    for_column(j, [&](std::size_t row, double a) { d -= y_[row] * a; });
    return d;
}

std::size_t Simplex::choose_entering(bool phase_one, double& direction) const {
    std::size_t best = npos;
    double best_score = 0.0;
    for (std::size_t j = 0; j < total(); ++j) {
        const ColumnState s = state_[j];
        if (s == ColumnState::basic || lower_[j] == upper_[j]) continue;
        double d = reduced_cost(j);
        if (!phase_one && j < n_) d += cost_[j];
        double dir = 0.0;
        if ((s == ColumnState::at_lower || s == ColumnState::at_zero) && d < -opt_.optimality_tol) {
            dir = 1.0;
        } else if ((s == ColumnState::at_upper || s == ColumnState::at_zero) && d > opt_.optimality_tol) {
            dir = -1.0;
        }
        if (dir == 0.0) continue;
        if (bland_) {
            direction = dir;
            return j;
        }
        if (std::abs(d) > best_score) {
            best_score = std::abs(d);
            best = j;
            direction = dir;
        }
    }
    return best;
}

void Simplex::finish(LpSolution& sol, LpStatus status) const {
    sol.status = status;
    sol.x.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        sol.x[j] = state_[j] == ColumnState::basic ? xb_[row_of_[j]] : nonbasic_value(j);
    }
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sol.objective += cost_[j] * sol.x[j];
    sol.row_duals = y_;
    sol.reduced_costs.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        sol.reduced_costs[j] = state_[j] == ColumnState::basic ? 0.0 : cost_[j] + reduced_cost(j);
    }
    sol.basis.state = state_;
    sol.basis.basic = basic_;
}

LpSolution Simplex::solve(const Basis* warm) {
    LpSolution sol;
    if (!warm || !load_basis(*warm)) {
        cold_start();
    }
    compute_primal();

    const std::size_t limit = opt_.iteration_limit ? opt_.iteration_limit : 50 * (m_ + n_) + 1000;
    std::vector<double> alpha(m_);
    std::size_t since_refactor = 0;
    std::size_t degenerate_run = 0;
    std::size_t verify_rounds = 0;

    for (std::size_t iter = 0;; ++iter) {
        if (iter >= limit) {
            compute_duals(false);
            finish(sol, LpStatus::iteration_limit);
            sol.iterations = iter;
            return sol;
        }
        if (since_refactor >= opt_.refactor_interval) {
            refactor();
            compute_primal();
            since_refactor = 0;
        }
        bool phase_one = false;
        for (std::size_t i = 0; i < m_ && !phase_one; ++i) {
            phase_one = infeasibility(i) != 0.0;
        }
        compute_duals(phase_one);
        double dir = 0.0;
        const std::size_t q = choose_entering(phase_one, dir);

        if (q == npos) {
            // Confirm on a fresh factorization before declaring the result.
            if (since_refactor > 0 && verify_rounds < 3) {
                refactor();
                compute_primal();
                since_refactor = 0;
                ++verify_rounds;
                continue;
            }
            if (phase_one) {
                compute_duals(false);
                finish(sol, LpStatus::infeasible);
            } else {
                finish(sol, LpStatus::optimal);
            }
            sol.iterations = iter;
            return sol;
        }

        column_of(q, alpha);

        // Harris two-pass ratio test. Infeasible basics (phase one) block at
        // the bound they are violating.
        const double ftol = opt_.feasibility_tol;
        double relaxed_max = inf;
        if (std::isfinite(lower_[q]) && std::isfinite(upper_[q])) {
            relaxed_max = upper_[q] - lower_[q];
        }
        const double flip_range = relaxed_max;
        struct Candidate {
            std::size_t row;
            double exact;
            bool to_upper;
        };
        std::vector<Candidate> candidates;
        for (std::size_t i = 0; i < m_; ++i) {
            const double a = alpha[i];
            if (std::abs(a) <= opt_.pivot_tol) continue;
            const double rate = -dir * a;
            const std::size_t j = basic_[i];
            const double x = xb_[i];
            const double lo = lower_[j];
            const double hi = upper_[j];
            const bool below = x < lo - ftol;
            const bool above = x > hi + ftol;
            double exact = inf, relaxed = inf;
            bool to_upper = false;
            if (rate < 0.0) {
                if (above) {
                    exact = (x - hi) / -rate;
                    relaxed = exact;
                    to_upper = true;
                } else if (!below && std::isfinite(lo)) {
                    exact = std::max(0.0, (x - lo) / -rate);
                    relaxed = (x - lo + ftol) / -rate;
                }
            } else {
                if (below) {
                    exact = (lo - x) / rate;
                    relaxed = exact;
                } else if (!above && std::isfinite(hi)) {
                    exact = std::max(0.0, (hi - x) / rate);
                    relaxed = (hi - x + ftol) / rate;
                    to_upper = true;
                }
            }
            if (!std::isfinite(exact)) continue;
            relaxed_max = std::min(relaxed_max, relaxed);
            candidates.push_back({i, exact, to_upper});
        }

        std::size_t leave = npos;
        double step = 0.0;
        bool leave_to_upper = false;
        if (bland_) {
            double tmin = inf;
            for (const auto& c : candidates) tmin = std::min(tmin, c.exact);
            if (flip_range <= tmin) {
                step = flip_range;
            } else {
                std::size_t best_col = npos;
                for (const auto& c : candidates) {
                    if (c.exact <= tmin + 1e-12 && basic_[c.row] < best_col) {
                        best_col = basic_[c.row];
                        leave = c.row;
                        leave_to_upper = c.to_upper;
                    }
                }
                step = tmin;
            }
        } else {
            double best_abs = -1.0;
            for (const auto& c : candidates) {
                if (c.exact <= relaxed_max && std::abs(alpha[c.row]) > best_abs) {
                    best_abs = std::abs(alpha[c.row]);
                    leave = c.row;
                    leave_to_upper = c.to_upper;
                    step = c.exact;
                }
            }
            if (leave == npos || flip_range <= step) {
                leave = npos;
                step = flip_range;
            }
        }

        if (leave == npos && !std::isfinite(step)) {
            if (phase_one) {
                // The phase-one objective is bounded below; an unbounded ray
                // here is a numerical artefact.
                refactor();
                compute_primal();
                since_refactor = 0;
                if (++verify_rounds > 5) {
                    finish(sol, LpStatus::numerical_failure);
                    sol.iterations = iter;
                    return sol;
                }
                continue;
            }
            compute_duals(false);
            finish(sol, LpStatus::unbounded);
            sol.iterations = iter;
            return sol;
        }

        if (step <= 1e-12) {
            if (++degenerate_run > opt_.stall_threshold) bland_ = true;
        } else {
            degenerate_run = 0;
            bland_ = false;
        }

        const double x_q = state_[q] == ColumnState::basic ? 0.0 : nonbasic_value(q);
        for (std::size_t i = 0; i < m_; ++i) {
            xb_[i] -= dir * step * alpha[i];
        }
        if (leave == npos) {
            state_[q] = dir > 0 ? ColumnState::at_upper : ColumnState::at_lower;
            continue;
        }

        const std::size_t out = basic_[leave];
        state_[out] = leave_to_upper ? ColumnState::at_upper : ColumnState::at_lower;
        if (!std::isfinite(leave_to_upper ? upper_[out] : lower_[out])) {
            state_[out] = resting_state(out);
        }
        row_of_[out] = npos;
        basic_[leave] = q;
        row_of_[q] = leave;
        state_[q] = ColumnState::basic;
        xb_[leave] = x_q + dir * step;

        const double piv = alpha[leave];
        double* prow = &binv_[leave * m_];
        for (std::size_t k = 0; k < m_; ++k) prow[k] /= piv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == leave || alpha[i] == 0.0) continue;
            const double f = alpha[i];
            double* irow = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) irow[k] -= f * prow[k];
        }
        ++since_refactor;
        verify_rounds = 0;
    }
}

}  // namespace

std::string_view lp_status_name(LpStatus status) {
    switch (status) {
    case LpStatus::optimal:
        return "optimal";
    case LpStatus::infeasible:
        return "infeasible";
    case LpStatus::unbounded:
        return "unbounded";
    case LpStatus::numerical_failure:
        return "numerical_failure";
    case LpStatus::iteration_limit:
        return "iteration_limit";
    }
    return "?";
}

SimplexSolver::SimplexSolver(const MilpModel& model, LpOptions options)
    : m_(model.num_rows()),
      n_(model.num_vars()),
      cost_(model.objective),
      lower_(model.lower),
      upper_(model.upper),
      options_(options) {
    std::vector<std::size_t> counts(n_ + 1, 0);
    for (const Row& row : model.rows) {
        for (const Term& t : row.terms) ++counts[t.var + 1];
    }
    col_start_.assign(n_ + 1, 0);
    for (std::size_t j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + counts[j + 1];
    col_row_.resize(col_start_[n_]);
    col_val_.resize(col_start_[n_]);
    std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
    rhs_.reserve(m_);
    sense_.reserve(m_);
    for (std::size_t i = 0; i < m_; ++i) {
        const Row& row = model.rows[i];
        for (const Term& t : row.terms) {
            col_row_[fill[t.var]] = i;
            col_val_[fill[t.var]] = t.coef;
            ++fill[t.var];
        }
        rhs_.push_back(row.rhs);
        sense_.push_back(row.sense);
    }
}

LpSolution SimplexSolver::solve(const Basis* warm_start) const {
    return run(lower_, upper_, rhs_, warm_start);
}

LpSolution SimplexSolver::solve(std::span<const double> lower, std::span<const double> upper,
                                const Basis* warm_start) const {
    return run(lower, upper, rhs_, warm_start);
}

LpSolution SimplexSolver::solve_with_rhs(std::span<const double> rhs, const Basis* warm_start) const {
    return run(lower_, upper_, rhs, warm_start);
}

LpSolution SimplexSolver::run(std::span<const double> lower, std::span<const double> upper,
                              std::span<const double> rhs, const Basis* warm_start) const {
    std::vector<double> lo(lower.begin(), lower.end());
    std::vector<double> hi(upper.begin(), upper.end());
    lo.resize(n_ + m_);
    hi.resize(n_ + m_);
    // Row i reads a x + s = b: s >= 0 for <=, s <= 0 for >=, s = 0 for =.
    for (std::size_t i = 0; i < m_; ++i) {
        switch (sense_[i]) {
        case RowSense::less_equal:
            lo[n_ + i] = 0.0;
            hi[n_ + i] = inf;
            break;
        case RowSense::greater_equal:
            lo[n_ + i] = -inf;
            hi[n_ + i] = 0.0;
            break;
        case RowSense::equal:
            lo[n_ + i] = 0.0;
            hi[n_ + i] = 0.0;
            break;
        }
    }
    for (std::size_t j = 0; j < n_; ++j) {
        if (lo[j] > hi[j]) {
            LpSolution sol;
            sol.status = LpStatus::infeasible;
            sol.x.assign(n_, 0.0);
            sol.row_duals.assign(m_, 0.0);
            sol.reduced_costs.assign(n_, 0.0);
            return sol;
        }
    }
    Simplex simplex(m_, n_, col_start_, col_row_, col_val_, cost_, rhs, std::move(lo), std::move(hi), options_);
    return simplex.solve(warm_start);
}

LpSolution solve_lp(const MilpModel& model, const LpOptions& options) {
    return SimplexSolver(model, options).solve();
}

}  // namespace gridsched
