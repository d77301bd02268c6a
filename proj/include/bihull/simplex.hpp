#ifndef BIHULL_SIMPLEX_HPP
#define BIHULL_SIMPLEX_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bihull/errors.hpp"
#include "bihull/rational.hpp"

namespace bihull {

enum class RowSense { LE, GE, EQ };
enum class OptDir { Min, Max };
enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Exact LP in natural form: bounded variables, rows with a sense, sparse
/// data. Bounds may be infinite (nullopt).
struct LpProblem {
    struct Row {
        std::vector<std::pair<int, Rat>> coeffs;
        RowSense sense = RowSense::LE;
        Rat rhs;
    };

    int num_vars = 0;
    std::vector<std::optional<Rat>> lower, upper;
    std::vector<Row> rows;
    std::vector<std::pair<int, Rat>> objective;
    OptDir direction = OptDir::Min;
    std::vector<std::string> var_names;  // optional; for the LP file writer

    int add_var(std::optional<Rat> lo, std::optional<Rat> up, std::string name = {}) {
        if (lo) lo->canonicalize();
        if (up) up->canonicalize();
        lower.push_back(std::move(lo));
        upper.push_back(std::move(up));
        if (!name.empty() || !var_names.empty()) {
            var_names.resize(static_cast<std::size_t>(num_vars));
            var_names.push_back(std::move(name));
        }
        return num_vars++;
    }

    void add_row(std::vector<std::pair<int, Rat>> coeffs, RowSense sense, Rat rhs) {
        for (auto& [j, c] : coeffs) {
            (void)j;
            c.canonicalize();
        }
        rhs.canonicalize();
        rows.push_back({std::move(coeffs), sense, std::move(rhs)});
    }
};

struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    Rat value;
    std::vector<Rat> primal;
    /// Shadow prices d(opt)/d(rhs_i) in the problem's own direction; zero for
    /// slack rows. Satisfies the strong-duality identity checked after every
    /// solve.
    std::vector<Rat> dual;
    long pivots = 0;
};

namespace detail {

/// Dense-tableau primal simplex over bounded variables with Bland's rule.
/// Phase I introduces artificial columns for rows whose slack cannot absorb
/// the initial residual. The tableau invariant is T = B^{-1} A over all
/// columns (structurals, slacks, artificials); basic values are kept in beta.
class SimplexEngine {
public:
    explicit SimplexEngine(const LpProblem& p) : prob_(p) {
        if (p.num_vars != static_cast<int>(p.lower.size()) || p.num_vars != static_cast<int>(p.upper.size()))
            fail(Errc::MalformedProblem, "bound vectors must match num_vars");
        for (const auto& row : p.rows)
            for (const auto& [j, c] : row.coeffs) {
                (void)c;
                if (j < 0 || j >= p.num_vars) fail(Errc::MalformedProblem, "row references unknown variable");
            }
        for (const auto& [j, c] : p.objective) {
            (void)c;
            if (j < 0 || j >= p.num_vars) fail(Errc::MalformedProblem, "objective references unknown variable");
        }
        for (int j = 0; j < p.num_vars; ++j)
            if (p.lower[static_cast<std::size_t>(j)] && p.upper[static_cast<std::size_t>(j)] &&
                *p.lower[static_cast<std::size_t>(j)] > *p.upper[static_cast<std::size_t>(j)])
                fail(Errc::MalformedProblem, "crossed variable bounds");

        m_ = static_cast<int>(p.rows.size());
        n_struct_ = p.num_vars;
        n_total_ = n_struct_ + m_;  // slack per row; artificials appended later

        lo_.resize(static_cast<std::size_t>(n_total_));
        up_.resize(static_cast<std::size_t>(n_total_));
        for (int j = 0; j < n_struct_; ++j) {
            lo_[static_cast<std::size_t>(j)] = p.lower[static_cast<std::size_t>(j)];
            up_[static_cast<std::size_t>(j)] = p.upper[static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < m_; ++i) {
            switch (p.rows[static_cast<std::size_t>(i)].sense) {
                case RowSense::LE:
                    lo_[slack(i)] = Rat(0);
                    up_[slack(i)] = std::nullopt;
                    break;
                case RowSense::GE:
                    lo_[slack(i)] = std::nullopt;
                    up_[slack(i)] = Rat(0);
                    break;
                case RowSense::EQ:
                    lo_[slack(i)] = Rat(0);
                    up_[slack(i)] = Rat(0);
                    break;
            }
        }

        obj_min_.assign(static_cast<std::size_t>(n_total_), Rat(0));
        for (const auto& [j, c] : p.objective)
            obj_min_[static_cast<std::size_t>(j)] += (p.direction == OptDir::Max) ? Rat(-c) : c;

        T_.assign(static_cast<std::size_t>(m_), std::vector<Rat>(static_cast<std::size_t>(n_total_), Rat(0)));
        for (int i = 0; i < m_; ++i) {
            for (const auto& [j, c] : p.rows[static_cast<std::size_t>(i)].coeffs)
                T_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += c;
            T_[static_cast<std::size_t>(i)][slack(i)] = 1;
        }

        status_.assign(static_cast<std::size_t>(n_total_), Vs::AtLower);
        for (int j = 0; j < n_total_; ++j) status_[static_cast<std::size_t>(j)] = default_status(j);
        basic_.assign(static_cast<std::size_t>(m_), -1);
        beta_.assign(static_cast<std::size_t>(m_), Rat(0));
    }

    /// Full solve: slack basis, Phase I if needed, Phase II.
    LpSolution solve() {
        for (int i = 0; i < m_; ++i) make_basic(slack_var(i), i);
        recompute_beta_slack_basis();
        if (!install_artificials()) {
            // all slacks within bounds; skip Phase I
        } else {
            run_phase_one();
            if (infeasible_) return finish_infeasible();
        }
        return run_phase_two();
    }

    /// Solve starting from a caller-supplied basis (one variable per row,
    /// remaining variables at their default bounds). Falls back to the
    /// ordinary path if the basis is singular or infeasible.
    LpSolution solve_with_basis(const std::vector<int>& basis) {
        if (static_cast<int>(basis.size()) != m_) fail(Errc::MalformedProblem, "basis size != row count");
        if (!reduce_to_basis(basis)) return SimplexEngine(prob_).solve();
        for (int i = 0; i < m_; ++i)
            if (!within_bounds(basic_[static_cast<std::size_t>(i)], beta_[static_cast<std::size_t>(i)]))
                return SimplexEngine(prob_).solve();
        return run_phase_two();
    }

private:
    enum class Vs { Basic, AtLower, AtUpper, FreeZero };

    const LpProblem& prob_;
    int m_ = 0, n_struct_ = 0, n_total_ = 0, n_art_begin_ = -1;
    std::vector<std::vector<Rat>> T_;
    std::vector<Rat> beta_;
    std::vector<Rat> d_;  // reduced costs of the active phase
    std::vector<Rat> obj_min_;
    std::vector<std::optional<Rat>> lo_, up_;
    std::vector<Vs> status_;
    std::vector<int> basic_;
    std::vector<std::pair<int, int>> art_info_;  // (row, sigma) per artificial
    bool infeasible_ = false;
    long pivots_ = 0;

    std::size_t slack(int i) const { return static_cast<std::size_t>(n_struct_ + i); }
    int slack_var(int i) const { return n_struct_ + i; }
    bool is_artificial(int j) const { return n_art_begin_ >= 0 && j >= n_art_begin_; }

    static int cmpabs(const Rat& a, const Rat& b) {
        // |a| <=> |b| without allocating temporaries
        mpq_srcptr pa = a.get_mpq_t(), pb = b.get_mpq_t();
        int sa = mpq_sgn(pa), sb = mpq_sgn(pb);
        if (sa >= 0 && sb >= 0) return mpq_cmp(pa, pb);
        if (sa <= 0 && sb <= 0) return mpq_cmp(pb, pa);
        // mixed signs: compare |a| and |b| via cross multiplication of abs values
        mpz_class lhs = abs(mpz_class(mpq_numref(pa))) * mpz_class(mpq_denref(pb));
        mpz_class rhs = abs(mpz_class(mpq_numref(pb))) * mpz_class(mpq_denref(pa));
        return cmp(lhs, rhs);
    }

    Vs default_status(int j) const {
        if (lo_[static_cast<std::size_t>(j)]) return Vs::AtLower;
        if (up_[static_cast<std::size_t>(j)]) return Vs::AtUpper;
        return Vs::FreeZero;
    }

    Rat nonbasic_value(int j) const {
        switch (status_[static_cast<std::size_t>(j)]) {
            case Vs::AtLower: return *lo_[static_cast<std::size_t>(j)];
            case Vs::AtUpper: return *up_[static_cast<std::size_t>(j)];
            case Vs::FreeZero: return Rat(0);
            case Vs::Basic: break;
        }
        fail(Errc::MalformedProblem, "value of basic variable requested");
    }

    Rat var_value(int j) const {
        if (status_[static_cast<std::size_t>(j)] == Vs::Basic) {
            for (int i = 0; i < m_; ++i)
                if (basic_[static_cast<std::size_t>(i)] == j) return beta_[static_cast<std::size_t>(i)];
            fail(Errc::MalformedProblem, "basic variable missing from basis");
        }
        return nonbasic_value(j);
    }

    bool within_bounds(int j, const Rat& v) const {
        if (lo_[static_cast<std::size_t>(j)] && v < *lo_[static_cast<std::size_t>(j)]) return false;
        if (up_[static_cast<std::size_t>(j)] && v > *up_[static_cast<std::size_t>(j)]) return false;
        return true;
    }

    void make_basic(int j, int row) {
        status_[static_cast<std::size_t>(j)] = Vs::Basic;
        basic_[static_cast<std::size_t>(row)] = j;
    }

    void recompute_beta_slack_basis() {
        for (int i = 0; i < m_; ++i) {
            Rat v = prob_.rows[static_cast<std::size_t>(i)].rhs;
            for (const auto& [j, c] : prob_.rows[static_cast<std::size_t>(i)].coeffs)
                v -= c * nonbasic_value_or_zero(j);
            beta_[static_cast<std::size_t>(i)] = v;
        }
    }

    Rat nonbasic_value_or_zero(int j) const {
        return status_[static_cast<std::size_t>(j)] == Vs::Basic ? Rat(0) : nonbasic_value(j);
    }

    /// Replaces out-of-bounds basic slacks by artificials. Returns whether any
    /// artificial was created.
    bool install_artificials() {
        n_art_begin_ = n_total_;
        bool any = false;
        for (int i = 0; i < m_; ++i) {
            int s = slack_var(i);
            Rat v = beta_[static_cast<std::size_t>(i)];
            if (within_bounds(s, v)) continue;
            any = true;
            // park the slack at the violated side's bound
            Rat bound;
            if (lo_[static_cast<std::size_t>(s)] && v < *lo_[static_cast<std::size_t>(s)]) {
                bound = *lo_[static_cast<std::size_t>(s)];
                status_[static_cast<std::size_t>(s)] = Vs::AtLower;
            } else {
                bound = *up_[static_cast<std::size_t>(s)];
                status_[static_cast<std::size_t>(s)] = Vs::AtUpper;
            }
            Rat residual = v - bound;  // artificial must absorb this
            int sigma = residual > 0 ? 1 : -1;
            int art = add_artificial_column(i, sigma);
            if (sigma < 0)
                for (auto& cell : T_[static_cast<std::size_t>(i)]) cell = -cell;
            make_basic(art, i);
            beta_[static_cast<std::size_t>(i)] = rat_abs(residual);
        }
        if (!any) n_art_begin_ = -1;
        return any;
    }

    int add_artificial_column(int row, int sigma) {
        art_info_.push_back({row, sigma});
        int j = n_total_++;
        lo_.push_back(Rat(0));
        up_.push_back(std::nullopt);
        status_.push_back(Vs::AtLower);
        obj_min_.push_back(Rat(0));
        for (int i = 0; i < m_; ++i)
            T_[static_cast<std::size_t>(i)].push_back(i == row ? Rat(sigma) : Rat(0));
        return j;
    }

    void compute_reduced_costs(const std::vector<Rat>& c) {
        d_ = c;
        for (int i = 0; i < m_; ++i) {
            const Rat& cb = c[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])];
            if (cb == 0) continue;
            const auto& row = T_[static_cast<std::size_t>(i)];
            for (int j = 0; j < n_total_; ++j)
                if (row[static_cast<std::size_t>(j)] != 0) d_[static_cast<std::size_t>(j)] -= cb * row[static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < m_; ++i) d_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] = 0;
    }

    void run_phase_one() {
        std::vector<Rat> c(static_cast<std::size_t>(n_total_), Rat(0));
        for (int j = n_art_begin_; j < n_total_; ++j) c[static_cast<std::size_t>(j)] = 1;
        compute_reduced_costs(c);
        if (!iterate(/*phase_one=*/true)) fail(Errc::MalformedProblem, "phase one reported unbounded");
        Rat infeas = 0;
        for (int i = 0; i < m_; ++i)
            if (is_artificial(basic_[static_cast<std::size_t>(i)])) infeas += beta_[static_cast<std::size_t>(i)];
        if (infeas > 0) {
            infeasible_ = true;
            return;
        }
        // pivot remaining zero-valued artificials out where the row allows it
        for (int i = 0; i < m_; ++i) {
            int b = basic_[static_cast<std::size_t>(i)];
            if (!is_artificial(b)) continue;
            int col = -1;
            for (int j = 0; j < n_art_begin_; ++j)
                if (T_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0 &&
                    status_[static_cast<std::size_t>(j)] != Vs::Basic) {
                    col = j;
                    break;
                }
            if (col >= 0) {
                status_[static_cast<std::size_t>(b)] = Vs::AtLower;
                lock(b);
                Rat entering_value = nonbasic_value(col);
                beta_[static_cast<std::size_t>(i)] = entering_value;  // degenerate pivot, point unchanged
                pivot(i, col, entering_value);
            }
            // otherwise the row is redundant; the artificial stays basic at 0
        }
        for (int j = n_art_begin_; j < n_total_; ++j)
            if (status_[static_cast<std::size_t>(j)] != Vs::Basic) lock(j);
    }

    void lock(int j) {  // freeze a variable at 0 so it can never re-enter
        lo_[static_cast<std::size_t>(j)] = Rat(0);
        up_[static_cast<std::size_t>(j)] = Rat(0);
        if (status_[static_cast<std::size_t>(j)] != Vs::Basic) status_[static_cast<std::size_t>(j)] = Vs::AtLower;
    }

    LpSolution run_phase_two() {
        compute_reduced_costs(obj_min_);
        bool bounded = iterate(/*phase_one=*/false);
        LpSolution sol;
        sol.pivots = pivots_;
        if (!bounded) {
            sol.status = LpStatus::Unbounded;
            return sol;
        }
        sol.status = LpStatus::Optimal;
        sol.primal.resize(static_cast<std::size_t>(n_struct_));
        for (int j = 0; j < n_struct_; ++j) sol.primal[static_cast<std::size_t>(j)] = Rat(0);
        for (int j = 0; j < n_struct_; ++j)
            if (status_[static_cast<std::size_t>(j)] != Vs::Basic)
                sol.primal[static_cast<std::size_t>(j)] = nonbasic_value(j);
        for (int i = 0; i < m_; ++i)
            if (basic_[static_cast<std::size_t>(i)] < n_struct_)
                sol.primal[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] =
                    beta_[static_cast<std::size_t>(i)];

        Rat value_min = 0;
        for (int j = 0; j < n_struct_; ++j)
            if (obj_min_[static_cast<std::size_t>(j)] != 0)
                value_min += obj_min_[static_cast<std::size_t>(j)] * sol.primal[static_cast<std::size_t>(j)];
        sol.dual.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) sol.dual[static_cast<std::size_t>(i)] = -d_[slack(i)];
        verify_optimal(sol, value_min);
        if (prob_.direction == OptDir::Max) {
            sol.value = -value_min;
            for (auto& y : sol.dual) y = -y;
        } else {
            sol.value = value_min;
        }
        return sol;
    }

    LpSolution finish_infeasible() {
        LpSolution sol;
        sol.status = LpStatus::Infeasible;
        sol.pivots = pivots_;
        return sol;
    }

    /// Pivot loop. Entering choice is Dantzig's largest reduced cost for
    /// speed; after a long degenerate stall it switches permanently to
    /// Bland's least-index rule, which guarantees termination. Both rules are
    /// deterministic, so solves replay identically.
    bool iterate(bool phase_one) {
        const long iter_cap = 2000000;
        const long stall_limit = 60;
        long stall = 0;
        bool blands = false;
        for (long iter = 0; iter < iter_cap; ++iter) {
            int enter = -1, dir = 0;
            const Rat* best = nullptr;
            for (int j = 0; j < n_total_; ++j) {
                if (status_[static_cast<std::size_t>(j)] == Vs::Basic) continue;
                if (lo_[static_cast<std::size_t>(j)] && up_[static_cast<std::size_t>(j)] &&
                    *lo_[static_cast<std::size_t>(j)] == *up_[static_cast<std::size_t>(j)])
                    continue;
                const Rat& dj = d_[static_cast<std::size_t>(j)];
                if (dj == 0) continue;
                Vs st = status_[static_cast<std::size_t>(j)];
                int candidate_dir = 0;
                if (st == Vs::AtLower && dj < 0)
                    candidate_dir = 1;
                else if (st == Vs::AtUpper && dj > 0)
                    candidate_dir = -1;
                else if (st == Vs::FreeZero)
                    candidate_dir = dj < 0 ? 1 : -1;
                if (candidate_dir == 0) continue;
                if (blands) {
                    enter = j;
                    dir = candidate_dir;
                    break;
                }
                if (!best || cmpabs(dj, *best) > 0) {
                    best = &dj;
                    enter = j;
                    dir = candidate_dir;
                }
            }
            if (enter < 0) return true;  // optimal for this phase

            // ratio test
            bool have_limit = false;
            Rat t_min;
            int leave_row = -1;     // -1 with have_limit means a bound flip of `enter`
            int leave_index = -1;   // variable index used for Bland tie-breaking
            if (lo_[static_cast<std::size_t>(enter)] && up_[static_cast<std::size_t>(enter)]) {
                t_min = *up_[static_cast<std::size_t>(enter)] - *lo_[static_cast<std::size_t>(enter)];
                have_limit = true;
                leave_row = -1;
                leave_index = enter;
            }
            for (int i = 0; i < m_; ++i) {
                const Rat& coef = T_[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
                if (coef == 0) continue;
                Rat rate = dir > 0 ? Rat(-coef) : coef;  // d(beta_i)/dt
                int b = basic_[static_cast<std::size_t>(i)];
                std::optional<Rat> limit;
                if (rate > 0 && up_[static_cast<std::size_t>(b)])
                    limit = (*up_[static_cast<std::size_t>(b)] - beta_[static_cast<std::size_t>(i)]) / rate;
                else if (rate < 0 && lo_[static_cast<std::size_t>(b)])
                    limit = (*lo_[static_cast<std::size_t>(b)] - beta_[static_cast<std::size_t>(i)]) / rate;
                if (!limit) continue;
                if (!have_limit || *limit < t_min || (*limit == t_min && b < leave_index)) {
                    have_limit = true;
                    t_min = *limit;
                    leave_row = i;
                    leave_index = b;
                }
            }
            if (!have_limit) return false;  // unbounded ray

            if (!blands) {
                stall = (t_min == 0) ? stall + 1 : 0;
                if (stall >= stall_limit) blands = true;
            }
            apply_step(enter, dir, t_min, leave_row);
            ++pivots_;
            (void)phase_one;
#ifdef BIHULL_PARANOID
            audit_invariants(enter, leave_row);
#endif
        }
        fail(Errc::MalformedProblem, "simplex iteration cap exceeded");
    }

#ifdef BIHULL_PARANOID
    void audit_invariants(int enter, int leave_row) const {
        // every original row equation must hold at the current point
        std::vector<Rat> val(static_cast<std::size_t>(n_total_), Rat(0));
        for (int j = 0; j < n_total_; ++j)
            if (status_[static_cast<std::size_t>(j)] != Vs::Basic) val[static_cast<std::size_t>(j)] = nonbasic_value(j);
        for (int i = 0; i < m_; ++i) val[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] =
            beta_[static_cast<std::size_t>(i)];
        for (int i = 0; i < m_; ++i) {
            Rat lhs = 0;
            for (const auto& [j, c] : prob_.rows[static_cast<std::size_t>(i)].coeffs)
                lhs += c * val[static_cast<std::size_t>(j)];
            lhs += val[slack(i)];
            for (std::size_t a = 0; a < art_info_.size(); ++a)
                if (art_info_[a].first == i)
                    lhs += Rat(art_info_[a].second) * val[static_cast<std::size_t>(n_art_begin_ + static_cast<int>(a))];
            if (lhs != prob_.rows[static_cast<std::size_t>(i)].rhs) {
                std::fprintf(stderr, "PARANOID: row %d equation broken after pivot %ld (enter %d leave_row %d)\n",
                             i, pivots_, enter, leave_row);
                std::fprintf(stderr, "lhs=%s rhs=%s\n", Rat(lhs).get_str().c_str(),
                             prob_.rows[static_cast<std::size_t>(i)].rhs.get_str().c_str());
                for (int r = 0; r < m_; ++r)
                    std::fprintf(stderr, "row %d basic %d beta %s\n", r, basic_[static_cast<std::size_t>(r)],
                                 beta_[static_cast<std::size_t>(r)].get_str().c_str());
                for (int j = 0; j < n_total_; ++j)
                    if (status_[static_cast<std::size_t>(j)] != Vs::Basic && val[static_cast<std::size_t>(j)] != 0)
                        std::fprintf(stderr, "nonbasic %d value %s\n", j, val[static_cast<std::size_t>(j)].get_str().c_str());
                std::abort();
            }
        }
        for (int i = 0; i < m_; ++i) {
            int b = basic_[static_cast<std::size_t>(i)];
            if (is_artificial(b)) continue;
            if (!within_bounds(b, beta_[static_cast<std::size_t>(i)])) {
                std::fprintf(stderr, "PARANOID: basic var %d out of bounds after pivot %ld (enter %d leave_row %d)\n",
                             b, pivots_, enter, leave_row);
                std::abort();
            }
        }
    }
#endif

    void apply_step(int enter, int dir, const Rat& t, int leave_row) {
        Rat entering_value;
        switch (status_[static_cast<std::size_t>(enter)]) {
            case Vs::AtLower: entering_value = *lo_[static_cast<std::size_t>(enter)] + t; break;
            case Vs::AtUpper: entering_value = *up_[static_cast<std::size_t>(enter)] - t; break;
            case Vs::FreeZero: entering_value = Rat(dir) * t; break;
            case Vs::Basic: fail(Errc::MalformedProblem, "entering variable already basic");
        }
        if (t != 0)
            for (int i = 0; i < m_; ++i) {
                const Rat& coef = T_[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
                if (coef == 0) continue;
                if (dir > 0)
                    beta_[static_cast<std::size_t>(i)] -= coef * t;
                else
                    beta_[static_cast<std::size_t>(i)] += coef * t;
            }
        if (leave_row < 0) {
            // bound flip
            status_[static_cast<std::size_t>(enter)] =
                status_[static_cast<std::size_t>(enter)] == Vs::AtLower ? Vs::AtUpper : Vs::AtLower;
            return;
        }
        int leaving = basic_[static_cast<std::size_t>(leave_row)];
        const Rat& coef = T_[static_cast<std::size_t>(leave_row)][static_cast<std::size_t>(enter)];
        Rat rate = dir > 0 ? Rat(-coef) : coef;
        status_[static_cast<std::size_t>(leaving)] = rate > 0 ? Vs::AtUpper : Vs::AtLower;
        if (is_artificial(leaving)) lock(leaving);
        beta_[static_cast<std::size_t>(leave_row)] = entering_value;
        pivot(leave_row, enter, entering_value);
    }

    /// Gauss-Jordan pivot making column `col` basic in `row`. beta_ must
    /// already reflect the post-step values (beta_[row] = entering value).
    void pivot(int row, int col, const Rat& entering_value) {
        (void)entering_value;
        auto& prow = T_[static_cast<std::size_t>(row)];
        Rat piv = prow[static_cast<std::size_t>(col)];
        if (piv == 0) fail(Errc::MalformedProblem, "zero pivot");
        if (piv != 1) {
            Rat inv = 1 / piv;
            for (auto& cell : prow)
                if (cell != 0) cell *= inv;
            prow[static_cast<std::size_t>(col)] = 1;
        }
        std::vector<int> nz;
        nz.reserve(prow.size());
        for (int j = 0; j < n_total_; ++j)
            if (prow[static_cast<std::size_t>(j)] != 0) nz.push_back(j);
        mpq_t tmp;
        mpq_init(tmp);
        auto submul_row = [&](std::vector<Rat>& target, const Rat& factor) {
            mpq_srcptr f = factor.get_mpq_t();
            for (int j : nz) {
                mpq_mul(tmp, f, prow[static_cast<std::size_t>(j)].get_mpq_t());
                mpq_sub(target[static_cast<std::size_t>(j)].get_mpq_t(), target[static_cast<std::size_t>(j)].get_mpq_t(), tmp);
            }
            target[static_cast<std::size_t>(col)] = 0;
        };
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            auto& r = T_[static_cast<std::size_t>(i)];
            if (r[static_cast<std::size_t>(col)] == 0) continue;
            const Rat factor = r[static_cast<std::size_t>(col)];
            submul_row(r, factor);
        }
        if (!d_.empty() && d_[static_cast<std::size_t>(col)] != 0) {
            const Rat factor = d_[static_cast<std::size_t>(col)];
            submul_row(d_, factor);
        }
        mpq_clear(tmp);
        make_basic(basic_col_update(row, col), row);
    }

    int basic_col_update(int row, int col) {
        (void)row;
        return col;
    }

    /// Installs a caller basis by Gauss-Jordan reduction, carrying the RHS
    /// along to obtain beta. Returns false if the basis is singular.
    bool reduce_to_basis(const std::vector<int>& basis) {
        std::vector<Rat> rhs(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) rhs[static_cast<std::size_t>(i)] = prob_.rows[static_cast<std::size_t>(i)].rhs;
        std::vector<bool> row_done(static_cast<std::size_t>(m_), false);
        for (int k = 0; k < m_; ++k) {
            int col = basis[static_cast<std::size_t>(k)];
            if (col < 0 || col >= n_total_) return false;
            int row = -1;
            for (int i = 0; i < m_; ++i)
                if (!row_done[static_cast<std::size_t>(i)] &&
                    T_[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
                    row = i;
                    break;
                }
            if (row < 0) return false;
            row_done[static_cast<std::size_t>(row)] = true;
            auto& prow = T_[static_cast<std::size_t>(row)];
            Rat piv = prow[static_cast<std::size_t>(col)];
            if (piv != 1) {
                Rat inv = 1 / piv;
                for (auto& cell : prow)
                    if (cell != 0) cell *= inv;
                rhs[static_cast<std::size_t>(row)] *= inv;
                prow[static_cast<std::size_t>(col)] = 1;
            }
            for (int i = 0; i < m_; ++i) {
                if (i == row) continue;
                auto& r = T_[static_cast<std::size_t>(i)];
                const Rat factor = r[static_cast<std::size_t>(col)];
                if (factor == 0) continue;
                for (int j = 0; j < n_total_; ++j)
                    if (prow[static_cast<std::size_t>(j)] != 0)
                        r[static_cast<std::size_t>(j)] -= factor * prow[static_cast<std::size_t>(j)];
                r[static_cast<std::size_t>(col)] = 0;
                rhs[static_cast<std::size_t>(i)] -= factor * rhs[static_cast<std::size_t>(row)];
            }
            make_basic(col, row);
        }
        // beta = B^{-1} b - sum over nonbasic columns of T_j x_j
        for (int i = 0; i < m_; ++i) beta_[static_cast<std::size_t>(i)] = rhs[static_cast<std::size_t>(i)];
        for (int j = 0; j < n_total_; ++j) {
            if (status_[static_cast<std::size_t>(j)] == Vs::Basic) continue;
            Rat v = nonbasic_value(j);
            if (v == 0) continue;
            for (int i = 0; i < m_; ++i) {
                const Rat& c = T_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (c != 0) beta_[static_cast<std::size_t>(i)] -= c * v;
            }
        }
        return true;
    }

    /// Exact post-solve audit: primal feasibility, dual sign conditions and
    /// the strong-duality identity. Violations indicate an engine bug.
    void verify_optimal(const LpSolution& sol, const Rat& value_min) const {
        for (int j = 0; j < n_struct_; ++j)
            if (!within_bounds(j, sol.primal[static_cast<std::size_t>(j)]))
                fail(Errc::MalformedProblem, "internal: primal bound violation at optimum");
        for (int i = 0; i < m_; ++i) {
            Rat lhs = 0;
            const auto& row = prob_.rows[static_cast<std::size_t>(i)];
            for (const auto& [j, c] : row.coeffs) lhs += c * sol.primal[static_cast<std::size_t>(j)];
            bool ok = true;
            switch (row.sense) {
                case RowSense::LE: ok = lhs <= row.rhs; break;
                case RowSense::GE: ok = lhs >= row.rhs; break;
                case RowSense::EQ: ok = lhs == row.rhs; break;
            }
            if (!ok) fail(Errc::MalformedProblem, "internal: primal row violation at optimum");
        }
        Rat rhs_part = 0;
        for (int i = 0; i < m_; ++i) rhs_part += -d_[slack(i)] * prob_.rows[static_cast<std::size_t>(i)].rhs;
        Rat bound_part = 0;
        for (int j = 0; j < n_total_; ++j) {
            if (status_[static_cast<std::size_t>(j)] == Vs::Basic) continue;
            if (d_[static_cast<std::size_t>(j)] == 0) continue;
            bound_part += d_[static_cast<std::size_t>(j)] * nonbasic_value(j);
        }
        if (value_min != rhs_part + bound_part)
            fail(Errc::MalformedProblem, "internal: strong duality identity failed");
    }
};

}  // namespace detail

/// Deterministic exact solve (Bland's rule); returns optimum with duals, or
/// the Infeasible/Unbounded verdict.
inline LpSolution lp_solve(const LpProblem& p) { return detail::SimplexEngine(p).solve(); }

/// Solve warm-started from a structurally known feasible basis (one variable
/// index per row). Used by the envelope oracle.
inline LpSolution lp_solve_with_basis(const LpProblem& p, const std::vector<int>& basis) {
    return detail::SimplexEngine(p).solve_with_basis(basis);
}

}  // namespace bihull

#endif
