#include "pacbarrier/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pacb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Full-tableau bounded-variable primal simplex. Rows must already be in
// <= form. Columns: [0, n) structural, [n, n+m) slacks, n+m the phase-1
// artificial. Nonbasic variables rest at a bound (or at 0 when free).
class Simplex {
public:
    Simplex(int n, const std::vector<const std::vector<double>*>& rows,
            const std::vector<double>& rhs, const std::vector<double>& lo,
            const std::vector<double>& hi, const std::vector<double>& cost,
            double tol)
        : n_(n),
          m_(static_cast<int>(rows.size())),
          ncols_(n + m_ + 1),
          tol_(tol),
          tab_(static_cast<std::size_t>(m_) * ncols_, 0.0),
          b_(rhs),
          lo_(ncols_, 0.0),
          hi_(ncols_, kInf),
          cost_(ncols_, 0.0),
          d_(ncols_, 0.0),
          basis_(m_),
          state_(ncols_, AtLo),
          beta_(m_, 0.0) {
        for (int i = 0; i < m_; ++i) {
            double* row = tab(i);
            const std::vector<double>& src = *rows[i];
            for (int j = 0; j < n_; ++j) row[j] = src[j];
            row[n_ + i] = 1.0;       // slack
            row[n_ + m_] = -1.0;     // artificial
            basis_[i] = n_ + i;
        }
        for (int j = 0; j < n_; ++j) {
            lo_[j] = lo[j];
            hi_[j] = hi[j];
            cost_[j] = cost[j];
            if (std::isfinite(lo_[j]))
                state_[j] = AtLo;
            else if (std::isfinite(hi_[j]))
                state_[j] = AtHi;
            else
                state_[j] = FreeZero;
        }
        for (int i = 0; i < m_; ++i) state_[n_ + i] = Basic;
    }

    // Returns Optimal / Infeasible / Unbounded / Failure.
    LpStatus run() {
        // Phase 1: drive the artificial to zero if the slack basis is
        // infeasible at the initial nonbasic point.
        refresh_beta();
        int worst = -1;
        double worst_val = -tol_;
        for (int i = 0; i < m_; ++i)
            if (beta_[i] < worst_val) {
                worst_val = beta_[i];
                worst = i;
            }
        if (worst >= 0) {
            pivot(worst, n_ + m_);
            std::vector<double> phase1(ncols_, 0.0);
            phase1[n_ + m_] = 1.0;
            cost_.swap(phase1);
            refresh_reduced_costs();
            LpStatus st = iterate();
            cost_.swap(phase1);
            if (st != LpStatus::Optimal) return st == LpStatus::Unbounded ? LpStatus::Failure : st;
            refresh_beta();
            double t_val = value_of(n_ + m_);
            if (t_val > 1e2 * tol_) return LpStatus::Infeasible;
        }
        // Fix the artificial at zero for phase 2.
        lo_[n_ + m_] = hi_[n_ + m_] = 0.0;
        if (state_[n_ + m_] != Basic) state_[n_ + m_] = AtLo;
        refresh_reduced_costs();
        return iterate();
    }

    std::vector<double> solution() const {
        refresh_beta();
        std::vector<double> x(n_);
        for (int j = 0; j < n_; ++j) {
            double v = value_of(j);
            if (std::isfinite(lo_[j])) v = std::max(v, lo_[j]);
            if (std::isfinite(hi_[j])) v = std::min(v, hi_[j]);
            x[j] = v;
        }
        return x;
    }

    std::size_t iterations() const { return iters_; }

private:
    enum State { Basic = -1, AtLo = 0, AtHi = 1, FreeZero = 2 };

    double* tab(int i) { return tab_.data() + static_cast<std::size_t>(i) * ncols_; }
    const double* tab(int i) const {
        return tab_.data() + static_cast<std::size_t>(i) * ncols_;
    }

    double nonbasic_value(int j) const {
        switch (state_[j]) {
            case AtLo: return lo_[j];
            case AtHi: return hi_[j];
            default: return 0.0;
        }
    }

    double value_of(int j) const {
        if (state_[j] == Basic) {
            for (int i = 0; i < m_; ++i)
                if (basis_[i] == j) return beta_[i];
            return 0.0;
        }
        return nonbasic_value(j);
    }

    void refresh_beta() const {
        for (int i = 0; i < m_; ++i) beta_[i] = b_[i];
        for (int j = 0; j < ncols_; ++j) {
            if (state_[j] == Basic) continue;
            double v = nonbasic_value(j);
            if (v == 0.0) continue;
            for (int i = 0; i < m_; ++i) beta_[i] -= tab_[static_cast<std::size_t>(i) * ncols_ + j] * v;
        }
    }

    void refresh_reduced_costs() {
        for (int j = 0; j < ncols_; ++j) d_[j] = cost_[j];
        for (int i = 0; i < m_; ++i) {
            double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = tab(i);
            for (int j = 0; j < ncols_; ++j) d_[j] -= cb * row[j];
        }
    }

    void pivot(int r, int q) {
        double* rowr = tab(r);
        double piv = rowr[q];
        double inv = 1.0 / piv;
        for (int j = 0; j < ncols_; ++j) rowr[j] *= inv;
        b_[r] *= inv;
        rowr[q] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* rowi = tab(i);
            double f = rowi[q];
            if (f == 0.0) continue;
            for (int j = 0; j < ncols_; ++j) rowi[j] -= f * rowr[j];
            rowi[q] = 0.0;
            b_[i] -= f * b_[r];
        }
        double fd = d_[q];
        if (fd != 0.0) {
            for (int j = 0; j < ncols_; ++j) d_[j] -= fd * rowr[j];
            d_[q] = 0.0;
        }
        state_[basis_[r]] = AtLo;  // caller fixes the leaving state
        basis_[r] = q;
        state_[q] = Basic;
    }

    LpStatus iterate() {
        const std::size_t max_iters = 200000;
        const std::size_t bland_after = 20000;
        for (;;) {
            if (iters_ > max_iters) return LpStatus::Failure;
            refresh_beta();
            bool bland = iters_ > bland_after;
            // Pricing.
            int q = -1, dir = 0;
            double best = tol_;
            for (int j = 0; j < ncols_; ++j) {
                if (state_[j] == Basic) continue;
                if (lo_[j] == hi_[j] && std::isfinite(lo_[j])) continue;
                double dj = d_[j];
                int s = 0;
                if (state_[j] == AtLo && dj < -tol_) s = +1;
                else if (state_[j] == AtHi && dj > tol_) s = -1;
                else if (state_[j] == FreeZero && std::fabs(dj) > tol_)
                    s = dj < 0.0 ? +1 : -1;
                if (s == 0) continue;
                if (bland) {
                    q = j;
                    dir = s;
                    break;
                }
                if (std::fabs(dj) > best) {
                    best = std::fabs(dj);
                    q = j;
                    dir = s;
                }
            }
            if (q < 0) return LpStatus::Optimal;
            ++iters_;

            // Two-pass ratio test: find the tightest step, then pivot on the
            // largest-magnitude entry within a tolerance window of it. Tiny
            // pivots are excluded outright — a single 1e-11 pivot wrecks the
            // dense tableau beyond repair.
            double limit = kInf;
            if (std::isfinite(lo_[q]) && std::isfinite(hi_[q]))
                limit = hi_[q] - lo_[q];
            cands_.clear();
            double tmin = limit;
            for (int i = 0; i < m_; ++i) {
                double a = tab_[static_cast<std::size_t>(i) * ncols_ + q];
                if (std::fabs(a) <= 1e-7) continue;
                double rate = -dir * a;  // d beta_i / d t
                int bj = basis_[i];
                double t;
                int hit;
                if (rate < 0.0) {
                    if (!std::isfinite(lo_[bj])) continue;
                    t = (beta_[i] - lo_[bj]) / (-rate);
                    hit = AtLo;
                } else {
                    if (!std::isfinite(hi_[bj])) continue;
                    t = (hi_[bj] - beta_[i]) / rate;
                    hit = AtHi;
                }
                t = std::max(t, 0.0);
                tmin = std::min(tmin, t);
                cands_.push_back({t, i, a, hit});
            }
            if (tmin >= limit) {
                if (!std::isfinite(limit)) return LpStatus::Unbounded;
                // Bound flip: the entering variable moves to its other bound.
                state_[q] = state_[q] == AtLo ? AtHi : AtLo;
                continue;
            }
            int leave = -1;
            int leave_state = AtLo;
            double window = tmin + 1e-9 * (1.0 + std::fabs(tmin));
            double best_piv = 0.0;
            for (const Cand& c : cands_) {
                if (c.t > window) continue;
                bool better = leave < 0 ||
                              (bland ? basis_[c.i] < basis_[leave]
                                     : std::fabs(c.a) > std::fabs(best_piv));
                if (better) {
                    leave = c.i;
                    leave_state = c.hit;
                    best_piv = c.a;
                }
            }
            int leaving_var = basis_[leave];
            pivot(leave, q);
            state_[leaving_var] = leave_state;
            if (lo_[leaving_var] == hi_[leaving_var]) state_[leaving_var] = AtLo;
        }
    }

    struct Cand {
        double t;
        int i;
        double a;
        int hit;
    };
    std::vector<Cand> cands_;

    int n_, m_, ncols_;
    double tol_;
    std::vector<double> tab_;
    std::vector<double> b_;
    std::vector<double> lo_, hi_, cost_, d_;
    std::vector<int> basis_;
    std::vector<int> state_;
    mutable std::vector<double> beta_;
    std::size_t iters_ = 0;
};

struct NormalizedRow {
    const std::vector<double>* coefs;
    double rhs;
    bool negate;  // Ge rows are negated into Le form
};

double row_activity(const LinearProgram& lp, std::size_t r,
                    const std::vector<double>& x) {
    const auto& row = lp.rows[r];
    double s = 0.0;
    for (int j = 0; j < lp.num_vars; ++j) s += row[j] * x[j];
    return s;
}

double row_violation(const LinearProgram& lp, std::size_t r,
                     const std::vector<double>& x) {
    double act = row_activity(lp, r, x);
    return lp.senses[r] == RowSense::Le ? act - lp.rhs[r] : lp.rhs[r] - act;
}

LpResult solve_subset(const LinearProgram& lp,
                      const std::vector<std::size_t>& subset, double pivot_tol) {
    // Materialize <=-form rows for the subset, equilibrated to unit max
    // coefficient: monomial rows span several orders of magnitude and an
    // unscaled tableau drifts badly over a few hundred pivots.
    std::vector<std::vector<double>> storage;
    storage.reserve(subset.size());
    std::vector<double> rhs;
    for (std::size_t r : subset) {
        double sign = lp.senses[r] == RowSense::Le ? 1.0 : -1.0;
        storage.emplace_back(lp.rows[r]);
        double mx = 0.0;
        for (double c : storage.back()) mx = std::max(mx, std::fabs(c));
        double s = mx > 0.0 ? sign / mx : sign;
        for (double& c : storage.back()) c *= s;
        rhs.push_back(lp.rhs[r] * s);
    }
    std::vector<const std::vector<double>*> rows;
    rows.reserve(storage.size());
    for (const auto& row : storage) rows.push_back(&row);
    Simplex spx(lp.num_vars, rows, rhs, lp.var_lo, lp.var_hi, lp.objective,
                pivot_tol);
    LpResult res;
    res.status = spx.run();
    res.iterations = spx.iterations();
    if (res.status == LpStatus::Optimal) {
        res.values = spx.solution();
        res.objective = std::inner_product(res.values.begin(), res.values.end(),
                                           lp.objective.begin(), 0.0);
    }
    return res;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double tolerance) {
    if (lp.num_vars <= 0) throw std::invalid_argument("solve_lp: no variables");
    for (const auto& row : lp.rows)
        if (static_cast<int>(row.size()) != lp.num_vars)
            throw std::invalid_argument("solve_lp: row width mismatch");
    const double pivot_tol = 1e-9;
    const std::size_t direct_limit = 1024;
    const std::size_t total = lp.num_rows();

    std::vector<std::size_t> working;
    if (total <= direct_limit) {
        working.resize(total);
        std::iota(working.begin(), working.end(), std::size_t{0});
    } else {
        working.resize(direct_limit / 2);
        std::iota(working.begin(), working.end(), std::size_t{0});
    }

    std::vector<char> in_set(total, 0);
    for (std::size_t r : working) in_set[r] = 1;

    LpResult res;
    const std::size_t max_rounds = 400;
    for (std::size_t round = 1; round <= max_rounds; ++round) {
        res = solve_subset(lp, working, pivot_tol);
        res.outer_rounds = round;
        if (res.status == LpStatus::Infeasible) return res;  // subset infeasible is conclusive
        if (res.status == LpStatus::Failure) return res;
        if (res.status == LpStatus::Unbounded) {
            if (working.size() == total) return res;
            // Enlarge the subset; bounded programs in this codebase are
            // box-bounded so this path only triggers on small inputs.
            std::size_t added = 0;
            for (std::size_t r = 0; r < total && added < 256; ++r)
                if (!in_set[r]) {
                    in_set[r] = 1;
                    working.push_back(r);
                    ++added;
                }
            continue;
        }
        // Optimal on the subset: scan every row for violations.
        struct Viol {
            double v;
            std::size_t r;
        };
        std::vector<Viol> violated;
        double max_violation = 0.0;
        for (std::size_t r = 0; r < total; ++r) {
            double v = row_violation(lp, r, res.values);
            max_violation = std::max(max_violation, v);
            if (!in_set[r] && v > tolerance) violated.push_back({v, r});
        }
        if (violated.empty()) {
            res.max_residual = std::max(0.0, max_violation);
            if (res.max_residual > 10.0 * tolerance) res.status = LpStatus::Failure;
            return res;
        }
        std::sort(violated.begin(), violated.end(),
                  [](const Viol& a, const Viol& b) {
                      return a.v > b.v || (a.v == b.v && a.r < b.r);
                  });
        std::size_t add = std::min<std::size_t>(violated.size(), 64);
        // Keep the working set bounded: drop slack rows before growing past
        // the direct-solve limit (never drop rows that are active).
        if (working.size() + add > 4096) {
            std::vector<std::size_t> kept;
            for (std::size_t r : working) {
                if (row_violation(lp, r, res.values) > -tolerance)
                    kept.push_back(r);
                else
                    in_set[r] = 0;
            }
            working.swap(kept);
        }
        for (std::size_t i = 0; i < add; ++i) {
            in_set[violated[i].r] = 1;
            working.push_back(violated[i].r);
        }
    }
    res.status = LpStatus::Failure;
    return res;
}

}  // namespace pacb
