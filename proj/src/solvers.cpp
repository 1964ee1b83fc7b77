#include "hardbench/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

namespace hardbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNoisyReevaluations = 32;

struct BudgetExhausted {};

double sanitize(double v) { return std::isnan(v) ? kInf : v; }

// Counts evaluations, repairs points into the box, assigns noise keys and
// tracks the best point under feasibility rules in true (unaugmented) terms.
// Solvers see "search" candidates, which include the augmented-Lagrangian
// terms when an augmentation is active.
class Evaluator {
public:
    Evaluator(const Problem& problem, const SolverConfig& cfg)
        : problem_(problem), seed_(cfg.seed) {
        reserve_ = problem.deterministic() ? 0 : kNoisyReevaluations;
        budget_ = cfg.max_evals > reserve_ ? cfg.max_evals - reserve_ : 0;
        limit_ = budget_;
    }

    const Problem& problem() const { return problem_; }
    std::size_t used() const { return used_; }
    std::size_t budget() const { return budget_; }
    std::size_t remaining() const { return limit_ > used_ ? limit_ - used_ : 0; }

    /// Soft limit for a sub-phase; never exceeds the run budget.
    void set_limit(std::size_t limit) { limit_ = std::min(limit, budget_); }
    void clear_limit() { limit_ = budget_; }

    void set_augmentation(std::vector<double> lambda, double mu) {
        lambda_ = std::move(lambda);
        mu_ = mu;
        augmented_ = true;
    }

    /// Ranks the true best with a tighter equality tolerance than the
    /// problem's own, so the reported point is the one the outer loop drove
    /// to the constraint.
    void set_equality_tolerance(double tol) { equality_tol_ = tol; }

    /// Clamps into bounds and rounds integer coordinates, in place.
    void repair(Vector& x) const {
        const auto& b = problem_.bounds();
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], b[i].lo, b[i].hi);
        for (std::size_t c : problem_.integer_coords())
            x[c] = std::clamp(std::round(x[c]), std::ceil(b[c].lo), std::floor(b[c].hi));
    }

    Candidate evaluate(Vector& x) {
        repair(x);
        if (used_ >= limit_) throw BudgetExhausted{};
        const double f = problem_.evaluate(x, NoiseKey{seed_, used_});
        ++used_;
        return record(x, f);
    }

    /// Search value and its gradient with respect to x. Gradient components of
    /// integer coordinates are zero. Counts one evaluation when the problem has
    /// an analytic gradient, 2n + 1 with central differences.
    Candidate evaluate_with_gradient(Vector& x, Vector& grad) {
        repair(x);
        const double sign = problem_.direction() == Direction::Maximize ? -1.0 : 1.0;
        const auto& eqs = problem_.feasibility().equalities;
        if (problem_.gradient()) {
            const Candidate c = evaluate(x);
            grad = problem_.gradient()(x);
            for (double& g : grad) g *= sign;
            if (augmented_) {
                for (std::size_t j = 0; j < eqs.size(); ++j) {
                    const double h = eqs[j].residual(x);
                    const Vector gh = eqs[j].gradient ? eqs[j].gradient(x) : fd_gradient(eqs[j].residual, x);
                    const double w = lambda_[j] + mu_ * h;
                    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += w * gh[i];
                }
            }
            zero_integer(grad);
            return c;
        }
        const Candidate c = evaluate(x);
        grad.assign(x.size(), 0.0);
        const auto& b = problem_.bounds();
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (is_integer(i)) continue;
            const double step = 1e-6 * std::max(1.0, std::abs(x[i]));
            Vector xp = x, xm = x;
            xp[i] = std::min(b[i].hi, x[i] + step);
            xm[i] = std::max(b[i].lo, x[i] - step);
            if (xp[i] == xm[i]) continue;
            const double fp = evaluate(xp).value;
            const double fm = evaluate(xm).value;
            grad[i] = (fp - fm) / (xp[i] - xm[i]);
        }
        return c;
    }

    void mark() { trace_.push_back({used_, best_feasible_}); }

    SolveResult finish(std::string solver) {
        mark();
        SolveResult r;
        r.solver = std::move(solver);
        r.evals = used_;
        r.trace = std::move(trace_);
        if (!have_best_) return r;
        r.best_point = best_x_;
        r.feasibility = problem_.is_feasible(best_x_);
        r.best_value = best_.value;
        if (!problem_.deterministic()) {
            double sum = 0.0;
            for (std::size_t i = 0; i < reserve_; ++i)
                sum += normalized(problem_.direction(), problem_.evaluate(best_x_, NoiseKey{seed_, used_ + i}));
            r.reevaluations = reserve_;
            r.evals += reserve_;
            r.best_value = sum / static_cast<double>(reserve_);
        }
        r.best_objective = normalized(problem_.direction(), r.best_value);
        if (problem_.is_path()) r.best_path = problem_.to_path(best_x_);
        return r;
    }

private:
    bool is_integer(std::size_t i) const {
        const auto& ic = problem_.integer_coords();
        return std::find(ic.begin(), ic.end(), i) != ic.end();
    }

    void zero_integer(Vector& g) const {
        for (std::size_t c : problem_.integer_coords()) g[c] = 0.0;
    }

    Vector fd_gradient(const Residual& h, const Vector& x) const {
        Vector g(x.size(), 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double step = 1e-6 * std::max(1.0, std::abs(x[i]));
            Vector xp = x, xm = x;
            xp[i] += step;
            xm[i] -= step;
            g[i] = (h(xp) - h(xm)) / (2.0 * step);
        }
        return g;
    }

    Candidate record(const Vector& x, double f) {
        const double value = sanitize(normalized(problem_.direction(), f));
        const FeasibilityReport feas = problem_.is_feasible(x);
        Candidate truth{value, feas.violation, feas.feasible};
        if (equality_tol_ && !feas.equality_residual.empty()) {
            double eq_violation = 0.0;
            for (double h : feas.equality_residual) eq_violation += std::max(0.0, std::abs(h) - *equality_tol_);
            truth.feasible = feas.groups_satisfied && eq_violation == 0.0;
            truth.violation = truth.feasible ? 0.0 : feas.group_violation + eq_violation;
        }
        if (!have_best_ || feasibility_compare(truth, best_) < 0) {
            best_ = truth;
            best_x_ = x;
            have_best_ = true;
        }
        if (truth.feasible) best_feasible_ = std::min(best_feasible_, value);

        if (!augmented_) return truth;
        double search = value;
        for (std::size_t j = 0; j < lambda_.size(); ++j) {
            const double h = feas.equality_residual[j];
            search += lambda_[j] * h + 0.5 * mu_ * h * h;
        }
        return {sanitize(search), feas.group_violation, feas.groups_satisfied};
    }

    const Problem& problem_;
    std::uint64_t seed_;
    std::size_t reserve_ = 0;
    std::size_t budget_ = 0;
    std::size_t limit_ = 0;
    std::size_t used_ = 0;

    bool have_best_ = false;
    Vector best_x_;
    Candidate best_;
    double best_feasible_ = kInf;
    std::vector<TracePoint> trace_;

    bool augmented_ = false;
    std::optional<double> equality_tol_;
    std::vector<double> lambda_;
    double mu_ = 0.0;
};

using Rng = std::mt19937_64;

Vector random_point(const Problem& problem, Rng& rng) {
    Vector x(problem.dimension());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& b = problem.bounds()[i];
        x[i] = std::uniform_real_distribution<double>(b.lo, b.hi)(rng);
    }
    return x;
}

struct Incumbent {
    Vector x;
    Candidate c;
    bool set = false;

    void offer(const Vector& y, const Candidate& cy) {
        if (!set || feasibility_compare(cy, c) < 0) {
            x = y;
            c = cy;
            set = true;
        }
    }
};

// --------------------------------------------------------------------------
// Nelder-Mead on feasibility-rule comparisons, with restarts from the best
// vertex while restarts keep improving.
// --------------------------------------------------------------------------

Incumbent run_nelder_mead(Evaluator& ev, Vector start, const SolverConfig& cfg) {
    const Problem& p = ev.problem();
    const std::size_t n = p.dimension();
    Incumbent best;
    try {
        const Candidate c0 = ev.evaluate(start);
        best.offer(start, c0);
    } catch (const BudgetExhausted&) {
        return best;
    }

    auto better = [](const Candidate& a, const Candidate& b) { return feasibility_compare(a, b) < 0; };

    double previous_restart = kInf;
    try {
        while (true) {
            std::vector<Vector> simplex(n + 1, best.x);
            std::vector<Candidate> vals(n + 1, best.c);
            for (std::size_t i = 0; i < n; ++i) {
                const auto& b = p.bounds()[i];
                const double step = std::max(cfg.nm_step * (b.hi - b.lo), 1e-12);
                Vector& v = simplex[i + 1];
                v[i] = v[i] + step <= b.hi ? v[i] + step : v[i] - step;
                vals[i + 1] = ev.evaluate(v);
                best.offer(v, vals[i + 1]);
            }

            std::vector<std::size_t> order(n + 1);
            while (true) {
                std::iota(order.begin(), order.end(), 0);
                std::stable_sort(order.begin(), order.end(),
                                 [&](std::size_t a, std::size_t b) { return better(vals[a], vals[b]); });
                const std::size_t lo = order.front(), hi = order.back(), second = order[n - 1];

                double diameter = 0.0;
                for (std::size_t k = 0; k <= n; ++k)
                    for (std::size_t i = 0; i < n; ++i)
                        diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[lo][i]));
                const double spread = std::abs(vals[hi].value - vals[lo].value);
                if (diameter < cfg.nm_xtol || (vals[lo].feasible && vals[hi].feasible && spread < cfg.nm_ftol &&
                                               diameter < std::sqrt(cfg.nm_xtol)))
                    break;
                ev.mark();

                Vector centroid(n, 0.0);
                for (std::size_t k = 0; k <= n; ++k) {
                    if (k == hi) continue;
                    for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);
                }
                auto along = [&](double t) {
                    Vector y(n);
                    for (std::size_t i = 0; i < n; ++i) y[i] = centroid[i] + t * (simplex[hi][i] - centroid[i]);
                    return y;
                };

                Vector xr = along(-1.0);
                const Candidate cr = ev.evaluate(xr);
                best.offer(xr, cr);
                if (better(cr, vals[lo])) {
                    Vector xe = along(-2.0);
                    const Candidate ce = ev.evaluate(xe);
                    best.offer(xe, ce);
                    if (better(ce, cr)) simplex[hi] = xe, vals[hi] = ce;
                    else simplex[hi] = xr, vals[hi] = cr;
                    continue;
                }
                if (better(cr, vals[second])) {
                    simplex[hi] = xr;
                    vals[hi] = cr;
                    continue;
                }
                const bool outside = better(cr, vals[hi]);
                Vector xc = along(outside ? -0.5 : 0.5);
                const Candidate cc = ev.evaluate(xc);
                best.offer(xc, cc);
                if (better(cc, outside ? cr : vals[hi])) {
                    simplex[hi] = xc;
                    vals[hi] = cc;
                    continue;
                }
                // Shrink toward the best vertex.
                for (std::size_t k = 0; k <= n; ++k) {
                    if (k == lo) continue;
                    for (std::size_t i = 0; i < n; ++i) simplex[k][i] = simplex[lo][i] + 0.5 * (simplex[k][i] - simplex[lo][i]);
                    vals[k] = ev.evaluate(simplex[k]);
                    best.offer(simplex[k], vals[k]);
                }
            }

            // Restart only while it still pays off.
            const double now = best.c.feasible ? best.c.value : best.c.violation;
            if (std::isfinite(previous_restart) && !(previous_restart - now > cfg.nm_ftol * (1.0 + std::abs(now))))
                break;
            previous_restart = now;
        }
    } catch (const BudgetExhausted&) {
    }
    return best;
}

// --------------------------------------------------------------------------
// Differential evolution, rand/1/bin with reflection at the bounds.
// --------------------------------------------------------------------------

Incumbent run_de(Evaluator& ev, const SolverConfig& cfg, Rng& rng) {
    const Problem& p = ev.problem();
    const std::size_t n = p.dimension();
    const std::size_t np = cfg.population_for(n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, np - 1);
    std::uniform_int_distribution<std::size_t> pick_dim(0, n - 1);

    Incumbent best;
    std::vector<Vector> pop(np);
    std::vector<Candidate> fit(np);
    try {
        for (std::size_t i = 0; i < np; ++i) {
            pop[i] = random_point(p, rng);
            fit[i] = ev.evaluate(pop[i]);
            best.offer(pop[i], fit[i]);
        }
        ev.mark();

        Vector trial(n);
        while (true) {
            for (std::size_t i = 0; i < np; ++i) {
                std::size_t r1, r2, r3;
                do r1 = pick(rng); while (r1 == i);
                do r2 = pick(rng); while (r2 == i || r2 == r1);
                do r3 = pick(rng); while (r3 == i || r3 == r1 || r3 == r2);
                const std::size_t jrand = pick_dim(rng);
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == jrand || unit(rng) < cfg.de_crossover) {
                        double v = pop[r1][j] + cfg.de_weight * (pop[r2][j] - pop[r3][j]);
                        const auto& b = p.bounds()[j];
                        if (v < b.lo) v = b.lo + (b.lo - v);
                        if (v > b.hi) v = b.hi - (v - b.hi);
                        if (v < b.lo || v > b.hi) v = b.lo + unit(rng) * (b.hi - b.lo);
                        trial[j] = v;
                    } else {
                        trial[j] = pop[i][j];
                    }
                }
                const Candidate ct = ev.evaluate(trial);
                best.offer(trial, ct);
                if (feasibility_compare(ct, fit[i]) <= 0) {
                    pop[i] = trial;
                    fit[i] = ct;
                }
            }
            ev.mark();
        }
    } catch (const BudgetExhausted&) {
    }
    return best;
}

// --------------------------------------------------------------------------
// Simulated annealing with Gaussian proposals, geometric cooling and
// independent restarts.
// --------------------------------------------------------------------------

Incumbent run_sa(Evaluator& ev, const SolverConfig& cfg, Rng& rng) {
    const Problem& p = ev.problem();
    const std::size_t n = p.dimension();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const std::size_t moves = cfg.sa_moves_per_temp ? cfg.sa_moves_per_temp : std::max<std::size_t>(20, 10 * n);
    const std::size_t restarts = std::max<std::size_t>(1, cfg.sa_restarts);
    const std::size_t total = ev.remaining();

    Incumbent overall;
    try {
        // Temperature scale from the spread of a small random sample.
        double t0 = cfg.sa_initial_temp;
        if (!(t0 > 0.0)) {
            std::vector<double> sample;
            for (int i = 0; i < 20; ++i) {
                Vector x = random_point(p, rng);
                const Candidate c = ev.evaluate(x);
                overall.offer(x, c);
                if (std::isfinite(c.value)) sample.push_back(c.value);
            }
            double mean = 0.0, var = 0.0;
            for (double v : sample) mean += v;
            mean /= std::max<std::size_t>(1, sample.size());
            for (double v : sample) var += (v - mean) * (v - mean);
            t0 = sample.size() > 1 ? std::sqrt(var / (sample.size() - 1)) : 1.0;
            if (!(t0 > 1e-12)) t0 = 1.0;
        }

        const std::size_t per_run = std::max<std::size_t>(moves, total / restarts);
        const double levels = std::max(1.0, static_cast<double>(per_run) / static_cast<double>(moves));
        // Auto cooling takes the temperature down by 1e-6 over one restart.
        const double cooling = cfg.sa_cooling > 0.0 ? cfg.sa_cooling : std::exp(std::log(1e-6) / levels);

        for (std::size_t r = 0; r < restarts; ++r) {
            const std::size_t stop = ev.used() + per_run;
            Vector x = random_point(p, rng);
            Candidate cx = ev.evaluate(x);
            overall.offer(x, cx);
            double temp = t0;
            double step = cfg.sa_step;
            while (ev.used() < stop) {
                for (std::size_t m = 0; m < moves; ++m) {
                    Vector y = x;
                    for (std::size_t i = 0; i < n; ++i) {
                        const auto& b = p.bounds()[i];
                        double v = y[i] + step * (b.hi - b.lo) * gauss(rng);
                        if (v < b.lo) v = b.lo + (b.lo - v);
                        if (v > b.hi) v = b.hi - (v - b.hi);
                        if (v < b.lo || v > b.hi) v = b.lo + unit(rng) * (b.hi - b.lo);
                        y[i] = v;
                    }
                    const Candidate cy = ev.evaluate(y);
                    overall.offer(y, cy);
                    bool accept;
                    if (!cx.feasible) {
                        accept = cy.feasible || cy.violation <= cx.violation;
                    } else if (!cy.feasible) {
                        accept = false;
                    } else {
                        const double delta = cy.value - cx.value;
                        accept = delta <= 0.0 || unit(rng) < std::exp(-delta / temp);
                    }
                    if (accept) x = std::move(y), cx = cy;
                }
                temp *= cooling;
                step = std::max(cfg.sa_step * std::sqrt(temp / t0), 1e-6);
                ev.mark();
            }
        }
    } catch (const BudgetExhausted&) {
    }
    return overall;
}

// --------------------------------------------------------------------------
// Limited-memory BFGS with Armijo backtracking and projection onto the box.
// --------------------------------------------------------------------------

Vector run_lbfgs(Evaluator& ev, Vector x, std::size_t max_iter, double gtol) {
    const std::size_t n = x.size();
    const std::size_t memory = 8;
    Vector g;
    Candidate c;
    try {
        c = ev.evaluate_with_gradient(x, g);
    } catch (const BudgetExhausted&) {
        return x;
    }
    std::deque<std::pair<Vector, Vector>> history;  // (s, y)

    auto dot = [](const Vector& a, const Vector& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        if (gmax < gtol) break;

        // Two-loop recursion.
        Vector q = g;
        std::vector<double> alpha(history.size());
        for (std::size_t k = history.size(); k-- > 0;) {
            const auto& [s, y] = history[k];
            alpha[k] = dot(s, q) / dot(y, s);
            for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * y[i];
        }
        double gamma = 1.0;
        if (!history.empty()) {
            const auto& [s, y] = history.back();
            gamma = dot(s, y) / dot(y, y);
        } else {
            gamma = 1.0 / std::max(1.0, std::sqrt(dot(g, g)));
        }
        for (double& v : q) v *= gamma;
        for (std::size_t k = 0; k < history.size(); ++k) {
            const auto& [s, y] = history[k];
            const double beta = dot(y, q) / dot(y, s);
            for (std::size_t i = 0; i < n; ++i) q[i] += s[i] * (alpha[k] - beta);
        }
        Vector d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = -q[i];
        double slope = dot(g, d);
        if (!(slope < 0.0)) {
            history.clear();
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i] / std::max(1.0, std::sqrt(dot(g, g)));
            slope = dot(g, d);
        }

        double step = 1.0;
        bool moved = false;
        Vector xn, gn;
        Candidate cn;
        for (int ls = 0; ls < 40; ++ls) {
            xn = x;
            for (std::size_t i = 0; i < n; ++i) xn[i] += step * d[i];
            try {
                cn = ev.evaluate_with_gradient(xn, gn);
            } catch (const BudgetExhausted&) {
                return x;
            }
            if (cn.feasible && cn.value <= c.value + 1e-4 * step * slope) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;

        Vector s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = xn[i] - x[i], y[i] = gn[i] - g[i];
        if (dot(s, y) > 1e-16) {
            history.emplace_back(std::move(s), std::move(y));
            if (history.size() > memory) history.pop_front();
        }
        const double improvement = c.value - cn.value;
        x = std::move(xn);
        g = std::move(gn);
        c = cn;
        if (improvement <= 1e-16 * (1.0 + std::abs(c.value))) break;
    }
    return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

std::size_t SolverConfig::population_for(std::size_t dimension) const {
    return population ? population : std::max<std::size_t>(10, 10 * dimension);
}

void SolverConfig::validate(std::size_t dimension) const {
    if (max_evals == 0) throw ContractViolation("SolverConfig: zero evaluation budget");
    if (population != 0 && population < 4) throw ContractViolation("SolverConfig: population must be >= 4");
    if (max_evals < population_for(dimension))
        throw ContractViolation("SolverConfig: max_evals must be >= population size");
    if (!(al_growth > 1.0)) throw ContractViolation("SolverConfig: penalty growth factor must exceed 1");
    if (!(al_mu0 > 0.0)) throw ContractViolation("SolverConfig: initial penalty must be positive");
    if (!(de_weight > 0.0) || !(de_crossover >= 0.0 && de_crossover <= 1.0))
        throw ContractViolation("SolverConfig: DE weights out of range");
    if (!(polish_fraction >= 0.0 && polish_fraction < 1.0))
        throw ContractViolation("SolverConfig: polish fraction must lie in [0, 1)");
    if (!(al_inner_fraction >= 0.0 && al_inner_fraction < 1.0))
        throw ContractViolation("SolverConfig: AL inner fraction must lie in [0, 1)");
    if (sa_cooling != 0.0 && !(sa_cooling > 0.0 && sa_cooling < 1.0))
        throw ContractViolation("SolverConfig: SA cooling ratio must lie in (0, 1)");
}

std::weak_ordering feasibility_compare(const Candidate& a, const Candidate& b) {
    if (a.feasible != b.feasible) return a.feasible ? std::weak_ordering::less : std::weak_ordering::greater;
    const double x = a.feasible ? sanitize(a.value) : sanitize(a.violation);
    const double y = b.feasible ? sanitize(b.value) : sanitize(b.violation);
    if (x < y) return std::weak_ordering::less;
    if (y < x) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
}

namespace {

void polish_tail(Evaluator& ev, const Incumbent& best, const SolverConfig& cfg) {
    ev.clear_limit();
    if (!best.set || ev.remaining() == 0) return;
    run_nelder_mead(ev, best.x, cfg);
}

std::size_t phase_limit(const Evaluator& ev, double share_of_budget) {
    return ev.used() + static_cast<std::size_t>(share_of_budget * static_cast<double>(ev.budget()));
}

}  // namespace

SolveResult differential_evolution(const Problem& problem, const SolverConfig& cfg) {
    cfg.validate(problem.dimension());
    Evaluator ev(problem, cfg);
    Rng rng(cfg.seed);
    ev.set_limit(phase_limit(ev, 1.0 - cfg.polish_fraction));
    const Incumbent best = run_de(ev, cfg, rng);
    if (cfg.polish_fraction > 0.0) polish_tail(ev, best, cfg);
    return ev.finish("de");
}

SolveResult simulated_annealing(const Problem& problem, const SolverConfig& cfg) {
    cfg.validate(problem.dimension());
    Evaluator ev(problem, cfg);
    Rng rng(cfg.seed);
    ev.set_limit(phase_limit(ev, 1.0 - cfg.polish_fraction));
    const Incumbent best = run_sa(ev, cfg, rng);
    if (cfg.polish_fraction > 0.0) polish_tail(ev, best, cfg);
    return ev.finish("sa");
}

SolveResult nelder_mead_polish(const Problem& problem, PointView start, const SolverConfig& cfg) {
    if (cfg.max_evals == 0) throw ContractViolation("SolverConfig: zero evaluation budget");
    if (start.size() != problem.dimension()) throw ContractViolation("nelder_mead_polish: start has wrong dimension");
    Evaluator ev(problem, cfg);
    run_nelder_mead(ev, Vector(start.begin(), start.end()), cfg);
    return ev.finish("nm");
}

SolveResult augmented_lagrangian_path(const Problem& problem, InnerSolver inner, const SolverConfig& cfg) {
    cfg.validate(problem.dimension());
    if (!problem.is_path())
        throw ContractViolation("augmented_lagrangian_path: '" + problem.id() + "' is not a path problem");
    const auto& eqs = problem.feasibility().equalities;
    const std::string name = inner == InnerSolver::DifferentialEvolution ? "al+de" : "al+nm";
    Evaluator ev(problem, cfg);
    Rng rng(cfg.seed);

    std::vector<double> lambda(eqs.size(), cfg.al_lambda0);
    double mu = cfg.al_mu0;
    ev.set_augmentation(lambda, mu);
    ev.set_equality_tolerance(cfg.al_tol_eq);

    auto max_residual = [&](const Vector& x) {
        double worst = 0.0;
        for (const auto& eq : eqs) worst = std::max(worst, std::abs(eq.residual(x)));
        return worst;
    };

    bool converged = eqs.empty();
    double residual = 0.0;
    Vector x;
    try {
        // Global phase on the first augmented objective.
        ev.set_limit(phase_limit(ev, cfg.al_inner_fraction));
        Incumbent start;
        if (inner == InnerSolver::DifferentialEvolution) {
            start = run_de(ev, cfg, rng);
        } else {
            start = run_nelder_mead(ev, random_point(problem, rng), cfg);
        }
        ev.clear_limit();
        x = start.set ? start.x : random_point(problem, rng);

        double previous = kInf;
        for (std::size_t outer = 0; outer < std::max<std::size_t>(1, cfg.al_outer); ++outer) {
            ev.set_augmentation(lambda, mu);
            const std::size_t left = std::max<std::size_t>(1, cfg.al_outer - outer);
            ev.set_limit(ev.used() + std::max<std::size_t>(50, ev.remaining() / left));
            x = run_lbfgs(ev, x, 2000, 1e-10);
            ev.clear_limit();
            ev.mark();
            if (eqs.empty()) break;

            residual = max_residual(x);
            if (residual <= cfg.al_tol_eq) {
                converged = true;
                break;
            }
            for (std::size_t j = 0; j < eqs.size(); ++j) lambda[j] += mu * eqs[j].residual(x);
            if (residual > 0.25 * previous) mu *= cfg.al_growth;
            previous = residual;
            if (ev.remaining() == 0) break;
        }
    } catch (const BudgetExhausted&) {
    }

    SolveResult result = ev.finish(name);
    if (!converged)
        throw SolverConvergenceError(name + ": equality residual above tolerance after outer-iteration cap",
                                     std::move(result), residual);
    return result;
}

std::vector<std::string> solver_ids() { return {"de", "sa", "nm", "al+de", "al+nm"}; }

SolveResult solve(const Problem& problem, std::string_view solver_id, const SolverConfig& cfg) {
    if (solver_id == "de") return differential_evolution(problem, cfg);
    if (solver_id == "sa") return simulated_annealing(problem, cfg);
    if (solver_id == "nm") {
        Rng rng(cfg.seed);
        const Vector start = random_point(problem, rng);
        Vector repaired = start;
        for (std::size_t c : problem.integer_coords()) repaired[c] = std::round(repaired[c]);
        return nelder_mead_polish(problem, repaired, cfg);
    }
    if (solver_id == "al+de") return augmented_lagrangian_path(problem, InnerSolver::DifferentialEvolution, cfg);
    if (solver_id == "al+nm") return augmented_lagrangian_path(problem, InnerSolver::NelderMead, cfg);
    std::string ids;
    for (const auto& id : solver_ids()) ids += (ids.empty() ? "" : ", ") + id;
    throw UsageError("unknown solver '" + std::string(solver_id) + "'; available: " + ids);
}

}  // namespace hardbench
