#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core_model.hpp"
#include "corrected_score.hpp"
#include "dag_tools.hpp"
#include "parallel.hpp"
#include "penalty.hpp"
#include "polynomial.hpp"

namespace csbn {

struct EstimatorConfig {
    PenaltyParams penalty;
    double outer_tol = 1e-4;     // |B(t+1) - B(t)|_inf stopping rule
    int max_outer_iters = 100;
    double nr_tol = 1e-8;
    int nr_max_iters = 50;
    double zero_threshold = default_zero_threshold;
    int threads = 1;             // NPS node solves

    void check() const {
        if (!(outer_tol > 0.0) || !(nr_tol > 0.0) || !(zero_threshold > 0.0)) {
            throw argument_error("estimator tolerances must be positive");
        }
        if (max_outer_iters < 1 || nr_max_iters < 1) throw argument_error("iteration caps must be >= 1");
    }
};

struct FitDiagnostics {
    int iterations = 0;
    bool converged = false;
    double final_change = 0.0;
    std::vector<std::size_t> removed_per_iteration;
    int stabilized_solves = 0;   // corrected Gram matrix eigen-shifted
    int degenerate_pvalues = 0;  // nonpositive sandwich variance, p forced to 1
    int nr_fallbacks = 0;        // Newton-Raphson diverged, previous value kept
    int nr_unconverged = 0;      // Newton-Raphson hit its iteration cap (PCD: start value kept)
    int infeasible_roots = 0;    // naive update: no closed-form regime had a root
};

struct FitResult {
    std::string method;
    double lambda = 0.0;
    CoefMatrix b_hat = CoefMatrix(Index{0});
    std::vector<Index> order;
    std::vector<Edge> removed_edges;  // cycle-breaking removals in the final iteration
    FitDiagnostics diagnostics;
};

// ---------------------------------------------------------------------------
// One-dimensional minimization of V_j + P_lambda over beta_ij.

struct SliceMinimum {
    double beta = 0.0;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
};

/// Safeguarded Newton-Raphson from the slice's current value. Steps are
/// halved (up to 20 times) until V_j + P decreases; where the curvature is
/// not positive a unit-curvature gradient step is used instead. The result
/// is compared against beta = 0, where P has its kink.
///
/// V_j tends to a finite limit as |beta| grows, so a descent run that has not
/// settled by max_iters, or that ends past slice.bound(), is usually sliding
/// off to infinity; it then falls back to the starting value like a diverged
/// run (or to 0 if the start is itself out of bounds).
inline SliceMinimum minimize_slice(const CoordinateSlice& slice, const PenaltyParams& pp, double tol, int max_iters) {
    SliceMinimum out;
    const double fallback = std::abs(slice.start()) <= slice.bound() ? slice.start() : 0.0;
    double beta = slice.start();
    double f = slice.penalized(beta, pp);
    const double half_n = 0.5 * slice.n();
    for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
        const auto nt = slice.newton_terms(beta, pp);
        const double step = nt.denominator > 0.0 ? nt.numerator / nt.denominator : nt.numerator / half_n;
        if (!std::isfinite(step) || std::abs(beta - step) > 10.0 * slice.bound()) {
            out.diverged = true;
            break;
        }
        if (std::abs(step) < tol) {
            out.converged = true;
            break;
        }
        double t = 1.0;
        bool moved = false;
        for (int h = 0; h <= 20; ++h, t *= 0.5) {
            const double cand = beta - t * step;
            const double fc = slice.penalized(cand, pp);
            if (fc < f) {
                beta = cand;
                f = fc;
                moved = true;
                break;
            }
        }
        if (!moved || std::abs(t * step) < tol) {
            out.converged = true;
            break;
        }
    }
    if (out.converged && std::abs(beta) > slice.bound()) {
        out.converged = false;
        out.diverged = true;
    }
    if (!out.converged) {
        beta = fallback;
        f = slice.penalized(beta, pp);
    }
    const double f0 = slice.penalized(0.0, pp);
    if (f0 <= f) {
        beta = 0.0;
        f = f0;
    }
    out.beta = beta;
    out.objective = f;
    return out;
}

// ---------------------------------------------------------------------------
// Pairwise coordinate descent state.

/// Current B plus one ScoreContext per node. For the naive method the
/// contexts carry a zero Sigma_u.
struct PcdState {
    MatrixXd b;
    std::vector<ScoreContext> contexts;
    EstimatorConfig cfg;
    FitDiagnostics* diagnostics = nullptr;

    PcdState(const DataSet& ds, const ErrorSpec& es, MatrixXd b0, EstimatorConfig c)
        : b(std::move(b0)), cfg(c) {
        contexts.reserve(static_cast<std::size_t>(ds.nodes()));
        for (Index j = 0; j < ds.nodes(); ++j) contexts.emplace_back(ds, es, j);
    }

    Index nodes() const noexcept { return b.rows(); }
};

struct PairUpdate {
    double beta_ij = 0.0;
    double beta_ji = 0.0;
    double candidate_ij = 0.0;  // minimizer for model j alone
    double candidate_ji = 0.0;  // minimizer for model i alone
    double s1 = 0.0;            // objective with (candidate_ij, 0)
    double s2 = 0.0;            // objective with (0, candidate_ji)
};

namespace detail {

inline double penalty_excluding(const MatrixXd& b, Index col, Index skip, const PenaltyParams& pp) {
    double s = 0.0;
    for (Index k = 0; k < b.rows(); ++k) {
        if (k != col && k != skip) s += scad(std::abs(b(k, col)), pp);
    }
    return s;
}

inline void apply_pair(PcdState& st, Index i, Index j, PairUpdate& u) {
    const double thr = st.cfg.zero_threshold;
    if (u.s1 <= u.s2) {
        u.beta_ij = std::abs(u.candidate_ij) < thr ? 0.0 : u.candidate_ij;
        u.beta_ji = 0.0;
    } else {
        u.beta_ij = 0.0;
        u.beta_ji = std::abs(u.candidate_ji) < thr ? 0.0 : u.candidate_ji;
    }
    st.b(i, j) = u.beta_ij;
    st.b(j, i) = u.beta_ji;
}

} // namespace detail

/// Updates (beta_ij, beta_ji) in place: each is minimized over its own
/// model's V + penalty by Newton-Raphson, then the pair keeps whichever of
/// (beta*_ij, 0) and (0, beta*_ji) gives the smaller summed objective.
inline PairUpdate pcd_pair_update_corrected(PcdState& st, Index i, Index j) {
    if (i == j) throw argument_error("pair update needs distinct nodes");
    const PenaltyParams& pp = st.cfg.penalty;
    const ScoreContext& cj = st.contexts[static_cast<std::size_t>(j)];
    const ScoreContext& ci = st.contexts[static_cast<std::size_t>(i)];

    const CoordinateSlice slice_j(cj, column_without_diagonal(st.b, j), i);
    const CoordinateSlice slice_i(ci, column_without_diagonal(st.b, i), j);
    const SliceMinimum mj = minimize_slice(slice_j, pp, st.cfg.nr_tol, st.cfg.nr_max_iters);
    const SliceMinimum mi = minimize_slice(slice_i, pp, st.cfg.nr_tol, st.cfg.nr_max_iters);
    if (st.diagnostics) {
        st.diagnostics->nr_fallbacks += mj.diverged + mi.diverged;
        st.diagnostics->nr_unconverged += (!mj.converged && !mj.diverged) + (!mi.converged && !mi.diverged);
    }

    PairUpdate u;
    u.candidate_ij = mj.beta;
    u.candidate_ji = mi.beta;
    const double rest_j = detail::penalty_excluding(st.b, j, i, pp);
    const double rest_i = detail::penalty_excluding(st.b, i, j, pp);
    u.s1 = (slice_i.value(0.0) + rest_i) + (slice_j.value(mj.beta) + rest_j + scad(std::abs(mj.beta), pp));
    u.s2 = (slice_i.value(mi.beta) + rest_i + scad(std::abs(mi.beta), pp)) + (slice_j.value(0.0) + rest_j);
    detail::apply_pair(st, i, j, u);
    return u;
}

// ---------------------------------------------------------------------------
// Naive (log-likelihood) coordinate problem with closed-form roots.

/// f(beta) = (n/2) log RSS(beta) + P_lambda(|beta|) for beta_ij with the
/// partial residual r = W_j - sum_{k != i} W_k beta_kj held fixed, so
/// RSS(beta) = Srr - 2 beta Sxr + beta^2 Sxx with x = W_i.
struct NaiveSlice {
    double n = 0.0;
    double sxx = 0.0;
    double sxr = 0.0;
    double srr = 0.0;

    NaiveSlice() = default;

    NaiveSlice(const ScoreContext& ctx, const VectorXd& bj, Index parent) : n(static_cast<double>(ctx.n())) {
        const Index pos = position_in_column(parent, ctx.node());
        VectorXd others = bj;
        others(pos) = 0.0;
        const VectorXd r = ctx.response() - ctx.covariates() * others;
        const auto x = ctx.covariates().col(pos);
        sxx = x.squaredNorm();
        sxr = x.dot(r);
        srr = r.squaredNorm();
    }

    double rss(double beta) const { return srr - 2.0 * beta * sxr + beta * beta * sxx; }

    double objective(double beta, const PenaltyParams& pp) const {
        const double q = rss(beta);
        if (!(q > 0.0)) return -std::numeric_limits<double>::infinity();
        return 0.5 * n * std::log(q) + scad(std::abs(beta), pp);
    }

    // n (Sxr - beta Sxx) - P'(|beta|) sgn(beta) RSS(beta); zero at a stationary point.
    double stationarity(double beta, const PenaltyParams& pp) const {
        return n * (sxr - beta * sxx) - scad_d1(beta, pp) * rss(beta);
    }

    // Magnitude of the terms in stationarity(), for relative residuals.
    double stationarity_scale(double beta, const PenaltyParams& pp) const {
        return n * (std::abs(sxr) + std::abs(beta * sxx)) + std::abs(scad_d1(beta, pp)) * std::abs(rss(beta));
    }
};

enum class NaiveRegime { zero, linear, quadratic, cubic };

struct NaiveCandidate {
    double beta = 0.0;
    double objective = 0.0;
    NaiveRegime regime = NaiveRegime::zero;
};

/// Candidate quadratic-regime coefficients (|beta| <= lambda) for an
/// assumed sign s, from the stationarity equation.
struct PolyCoefs {
    double c3 = 0.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;
};

inline PolyCoefs naive_quadratic_coefs(const NaiveSlice& sl, double s, const PenaltyParams& pp) {
    const double l = pp.lambda;
    PolyCoefs c;
    c.c2 = s * l * sl.sxx;
    c.c1 = sl.n * sl.sxx - 2.0 * s * l * sl.sxr;
    c.c0 = s * l * sl.srr - sl.n * sl.sxr;
    return c;
}

/// Cubic-regime coefficients (lambda < |beta| <= a lambda) for sign s.
inline PolyCoefs naive_cubic_coefs(const NaiveSlice& sl, double s, const PenaltyParams& pp) {
    const double l = pp.lambda;
    const double a = pp.a;
    PolyCoefs c;
    c.c3 = sl.sxx / (a - 1.0);
    c.c2 = -s * a * l * c.c3 - 2.0 / (a - 1.0) * sl.sxr;
    c.c1 = -sl.n * (a - 1.0) * c.c3 - a * l * (a * l * c.c3 + s * c.c2) + sl.srr / (a - 1.0);
    c.c0 = -(a - 1.0) / 2.0 * sl.n * (s * a * l * c.c3 + c.c2) - s * a * l / (a - 1.0) * sl.srr;
    return c;
}

/// Every feasible closed-form candidate: beta = 0, the unpenalized root if
/// it lands in |beta| >= a lambda, quadratic roots in 0 < |beta| <= lambda
/// whose sign matches the assumed sign, and cubic roots in
/// lambda < |beta| <= a lambda with matching sign.
inline std::vector<NaiveCandidate> naive_candidates(const NaiveSlice& sl, const PenaltyParams& pp) {
    std::vector<NaiveCandidate> out;
    out.push_back({0.0, sl.objective(0.0, pp), NaiveRegime::zero});
    const double l = pp.lambda;
    const double al = pp.a * l;
    if (sl.sxx > 0.0) {
        const double b = sl.sxr / sl.sxx;
        if (std::abs(b) >= al) out.push_back({b, sl.objective(b, pp), NaiveRegime::linear});
    }
    if (l > 0.0) {
        for (double s : {1.0, -1.0}) {
            const PolyCoefs q = naive_quadratic_coefs(sl, s, pp);
            for (double r : real_quadratic_roots(q.c2, q.c1, q.c0)) {
                if (r * s > 0.0 && std::abs(r) <= l) out.push_back({r, sl.objective(r, pp), NaiveRegime::quadratic});
            }
            const PolyCoefs c = naive_cubic_coefs(sl, s, pp);
            for (double r : real_cubic_roots(c.c3, c.c2, c.c1, c.c0)) {
                if (r * s > 0.0 && std::abs(r) > l && std::abs(r) <= al) {
                    out.push_back({r, sl.objective(r, pp), NaiveRegime::cubic});
                }
            }
        }
    }
    return out;
}

inline NaiveCandidate naive_minimize(const NaiveSlice& sl, const PenaltyParams& pp) {
    const auto cands = naive_candidates(sl, pp);
    NaiveCandidate best = cands.front();
    for (const auto& c : cands) {
        if (c.objective < best.objective) best = c;
    }
    return best;
}

inline PairUpdate pcd_pair_update_naive(PcdState& st, Index i, Index j) {
    if (i == j) throw argument_error("pair update needs distinct nodes");
    const PenaltyParams& pp = st.cfg.penalty;
    const ScoreContext& cj = st.contexts[static_cast<std::size_t>(j)];
    const ScoreContext& ci = st.contexts[static_cast<std::size_t>(i)];
    const NaiveSlice slice_j(cj, column_without_diagonal(st.b, j), i);
    const NaiveSlice slice_i(ci, column_without_diagonal(st.b, i), j);
    if (!(slice_j.srr > 0.0) || !(slice_i.srr > 0.0)) {
        throw numerical_error("residual sum of squares is zero", static_cast<int>(!(slice_j.srr > 0.0) ? j : i));
    }
    const auto cand_j = naive_candidates(slice_j, pp);
    const auto cand_i = naive_candidates(slice_i, pp);
    if (st.diagnostics) st.diagnostics->infeasible_roots += (cand_j.size() == 1) + (cand_i.size() == 1);
    auto best_of = [](const std::vector<NaiveCandidate>& cs) {
        NaiveCandidate b = cs.front();
        for (const auto& c : cs) {
            if (c.objective < b.objective) b = c;
        }
        return b;
    };
    const NaiveCandidate mj = best_of(cand_j);
    const NaiveCandidate mi = best_of(cand_i);

    PairUpdate u;
    u.candidate_ij = mj.beta;
    u.candidate_ji = mi.beta;
    const double rest_j = detail::penalty_excluding(st.b, j, i, pp);
    const double rest_i = detail::penalty_excluding(st.b, i, j, pp);
    u.s1 = (slice_i.objective(0.0, pp) + rest_i) + (mj.objective + rest_j);
    u.s2 = (mi.objective + rest_i) + (slice_j.objective(0.0, pp) + rest_j);
    detail::apply_pair(st, i, j, u);
    return u;
}

// ---------------------------------------------------------------------------
// Node-wise penalized score equation.

struct NodeSolve {
    VectorXd bj;
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
    bool stabilized = false;
};

namespace detail {

// A = n^{-1} sum W^T W - Sigma_u, eigen-shifted to a 1e-10 relative floor.
inline MatrixXd stabilized_score_jacobian(const ScoreContext& ctx, bool& stabilized) {
    MatrixXd a = ctx.gram() / static_cast<double>(ctx.n()) - ctx.sigma();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(a, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double floor = 1e-10 * ev.cwiseAbs().maxCoeff();
    stabilized = false;
    if (ev.minCoeff() < floor) {
        a.diagonal().array() += floor - ev.minCoeff();
        stabilized = true;
    }
    return a;
}

} // namespace detail

/// n^{-1} sum_{O_j} Psi(B_j) - Ptilde_lambda(B_j).
inline VectorXd penalized_score(const ScoreContext& ctx, const VectorXd& bj, const PenaltyParams& pp) {
    const double n = static_cast<double>(ctx.n());
    VectorXd g = ctx.cross() / n - (ctx.gram() / n - ctx.sigma()) * bj;
    for (Index k = 0; k < bj.size(); ++k) g(k) -= scad_d1(bj(k), pp);
    return g;
}

/// Newton-Raphson on the penalized score equation for one node, with the
/// penalty Jacobian replaced by the local quadratic approximation
/// diag(I(beta != 0) |P'(|beta|)| / |beta|). Coefficients that fall below
/// the zero threshold are clamped to 0 for the rest of the solve, and so are
/// the ones already 0 in `start`: the approximation puts no penalty on a
/// zero coefficient, so letting it move would refit it unpenalized.
inline NodeSolve solve_penalized_score(const ScoreContext& ctx, const VectorXd& start, const EstimatorConfig& cfg) {
    const PenaltyParams& pp = cfg.penalty;
    const double n = static_cast<double>(ctx.n());
    const Index m = ctx.dim();
    NodeSolve out;
    const MatrixXd a = detail::stabilized_score_jacobian(ctx, out.stabilized);
    const VectorXd c = ctx.cross() / n;

    VectorXd beta = start;
    std::vector<bool> active(static_cast<std::size_t>(m));
    for (Index k = 0; k < m; ++k) active[static_cast<std::size_t>(k)] = beta(k) != 0.0;
    auto residual = [&](const VectorXd& b) {
        VectorXd g = c - a * b;
        for (Index k = 0; k < m; ++k) g(k) = active[static_cast<std::size_t>(k)] ? g(k) - scad_d1(b(k), pp) : 0.0;
        return g;
    };

    for (out.iterations = 0; out.iterations < cfg.nr_max_iters; ++out.iterations) {
        std::vector<Index> idx;
        for (Index k = 0; k < m; ++k) {
            if (active[static_cast<std::size_t>(k)]) idx.push_back(k);
        }
        if (idx.empty()) {
            out.converged = true;
            break;
        }
        const Index s = static_cast<Index>(idx.size());
        const VectorXd g = residual(beta);
        MatrixXd jac(s, s);
        VectorXd rhs(s);
        for (Index u = 0; u < s; ++u) {
            rhs(u) = g(idx[u]);
            for (Index v = 0; v < s; ++v) jac(u, v) = a(idx[u], idx[v]);
            const double bk = beta(idx[u]);
            if (bk != 0.0) jac(u, u) += std::abs(scad_d1(bk, pp)) / std::abs(bk);
        }
        const VectorXd step_a = jac.ldlt().solve(rhs);
        if (!step_a.allFinite() || step_a.cwiseAbs().maxCoeff() > 1e6) {
            out.diverged = true;
            out.bj = start;
            return out;
        }
        VectorXd step = VectorXd::Zero(m);
        for (Index u = 0; u < s; ++u) step(idx[u]) = step_a(u);

        const double g0 = g.norm();
        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h <= 20; ++h, t *= 0.5) {
            if (residual(beta + t * step).norm() < g0) {
                accepted = true;
                break;
            }
        }
        // No halving reduces the residual: take the full LQA step, which
        // still decreases the penalized quadratic objective.
        if (!accepted) t = 1.0;
        beta += t * step;
        for (Index k : idx) {
            if (std::abs(beta(k)) < cfg.zero_threshold) {
                beta(k) = 0.0;
                active[static_cast<std::size_t>(k)] = false;
            }
        }
        if (t * step.cwiseAbs().maxCoeff() < cfg.nr_tol) {
            out.converged = true;
            ++out.iterations;
            break;
        }
    }
    out.bj = beta;
    return out;
}

// ---------------------------------------------------------------------------
// Outer loop shared by the three estimators.

namespace detail {

inline void zero_small(MatrixXd& b, double thr) {
    for (Index i = 0; i < b.rows(); ++i) {
        for (Index j = 0; j < b.cols(); ++j) {
            if (std::abs(b(i, j)) <= thr) b(i, j) = 0.0;
        }
    }
}

// Step 3: sandwich p-values for the parents each node has in g.
inline WeaknessMap edge_weakness(const std::vector<ScoreContext>& ctx, const DirectedGraph& g, const MatrixXd& b,
                                 FitDiagnostics& diag) {
    WeaknessMap wm;
    for (Index j = 0; j < g.nodes(); ++j) {
        const auto parents = g.parents(j);
        if (parents.empty()) continue;
        const PValueResult pv = sandwich_pvalues(ctx[static_cast<std::size_t>(j)], parents);
        diag.stabilized_solves += pv.stabilized;
        for (std::size_t a = 0; a < parents.size(); ++a) {
            diag.degenerate_pvalues += pv.degenerate[a];
            wm[Edge{parents[a], j}] = EdgeWeakness{pv.pvalue(static_cast<Index>(a)), std::abs(b(parents[a], j))};
        }
    }
    return wm;
}

// Step 1: unpenalized (corrected) least squares per node on every other node.
inline MatrixXd initial_estimate(const std::vector<ScoreContext>& ctx, FitDiagnostics& diag) {
    const Index p = static_cast<Index>(ctx.size());
    MatrixXd b = MatrixXd::Zero(p, p);
    for (Index j = 0; j < p; ++j) {
        std::vector<Index> all;
        for (Index k = 0; k < p; ++k) {
            if (k != j) all.push_back(k);
        }
        const auto& cj = ctx[static_cast<std::size_t>(j)];
        const CorrectedLsResult fit = corrected_ls(cj, all);
        diag.stabilized_solves += fit.stabilized;
        set_column_without_diagonal(b, j, embed_support(cj, all, fit.coef));
    }
    return b;
}

// Steps 2-5. `sweep` performs Step 2 on the matrix in place.
template <class Sweep>
FitResult outer_loop(std::string method, MatrixXd b, const std::vector<ScoreContext>& pvalue_ctx,
                     const EstimatorConfig& cfg, FitDiagnostics diag, Sweep&& sweep) {
    FitResult out;
    out.method = std::move(method);
    out.lambda = cfg.penalty.lambda;
    TopoResult topo;
    for (int t = 1; t <= cfg.max_outer_iters; ++t) {
        MatrixXd next = b;
        try {
            sweep(next, diag);
            zero_small(next, cfg.zero_threshold);
            const DirectedGraph g = graph_from_coefs(next, cfg.zero_threshold);
            const WeaknessMap wm = edge_weakness(pvalue_ctx, g, next, diag);
            topo = kahn_eliminate(g, wm);
        } catch (const numerical_error& e) {
            throw numerical_error(e.message() + " at outer iteration " + std::to_string(t), e.node());
        }
        for (const Edge& e : topo.removed_edges) next(e.from, e.to) = 0.0;
        diag.removed_per_iteration.push_back(topo.removed_edges.size());
        const double change = (next - b).cwiseAbs().maxCoeff();
        b = std::move(next);
        diag.iterations = t;
        diag.final_change = change;
        if (change <= cfg.outer_tol) {
            diag.converged = true;
            break;
        }
    }
    if (!is_dag(graph_from_coefs(b, cfg.zero_threshold))) {
        throw std::logic_error("estimator produced a cyclic graph");
    }
    out.b_hat = CoefMatrix(std::move(b));
    out.order = topo.order;
    out.removed_edges = topo.removed_edges;
    out.diagnostics = std::move(diag);
    return out;
}

inline std::vector<ScoreContext> make_contexts(const DataSet& ds, const ErrorSpec& es) {
    std::vector<ScoreContext> ctx;
    ctx.reserve(static_cast<std::size_t>(ds.nodes()));
    for (Index j = 0; j < ds.nodes(); ++j) ctx.emplace_back(ds, es, j);
    return ctx;
}

inline void check_inputs(const DataSet& ds, const ErrorSpec& es, const EstimatorConfig& cfg) {
    require_valid(ds);
    cfg.check();
    if (es.size() != ds.nodes()) throw argument_error("Sigma_u dimension does not match the number of nodes");
}

template <class PairFn>
void pair_sweep(PcdState& st, PairFn&& update) {
    const Index p = st.nodes();
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) update(st, i, j);
    }
}

} // namespace detail

/// Corrected-score objective minimized by pairwise coordinate descent,
/// with Kahn elimination after every sweep.
inline FitResult fit_pcd_corrected(const DataSet& ds, const ErrorSpec& es, const EstimatorConfig& cfg) {
    detail::check_inputs(ds, es, cfg);
    FitDiagnostics diag;
    const auto ctx = detail::make_contexts(ds, es);
    MatrixXd b0 = detail::initial_estimate(ctx, diag);
    PcdState st(ds, es, b0, cfg);
    return detail::outer_loop("pcd-corrected", std::move(b0), ctx, cfg, std::move(diag),
                              [&](MatrixXd& b, FitDiagnostics& d) {
                                  st.b = std::move(b);
                                  st.diagnostics = &d;
                                  detail::pair_sweep(st, pcd_pair_update_corrected);
                                  b = std::move(st.b);
                              });
}

/// Naive penalized log-likelihood (measurement error ignored) by pairwise
/// coordinate descent with closed-form coordinate minimizers.
inline FitResult fit_pcd_naive(const DataSet& ds, const EstimatorConfig& cfg) {
    const ErrorSpec none = ErrorSpec::zero(ds.nodes());
    detail::check_inputs(ds, none, cfg);
    FitDiagnostics diag;
    const auto ctx = detail::make_contexts(ds, none);
    MatrixXd b0 = detail::initial_estimate(ctx, diag);
    PcdState st(ds, none, b0, cfg);
    return detail::outer_loop("pcd-naive", std::move(b0), ctx, cfg, std::move(diag),
                              [&](MatrixXd& b, FitDiagnostics& d) {
                                  st.b = std::move(b);
                                  st.diagnostics = &d;
                                  detail::pair_sweep(st, pcd_pair_update_naive);
                                  b = std::move(st.b);
                              });
}

/// Node-wise parent selection: each column solves the penalized corrected
/// score equation, starting from the previous iterate.
inline FitResult fit_nps(const DataSet& ds, const ErrorSpec& es, const EstimatorConfig& cfg) {
    detail::check_inputs(ds, es, cfg);
    FitDiagnostics diag;
    const auto ctx = detail::make_contexts(ds, es);
    MatrixXd b0 = detail::initial_estimate(ctx, diag);
    return detail::outer_loop("nps", std::move(b0), ctx, cfg, std::move(diag), [&](MatrixXd& b, FitDiagnostics& d) {
        const Index p = b.rows();
        std::vector<NodeSolve> solves(static_cast<std::size_t>(p));
        parallel_for(static_cast<std::size_t>(p), cfg.threads, [&](std::size_t j) {
            solves[j] = solve_penalized_score(ctx[j], column_without_diagonal(b, static_cast<Index>(j)), cfg);
        });
        for (Index j = 0; j < p; ++j) {
            const NodeSolve& s = solves[static_cast<std::size_t>(j)];
            d.nr_fallbacks += s.diverged;
            d.nr_unconverged += (!s.converged && !s.diverged);
            d.stabilized_solves += s.stabilized;
            set_column_without_diagonal(b, j, s.bj);
        }
    });
}

enum class Method { pcd_corrected, pcd_naive, nps };

inline std::string to_string(Method m) {
    switch (m) {
    case Method::pcd_corrected: return "pcd-corrected";
    case Method::pcd_naive: return "pcd-naive";
    case Method::nps: return "nps";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "pcd-corrected") return Method::pcd_corrected;
    if (s == "pcd-naive") return Method::pcd_naive;
    if (s == "nps") return Method::nps;
    throw argument_error("unknown method '" + s + "'");
}

inline bool uses_error_spec(Method m) noexcept { return m != Method::pcd_naive; }

/// Dispatches to one of the three estimators; Sigma_u is ignored by the naive one.
inline FitResult fit(Method m, const DataSet& ds, const ErrorSpec& es, const EstimatorConfig& cfg) {
    switch (m) {
    case Method::pcd_corrected: return fit_pcd_corrected(ds, es, cfg);
    case Method::pcd_naive: return fit_pcd_naive(ds, cfg);
    case Method::nps: return fit_nps(ds, es, cfg);
    }
    throw argument_error("unknown method");
}

} // namespace csbn
