#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "core_model.hpp"
#include "corrected_score.hpp"
#include "dag_tools.hpp"
#include "estimators.hpp"
#include "parallel.hpp"

namespace csbn {

class LambdaGrid {
public:
    explicit LambdaGrid(std::vector<double> values) : values_(std::move(values)) {
        if (values_.size() < 2) throw argument_error("lambda grid needs at least 2 values");
        for (std::size_t k = 0; k < values_.size(); ++k) {
            if (!(values_[k] > 0.0) || !std::isfinite(values_[k])) {
                throw argument_error("lambda grid values must be positive and finite");
            }
            if (k > 0 && !(values_[k] < values_[k - 1])) {
                throw argument_error("lambda grid must be strictly decreasing");
            }
        }
    }

    /// Sorts descending and drops duplicates before validating.
    static LambdaGrid from_unsorted(std::vector<double> values) {
        std::sort(values.begin(), values.end(), std::greater<>());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        return LambdaGrid(std::move(values));
    }

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

private:
    std::vector<double> values_;
};

struct RcpParams {
    double alpha = 0.1;

    void check() const {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw argument_error("RCP alpha must lie in (0, 1]");
    }
};

/// max over i != j of |n_{-j}^{-1} sum_{O_j} W[l,i] W[l,j]|.
inline double lambda_max(const DataSet& ds) {
    double best = 0.0;
    for (Index j = 0; j < ds.nodes(); ++j) {
        const auto rows = observational_rows(ds, j);
        if (rows.empty()) continue;
        for (Index i = 0; i < ds.nodes(); ++i) {
            if (i == j) continue;
            double s = 0.0;
            for (Index r : rows) s += ds.w()(r, i) * ds.w()(r, j);
            best = std::max(best, std::abs(s) / static_cast<double>(rows.size()));
        }
    }
    return best;
}

/// Smallest lambda at which B = 0 satisfies each method's own first-order
/// condition: the SCAD derivative at 0+ is lambda, so this is the largest
/// gradient magnitude of the unpenalized loss at B = 0.
///  - nps: the score n^{-1} sum Psi at 0, i.e. lambda_max(ds) above.
///  - pcd-corrected: |dV_j / d beta_ij| at B_j = 0.
///  - pcd-naive: |d/d beta (n/2) log RSS| = n |Sxr| / Srr at B_j = 0.
/// The two PCD losses are not on the cross-moment scale, so one grid for all
/// three would leave the PCD methods without a useful range.
inline double lambda_max(Method m, const DataSet& ds, const ErrorSpec& es) {
    if (m == Method::nps) return lambda_max(ds);
    const ErrorSpec none = ErrorSpec::zero(ds.nodes());
    double best = 0.0;
    for (Index j = 0; j < ds.nodes(); ++j) {
        const ScoreContext ctx(ds, m == Method::pcd_corrected ? es : none, j);
        if (ctx.n() == 0) continue;
        const VectorXd zero = VectorXd::Zero(ctx.dim());
        const double srr = ctx.response().squaredNorm();
        for (Index i = 0; i < ds.nodes(); ++i) {
            if (i == j) continue;
            double g = 0.0;
            if (m == Method::pcd_corrected) {
                g = CoordinateSlice(ctx, zero, i).derivatives(0.0).d1;
            } else if (srr > 0.0) {
                g = static_cast<double>(ctx.n()) * ctx.cross()(position_in_column(i, j)) / srr;
            }
            if (std::isfinite(g)) best = std::max(best, std::abs(g));
        }
    }
    return best;
}

/// m log-spaced values from top down to ratio * top.
inline LambdaGrid log_lambda_grid(double top, int m = 20, double ratio = 0.01) {
    if (m < 2) throw argument_error("lambda grid needs at least 2 values");
    if (!(ratio > 0.0 && ratio < 1.0)) throw argument_error("lambda grid ratio must lie in (0, 1)");
    if (!(top > 0.0) || !std::isfinite(top)) throw data_error("all cross moments are zero; cannot build a lambda grid");
    std::vector<double> v(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        v[static_cast<std::size_t>(k)] = top * std::pow(ratio, static_cast<double>(k) / (m - 1));
    }
    return LambdaGrid(std::move(v));
}

inline LambdaGrid default_lambda_grid(const DataSet& ds, int m = 20, double ratio = 0.01) {
    return log_lambda_grid(lambda_max(ds), m, ratio);
}

inline LambdaGrid default_lambda_grid(Method method, const DataSet& ds, const ErrorSpec& es, int m = 20,
                                      double ratio = 0.01) {
    return log_lambda_grid(lambda_max(method, ds, es), m, ratio);
}

// ---------------------------------------------------------------------------
// SIC

struct SicTerm {
    double fit = 0.0;      // V_hat_j
    double penalty = 0.0;  // e_j log(n_{-j}) / n_{-j}
};

inline std::vector<SicTerm> sic_terms(const std::vector<ScoreContext>& ctx, const DirectedGraph& g) {
    if (static_cast<Index>(ctx.size()) != g.nodes()) throw argument_error("graph size does not match the data");
    std::vector<SicTerm> out(ctx.size());
    for (std::size_t j = 0; j < ctx.size(); ++j) {
        const ScoreContext& cj = ctx[j];
        const auto parents = g.parents(static_cast<Index>(j));
        try {
            const CorrectedLsResult ls = corrected_ls(cj, parents);
            out[j].fit = v_quadratic(cj, embed_support(cj, parents, ls.coef));
        } catch (const numerical_error& e) {
            throw numerical_error(std::string("SIC: ") + e.what(), static_cast<int>(j));
        }
        const double n = static_cast<double>(cj.n());
        out[j].penalty = static_cast<double>(parents.size()) * std::log(n) / n;
    }
    return out;
}

inline double sic(const std::vector<ScoreContext>& ctx, const DirectedGraph& g) {
    double total = 0.0;
    for (const SicTerm& t : sic_terms(ctx, g)) total += t.fit + t.penalty;
    return total;
}

/// sum_j V_hat_j + e_j log(n_{-j}) / n_{-j}, with V_hat_j evaluated at the
/// unpenalized corrected least-squares fit on the parents of j in g.
inline double sic(const DataSet& ds, const ErrorSpec& es, const DirectedGraph& g) {
    require_valid(ds);
    return sic(detail::make_contexts(ds, es), g);
}

// ---------------------------------------------------------------------------
// Grid sweeps

struct SweepRow {
    double lambda = 0.0;
    std::size_t edges = 0;
    double criterion = 0.0;  // SIC, or PE for RCP sweeps
    double rcp = 0.0;        // RCP_{k-1,k}; 0 for the first point
    bool selected = false;
    bool failed = false;
    std::string error;
};

struct TuningResult {
    std::string criterion;  // "sic" or "rcp"
    double lambda = 0.0;
    FitResult fit;
    std::vector<SweepRow> rows;
    bool uninformative = false;  // RCP: every change was zero, last lambda taken
};

using Fitter = std::function<FitResult(const EstimatorConfig&)>;

namespace detail {

struct GridFit {
    std::optional<FitResult> fit;
    std::string error;
};

inline std::vector<GridFit> fit_grid(const LambdaGrid& grid, const Fitter& fitter, const EstimatorConfig& base,
                                     int threads) {
    std::vector<GridFit> fits(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t k) {
        EstimatorConfig cfg = base;
        cfg.penalty = PenaltyParams(grid[k], base.penalty.a);
        try {
            fits[k].fit = fitter(cfg);
        } catch (const numerical_error& e) {
            fits[k].error = e.what();
        }
    });
    return fits;
}

} // namespace detail

/// Fits once per grid point and keeps the lambda with the smallest SIC;
/// ties go to the larger lambda. Points whose fit or SIC fails are skipped.
inline TuningResult select_lambda_sic(const DataSet& ds, const ErrorSpec& es, const LambdaGrid& grid,
                                      const Fitter& fitter, const EstimatorConfig& base, int threads = 1) {
    require_valid(ds);
    const auto ctx = detail::make_contexts(ds, es);
    auto fits = detail::fit_grid(grid, fitter, base, threads);
    TuningResult out;
    out.criterion = "sic";
    out.rows.resize(grid.size());
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        SweepRow& row = out.rows[k];
        row.lambda = grid[k];
        if (!fits[k].fit) {
            row.failed = true;
            row.error = fits[k].error;
            continue;
        }
        const DirectedGraph g = graph_from_coefs(fits[k].fit->b_hat, base.zero_threshold);
        row.edges = g.edge_count();
        try {
            row.criterion = sic(ctx, g);
        } catch (const numerical_error& e) {
            row.failed = true;
            row.error = e.what();
            continue;
        }
        // strict < keeps the earlier (larger) lambda on ties
        if (!best || row.criterion < out.rows[*best].criterion) best = k;
    }
    if (!best) throw numerical_error("SIC selection: every grid point failed");
    out.rows[*best].selected = true;
    out.lambda = grid[*best];
    out.fit = std::move(*fits[*best].fit);
    return out;
}

inline TuningResult select_lambda_sic(const DataSet& ds, const ErrorSpec& es, const LambdaGrid& grid, Method m,
                                      const EstimatorConfig& base, int threads = 1) {
    return select_lambda_sic(ds, es, grid, [&](const EstimatorConfig& cfg) { return fit(m, ds, es, cfg); }, base,
                             threads);
}

/// PE = sum_j sum_{O_j} (W[l,j] - W[l,-j] B_j)^2.
inline double prediction_error(const DataSet& ds, const CoefMatrix& b) {
    if (b.size() != ds.nodes()) throw argument_error("coefficient matrix size does not match the data");
    double pe = 0.0;
    for (Index j = 0; j < ds.nodes(); ++j) {
        for (Index r : observational_rows(ds, j)) {
            double pred = 0.0;
            for (Index i = 0; i < ds.nodes(); ++i) {
                if (i != j) pred += ds.w()(r, i) * b(i, j);
            }
            const double res = ds.w()(r, j) - pred;
            pe += res * res;
        }
    }
    return pe;
}

struct RcpChoice {
    std::size_t index = 0;          // K, 0-based
    std::vector<double> rcp;        // rcp[k] = RCP_{k-1,k}, rcp[0] = 0
    bool uninformative = false;
};

/// RCP_{k-1,k} = (PE_{k-1} - PE_k) / (e_k - e_{k-1}), or 0 when the edge count
/// does not grow; K is the largest k with RCP_{k-1,k} >= alpha * max RCP.
inline RcpChoice rcp_select(const std::vector<double>& pe, const std::vector<std::size_t>& edges,
                            const RcpParams& params = {}) {
    params.check();
    if (pe.size() != edges.size() || pe.size() < 2) throw argument_error("RCP needs matching sequences of length >= 2");
    RcpChoice out;
    out.rcp.assign(pe.size(), 0.0);
    double mx = 0.0;
    for (std::size_t k = 1; k < pe.size(); ++k) {
        const double de = static_cast<double>(edges[k]) - static_cast<double>(edges[k - 1]);
        out.rcp[k] = de > 0.0 ? (pe[k - 1] - pe[k]) / de : 0.0;
        mx = std::max(mx, out.rcp[k]);
    }
    if (!(mx > 0.0)) {
        out.index = pe.size() - 1;
        out.uninformative = true;
        return out;
    }
    for (std::size_t k = pe.size() - 1; k >= 1; --k) {
        if (out.rcp[k] >= params.alpha * mx) {
            out.index = k;
            break;
        }
    }
    return out;
}

/// One fit per grid point, lambda chosen by the RCP rule. Failed grid
/// points are dropped and the rule runs on the remaining sequence.
inline TuningResult select_lambda_rcp(const DataSet& ds, const LambdaGrid& grid, const RcpParams& params,
                                      const Fitter& fitter, const EstimatorConfig& base, int threads = 1) {
    params.check();
    require_valid(ds);
    auto fits = detail::fit_grid(grid, fitter, base, threads);
    TuningResult out;
    out.criterion = "rcp";
    out.rows.resize(grid.size());
    std::vector<std::size_t> ok;
    std::vector<double> pe;
    std::vector<std::size_t> edges;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        SweepRow& row = out.rows[k];
        row.lambda = grid[k];
        if (!fits[k].fit) {
            row.failed = true;
            row.error = fits[k].error;
            continue;
        }
        row.edges = graph_from_coefs(fits[k].fit->b_hat, base.zero_threshold).edge_count();
        row.criterion = prediction_error(ds, fits[k].fit->b_hat);
        ok.push_back(k);
        pe.push_back(row.criterion);
        edges.push_back(row.edges);
    }
    if (ok.empty()) throw numerical_error("RCP selection: every grid point failed");
    std::size_t chosen = ok.front();
    if (ok.size() == 1) {
        out.uninformative = true;
    } else {
        const RcpChoice c = rcp_select(pe, edges, params);
        for (std::size_t a = 0; a < ok.size(); ++a) out.rows[ok[a]].rcp = c.rcp[a];
        chosen = ok[c.index];
        out.uninformative = c.uninformative;
    }
    out.rows[chosen].selected = true;
    out.lambda = grid[chosen];
    out.fit = std::move(*fits[chosen].fit);
    return out;
}

/// RCP over naive fits, the usual pairing.
inline TuningResult select_lambda_rcp(const DataSet& ds, const LambdaGrid& grid, const RcpParams& params,
                                      const EstimatorConfig& base, int threads = 1) {
    return select_lambda_rcp(ds, grid, params, [&](const EstimatorConfig& cfg) { return fit_pcd_naive(ds, cfg); },
                             base, threads);
}

enum class Selector { automatic, sic, rcp };

inline Selector parse_selector(const std::string& s) {
    if (s == "auto") return Selector::automatic;
    if (s == "sic") return Selector::sic;
    if (s == "rcp") return Selector::rcp;
    throw argument_error("unknown selector '" + s + "' (auto, sic, rcp)");
}

struct AutoLambda {
    int grid_size = 20;
    double grid_ratio = 0.01;
    Selector selector = Selector::automatic;
    RcpParams rcp;
};

/// auto: RCP for the naive method, SIC for the corrected ones.
inline Selector resolve_selector(Selector s, Method m) {
    if (s != Selector::automatic) return s;
    return m == Method::pcd_naive ? Selector::rcp : Selector::sic;
}

/// Fits method m over its default grid and keeps the selector's choice.
inline TuningResult fit_auto(Method m, const DataSet& ds, const ErrorSpec& es, const EstimatorConfig& base,
                             const AutoLambda& al, int threads = 1) {
    const LambdaGrid grid = default_lambda_grid(m, ds, es, al.grid_size, al.grid_ratio);
    const Fitter fitter = [&](const EstimatorConfig& cfg) { return fit(m, ds, es, cfg); };
    if (resolve_selector(al.selector, m) == Selector::rcp) return select_lambda_rcp(ds, grid, al.rcp, fitter, base, threads);
    return select_lambda_sic(ds, es, grid, fitter, base, threads);
}

/// CSV: lambda,edges,<criterion>[,rcp],selected,status
inline void write_sweep_csv(std::ostream& os, const TuningResult& tr) {
    const bool rcp = tr.criterion == "rcp";
    os << "lambda,edges," << (rcp ? "pe,rcp" : "sic") << ",selected,status\n";
    os.precision(17);
    for (const SweepRow& r : tr.rows) {
        os << r.lambda << ',' << r.edges << ',';
        if (r.failed) {
            os << (rcp ? "," : "");
        } else {
            os << r.criterion;
            if (rcp) os << ',' << r.rcp;
        }
        os << ',' << (r.selected ? 1 : 0) << ',';
        if (r.failed) {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), '"', '\'');
            os << "\"error: " << msg << '"';
        } else {
            os << "ok";
        }
        os << '\n';
    }
}

} // namespace csbn
