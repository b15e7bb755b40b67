#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core_model.hpp"
#include "penalty.hpp"

namespace csbn {

/// Everything the j-th measurement error model needs: the observational
/// rows O_j, the response W[O_j, j], the covariates W[O_j, -j] and
/// Sigma_u[-j, -j]. Holds copies, so it outlives the DataSet it came from.
class ScoreContext {
public:
    ScoreContext(const DataSet& ds, const ErrorSpec& es, Index j)
        : j_(j), rows_(observational_rows(ds, j)) {
        if (es.size() != ds.nodes()) {
            throw argument_error("Sigma_u is " + std::to_string(es.size()) + "x" + std::to_string(es.size()) +
                                 " but data has " + std::to_string(ds.nodes()) + " nodes");
        }
        const Index p = ds.nodes();
        const Index n = static_cast<Index>(rows_.size());
        x_.resize(n, p - 1);
        y_.resize(n);
        for (Index a = 0; a < n; ++a) {
            const Index r = rows_[static_cast<std::size_t>(a)];
            y_(a) = ds.w()(r, j);
            for (Index k = 0; k + 1 < p; ++k) x_(a, k) = ds.w()(r, node_at_position(k, j));
        }
        sigma_ = drop_row_col(es.sigma(), j);
        gram_ = x_.transpose() * x_;
        xty_ = x_.transpose() * y_;
    }

    Index node() const noexcept { return j_; }
    // n_{-j}
    Index n() const noexcept { return x_.rows(); }
    // p - 1
    Index dim() const noexcept { return x_.cols(); }
    Index nodes() const noexcept { return x_.cols() + 1; }

    const std::vector<Index>& rows() const noexcept { return rows_; }
    const MatrixXd& covariates() const noexcept { return x_; }
    const VectorXd& response() const noexcept { return y_; }
    const MatrixXd& sigma() const noexcept { return sigma_; }
    // sum over O_j of W[l,-j]^T W[l,-j], and of W[l,-j]^T W[l,j]
    const MatrixXd& gram() const noexcept { return gram_; }
    const VectorXd& cross() const noexcept { return xty_; }

    // Position of a data row within O_j.
    Index local_row(Index row) const {
        auto it = std::lower_bound(rows_.begin(), rows_.end(), row);
        if (it == rows_.end() || *it != row) {
            throw argument_error("row " + std::to_string(row + 1) + " is not observational for node " +
                                 std::to_string(j_ + 1));
        }
        return static_cast<Index>(it - rows_.begin());
    }

private:
    Index j_;
    std::vector<Index> rows_;
    MatrixXd x_;
    VectorXd y_;
    MatrixXd sigma_;
    MatrixXd gram_;
    VectorXd xty_;
};

/// Corrected score Psi_{jl}(B_j) for data row `row` (which must lie in O_j).
inline VectorXd psi(const ScoreContext& ctx, Index row, const VectorXd& bj) {
    const Index l = ctx.local_row(row);
    const auto w = ctx.covariates().row(l);
    const double resid = ctx.response()(l) - w.dot(bj);
    return resid * w.transpose() + ctx.sigma() * bj;
}

/// C_j: one row per observational data row, holding Psi_{jl}^T.
inline MatrixXd score_matrix(const ScoreContext& ctx, const VectorXd& bj) {
    const VectorXd resid = ctx.response() - ctx.covariates() * bj;
    MatrixXd c = resid.asDiagonal() * ctx.covariates();
    c.rowwise() += (ctx.sigma() * bj).transpose();
    return c;
}

/// H_j(B_j) = n^{-1} sum Psi Psi^T.
inline MatrixXd h_matrix(const ScoreContext& ctx, const VectorXd& bj) {
    const MatrixXd c = score_matrix(ctx, bj);
    MatrixXd h = c.transpose() * c / static_cast<double>(ctx.n());
    return h.selfadjointView<Eigen::Lower>();
}

namespace detail {

// Ridge added to sum(Psi Psi^T) before inversion: n * 1e-8 * trace(H)/(p-1).
inline constexpr double score_ridge_factor = 1e-8;

inline double score_ridge(const MatrixXd& second_moment_sum) {
    return score_ridge_factor * second_moment_sum.trace() / static_cast<double>(second_moment_sum.rows());
}

// (1/n) s^T (M + ridge I)^{-1} s with s = sum Psi and M = sum Psi Psi^T,
// which equals psibar^T (H + eps I)^{-1} psibar.
inline double sandwich_form(const VectorXd& s, const MatrixXd& m, double n, Index node) {
    if (s.size() == 0) return 0.0;
    const double ridge = score_ridge(m);
    if (!(ridge > 0.0)) {
        if (s.isZero(0.0)) return 0.0;
        throw numerical_error("score second-moment matrix is singular", static_cast<int>(node));
    }
    MatrixXd reg = m;
    reg.diagonal().array() += ridge;
    Eigen::LLT<MatrixXd> llt(reg);
    if (llt.info() != Eigen::Success) {
        throw numerical_error("score second-moment matrix is not invertible", static_cast<int>(node));
    }
    const double v = s.dot(llt.solve(s)) / n;
    return std::max(v, 0.0);
}

} // namespace detail

/// V_j = psibar^T H_j^{-1} psibar, H_j recomputed at B_j.
inline double v_quadratic(const ScoreContext& ctx, const VectorXd& bj) {
    const MatrixXd c = score_matrix(ctx, bj);
    const VectorXd s = c.colwise().sum().transpose();
    const MatrixXd m = c.transpose() * c;
    return detail::sandwich_form(s, m, static_cast<double>(ctx.n()), ctx.node());
}

/// (n_{-j}/2) log RSS, the naive Gaussian profile log-likelihood term.
inline double naive_v(const ScoreContext& ctx, const VectorXd& bj) {
    const double rss = (ctx.response() - ctx.covariates() * bj).squaredNorm();
    if (!(rss > 0.0)) throw numerical_error("residual sum of squares is zero", static_cast<int>(ctx.node()));
    return 0.5 * static_cast<double>(ctx.n()) * std::log(rss);
}

// ---------------------------------------------------------------------------
// Corrected least squares on a parent support.

struct CorrectedLsResult {
    std::vector<Index> support;  // global node indices
    VectorXd coef;               // one entry per support node
    bool stabilized = false;     // corrected Gram matrix was eigen-shifted
    MatrixXd gram;               // the (possibly shifted) corrected Gram matrix
};

namespace detail {

inline std::vector<Index> support_positions(const ScoreContext& ctx, const std::vector<Index>& support) {
    std::vector<Index> pos;
    pos.reserve(support.size());
    for (Index k : support) {
        if (k < 0 || k >= ctx.nodes() || k == ctx.node()) {
            throw argument_error("invalid parent " + std::to_string(k + 1) + " for node " +
                                 std::to_string(ctx.node() + 1));
        }
        pos.push_back(position_in_column(k, ctx.node()));
    }
    return pos;
}

} // namespace detail

/// Solves the corrected score equations restricted to `support`:
/// (sum W_S^T W_S - n Sigma_u[S,S]) b_S = sum W_S^T W_j.
/// If the corrected Gram matrix has an eigenvalue below 1e-10 of its
/// spectral norm it is shifted up to that floor and `stabilized` is set.
inline CorrectedLsResult corrected_ls(const ScoreContext& ctx, const std::vector<Index>& support) {
    CorrectedLsResult out;
    out.support = support;
    const auto pos = detail::support_positions(ctx, support);
    const Index s = static_cast<Index>(pos.size());
    out.coef = VectorXd::Zero(s);
    if (s == 0) return out;

    MatrixXd g(s, s);
    VectorXd rhs(s);
    const double n = static_cast<double>(ctx.n());
    for (Index a = 0; a < s; ++a) {
        rhs(a) = ctx.cross()(pos[a]);
        for (Index b = 0; b < s; ++b) g(a, b) = ctx.gram()(pos[a], pos[b]) - n * ctx.sigma()(pos[a], pos[b]);
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
    const auto& ev = es.eigenvalues();
    const double norm = ev.cwiseAbs().maxCoeff();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw numerical_error("corrected Gram matrix is zero or non-finite", static_cast<int>(ctx.node()));
    }
    const double floor = 1e-10 * norm;
    if (ev.minCoeff() < floor) {
        g.diagonal().array() += floor - ev.minCoeff();
        out.stabilized = true;
    }
    Eigen::LDLT<MatrixXd> ldlt(g);
    if (ldlt.info() != Eigen::Success) {
        throw numerical_error("corrected Gram matrix factorization failed", static_cast<int>(ctx.node()));
    }
    out.coef = ldlt.solve(rhs);
    if (!out.coef.allFinite()) throw numerical_error("corrected least squares diverged", static_cast<int>(ctx.node()));
    out.gram = std::move(g);
    return out;
}

/// Scatters a support-restricted coefficient vector into a full B_j.
inline VectorXd embed_support(const ScoreContext& ctx, const std::vector<Index>& support, const VectorXd& coef) {
    VectorXd bj = VectorXd::Zero(ctx.dim());
    for (std::size_t a = 0; a < support.size(); ++a) {
        bj(position_in_column(support[a], ctx.node())) = coef(static_cast<Index>(a));
    }
    return bj;
}

// ---------------------------------------------------------------------------
// Sandwich-variance p-values.

struct PValueResult {
    std::vector<Index> support;
    VectorXd coef;
    VectorXd variance;                 // n^{-1} [A^{-1} B A^{-T}]_{ii}
    VectorXd pvalue;
    std::vector<bool> degenerate;      // variance <= 0; p-value forced to 1
    bool stabilized = false;
};

inline double two_sided_normal_pvalue(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

/// Two-sided normal p-values for H0: beta_ij = 0, i in support, using the
/// M-estimator sandwich A^{-1} B A^{-T} / n evaluated at the corrected
/// least-squares solution.
inline PValueResult sandwich_pvalues(const ScoreContext& ctx, const std::vector<Index>& support) {
    PValueResult out;
    const CorrectedLsResult fit = corrected_ls(ctx, support);
    out.support = support;
    out.coef = fit.coef;
    out.stabilized = fit.stabilized;
    const Index s = fit.coef.size();
    out.variance = VectorXd::Zero(s);
    out.pvalue = VectorXd::Ones(s);
    out.degenerate.assign(static_cast<std::size_t>(s), false);
    if (s == 0) return out;

    const auto pos = detail::support_positions(ctx, support);
    const double n = static_cast<double>(ctx.n());
    const MatrixXd c = score_matrix(ctx, embed_support(ctx, support, fit.coef));
    MatrixXd cs(c.rows(), s);
    for (Index a = 0; a < s; ++a) cs.col(a) = c.col(pos[a]);
    const MatrixXd bmat = cs.transpose() * cs / n;
    const MatrixXd amat = fit.gram / n;
    const Eigen::PartialPivLU<MatrixXd> lu(amat);
    const MatrixXd ainv_b = lu.solve(bmat);
    const MatrixXd cov = lu.solve(ainv_b.transpose()).transpose() / n;
    for (Index a = 0; a < s; ++a) {
        const double var = cov(a, a);
        out.variance(a) = var;
        if (!(var > 0.0) || !std::isfinite(var)) {
            out.degenerate[static_cast<std::size_t>(a)] = true;
            out.pvalue(a) = 1.0;
            continue;
        }
        out.pvalue(a) = two_sided_normal_pvalue(fit.coef(a) / std::sqrt(var));
    }
    return out;
}

// ---------------------------------------------------------------------------
// One-coordinate slice of V_j, used by the pairwise coordinate descent.

/// V_j as a function of the single coefficient beta_ij with the rest of
/// B_j held fixed. Psi is affine in beta_ij: with delta = beta - beta0 the
/// score rows are C(delta) = C0 + delta R, where
/// R_l = d Psi_l / d beta_ij = -W[l,i] W[l,-j]^T + Sigma_u[-j,-j] e_i,
/// so dM/d delta = K + K^T with K = R^T C and d2M/d delta2 = 2 R^T R.
class CoordinateSlice {
public:
    struct Derivatives {
        double value = 0.0;
        double d1 = 0.0;
        double d2 = 0.0;
    };

    // Numerator and denominator of the Newton-Raphson update for beta_ij,
    // written in the n x n projection form
    //   1^T F (I - Q) 1 + (n/2) P'   over   1^T {(P - QP - FF)(I - Q) - FT} 1 + (n/2) P''.
    // Both are (n/2) times the first and second derivatives of V_j + P.
    struct NewtonTerms {
        double numerator = 0.0;
        double denominator = 0.0;
    };

    CoordinateSlice(const ScoreContext& ctx, const VectorXd& bj, Index parent)
        : node_(ctx.node()), n_(static_cast<double>(ctx.n())), pos_(position_in_column(parent, ctx.node())) {
        if (parent == ctx.node() || parent < 0 || parent >= ctx.nodes()) {
            throw argument_error("slice parent must differ from the response node");
        }
        beta0_ = bj(pos_);
        c0_ = score_matrix(ctx, bj);
        rmat_ = -(ctx.covariates().col(pos_).asDiagonal() * ctx.covariates());
        rmat_.rowwise() += ctx.sigma().col(pos_).transpose();
        r_ = rmat_.colwise().sum().transpose();
        l_ = rmat_.transpose() * rmat_;
        const double xx = ctx.gram()(pos_, pos_);
        bound_ = xx > 0.0 ? kSlopeBound * std::sqrt(ctx.response().squaredNorm() / xx) : 0.0;
    }

    // Multiple of |W_j| / |W_i| beyond which a slope counts as runaway.
    static constexpr double kSlopeBound = 100.0;

    double start() const noexcept { return beta0_; }
    double n() const noexcept { return n_; }
    // V_j can keep decreasing towards its limit as |beta| grows; minimizers
    // past this bound are treated as having gone off to infinity.
    double bound() const noexcept { return bound_; }

    double value(double beta) const {
        const double d = beta - beta0_;
        const MatrixXd c = scores(d);
        return detail::sandwich_form(c.colwise().sum().transpose(), c.transpose() * c, n_, node_);
    }

    Derivatives derivatives(double beta) const {
        const double d = beta - beta0_;
        const MatrixXd c = scores(d);
        const VectorXd s = c.colwise().sum().transpose();
        MatrixXd m = c.transpose() * c;
        m.diagonal().array() += detail::score_ridge(m);
        Eigen::LLT<MatrixXd> llt(m);
        if (llt.info() != Eigen::Success) {
            throw numerical_error("score second-moment matrix is not invertible", static_cast<int>(node_));
        }
        // dM/d delta = K + K^T with K = R^T C(delta); the ridge is kappa tr(M),
        // so it moves with delta too
        const double kappa = detail::score_ridge_factor / static_cast<double>(m.rows());
        const MatrixXd k = rmat_.transpose() * c;
        MatrixXd j = k + k.transpose();
        j.diagonal().array() += kappa * j.trace();
        const VectorXd gs = llt.solve(s);
        const VectorXd gr = llt.solve(r_);
        const VectorXd jgs = j * gs;
        const VectorXd gjgs = llt.solve(jgs);
        Derivatives out;
        out.value = std::max(s.dot(gs) / n_, 0.0);
        out.d1 = (2.0 * r_.dot(gs) - gs.dot(jgs)) / n_;
        out.d2 = (2.0 * r_.dot(gr) - 4.0 * r_.dot(gjgs) + 2.0 * jgs.dot(gjgs) -
                  2.0 * (gs.dot(l_ * gs) + kappa * l_.trace() * gs.squaredNorm())) / n_;
        return out;
    }

    NewtonTerms newton_terms(double beta, const PenaltyParams& pp) const {
        const Derivatives dv = derivatives(beta);
        const double half_n = 0.5 * n_;
        return {half_n * (dv.d1 + scad_d1(beta, pp)), half_n * (dv.d2 + scad_d2(beta, pp))};
    }

    // V_j + P_lambda(|beta|)
    double penalized(double beta, const PenaltyParams& pp) const { return value(beta) + scad(std::abs(beta), pp); }

private:
    // Rebuilt on each call; expanding M in powers of delta cancels badly for large |delta|.
    MatrixXd scores(double d) const { return c0_ + d * rmat_; }

    Index node_;
    double n_;
    Index pos_;
    double beta0_ = 0.0;
    double bound_ = 0.0;
    VectorXd r_;
    MatrixXd c0_, rmat_, l_;
};

} // namespace csbn
