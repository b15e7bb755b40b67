#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace csbn {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// |beta| at or below this is treated as "no edge" by every estimator.
inline constexpr double default_zero_threshold = 1e-4;

// Node a row intervenes on (0-based), or nullopt for an observational row.
using Intervention = std::optional<int>;

/// Observed surrogate matrix W (N x p) together with the per-row
/// intervention assignment. Node indices are 0-based in the API and
/// 1-based in files.
///
/// Construction only checks that the two pieces have matching length;
/// the remaining invariants are reported by validate() so that malformed
/// input can be described rather than rejected blindly.
class DataSet {
public:
    DataSet(MatrixXd w, std::vector<Intervention> intervened)
        : w_(std::move(w)), intervened_(std::move(intervened)) {
        if (static_cast<Index>(intervened_.size()) != w_.rows()) {
            throw argument_error("intervention vector has " + std::to_string(intervened_.size()) +
                                 " entries but data has " + std::to_string(w_.rows()) + " rows");
        }
        n_intervened_.assign(static_cast<std::size_t>(w_.cols()), 0);
        for (const auto& iv : intervened_) {
            if (iv && *iv >= 0 && *iv < w_.cols()) ++n_intervened_[static_cast<std::size_t>(*iv)];
        }
    }

    // Purely observational data.
    explicit DataSet(MatrixXd w)
        : DataSet(w, std::vector<Intervention>(static_cast<std::size_t>(w.rows()))) {}

    const MatrixXd& w() const noexcept { return w_; }
    const std::vector<Intervention>& intervened() const noexcept { return intervened_; }
    Index rows() const noexcept { return w_.rows(); }
    Index nodes() const noexcept { return w_.cols(); }

    // n_j: rows intervening node j.
    Index n_intervened(Index j) const {
        check_node(j);
        return n_intervened_[static_cast<std::size_t>(j)];
    }
    // n_{-j} = N - n_j.
    Index n_observational(Index j) const { return rows() - n_intervened(j); }

    void check_node(Index j) const {
        if (j < 0 || j >= nodes()) {
            throw argument_error("node index " + std::to_string(j + 1) + " out of range 1.." +
                                 std::to_string(nodes()));
        }
    }

private:
    MatrixXd w_;
    std::vector<Intervention> intervened_;
    std::vector<Index> n_intervened_;
};

/// O_j: rows whose intervened node is not j, ascending.
inline std::vector<Index> observational_rows(const DataSet& ds, Index j) {
    ds.check_node(j);
    std::vector<Index> rows;
    rows.reserve(static_cast<std::size_t>(ds.n_observational(j)));
    const auto& iv = ds.intervened();
    for (Index r = 0; r < ds.rows(); ++r) {
        const auto& v = iv[static_cast<std::size_t>(r)];
        if (!v || *v != j) rows.push_back(r);
    }
    return rows;
}

struct ValidationReport {
    bool ok = true;
    std::string message;

    explicit operator bool() const noexcept { return ok; }
};

/// Checks every DataSet invariant and names the first one violated.
inline ValidationReport validate(const DataSet& ds) {
    auto fail = [](std::string m) { return ValidationReport{false, std::move(m)}; };
    if (ds.rows() < 1) return fail("N=0: data has no rows");
    if (ds.nodes() < 2) return fail("p=" + std::to_string(ds.nodes()) + ": need at least 2 nodes");
    const MatrixXd& w = ds.w();
    for (Index r = 0; r < w.rows(); ++r) {
        for (Index c = 0; c < w.cols(); ++c) {
            if (!std::isfinite(w(r, c))) {
                return fail("non-finite entry at (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")");
            }
        }
    }
    const auto& iv = ds.intervened();
    for (std::size_t r = 0; r < iv.size(); ++r) {
        if (iv[r] && (*iv[r] < 0 || *iv[r] >= ds.nodes())) {
            return fail("intervened node " + std::to_string(*iv[r] + 1) + " out of range at row " +
                        std::to_string(r + 1));
        }
    }
    for (Index j = 0; j < ds.nodes(); ++j) {
        if (ds.n_observational(j) < 1) {
            return fail("n_{-" + std::to_string(j + 1) + "}=0: node " + std::to_string(j + 1) +
                        " has no observational rows");
        }
    }
    return {};
}

inline void require_valid(const DataSet& ds) {
    if (auto rep = validate(ds); !rep) throw data_error(rep.message);
}

// Position of node i inside B_j = B[-j, j].
inline Index position_in_column(Index i, Index j) noexcept { return i < j ? i : i - 1; }
// Inverse of position_in_column.
inline Index node_at_position(Index pos, Index j) noexcept { return pos < j ? pos : pos + 1; }

// B_j = B[-j, j] as a (p-1)-vector.
inline VectorXd column_without_diagonal(const MatrixXd& b, Index j) {
    const Index p = b.rows();
    VectorXd out(p - 1);
    for (Index k = 0; k + 1 < p; ++k) out(k) = b(node_at_position(k, j), j);
    return out;
}

inline void set_column_without_diagonal(MatrixXd& b, Index j, const VectorXd& bj) {
    for (Index k = 0; k < bj.size(); ++k) b(node_at_position(k, j), j) = bj(k);
}

// Submatrix m[-j, -j].
inline MatrixXd drop_row_col(const MatrixXd& m, Index j) {
    const Index p = m.rows();
    MatrixXd out(p - 1, p - 1);
    for (Index a = 0; a + 1 < p; ++a) {
        for (Index b = 0; b + 1 < p; ++b) out(a, b) = m(node_at_position(a, j), node_at_position(b, j));
    }
    return out;
}

/// p x p regression-coefficient matrix with an exactly-zero diagonal.
/// Entry (i, j) is the effect of node i on node j.
class CoefMatrix {
public:
    explicit CoefMatrix(Index p) : b_(MatrixXd::Zero(p, p)) {}

    explicit CoefMatrix(MatrixXd b) : b_(std::move(b)) {
        if (b_.rows() != b_.cols()) throw argument_error("coefficient matrix must be square");
        for (Index i = 0; i < b_.rows(); ++i) {
            if (b_(i, i) != 0.0) {
                throw argument_error("coefficient matrix has nonzero diagonal at " + std::to_string(i + 1));
            }
        }
    }

    Index size() const noexcept { return b_.rows(); }
    double operator()(Index i, Index j) const { return b_(i, j); }
    const MatrixXd& matrix() const noexcept { return b_; }

    VectorXd column(Index j) const { return column_without_diagonal(b_, j); }

    friend bool operator==(const CoefMatrix& x, const CoefMatrix& y) {
        return x.b_.rows() == y.b_.rows() && x.b_ == y.b_;
    }

private:
    MatrixXd b_;
};

/// Known measurement-error covariance Sigma_u (symmetric PSD).
class ErrorSpec {
public:
    explicit ErrorSpec(MatrixXd sigma_u) : s_(std::move(sigma_u)) {
        if (s_.rows() != s_.cols()) throw data_error("Sigma_u must be square");
        if (!s_.allFinite()) throw data_error("Sigma_u has non-finite entries");
        const double scale = s_.size() > 0 ? s_.cwiseAbs().maxCoeff() : 0.0;
        for (Index a = 0; a < s_.rows(); ++a) {
            for (Index b = a + 1; b < s_.cols(); ++b) {
                if (std::abs(s_(a, b) - s_(b, a)) > 1e-12 * std::max(scale, 1e-300)) {
                    throw data_error("Sigma_u is not symmetric at (" + std::to_string(a + 1) + "," +
                                     std::to_string(b + 1) + ")");
                }
            }
        }
        if (s_.size() > 0 && scale > 0.0) {
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(s_, Eigen::EigenvaluesOnly);
            const auto& ev = es.eigenvalues();
            if (ev.minCoeff() < -1e-10 * ev.maxCoeff()) throw data_error("Sigma_u is not positive semidefinite");
        }
    }

    static ErrorSpec zero(Index p) { return ErrorSpec(MatrixXd::Zero(p, p)); }

    Index size() const noexcept { return s_.rows(); }
    const MatrixXd& sigma() const noexcept { return s_; }
    bool is_zero() const { return s_.isZero(0.0); }

private:
    MatrixXd s_;
};

/// SCAD tuning pair.
struct PenaltyParams {
    double lambda = 0.0;
    double a = 3.7;

    PenaltyParams() = default;
    PenaltyParams(double lambda_, double a_ = 3.7) : lambda(lambda_), a(a_) {
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw argument_error("lambda must be a finite value >= 0");
        if (!(a > 2.0)) throw argument_error("SCAD shape a must exceed 2");
    }
};

} // namespace csbn
