#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core_model.hpp"
#include "dag_tools.hpp"

namespace csbn {

/// splitmix64 finalizer; mixes a base seed with stream keys so graph, data
/// and noise draws get independent generators.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(base);
    for (std::uint64_t k : keys) h = mix(h ^ mix(k));
    return h;
}

struct TrueNetwork {
    CoefMatrix b_star = CoefMatrix(Index{0});
    std::vector<Index> order;  // topological order used for generation
    std::vector<Edge> edges;   // in sampling order
};

/// Random DAG: a random permutation fixes the topological order, forward
/// pairs are visited in random order and kept while the child has fewer
/// than max_parents parents. The first floor(n_edges/2) sampled edges get
/// coefficient 0.5, the rest 1.0.
inline TrueNetwork random_dag(Index p, Index n_edges, Index max_parents, std::uint64_t seed) {
    if (p < 2) throw argument_error("random_dag: need p >= 2");
    if (n_edges < 0 || max_parents < 0) throw argument_error("random_dag: counts must be nonnegative");
    Index capacity = 0;
    for (Index a = 0; a < p; ++a) capacity += std::min(a, max_parents);
    if (n_edges > capacity) {
        throw argument_error("random_dag: " + std::to_string(n_edges) + " edges infeasible with p=" +
                             std::to_string(p) + " and at most " + std::to_string(max_parents) + " parents");
    }
    std::mt19937_64 rng(seed);
    TrueNetwork net;
    net.order.resize(static_cast<std::size_t>(p));
    std::iota(net.order.begin(), net.order.end(), Index{0});
    std::shuffle(net.order.begin(), net.order.end(), rng);

    std::vector<Edge> forward;
    for (Index a = 0; a < p; ++a) {
        for (Index b = a + 1; b < p; ++b) {
            forward.push_back({net.order[static_cast<std::size_t>(a)], net.order[static_cast<std::size_t>(b)]});
        }
    }
    std::shuffle(forward.begin(), forward.end(), rng);
    std::vector<Index> indeg(static_cast<std::size_t>(p), 0);
    for (const Edge& e : forward) {
        if (static_cast<Index>(net.edges.size()) == n_edges) break;
        if (indeg[static_cast<std::size_t>(e.to)] >= max_parents) continue;
        ++indeg[static_cast<std::size_t>(e.to)];
        net.edges.push_back(e);
    }
    MatrixXd b = MatrixXd::Zero(p, p);
    const std::size_t half = net.edges.size() / 2;
    for (std::size_t k = 0; k < net.edges.size(); ++k) {
        b(net.edges[k].from, net.edges[k].to) = k < half ? 0.5 : 1.0;
    }
    net.b_star = CoefMatrix(std::move(b));
    return net;
}

/// Builds a TrueNetwork from a fixed coefficient matrix (order from Kahn).
inline TrueNetwork network_from_coefs(const CoefMatrix& b) {
    const DirectedGraph g = graph_from_coefs(b, 0.0);
    TopoResult topo = kahn_eliminate(g, uniform_weakness(g));
    if (!topo.removed_edges.empty()) throw argument_error("coefficient matrix is not acyclic");
    TrueNetwork net;
    net.b_star = b;
    net.order = std::move(topo.order);
    net.edges = g.edges();
    return net;
}

struct SimulatedData {
    MatrixXd x;                             // error-free N x p
    std::vector<Intervention> intervened;   // block j intervenes node j
};

/// N = p * n_per_node rows in p blocks. In block j node j is drawn N(0,1);
/// every other node follows its structural equation with N(0,1) noise,
/// generated in topological order.
inline SimulatedData gen_data(const TrueNetwork& net, Index n_per_node, std::uint64_t seed) {
    if (n_per_node < 1) throw argument_error("gen_data: n_per_node must be >= 1");
    const Index p = net.b_star.size();
    const MatrixXd& b = net.b_star.matrix();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    SimulatedData out;
    out.x.resize(p * n_per_node, p);
    out.intervened.resize(static_cast<std::size_t>(p * n_per_node));
    for (Index blk = 0; blk < p; ++blk) {
        for (Index r = 0; r < n_per_node; ++r) {
            const Index row = blk * n_per_node + r;
            out.intervened[static_cast<std::size_t>(row)] = static_cast<int>(blk);
            for (Index v : net.order) {
                double val = normal(rng);
                if (v != blk) {
                    for (Index k = 0; k < p; ++k) {
                        if (b(k, v) != 0.0) val += b(k, v) * out.x(row, k);
                    }
                }
                out.x(row, v) = val;
            }
        }
    }
    return out;
}

enum class ErrorStructure { diagonal, ar };

inline std::string to_string(ErrorStructure s) { return s == ErrorStructure::diagonal ? "diagonal" : "ar"; }

inline ErrorStructure parse_structure(const std::string& s) {
    if (s == "diagonal") return ErrorStructure::diagonal;
    if (s == "ar") return ErrorStructure::ar;
    throw argument_error("unknown error structure '" + s + "' (expected diagonal or ar)");
}

struct ContaminationSpec {
    ErrorStructure structure = ErrorStructure::diagonal;
    double tau = 1.0;  // target mean reliability ratio
    double rho = 0.5;  // AR base: V[j, j'] = rho^|j - j'|

    void check() const {
        if (!(tau > 0.0 && tau <= 1.0)) throw argument_error("tau must lie in (0, 1]");
        if (!(rho > -1.0 && rho < 1.0)) throw argument_error("rho must lie in (-1, 1)");
    }
};

struct Contaminated {
    MatrixXd w;
    ErrorSpec error = ErrorSpec::zero(0);
    double sigma2_u = 0.0;
    VectorXd realized_tau;  // Var(X_j) / (Var(X_j) + sigma2_u) per column
};

inline VectorXd column_variances(const MatrixXd& x) {
    const Index n = x.rows();
    VectorXd v = VectorXd::Zero(x.cols());
    if (n < 2) return v;
    for (Index c = 0; c < x.cols(); ++c) {
        const double mean = x.col(c).mean();
        v(c) = (x.col(c).array() - mean).square().sum() / static_cast<double>(n - 1);
    }
    return v;
}

inline MatrixXd error_shape(Index p, const ContaminationSpec& spec) {
    MatrixXd v = MatrixXd::Identity(p, p);
    if (spec.structure == ErrorStructure::ar) {
        for (Index a = 0; a < p; ++a) {
            for (Index b = 0; b < p; ++b) v(a, b) = std::pow(spec.rho, static_cast<double>(std::abs(a - b)));
        }
    }
    return v;
}

/// Per-node variance from the rows that intervene on that node; columns
/// with fewer than two such rows fall back to all rows.
inline VectorXd interventional_variances(const MatrixXd& x, const std::vector<Intervention>& intervened) {
    if (static_cast<Index>(intervened.size()) != x.rows()) {
        throw argument_error("intervention vector length does not match the data");
    }
    const VectorXd all = column_variances(x);
    VectorXd v(x.cols());
    for (Index c = 0; c < x.cols(); ++c) {
        std::vector<Index> rows;
        for (Index r = 0; r < x.rows(); ++r) {
            if (intervened[static_cast<std::size_t>(r)] == Intervention(static_cast<int>(c))) rows.push_back(r);
        }
        if (rows.size() < 2) {
            v(c) = all(c);
            continue;
        }
        double mean = 0.0;
        for (Index r : rows) mean += x(r, c);
        mean /= static_cast<double>(rows.size());
        double ss = 0.0;
        for (Index r : rows) ss += (x(r, c) - mean) * (x(r, c) - mean);
        v(c) = ss / static_cast<double>(rows.size() - 1);
    }
    return v;
}

namespace detail {

inline Contaminated contaminate_with(const MatrixXd& x, double ref_variance, const ContaminationSpec& spec,
                                     std::uint64_t seed) {
    spec.check();
    const Index p = x.cols();
    const VectorXd var = column_variances(x);
    Contaminated out;
    out.sigma2_u = ref_variance * (1.0 - spec.tau) / spec.tau;
    const MatrixXd sigma = out.sigma2_u * error_shape(p, spec);
    out.error = ErrorSpec(sigma);
    out.realized_tau = var.array() / (var.array() + out.sigma2_u);
    out.w = x;
    if (out.sigma2_u > 0.0) {
        const MatrixXd l = Eigen::LLT<MatrixXd>(sigma).matrixL();
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        MatrixXd z(x.rows(), p);
        for (Index r = 0; r < x.rows(); ++r) {
            for (Index c = 0; c < p; ++c) z(r, c) = normal(rng);
        }
        out.w += z * l.transpose();
    }
    return out;
}

} // namespace detail

/// W = X + U with U rows iid N_p(0, sigma2_u V). sigma2_u is calibrated so
/// that the mean column variance of X has reliability ratio tau.
inline Contaminated contaminate(const MatrixXd& x, const ContaminationSpec& spec, std::uint64_t seed) {
    spec.check();
    return detail::contaminate_with(x, column_variances(x).mean(), spec, seed);
}

/// As above, but each node's variance is taken from its interventional rows
/// before averaging. With N(0,1) interventions this pins sigma2_u near
/// (1 - tau) / tau for every graph, however large the downstream variances.
inline Contaminated contaminate(const MatrixXd& x, const std::vector<Intervention>& intervened,
                                const ContaminationSpec& spec, std::uint64_t seed) {
    spec.check();
    return detail::contaminate_with(x, interventional_variances(x, intervened).mean(), spec, seed);
}

} // namespace csbn
