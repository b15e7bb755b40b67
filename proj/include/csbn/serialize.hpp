#pragma once

#include <json.hpp>

#include "estimators.hpp"
#include "metrics.hpp"
#include "tuning.hpp"

namespace csbn {

using json = nlohmann::ordered_json;

inline json matrix_to_json(const MatrixXd& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

// Node indices are written 1-based, as in every file format.
inline json edges_to_json(const std::vector<Edge>& edges) {
    json out = json::array();
    for (const Edge& e : edges) out.push_back({e.from + 1, e.to + 1});
    return out;
}

inline json to_json(const FitDiagnostics& d) {
    return json{{"iterations", d.iterations},
                {"converged", d.converged},
                {"final_change", d.final_change},
                {"removed_per_iteration", d.removed_per_iteration},
                {"stabilized_solves", d.stabilized_solves},
                {"degenerate_pvalues", d.degenerate_pvalues},
                {"nr_fallbacks", d.nr_fallbacks},
                {"nr_unconverged", d.nr_unconverged},
                {"infeasible_roots", d.infeasible_roots}};
}

inline json to_json(const FitResult& f, double zero_threshold = default_zero_threshold) {
    json order = json::array();
    for (Index v : f.order) order.push_back(v + 1);
    return json{{"method", f.method},
                {"lambda", f.lambda},
                {"nodes", f.b_hat.size()},
                {"b_hat", matrix_to_json(f.b_hat.matrix())},
                {"edges", edges_to_json(graph_from_coefs(f.b_hat, zero_threshold).edges())},
                {"topological_order", order},
                {"removed_edges", edges_to_json(f.removed_edges)},
                {"diagnostics", to_json(f.diagnostics)}};
}

inline json to_json(const GraphEval& ev) {
    return json{{"tpr", ev.tpr},
                {"fdr", ev.fdr},
                {"specificity", ev.specificity},
                {"correctness", ev.correctness},
                {"frob_scaled", ev.frob_scaled},
                {"estimated_edges", ev.estimated_edges},
                {"true_edges", ev.true_edges},
                {"true_positive", ev.true_positive},
                {"reversed", ev.reversed},
                {"spurious", ev.spurious}};
}

inline json to_json(const TuningResult& t) {
    return json{{"criterion", t.criterion}, {"lambda", t.lambda}, {"uninformative", t.uninformative}};
}

} // namespace csbn
