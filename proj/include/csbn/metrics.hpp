#pragma once

#include <cstddef>

#include "core_model.hpp"
#include "dag_tools.hpp"

namespace csbn {

struct GraphEval {
    double tpr = 0.0;
    double fdr = 0.0;
    double specificity = 0.0;
    double correctness = 0.0;
    double frob_scaled = 0.0;

    // Raw counts behind the rates.
    std::size_t estimated_edges = 0;
    std::size_t true_edges = 0;
    std::size_t true_positive = 0;  // |E_hat ∩ E_true|
    std::size_t reversed = 0;       // R: true edges present reversed in E_hat
    std::size_t spurious = 0;       // E_hat edges neither correct nor reversed
};

// bounded: unordered pairs unconnected in both graphs (rate <= 1).
// literal: ordered pairs absent from both graphs over p(p-1)/2.
enum class CorrectnessMode { bounded, literal };

/// Structural comparison of an estimated graph against the truth.
///   TPR = |E_hat ∩ E_t| / |E_t|
///   FDR = (R + spurious) / |E_hat|, 0 when E_hat is empty
///   specificity = |E_hat^c ∩ E_t^c| / (p(p-1) - |E_t|) over ordered pairs
///   correctness = (|E_hat ∩ E_t| + unconnected pairs) / (p(p-1)/2)
inline GraphEval evaluate_graph(const DirectedGraph& g_hat, const DirectedGraph& g_true,
                                CorrectnessMode mode = CorrectnessMode::bounded) {
    if (g_hat.nodes() != g_true.nodes()) throw argument_error("graphs have different node counts");
    const Index p = g_true.nodes();
    GraphEval ev;
    std::size_t absent_both = 0;     // ordered pairs
    std::size_t unconnected = 0;     // unordered pairs
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
            if (i == j) continue;
            const bool h = g_hat.has_edge(i, j);
            const bool t = g_true.has_edge(i, j);
            ev.estimated_edges += h;
            ev.true_edges += t;
            if (h && t) {
                ++ev.true_positive;
            } else if (h && g_true.has_edge(j, i)) {
                ++ev.reversed;
            } else if (h) {
                ++ev.spurious;
            }
            if (!h && !t) ++absent_both;
            if (i < j && !h && !t && !g_hat.has_edge(j, i) && !g_true.has_edge(j, i)) ++unconnected;
        }
    }
    const double pairs = static_cast<double>(p * (p - 1)) / 2.0;
    ev.tpr = ev.true_edges ? static_cast<double>(ev.true_positive) / static_cast<double>(ev.true_edges) : 1.0;
    ev.fdr = ev.estimated_edges
                 ? static_cast<double>(ev.reversed + ev.spurious) / static_cast<double>(ev.estimated_edges)
                 : 0.0;
    const std::size_t negatives = static_cast<std::size_t>(p * (p - 1)) - ev.true_edges;
    ev.specificity = negatives ? static_cast<double>(absent_both) / static_cast<double>(negatives) : 1.0;
    const std::size_t agree = mode == CorrectnessMode::bounded ? unconnected : absent_both;
    ev.correctness = pairs > 0 ? static_cast<double>(ev.true_positive + agree) / pairs : 1.0;
    return ev;
}

/// trace{(B - B_hat)(B - B_hat)^T} / {p(p-1)}.
inline double frob_scaled(const CoefMatrix& b_true, const CoefMatrix& b_hat) {
    if (b_true.size() != b_hat.size()) throw argument_error("coefficient matrices have different sizes");
    const Index p = b_true.size();
    if (p < 2) return 0.0;
    return (b_true.matrix() - b_hat.matrix()).squaredNorm() / static_cast<double>(p * (p - 1));
}

/// All five metrics from coefficient matrices.
inline GraphEval evaluate(const CoefMatrix& b_true, const CoefMatrix& b_hat, double threshold = default_zero_threshold,
                          CorrectnessMode mode = CorrectnessMode::bounded) {
    GraphEval ev = evaluate_graph(graph_from_coefs(b_hat, threshold), graph_from_coefs(b_true, threshold), mode);
    ev.frob_scaled = frob_scaled(b_true, b_hat);
    return ev;
}

} // namespace csbn
