#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clickmodel/graph.hpp"
#include "clickmodel/types.hpp"

namespace clickmodel {

enum class EpsilonMode { Analytic, Finite };

struct FitOptions {
    /// Weight each equation by sqrt(impressions). Off by default: the model
    /// equations are unweighted.
    bool weighted = false;
    EpsilonMode epsilon_mode = EpsilonMode::Analytic;
    double epsilon = 1e-6;  // finite mode only
    int threads = 0;        // 0 = library default
};

/// Fitted per-query model: log-goodness per doc, log-bias per position,
/// component metadata. p_hat at position 1 is exactly 0 whenever position 1
/// is in the anchored component.
struct QueryModel {
    std::map<std::string, double> g_hat;
    std::map<int, double> p_hat;
    std::map<std::string, int> doc_component;
    std::map<int, int> pos_component;
    int n_components = 0;
    int anchored_component = -1;
    double mu = 0.0;        // mean log-goodness used for component alignment
    double residual = 0.0;  // rms of (g_hat + p_hat - log ctr) over edges

    std::optional<double> log_ctr(const std::string& doc, int position) const;
    /// exp(g_hat + p_hat) clamped into (0, 1]; nullopt when doc or position
    /// is not covered by the model.
    std::optional<double> predict(const std::string& doc, int position) const;
};

/// Least-squares fit of one connected component, bias anchored to 0 at
/// position 1 when the component has it, else at its smallest position.
/// Solved through the normal equations with the doc block eliminated, so the
/// dense solve is only over the component's positions.
struct ComponentFit {
    int component = 0;
    std::vector<std::pair<int, double>> g_hat;  // (doc index, value)
    std::vector<std::pair<int, double>> p_hat;  // (pos index, value)
    int anchor_pos = -1;                        // position index in graph
    double residual_sq = 0.0;                   // unweighted, this component's edges
    std::size_t n_edges = 0;
};

ComponentFit fit_component(const BipartiteGraph& graph, const ComponentPartition& partition,
                           int component);

/// Gauge-fix the per-component fits. The component holding position 1 keeps
/// its values and defines mu as the mean of its log-goodness values; every
/// other component shifts (g_hat + a, p_hat - a) so its mean log-goodness
/// equals mu. Without an anchored component mu is the grand mean of the
/// component means and all components shift to it.
QueryModel align_components(const BipartiteGraph& graph, const ComponentPartition& partition,
                            const std::vector<ComponentFit>& fits);

QueryModel fit_query(const std::vector<Triple>& triples, const FitOptions& options = {});

/// Augmented formulation: keeps the component-coupling equations explicit
/// with weight epsilon and the target mean as a free unknown, solved as one
/// dense least-squares problem. Converges to the analytic path as epsilon
/// tends to 0; retained as a cross-check and CLI option.
QueryModel fit_query_finite_epsilon(const std::vector<Triple>& triples, double epsilon,
                                    bool weighted = false);

struct FitBatch {
    std::map<std::string, QueryModel> models;
    std::map<std::string, std::string> failures;  // query -> error, batch continues
};

/// Per-query fits across the table, parallel over queries. Results are
/// merged in query order and are bit-identical to fit_all_serial.
FitBatch fit_all(const TripleTable& table, const FitOptions& options = {});

/// Single-threaded reference implementation.
FitBatch fit_all_serial(const TripleTable& table, const FitOptions& options = {});

}  // namespace clickmodel
