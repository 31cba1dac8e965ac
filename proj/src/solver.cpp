#include "clickmodel/solver.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "clickmodel/linalg.hpp"

namespace clickmodel {

std::optional<double> QueryModel::log_ctr(const std::string& doc, int position) const {
    auto g = g_hat.find(doc);
    auto p = p_hat.find(position);
    if (g == g_hat.end() || p == p_hat.end()) return std::nullopt;
    return g->second + p->second;
}

std::optional<double> QueryModel::predict(const std::string& doc, int position) const {
    auto lc = log_ctr(doc, position);
    if (!lc) return std::nullopt;
    return std::min(1.0, std::exp(*lc));
}

ComponentFit fit_component(const BipartiteGraph& graph, const ComponentPartition& partition,
                           int component) {
    ComponentFit fit;
    fit.component = component;

    std::vector<int> docs, positions;
    for (int d = 0; d < graph.doc_count(); ++d)
        if (partition.doc_component[static_cast<std::size_t>(d)] == component) docs.push_back(d);
    for (int p = 0; p < graph.pos_count(); ++p)
        if (partition.pos_component[static_cast<std::size_t>(p)] == component) positions.push_back(p);
    if (docs.empty() || positions.empty()) throw NumericError("empty component");

    // Anchor at position 1 when the component has it, else at the smallest
    // position present (graph positions are sorted by label).
    int p1 = graph.position_one();
    fit.anchor_pos = (p1 != -1 && partition.pos_component[static_cast<std::size_t>(p1)] == component)
                         ? p1
                         : positions.front();

    std::vector<int> pos_slot(static_cast<std::size_t>(graph.pos_count()), -1);
    int n_free = 0;
    for (int p : positions)
        if (p != fit.anchor_pos) pos_slot[static_cast<std::size_t>(p)] = n_free++;

    std::vector<int> doc_slot(static_cast<std::size_t>(graph.doc_count()), -1);
    for (std::size_t i = 0; i < docs.size(); ++i) doc_slot[static_cast<std::size_t>(docs[i])] = static_cast<int>(i);

    // Per-doc weight totals and weighted right-hand sides.
    std::vector<double> w_doc(docs.size(), 0.0), r_doc(docs.size(), 0.0);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        for (int e : graph.doc_edges[static_cast<std::size_t>(docs[i])]) {
            const auto& edge = graph.edges[static_cast<std::size_t>(e)];
            w_doc[i] += edge.weight_sq;
            r_doc[i] += edge.weight_sq * edge.log_ctr;
        }
    }

    // Schur complement onto the free positions: eliminating the diagonal doc
    // block of the normal equations leaves an SPD system of size at most
    // (#positions - 1).
    linalg::Matrix h(n_free, n_free);
    std::vector<double> rhs(static_cast<std::size_t>(n_free), 0.0);
    for (int p : positions) {
        int sp = pos_slot[static_cast<std::size_t>(p)];
        if (sp < 0) continue;
        for (int e : graph.pos_edges[static_cast<std::size_t>(p)]) {
            const auto& edge = graph.edges[static_cast<std::size_t>(e)];
            h(sp, sp) += edge.weight_sq;
            rhs[static_cast<std::size_t>(sp)] += edge.weight_sq * edge.log_ctr;
        }
    }
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto& edge_ids = graph.doc_edges[static_cast<std::size_t>(docs[i])];
        for (int e1 : edge_ids) {
            const auto& a = graph.edges[static_cast<std::size_t>(e1)];
            int s1 = pos_slot[static_cast<std::size_t>(a.pos)];
            if (s1 < 0) continue;
            rhs[static_cast<std::size_t>(s1)] -= a.weight_sq * r_doc[i] / w_doc[i];
            for (int e2 : edge_ids) {
                const auto& b = graph.edges[static_cast<std::size_t>(e2)];
                int s2 = pos_slot[static_cast<std::size_t>(b.pos)];
                if (s2 < 0) continue;
                h(s1, s2) -= a.weight_sq * b.weight_sq / w_doc[i];
            }
        }
    }

    std::vector<double> p_sol = linalg::solve_spd(std::move(h), std::move(rhs));

    std::vector<double> p_full(static_cast<std::size_t>(graph.pos_count()), 0.0);
    for (int p : positions) {
        int sp = pos_slot[static_cast<std::size_t>(p)];
        double value = sp < 0 ? 0.0 : p_sol[static_cast<std::size_t>(sp)];
        p_full[static_cast<std::size_t>(p)] = value;
        fit.p_hat.emplace_back(p, value);
    }
    for (std::size_t i = 0; i < docs.size(); ++i) {
        double acc = r_doc[i];
        for (int e : graph.doc_edges[static_cast<std::size_t>(docs[i])]) {
            const auto& edge = graph.edges[static_cast<std::size_t>(e)];
            acc -= edge.weight_sq * p_full[static_cast<std::size_t>(edge.pos)];
        }
        fit.g_hat.emplace_back(docs[i], acc / w_doc[i]);
    }

    std::vector<double> g_full(static_cast<std::size_t>(graph.doc_count()), 0.0);
    for (const auto& [d, v] : fit.g_hat) g_full[static_cast<std::size_t>(d)] = v;
    for (const auto& edge : graph.edges) {
        if (doc_slot[static_cast<std::size_t>(edge.doc)] < 0) continue;
        double r = g_full[static_cast<std::size_t>(edge.doc)] +
                   p_full[static_cast<std::size_t>(edge.pos)] - edge.log_ctr;
        fit.residual_sq += r * r;
        fit.n_edges += 1;
    }
    return fit;
}

QueryModel align_components(const BipartiteGraph& graph, const ComponentPartition& partition,
                            const std::vector<ComponentFit>& fits) {
    if (fits.empty()) throw NumericError("no components to align");

    std::vector<double> mean_g(fits.size(), 0.0);
    for (std::size_t k = 0; k < fits.size(); ++k) {
        double sum = 0;
        for (const auto& [d, v] : fits[k].g_hat) sum += v;
        mean_g[k] = sum / static_cast<double>(fits[k].g_hat.size());
    }

    int anchored = partition.anchored_component;
    double mu = 0.0;
    if (anchored != -1) {
        for (std::size_t k = 0; k < fits.size(); ++k)
            if (fits[k].component == anchored) mu = mean_g[k];
    } else {
        for (double m : mean_g) mu += m;
        mu /= static_cast<double>(mean_g.size());
    }

    QueryModel model;
    model.n_components = partition.n_components;
    model.anchored_component = anchored;
    model.mu = mu;

    double residual_sq = 0.0;
    std::size_t n_edges = 0;
    for (std::size_t k = 0; k < fits.size(); ++k) {
        const double shift = fits[k].component == anchored ? 0.0 : mu - mean_g[k];
        for (const auto& [d, v] : fits[k].g_hat) {
            const std::string& doc = graph.docs[static_cast<std::size_t>(d)];
            model.g_hat[doc] = v + shift;
            model.doc_component[doc] = fits[k].component;
        }
        for (const auto& [p, v] : fits[k].p_hat) {
            int pos = graph.positions[static_cast<std::size_t>(p)];
            model.p_hat[pos] = v - shift;
            model.pos_component[pos] = fits[k].component;
        }
        residual_sq += fits[k].residual_sq;
        n_edges += fits[k].n_edges;
    }
    model.residual = n_edges ? std::sqrt(residual_sq / static_cast<double>(n_edges)) : 0.0;
    return model;
}

QueryModel fit_query(const std::vector<Triple>& triples, const FitOptions& options) {
    if (triples.empty()) throw DataError("cannot fit a query with no triples");
    if (options.epsilon_mode == EpsilonMode::Finite)
        return fit_query_finite_epsilon(triples, options.epsilon, options.weighted);

    BipartiteGraph graph = build_graph(triples, options.weighted);
    ComponentPartition partition = connected_components(graph);
    std::vector<ComponentFit> fits;
    fits.reserve(static_cast<std::size_t>(partition.n_components));
    for (int c = 0; c < partition.n_components; ++c)
        fits.push_back(fit_component(graph, partition, c));
    return align_components(graph, partition, fits);
}

QueryModel fit_query_finite_epsilon(const std::vector<Triple>& triples, double epsilon,
                                    bool weighted) {
    if (triples.empty()) throw DataError("cannot fit a query with no triples");
    if (!(epsilon > 0)) throw DataError("epsilon must be positive");

    BipartiteGraph graph = build_graph(triples, weighted);
    ComponentPartition partition = connected_components(graph);

    const int m = graph.doc_count();
    const int n = graph.pos_count();
    const int unknowns = m + n + 1;  // g, p, and the free coupling mean
    if (unknowns > 2000)
        throw NumericError("finite-epsilon solve too large (" + std::to_string(unknowns) +
                           " unknowns); use the analytic mode");

    int p1 = graph.position_one();
    const int anchor = p1 != -1 ? p1 : 0;

    const int rows = static_cast<int>(graph.edges.size()) + 1 + m;
    linalg::Matrix a(rows, unknowns);
    std::vector<double> b(static_cast<std::size_t>(rows), 0.0);
    int row = 0;
    for (const auto& edge : graph.edges) {
        double w = std::sqrt(edge.weight_sq);
        a(row, edge.doc) = w;
        a(row, m + edge.pos) = w;
        b[static_cast<std::size_t>(row)] = w * edge.log_ctr;
        ++row;
    }
    a(row, m + anchor) = 1.0;  // p_hat anchored to 0
    ++row;
    for (int d = 0; d < m; ++d) {
        a(row, d) = epsilon;
        a(row, m + n) = -epsilon;
        ++row;
    }

    std::vector<double> x = linalg::solve_least_squares(std::move(a), std::move(b));

    QueryModel model;
    model.n_components = partition.n_components;
    model.anchored_component = partition.anchored_component;
    model.mu = x[static_cast<std::size_t>(m + n)];
    for (int d = 0; d < m; ++d) {
        const std::string& doc = graph.docs[static_cast<std::size_t>(d)];
        model.g_hat[doc] = x[static_cast<std::size_t>(d)];
        model.doc_component[doc] = partition.doc_component[static_cast<std::size_t>(d)];
    }
    for (int p = 0; p < n; ++p) {
        int pos = graph.positions[static_cast<std::size_t>(p)];
        model.p_hat[pos] = x[static_cast<std::size_t>(m + p)];
        model.pos_component[pos] = partition.pos_component[static_cast<std::size_t>(p)];
    }
    double residual_sq = 0.0;
    for (const auto& edge : graph.edges) {
        double r = x[static_cast<std::size_t>(edge.doc)] + x[static_cast<std::size_t>(m + edge.pos)] -
                   edge.log_ctr;
        residual_sq += r * r;
    }
    model.residual =
        graph.edges.empty() ? 0.0 : std::sqrt(residual_sq / static_cast<double>(graph.edges.size()));
    return model;
}

namespace {

FitBatch fit_batch(const TripleTable& table, const FitOptions& options, bool parallel) {
    std::vector<const std::pair<const std::string, QueryTriples>*> items;
    items.reserve(table.queries.size());
    for (const auto& kv : table.queries) items.push_back(&kv);

    const std::int64_t n = static_cast<std::int64_t>(items.size());
    std::vector<QueryModel> models(items.size());
    std::vector<std::string> errors(items.size());
    std::vector<char> ok(items.size(), 0);

    if (parallel) {
#ifdef _OPENMP
        const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (std::int64_t i = 0; i < n; ++i) {
            try {
                models[static_cast<std::size_t>(i)] = fit_query(items[static_cast<std::size_t>(i)]->second.triples, options);
                ok[static_cast<std::size_t>(i)] = 1;
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(i)] = e.what();
            }
        }
#else
        parallel = false;
#endif
    }
    if (!parallel) {
        for (std::int64_t i = 0; i < n; ++i) {
            try {
                models[static_cast<std::size_t>(i)] = fit_query(items[static_cast<std::size_t>(i)]->second.triples, options);
                ok[static_cast<std::size_t>(i)] = 1;
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(i)] = e.what();
            }
        }
    }

    FitBatch batch;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (ok[i])
            batch.models.emplace(items[i]->first, std::move(models[i]));
        else
            batch.failures.emplace(items[i]->first, std::move(errors[i]));
    }
    return batch;
}

}  // namespace

FitBatch fit_all(const TripleTable& table, const FitOptions& options) {
    return fit_batch(table, options, true);
}

FitBatch fit_all_serial(const TripleTable& table, const FitOptions& options) {
    return fit_batch(table, options, false);
}

}  // namespace clickmodel
