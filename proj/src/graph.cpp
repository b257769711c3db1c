#include "slglue/graph.hpp"

#include <numeric>

#include "slglue/errors.hpp"

namespace slglue {

void DesingGraph::validate() const {
    if (vertices.empty()) throw ConfigError("graph has no vertices");
    for (const auto& v : vertices)
        if (!(v.volume > 0.0)) throw ConfigError("vertex volume must be positive");
    for (const auto& e : edges) {
        if (e.tail < 0 || e.tail >= n_vertices() || e.head < 0 || e.head >= n_vertices())
            throw ConfigError("edge endpoint out of range");
        if (!(e.c > 0.0)) throw ConfigError("edge constant must be positive");
    }
}

DesingGraph DesingGraph::torus(double V1, double V2, double c) {
    DesingGraph g;
    g.vertices = {{0, V1}, {1, V2}};
    g.edges = {{0, 0, 1, c}};
    return g;
}

Eigen::MatrixXd incidence(const DesingGraph& graph) {
    graph.validate();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(graph.n_vertices(), graph.n_edges());
    for (int j = 0; j < graph.n_edges(); ++j) {
        B(graph.edges[j].tail, j) -= 1.0;
        B(graph.edges[j].head, j) += 1.0;
    }
    return B;
}

GramReport gram(const DesingGraph& graph) {
    const Eigen::MatrixXd B = incidence(graph);
    Eigen::VectorXd vinv(graph.n_vertices());
    for (int b = 0; b < graph.n_vertices(); ++b) vinv[b] = 1.0 / graph.vertices[b].volume;
    GramReport rep;
    rep.matrix = B.transpose() * vinv.asDiagonal() * B;
    rep.asymmetry = (rep.matrix - rep.matrix.transpose()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rep.matrix);
    if (es.info() != Eigen::Success) throw NumericError("Gram eigenvalue solve failed");
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.max_eigenvalue = es.eigenvalues().maxCoeff();
    return rep;
}

bool is_tree(const DesingGraph& graph) {
    graph.validate();
    const int n = graph.n_vertices();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : graph.edges) {
        const int a = find(e.tail), b = find(e.head);
        if (a == b) return false;  // cycle (including self-loops)
        parent[a] = b;
    }
    int components = 0;
    for (int v = 0; v < n; ++v)
        if (find(v) == v) ++components;
    return components == 1;
}

Eigen::VectorXd solve_constants(const DesingGraph& graph, const Eigen::VectorXd& rates) {
    if (rates.size() != graph.n_edges()) throw ConfigError("one rate per edge required");
    const Eigen::MatrixXd B = incidence(graph);
    const GramReport gr = gram(graph);
    if (!(gr.min_eigenvalue > 1e-12 * gr.max_eigenvalue))
        throw ObstructionError(
            "gluing graph is not solvable: every tip region must connect to two "
            "different components");
    Eigen::VectorXd rhs(graph.n_edges());
    for (int j = 0; j < graph.n_edges(); ++j) rhs[j] = graph.edges[j].c * rates[j];
    const Eigen::VectorXd y = gr.matrix.llt().solve(rhs);
    Eigen::VectorXd C = B * y;
    for (int b = 0; b < graph.n_vertices(); ++b) C[b] /= graph.vertices[b].volume;
    return C;
}

}  // namespace slglue
