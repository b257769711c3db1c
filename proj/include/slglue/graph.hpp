#pragma once

#include <Eigen/Dense>
#include <vector>

namespace slglue {

// Directed graph of flat torus components (vertices, with volumes) joined by
// neck edges (tail -> head, each carrying its primitive gap constant c > 0).
struct GraphVertex {
    int id = 0;
    double volume = 0.0;
};

struct GraphEdge {
    int id = 0;
    int tail = 0;  // vertex index
    int head = 0;
    double c = 0.0;
};

struct DesingGraph {
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }
    void validate() const;

    static DesingGraph torus(double V1, double V2, double c);
};

// B(b, j) = +1 if edge j heads into vertex b, -1 if it leaves from b.
Eigen::MatrixXd incidence(const DesingGraph& graph);

struct GramReport {
    Eigen::MatrixXd matrix;  // B^T V^{-1} B
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    double asymmetry = 0.0;
};
GramReport gram(const DesingGraph& graph);

// true iff the undirected graph is connected and acyclic
bool is_tree(const DesingGraph& graph);

// Per-vertex constants C with B^T C = (c_j rate_j) and V-weighted mean zero;
// rates are d(eps_j^2)/dt per edge.
Eigen::VectorXd solve_constants(const DesingGraph& graph, const Eigen::VectorXd& rates);

}  // namespace slglue
