#pragma once

#include <Eigen/Dense>
#include <vector>

namespace slick {

// Chebyshev-Gauss-Lobatto collocation on [-depth, 0].
// Node 0 sits at x3 = 0 (top), node n-1 at x3 = -depth (bottom).
struct ChebStack {
    std::vector<double> nodes;    // x3 values, descending
    std::vector<double> weights;  // Clenshaw-Curtis weights, exact for deg <= n-1
    Eigen::MatrixXd D1;           // d/dx3
    Eigen::MatrixXd D2;           // (d/dx3)^2

    ChebStack(int n, double depth);

    // Row functional extracting the highest Chebyshev coefficient from node values
    // (tau closure for the pressure block of the n = 0 mode solve).
    Eigen::RowVectorXd top_coeff_row() const;

    int n() const { return static_cast<int>(nodes.size()); }
};

}  // namespace slick
