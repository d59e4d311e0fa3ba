#include "slick/chebyshev.hpp"

#include <cmath>
#include <stdexcept>

namespace slick {

ChebStack::ChebStack(int n, double depth) {
    if (n < 2) throw std::invalid_argument("ChebStack: need at least 2 nodes");
    const int m = n - 1;
    const double pi = M_PI;

    // standard CGL points t_j = cos(pi j / m), mapped affinely so t=1 -> 0, t=-1 -> -depth
    std::vector<double> t(n);
    nodes.resize(n);
    for (int j = 0; j < n; ++j) {
        t[j] = std::cos(pi * j / m);
        nodes[j] = 0.5 * depth * (t[j] - 1.0);
    }

    // differentiation matrix on t (Trefethen), negative-sum trick on the diagonal
    Eigen::MatrixXd Dt(n, n);
    auto cc = [&](int j) { return (j == 0 || j == m) ? 2.0 : 1.0; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            Dt(i, j) = (cc(i) / cc(j)) * sign / (t[i] - t[j]);
        }
    }
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) s += Dt(i, j);
        Dt(i, i) = -s;
    }
    // x3 = depth/2 * (t - 1)  =>  d/dx3 = (2/depth) d/dt
    D1 = (2.0 / depth) * Dt;
    D2 = D1 * D1;

    // Clenshaw-Curtis weights on [-1,1], scaled by depth/2
    weights.assign(n, 0.0);
    for (int j = 0; j <= m; ++j) {
        double s = 1.0;
        for (int k = 1; k <= m / 2; ++k) {
            const double bk = (2 * k == m) ? 1.0 : 2.0;
            s -= bk * std::cos(2.0 * k * pi * j / m) / (4.0 * k * k - 1.0);
        }
        double w = 2.0 * s / m;
        if (j == 0 || j == m) w *= 0.5;
        weights[j] = 0.5 * depth * w;
    }
}

Eigen::RowVectorXd ChebStack::top_coeff_row() const {
    const int nn = n();
    const int m = nn - 1;
    Eigen::RowVectorXd r(nn);
    for (int j = 0; j < nn; ++j) {
        double w = 2.0 / m * std::cos(M_PI * j);  // cos(pi j k / m) at k = m
        if (j == 0 || j == m) w *= 0.5;
        r(j) = w;
    }
    return r;
}

}  // namespace slick
