#include "dirac/function_space/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dirac {

namespace {

// P_0..P_{count-1} at x
std::vector<double> legendre_values(std::size_t count, double x) {
    std::vector<double> p(count);
    if (count == 0) return p;
    p[0] = 1.0;
    if (count > 1) p[1] = x;
    for (std::size_t k = 2; k < count; ++k) {
        const double kk = static_cast<double>(k);
        p[k] = ((2.0 * kk - 1.0) * x * p[k - 1] - (kk - 1.0) * p[k - 2]) / kk;
    }
    return p;
}

}  // namespace

void gauss_legendre(std::size_t count, std::vector<double>& nodes, std::vector<double>& weights) {
    if (count == 0) throw std::invalid_argument("gauss_legendre: count must be positive");
    nodes.assign(count, 0.0);
    weights.assign(count, 0.0);
    const double n = static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double derivative = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= count; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            if (count == 1) {
                p1 = x;
                p0 = 1.0;
            }
            derivative = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / derivative;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes[count - 1 - i] = x;
        weights[count - 1 - i] = 2.0 / ((1.0 - x * x) * derivative * derivative);
    }
}

ReferencePanel make_reference_panel(std::size_t m) {
    ReferencePanel ref;
    gauss_legendre(m, ref.nodes, ref.weights);
    const auto& s = ref.nodes;

    // Lagrange basis expanded in Legendre polynomials via discrete orthogonality:
    // l_j(x) = sum_k w_j P_k(s_j) (2k+1)/2 P_k(x).
    std::vector<std::vector<double>> p_at_node(m);
    std::vector<std::vector<double>> p_extended(m);
    for (std::size_t i = 0; i < m; ++i) {
        p_extended[i] = legendre_values(m + 1, s[i]);
        p_at_node[i] = std::vector<double>(p_extended[i].begin(), p_extended[i].begin() + static_cast<long>(m));
    }
    ref.integrate_left.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& pi = p_extended[i];
        for (std::size_t j = 0; j < m; ++j) {
            const auto& pj = p_at_node[j];
            double acc = s[i] + 1.0;
            for (std::size_t k = 1; k < m; ++k) acc += pj[k] * (pi[k + 1] - pi[k - 1]);
            ref.integrate_left[i * m + j] = 0.5 * ref.weights[j] * acc;
        }
    }

    // Barycentric weights for differentiation and endpoint evaluation.
    std::vector<double> bary(m, 1.0);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            if (k != j) bary[j] /= (s[j] - s[k]);
        }
    }
    ref.differentiate.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double diag = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            const double d = (bary[j] / bary[i]) / (s[i] - s[j]);
            ref.differentiate[i * m + j] = d;
            diag -= d;
        }
        ref.differentiate[i * m + i] = diag;
    }
    auto endpoint_row = [&](double x) {
        std::vector<double> row(m);
        double denom = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            row[j] = bary[j] / (x - s[j]);
            denom += row[j];
        }
        for (auto& v : row) v /= denom;
        return row;
    };
    ref.at_left = endpoint_row(-1.0);
    ref.at_right = endpoint_row(1.0);
    return ref;
}

Grid::Grid(std::size_t panel_count, std::size_t nodes_per_panel)
    : panel_count_(panel_count),
      width_(std::numbers::pi / static_cast<double>(panel_count)),
      reference_(make_reference_panel(nodes_per_panel)) {
    if (panel_count == 0) throw std::invalid_argument("Grid: panel_count must be positive");
    const std::size_t m = nodes_per_panel;
    nodes_.resize(panel_count * m);
    weights_.resize(panel_count * m);
    const double half = 0.5 * width_;
    for (std::size_t p = 0; p < panel_count; ++p) {
        const double mid = panel_start(p) + half;
        for (std::size_t j = 0; j < m; ++j) {
            nodes_[p * m + j] = mid + half * reference_.nodes[j];
            weights_[p * m + j] = half * reference_.weights[j];
        }
    }
}

std::size_t Grid::panels_for_bound(double max_abs_re, double max_abs_im) {
    const double bound = std::ceil(std::abs(max_abs_re) + std::abs(max_abs_im));
    return std::max<std::size_t>(kMinPanels, 4 * static_cast<std::size_t>(bound));
}

std::shared_ptr<const Grid> Grid::for_spectral_bound(double max_abs_re, double max_abs_im,
                                                     std::size_t nodes_per_panel) {
    return std::make_shared<const Grid>(panels_for_bound(max_abs_re, max_abs_im), nodes_per_panel);
}

}  // namespace dirac
