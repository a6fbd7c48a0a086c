#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace dirac {

/// Reference Gauss-Legendre rule on [-1, 1] with the local operators used for
/// panel-wise spectral integration and differentiation.
struct ReferencePanel {
    std::vector<double> nodes;    ///< ascending
    std::vector<double> weights;
    /// integrate_left[i*m + j] = integral of l_j over [-1, nodes[i]]
    std::vector<double> integrate_left;
    /// differentiate[i*m + j] = l_j'(nodes[i])
    std::vector<double> differentiate;
    std::vector<double> at_left;   ///< l_j(-1)
    std::vector<double> at_right;  ///< l_j(+1)

    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
void gauss_legendre(std::size_t count, std::vector<double>& nodes, std::vector<double>& weights);

ReferencePanel make_reference_panel(std::size_t nodes_per_panel);

/// Composite Gauss-Legendre discretization of [0, pi] with equal-width panels.
class Grid {
public:
    static constexpr std::size_t kDefaultNodesPerPanel = 16;
    static constexpr std::size_t kMinPanels = 64;

    Grid(std::size_t panel_count, std::size_t nodes_per_panel = kDefaultNodesPerPanel);

    /// Panel count max(64, 4*ceil(|Re lambda| + |Im lambda|)), enough to
    /// resolve e^{+-2i lambda x} on every panel.
    static std::shared_ptr<const Grid> for_spectral_bound(double max_abs_re, double max_abs_im,
                                                          std::size_t nodes_per_panel = kDefaultNodesPerPanel);
    static std::size_t panels_for_bound(double max_abs_re, double max_abs_im);

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t panel_count() const { return panel_count_; }
    std::size_t nodes_per_panel() const { return reference_.size(); }
    double panel_width() const { return width_; }
    double panel_start(std::size_t panel) const { return width_ * static_cast<double>(panel); }
    const ReferencePanel& reference() const { return reference_; }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.panel_count_ == b.panel_count_ && a.reference_.size() == b.reference_.size();
    }

private:
    std::size_t panel_count_;
    double width_;
    ReferencePanel reference_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace dirac
