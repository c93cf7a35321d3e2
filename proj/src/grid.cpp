#include "semisep/types.hpp"

#include <algorithm>
#include <numeric>

namespace semisep {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void legendre_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

Grid::Grid(std::vector<double> nodes, std::vector<double> weights, QuadratureRule rule,
           double lo, double hi)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), rule_(rule) {
    if (nodes_.size() < 2 || nodes_.size() != weights_.size())
        throw std::invalid_argument("Grid: need at least two nodes with matching weights");
    for (std::size_t k = 1; k < nodes_.size(); ++k)
        if (!(nodes_[k] > nodes_[k - 1]))
            throw std::invalid_argument("Grid: nodes must be strictly increasing");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0)) throw std::invalid_argument("Grid: weights must be positive");
        sum += w;
    }
    const double len = hi - lo;
    if (std::abs(sum - len) > 1e-12 * std::max(1.0, std::abs(len)))
        throw std::invalid_argument("Grid: weights do not sum to the interval length");
}

Grid Grid::trapezoid(double a, double b, int n) {
    return trapezoid_with_breakpoints(a, b, n, {});
}

Grid Grid::trapezoid_with_breakpoints(double a, double b, int n,
                                      const std::vector<double>& breakpoints) {
    if (!(a < b)) throw std::invalid_argument("Grid: need a < b");
    if (n < 2) throw std::invalid_argument("Grid: need at least 2 nodes");

    std::vector<double> edges{a, b};
    for (double p : breakpoints)
        if (p > a && p < b) edges.push_back(p);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [&](double u, double v) { return std::abs(u - v) < 1e-14 * (b - a); }),
                edges.end());

    const int segments = static_cast<int>(edges.size()) - 1;
    int cells = n - 1;
    if (cells < segments) cells = segments;

    // distribute cells proportionally to segment length, at least one per segment
    std::vector<int> per(segments, 1);
    int assigned = segments;
    for (int s = 0; s < segments && assigned < cells; ++s) {
        const double frac = (edges[s + 1] - edges[s]) / (b - a);
        int extra = static_cast<int>(std::lround(frac * (cells - segments)));
        extra = std::min(extra, cells - assigned);
        per[s] += extra;
        assigned += extra;
    }
    per[segments - 1] += cells - assigned;

    std::vector<double> nodes;
    nodes.reserve(cells + 1);
    nodes.push_back(edges[0]);
    for (int s = 0; s < segments; ++s) {
        const double h = (edges[s + 1] - edges[s]) / per[s];
        for (int k = 1; k <= per[s]; ++k) nodes.push_back(edges[s] + k * h);
        nodes.back() = edges[s + 1];  // exact breakpoint
    }

    std::vector<double> weights(nodes.size(), 0.0);
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        const double h = nodes[k] - nodes[k - 1];
        weights[k - 1] += h / 2.0;
        weights[k] += h / 2.0;
    }
    return Grid(std::move(nodes), std::move(weights), QuadratureRule::Trapezoid, a, b);
}

Grid Grid::gauss_legendre(double a, double b, int panels, int nodes_per_panel) {
    if (!(a < b)) throw std::invalid_argument("Grid: need a < b");
    if (panels < 1 || nodes_per_panel < 2)
        throw std::invalid_argument("Grid: need >=1 panel and >=2 nodes per panel");
    std::vector<double> xr, wr;
    legendre_rule(nodes_per_panel, xr, wr);
    std::vector<double> nodes, weights;
    nodes.reserve(panels * nodes_per_panel);
    weights.reserve(panels * nodes_per_panel);
    const double hp = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * hp;
        for (int j = 0; j < nodes_per_panel; ++j) {
            nodes.push_back(mid + 0.5 * hp * xr[j]);
            weights.push_back(0.5 * hp * wr[j]);
        }
    }
    return Grid(std::move(nodes), std::move(weights), QuadratureRule::GaussLegendrePanels, a, b);
}

double Grid::max_spacing() const {
    double h = 0.0;
    for (std::size_t k = 1; k < nodes_.size(); ++k) h = std::max(h, nodes_[k] - nodes_[k - 1]);
    return h;
}

int Grid::nearest_node(double x) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
    if (it == nodes_.begin()) return 0;
    if (it == nodes_.end()) return size() - 1;
    const int hi = static_cast<int>(it - nodes_.begin());
    return (x - nodes_[hi - 1] <= nodes_[hi] - x) ? hi - 1 : hi;
}

bool Grid::same_layout(const Grid& other) const {
    if (rule_ != other.rule_ || nodes_.size() != other.nodes_.size()) return false;
    return nodes_ == other.nodes_;
}

}  // namespace semisep
