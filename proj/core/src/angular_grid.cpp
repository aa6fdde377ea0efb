#include "aq/angular_grid.hpp"

#include <algorithm>
#include <cmath>

namespace aq {

Complex AngularMode::operator()(double phi) const {
    for (const Arc& a : support) {
        if (a.contains(phi)) return amplitude * std::polar(1.0, l.value * phi);
    }
    return {0.0, 0.0};
}

AngularMode angular_mode(const ApertureMask& mask, SlitIndex k, OamIndex l) {
    return AngularMode{mask.support(k), l, Complex{1.0 / std::sqrt(kTwoPi), 0.0}};
}

AngularGrid::AngularGrid(int cells, std::span<const double> breakpoints) : cells_(cells) {
    if (cells < 1) throw InvalidArgument("angular grid needs at least one cell");

    std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
    for (double& c : cuts) c = std::clamp(c, -kPi, kPi);
    std::sort(cuts.begin(), cuts.end());

    const double h = kTwoPi / cells;
    nodes_.reserve(static_cast<std::size_t>(cells) + cuts.size());
    weights_.reserve(nodes_.capacity());

    auto cut = cuts.begin();
    for (int i = 0; i < cells; ++i) {
        double lo = -kPi + i * h;
        const double hi = (i + 1 == cells) ? kPi : -kPi + (i + 1) * h;
        while (cut != cuts.end() && *cut <= lo) ++cut;
        while (cut != cuts.end() && *cut < hi) {
            if (*cut > lo) {
                nodes_.push_back(0.5 * (lo + *cut));
                weights_.push_back(*cut - lo);
                lo = *cut;
            }
            ++cut;
        }
        nodes_.push_back(0.5 * (lo + hi));
        weights_.push_back(hi - lo);
    }
}

CMatrix AngularGrid::sample(std::span<const AngularMode> modes) const {
    const auto rows = static_cast<Eigen::Index>(nodes_.size());
    CMatrix out(rows, static_cast<Eigen::Index>(modes.size()));
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        const AngularMode& m = modes[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < rows; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            out(i, j) = std::sqrt(weights_[idx]) * m(nodes_[idx]);
        }
    }
    return out;
}

Complex AngularGrid::overlap(const AngularMode& a, const AngularMode& b) const {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        acc += weights_[i] * std::conj(a(nodes_[i])) * b(nodes_[i]);
    }
    return acc;
}

std::vector<double> breakpoints_of(std::span<const AngularMode> modes) {
    std::vector<double> out;
    for (const AngularMode& m : modes) {
        for (const Arc& a : m.support) {
            out.push_back(a.lo);
            out.push_back(a.hi);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Complex quadrature_overlap(const ApertureMask& mask, SlitIndex j, OamIndex m, SlitIndex k,
                           OamIndex l, int cells) {
    const AngularMode modes[] = {angular_mode(mask, j, m), angular_mode(mask, k, l)};
    const auto cuts = breakpoints_of(modes);
    const AngularGrid grid(cells, cuts);
    return grid.overlap(modes[0], modes[1]);
}

}  // namespace aq
