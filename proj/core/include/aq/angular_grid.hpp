#pragma once

// Position-space (azimuthal angle) representation of diffracted modes and the
// quadrature used to cross-check mode-space results.

#include "aq/optics.hpp"

#include <span>
#include <vector>

namespace aq {

/// amplitude * e^{i l phi} on the union of `support`, zero elsewhere.
struct AngularMode {
    std::vector<Arc> support;
    OamIndex l;
    Complex amplitude{1.0, 0.0};

    Complex operator()(double phi) const;
};

/// The position-space image of diffracted_mode(mask, k, l, *, raw):
/// e^{i l phi} / sqrt(2 pi) restricted to slit k.
AngularMode angular_mode(const ApertureMask& mask, SlitIndex k, OamIndex l);

/// Midpoint rule on `cells` uniform cells over [-pi, pi). Cells containing a
/// breakpoint are split there, so piecewise-smooth integrands whose kinks sit
/// on breakpoints keep second-order accuracy.
class AngularGrid {
public:
    AngularGrid(int cells, std::span<const double> breakpoints = {});

    int cells() const { return cells_; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

    /// Column j holds sqrt(w_i) * modes[j](phi_i), so that
    /// samples.adjoint() * samples approximates the Gram matrix.
    CMatrix sample(std::span<const AngularMode> modes) const;

    /// Quadrature of conj(a) * b.
    Complex overlap(const AngularMode& a, const AngularMode& b) const;

private:
    int cells_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Every arc endpoint of the given modes, for use as grid breakpoints.
std::vector<double> breakpoints_of(std::span<const AngularMode> modes);

/// Quadrature of <mode(j, m)|mode(k, l)> for the raw modes of the mask.
Complex quadrature_overlap(const ApertureMask& mask, SlitIndex j, OamIndex m, SlitIndex k,
                           OamIndex l, int cells);

}  // namespace aq
