#pragma once

#include "aq/angular_grid.hpp"
#include "aq/optics.hpp"

#include <optional>
#include <vector>

namespace aq {

/// Pure two-photon state sum_ab coeffs(a, b) |s_a>|i_b> over signal and idler
/// mode families that need not be orthonormal.
struct BiphotonState {
    CMatrix coeffs;
    /// Pre-diffraction weights c_l, l = -n..n, when the state came from one.
    std::optional<CVector> input_coeffs;
    int truncation = 0;
    bool normalized = false;
};

/// sum_l c_l |psi_l>|psi_{-l}>, with both photons indexed by l = -n..n.
BiphotonState oam_biphoton(const CVector& c);

/// Uniform weights 1/sqrt(D) over D entries.
CVector uniform_weights(int dimension);

struct EntanglementReport {
    double purity = 1.0;
    double concurrence = 0.0;
    std::vector<double> schmidt_spectrum;  // descending, sums to 1
    int truncation_used = 0;
    bool converged = true;
    bool deflated = false;

    /// Schmidt weights above kRankThreshold.
    int effective_rank() const;

    static constexpr double kRankThreshold = 1e-9;
};

/// How the idler overlaps b_{-l,-k} are read from a Gram matrix indexed by l.
enum class IdlerIndexing {
    mirrored,  // b_{-l,-k}: the idler occupies |psi_{-l}>
    same,      // b_{l,k}: valid only when b_{lk} == b_{-l-k}
};

/// <psi|psi> for sum_l c_l |psi_l>|psi_{-l}>.
double normalization_constant(const CVector& c, const OverlapMatrix& b,
                              IdlerIndexing indexing = IdlerIndexing::mirrored);

/// One-photon reduced state as a matrix over the non-orthogonal family
/// {|psi_l>}: rho = sum_lk R(l, k) |psi_l><psi_k|.
CMatrix reduced_density(const CVector& c, const OverlapMatrix& b,
                        IdlerIndexing indexing = IdlerIndexing::mirrored);

/// Tr rho for a reduced_density() result: sum_lk R(l, k) b(k, l).
Complex physical_trace(const CMatrix& rho, const OverlapMatrix& b);

/// Tr rho^2 by the explicit quadruple sum over (l, k, p, q).
double purity(const CVector& c, const OverlapMatrix& b,
              IdlerIndexing indexing = IdlerIndexing::mirrored);

/// Tr rho^2 for uniform weights when b is real, symmetric and b_{lk} == b_{-l-k}.
double purity_symmetric(const OverlapMatrix& b);

/// sqrt(2 (1 - purity)); purities up to 1 + 1e-9 are clamped to 1.
double concurrence(double purity);

/// Rescales a concurrence by sqrt(D / (2 (D - 1))) so a maximally entangled
/// rank-D state maps to 1. Presentation only.
double normalized_concurrence(double concurrence, int dimension);

/// Report built from (unnormalized) Schmidt coefficients.
EntanglementReport report_from_singular_values(const RVector& singular_values);

/// Orthonormalizes both mode families through their Gram matrices and reads
/// the Schmidt spectrum off the singular values of the transformed
/// coefficient matrix. Gram eigenvalues below 1e-12 are deflated.
EntanglementReport schmidt_oracle(const BiphotonState& state, const OverlapMatrix& b_signal,
                                  const OverlapMatrix& b_idler);

/// Two-photon wavefunction given directly in the angle representation.
struct AngularBiphoton {
    std::vector<AngularMode> signal;
    std::vector<AngularMode> idler;
    CMatrix coeffs;  // signal.size() x idler.size()
};

/// sum_l c_l psi_l(phi_s) psi_{-l}(phi_i) behind identical single apertures.
AngularBiphoton oam_angular_state(const CVector& c, double alpha, double offset = 0.0);

/// Schmidt spectrum of the sampled joint wavefunction on a uniform angular
/// grid of `grid_points` cells (a power of two, at least 2^12). The run is
/// repeated on twice the grid; `converged` is false when the concurrence
/// moves by more than 1e-6.
EntanglementReport grid_oracle(const AngularBiphoton& state, int grid_points);

}  // namespace aq
