#pragma once

// Two-photon states behind N x M angular-slit masks, starting from the
// product input |l0>_s |-l0>_i, and their entanglement as a function of the
// slit width.

#include "aq/entanglement.hpp"
#include "aq/optics.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aq {

/// How strongly the signal passing slit k is correlated with the idler
/// passing slit k'.
enum class CorrelationModel {
    constant,  // every slit pair contributes equally
    overlap,   // weight = |signal slit k  intersect  idler slit k'| / alpha
    diagonal,  // only matching labels k == k' (needs N == M)
};

std::string_view to_string(CorrelationModel model);
CorrelationModel parse_correlation_model(std::string_view name);

struct PathConfig {
    int n_signal = 2;
    int n_idler = 2;
    double alpha = 0.1;
    std::optional<double> beta_signal;  // default 2pi / n_signal
    std::optional<double> beta_idler;   // default 2pi / n_idler
    int l0 = 0;
    CorrelationModel model = CorrelationModel::overlap;
    std::optional<int> truncation;      // default recommended_truncation(l0, alpha)

    double signal_separation() const;
    double idler_separation() const;
    int resolved_truncation() const;
};

std::pair<ApertureMask, ApertureMask> build_masks(const PathConfig& config);

struct CorrelationWeights {
    CMatrix weights;  // n_signal x n_idler, slits in centered-grid order
};

CorrelationWeights correlation_weights(CorrelationModel model, const ApertureMask& signal,
                                       const ApertureMask& idler);

/// Dense coefficient matrix c(l', l'') over |l'|, |l''| <= truncation in the
/// orthonormal OAM basis, normalized to unit Frobenius norm. Intended for
/// small truncations; large ones are rejected.
BiphotonState path_coefficients(const PathConfig& config, const CorrelationWeights& weights);

/// The same state kept in factored form: coefficients over the slit-mode
/// families together with their Gram matrices.
struct PathState {
    BiphotonState slit_coeffs;
    OverlapMatrix gram_signal;
    OverlapMatrix gram_idler;
};

/// The Gram matrices keep |l' - l| <= truncation around each photon's input
/// OAM, so the result does not depend on l0.
PathState path_state(const PathConfig& config, int truncation);

/// Untruncated angle-representation of the same state.
AngularBiphoton path_angular_state(const PathConfig& config);

/// sum_{k,k'} integral over [-pi, pi) of e^{i(m-l)phi} A_k(phi) A_k'(phi),
/// with A_k from the signal mask and A_k' from the idler mask.
Complex generalized_overlap(const ApertureMask& signal, const ApertureMask& idler, OamIndex l,
                            OamIndex m);

/// Concurrence of one configuration through the factored Schmidt route, with
/// a second run at twice the truncation to set `converged`. Without an
/// explicit truncation, recommended_truncation(0, alpha) is used.
EntanglementReport path_entanglement(const PathConfig& config);

/// Largest concurrence change allowed when the truncation is doubled.
inline constexpr double kTruncationTolerance = 5e-4;

struct PathPoint {
    double alpha = 0.0;
    EntanglementReport report;
    std::string notes;
    bool degenerate = false;
    std::optional<std::string> failure;
};

/// Geometry actually simulated at `alpha`. When alpha exceeds a mask's slit
/// separation the slits merge: that mask is rebuilt with
/// max(1, floor(2pi / alpha)) evenly spread slits. `note` records the event.
struct EffectiveGeometry {
    PathConfig config;
    std::string note;
};

EffectiveGeometry effective_geometry(const PathConfig& config, double alpha);

/// Evaluates every alpha independently (up to `parallelism` workers) and
/// returns the points in ascending alpha order. Per-point failures are
/// recorded, not thrown.
std::vector<PathPoint> path_concurrence_curve(const PathConfig& config, std::span<const double> alphas,
                                              int parallelism = 1);

}  // namespace aq
