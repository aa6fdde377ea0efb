#pragma once

#include "aq/types.hpp"

#include <span>
#include <vector>

namespace aq {

/// sin(x)/x with the removable singularity filled in (sinc(0) == 1).
double sinc(double x);

/// Reduces an angle to [-pi, pi).
double wrap_angle(double phi);

/// Closed angular interval [lo, hi] with -pi <= lo <= hi <= pi.
struct Arc {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double phi) const { return lo <= phi && phi <= hi; }
};

/// Binary mask made of n_slits wedge apertures of width alpha whose centers
/// sit at offset + k * beta for k on the centered grid.
class ApertureMask {
public:
    ApertureMask(int n_slits, double alpha, double beta, double offset = 0.0);

    /// Single wedge of width alpha centered at offset.
    static ApertureMask single(double alpha, double offset = 0.0);

    /// n_slits wedges evenly spread over the circle (beta = 2 pi / n_slits).
    static ApertureMask tiled(int n_slits, double alpha, double offset = 0.0);

    int n_slits() const { return n_slits_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double offset() const { return offset_; }

    bool on_grid(SlitIndex k) const;
    std::vector<SlitIndex> slits() const;

    /// Center angle of slit k (not wrapped).
    double center(SlitIndex k) const;

    /// Support of slit k as at most two arcs inside [-pi, pi].
    std::vector<Arc> support(SlitIndex k) const;

    /// Union of all slit supports.
    std::vector<Arc> support() const;

    /// Every slit edge, wrapped to [-pi, pi).
    std::vector<double> edges() const;

private:
    void require_on_grid(SlitIndex k) const;

    int n_slits_;
    double alpha_;
    double beta_;
    double offset_;
};

/// Transmission of slit k at angle phi: true iff phi lies in the slit support.
bool aperture_transmission(const ApertureMask& mask, SlitIndex k, double phi);

enum class Normalization { raw, unit };

/// Truncated OAM spectrum of a mode diffracted by one slit.
///
/// coeffs(i) holds the amplitude of |l'> with l' = i - truncation.
struct ModeVector {
    OamIndex base_l;
    SlitIndex slit;
    int truncation = 0;
    CVector coeffs;
    Normalization normalization = Normalization::raw;

    bool normalized() const { return normalization == Normalization::unit; }
    Complex at(int l_prime) const;
    double squared_norm() const { return coeffs.squaredNorm(); }
};

/// Spectrum of e^{i l phi} after transmission through slit k of the mask,
/// truncated to |l'| <= truncation. Raw modes carry the alpha / 2pi
/// prefactor; unit modes are rescaled to norm one.
ModeVector diffracted_mode(const ApertureMask& mask, SlitIndex k, OamIndex l, int truncation,
                           Normalization normalization = Normalization::raw);

/// <a|b> over the shared truncated basis. Throws if the truncations differ.
Complex inner_product(const ModeVector& a, const ModeVector& b);

/// Overlap between the raw modes (slit j, OAM m) and (slit k, OAM l),
/// summed over |l'| <= truncation in ascending order.
Complex mode_overlap_general(const ApertureMask& mask, SlitIndex j, OamIndex m, SlitIndex k,
                             OamIndex l, int truncation);

/// Overlap of unit-normalized single-aperture modes in the untruncated limit.
double single_aperture_overlap_closed(OamIndex l, OamIndex m, double alpha);

struct ModeLabel {
    OamIndex l;
    SlitIndex slit;

    friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

/// Gram matrix of a family of modes: entries(i, j) = <mode_i|mode_j>.
struct OverlapMatrix {
    CMatrix entries;
    std::vector<ModeLabel> labels;

    Eigen::Index size() const { return entries.rows(); }
    bool is_hermitian(double tol = 1e-12) const;
    double min_eigenvalue() const;
};

OverlapMatrix overlap_matrix(std::span<const ModeVector> modes);

/// Closed-form Gram matrix of the OAM modes l = -n..n behind one centered
/// aperture of width alpha: entries(l, k) = sinc((l - k) alpha / 2).
OverlapMatrix single_aperture_overlaps(int n, double alpha);

/// Which outgoing OAM values a truncated sum keeps.
enum class TruncationWindow {
    absolute,  // |l'| <= truncation
    relative,  // |l' - l| <= truncation, independent of where l sits
};

/// Gram matrix of the raw modes with OAM l diffracted by each slit of the
/// mask, ordered as mask.slits(). Equivalent to mode_overlap_general over
/// all slit pairs, computed in a single pass over the truncated basis.
OverlapMatrix slit_mode_gram(const ApertureMask& mask, OamIndex l, int truncation,
                             TruncationWindow window = TruncationWindow::absolute);

/// Truncation max_abs_l + ceil(2000 / alpha) used when none is given.
int recommended_truncation(int max_abs_l, double alpha);

}  // namespace aq
