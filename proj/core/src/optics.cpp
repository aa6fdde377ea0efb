#include "aq/optics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace aq {

namespace {

constexpr double kGeometryTol = 1e-12;

// Unit-modulus rotor e^{i theta n} advanced by multiplication and reseeded
// from std::polar every kReseed steps so the phase error stays near ulp.
class Rotor {
public:
    Rotor(double theta, long long start) : theta_(theta), n_(start) { reseed(); }

    Complex value() const { return z_; }

    void advance() {
        ++n_;
        if (++since_seed_ == kReseed) {
            reseed();
        } else {
            z_ *= step_;
        }
    }

private:
    static constexpr int kReseed = 512;

    void reseed() {
        z_ = std::polar(1.0, theta_ * static_cast<double>(n_));
        step_ = std::polar(1.0, theta_);
        since_seed_ = 0;
    }

    double theta_;
    long long n_;
    Complex z_;
    Complex step_;
    int since_seed_ = 0;
};

void require_truncation(int truncation, OamIndex l) {
    if (truncation < 0 || std::abs(l.value) > truncation) {
        throw InvalidArgument("truncation " + std::to_string(truncation) +
                              " does not cover OAM index " + std::to_string(l.value));
    }
}

}  // namespace

std::string to_string(SlitIndex k) {
    if (k.twice % 2 == 0) return std::to_string(k.twice / 2);
    return std::to_string(k.twice) + "/2";
}

double sinc(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("sinc: non-finite argument");
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double wrap_angle(double phi) {
    double r = std::fmod(phi + kPi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    r -= kPi;
    // fmod can land exactly on +pi after the shift
    if (r >= kPi) r -= kTwoPi;
    return r;
}

ApertureMask::ApertureMask(int n_slits, double alpha, double beta, double offset)
    : n_slits_(n_slits), alpha_(alpha), beta_(beta), offset_(offset) {
    if (n_slits < 1) throw InvalidArgument("mask needs at least one slit");
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(offset)) {
        throw InvalidArgument("mask geometry must be finite");
    }
    if (!(alpha > 0.0)) throw InvalidArgument("slit width must be positive");
    if (alpha > kTwoPi * (1.0 + kGeometryTol)) throw InvalidArgument("slit width exceeds 2pi");
    if (alpha > beta * (1.0 + kGeometryTol)) {
        throw InvalidArgument("slit width " + std::to_string(alpha) + " exceeds separation " +
                              std::to_string(beta));
    }
    if (n_slits * beta > kTwoPi * (1.0 + kGeometryTol)) {
        throw InvalidArgument("slits do not fit on the circle");
    }
    alpha_ = std::min(alpha_, kTwoPi);
}

ApertureMask ApertureMask::single(double alpha, double offset) {
    return ApertureMask(1, alpha, kTwoPi, offset);
}

ApertureMask ApertureMask::tiled(int n_slits, double alpha, double offset) {
    if (n_slits < 1) throw InvalidArgument("mask needs at least one slit");
    return ApertureMask(n_slits, alpha, kTwoPi / n_slits, offset);
}

bool ApertureMask::on_grid(SlitIndex k) const {
    // 2k must have the parity of N - 1 and |k| <= (N - 1) / 2
    return (k.twice - (n_slits_ - 1)) % 2 == 0 && std::abs(k.twice) <= n_slits_ - 1;
}

void ApertureMask::require_on_grid(SlitIndex k) const {
    if (!on_grid(k)) {
        throw InvalidArgument("slit index " + to_string(k) + " is not on the grid of a " +
                              std::to_string(n_slits_) + "-slit mask");
    }
}

std::vector<SlitIndex> ApertureMask::slits() const {
    std::vector<SlitIndex> out;
    out.reserve(static_cast<std::size_t>(n_slits_));
    for (int n = 0; n < n_slits_; ++n) out.push_back(SlitIndex::from_zero_based(n, n_slits_));
    return out;
}

double ApertureMask::center(SlitIndex k) const {
    require_on_grid(k);
    return offset_ + k.value() * beta_;
}

std::vector<Arc> ApertureMask::support(SlitIndex k) const {
    const double c = center(k);
    if (alpha_ >= kTwoPi) return {Arc{-kPi, kPi}};
    const double lo = wrap_angle(c - 0.5 * alpha_);
    const double hi = lo + alpha_;
    if (hi <= kPi) return {Arc{lo, hi}};
    return {Arc{-kPi, hi - kTwoPi}, Arc{lo, kPi}};
}

std::vector<Arc> ApertureMask::support() const {
    std::vector<Arc> arcs;
    for (SlitIndex k : slits()) {
        for (const Arc& a : support(k)) arcs.push_back(a);
    }
    std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.lo < b.lo; });
    return arcs;
}

std::vector<double> ApertureMask::edges() const {
    std::vector<double> out;
    if (alpha_ >= kTwoPi) return out;
    for (SlitIndex k : slits()) {
        const double c = center(k);
        out.push_back(wrap_angle(c - 0.5 * alpha_));
        out.push_back(wrap_angle(c + 0.5 * alpha_));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool aperture_transmission(const ApertureMask& mask, SlitIndex k, double phi) {
    if (!std::isfinite(phi)) throw InvalidArgument("transmission: non-finite angle");
    const double c = mask.center(k);
    if (mask.alpha() >= kTwoPi) return true;
    return std::abs(wrap_angle(phi - c)) <= 0.5 * mask.alpha();
}

Complex ModeVector::at(int l_prime) const {
    if (std::abs(l_prime) > truncation) return {0.0, 0.0};
    return coeffs(l_prime + truncation);
}

ModeVector diffracted_mode(const ApertureMask& mask, SlitIndex k, OamIndex l, int truncation,
                           Normalization normalization) {
    require_truncation(truncation, l);
    const double c = mask.center(k);
    const double alpha = mask.alpha();
    const double scale = alpha / kTwoPi;

    ModeVector mode{l, k, truncation, CVector(2 * truncation + 1), Normalization::raw};
    for (int lp = -truncation; lp <= truncation; ++lp) {
        const int n = lp - l.value;
        mode.coeffs(lp + truncation) = scale * sinc(0.5 * alpha * n) * std::polar(1.0, -n * c);
    }
    if (normalization == Normalization::unit) {
        const double norm = mode.coeffs.norm();
        if (!(norm > 0.0)) throw NumericalDegeneracy("diffracted mode has zero norm");
        mode.coeffs /= norm;
        mode.normalization = Normalization::unit;
    }
    return mode;
}

Complex inner_product(const ModeVector& a, const ModeVector& b) {
    if (a.truncation != b.truncation) {
        throw InvalidArgument("inner product of modes with truncations " +
                              std::to_string(a.truncation) + " and " +
                              std::to_string(b.truncation));
    }
    Complex acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < a.coeffs.size(); ++i) acc += std::conj(a.coeffs(i)) * b.coeffs(i);
    return acc;
}

Complex mode_overlap_general(const ApertureMask& mask, SlitIndex j, OamIndex m, SlitIndex k,
                             OamIndex l, int truncation) {
    require_truncation(truncation, m);
    require_truncation(truncation, l);
    const double cj = mask.center(j);
    const double ck = mask.center(k);
    const double alpha = mask.alpha();
    const double scale = alpha / kTwoPi;

    Complex acc{0.0, 0.0};
    for (int lp = -truncation; lp <= truncation; ++lp) {
        const int nk = lp - l.value;
        const int nj = lp - m.value;
        const double amp = sinc(0.5 * alpha * nk) * sinc(0.5 * alpha * nj);
        acc += amp * std::polar(1.0, nj * cj - nk * ck);
    }
    return scale * scale * acc;
}

double single_aperture_overlap_closed(OamIndex l, OamIndex m, double alpha) {
    if (!(alpha > 0.0) || alpha > kTwoPi * (1.0 + kGeometryTol)) {
        throw InvalidArgument("aperture width must lie in (0, 2pi]");
    }
    return sinc(0.5 * (l.value - m.value) * alpha);
}

bool OverlapMatrix::is_hermitian(double tol) const {
    if (entries.rows() != entries.cols()) return false;
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double OverlapMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(entries, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

OverlapMatrix overlap_matrix(std::span<const ModeVector> modes) {
    if (modes.empty()) throw InvalidArgument("overlap matrix of an empty mode list");
    const auto& first = modes.front();
    for (const auto& m : modes) {
        if (m.truncation != first.truncation || m.normalization != first.normalization) {
            throw InvalidArgument("modes disagree on truncation or normalization");
        }
    }
    const auto n = static_cast<Eigen::Index>(modes.size());
    OverlapMatrix out{CMatrix(n, n), {}};
    for (Eigen::Index i = 0; i < n; ++i) {
        out.labels.push_back(ModeLabel{modes[i].base_l, modes[i].slit});
        out.entries(i, i) = inner_product(modes[i], modes[i]).real();
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Complex v = inner_product(modes[i], modes[j]);
            out.entries(i, j) = v;
            out.entries(j, i) = std::conj(v);
        }
    }
    return out;
}

OverlapMatrix single_aperture_overlaps(int n, double alpha) {
    if (n < 0) throw InvalidArgument("negative OAM half-dimension");
    const int dim = 2 * n + 1;
    OverlapMatrix out{CMatrix(dim, dim), {}};
    for (int a = 0; a < dim; ++a) {
        out.labels.push_back(ModeLabel{OamIndex{a - n}, SlitIndex::from_integer(0)});
        for (int b = 0; b < dim; ++b) {
            out.entries(a, b) = single_aperture_overlap_closed(OamIndex{a - n}, OamIndex{b - n}, alpha);
        }
    }
    return out;
}

OverlapMatrix slit_mode_gram(const ApertureMask& mask, OamIndex l, int truncation,
                             TruncationWindow window) {
    const bool relative = window == TruncationWindow::relative;
    require_truncation(truncation, relative ? OamIndex{0} : l);
    const int n_slits = mask.n_slits();
    const double alpha = mask.alpha();
    const double beta = mask.beta();
    // n = l' - l runs over the kept window
    const long long shift = relative ? 0 : l.value;
    const long long n_lo = -static_cast<long long>(truncation) - shift;
    const long long n_hi = static_cast<long long>(truncation) - shift;

    // Entry (a, b) depends on the slit separation d = k_b - k_a only:
    //   (alpha/2pi)^2 * sum_n sinc^2(alpha n / 2) e^{-i n beta d}.
    // lag[d] holds that sum for d = 0..N-1.
    std::vector<Complex> lag(static_cast<std::size_t>(n_slits), Complex{0.0, 0.0});

    Rotor half_alpha(0.5 * alpha, n_lo);
    auto weight = [&](long long n) {
        const double x = 0.5 * alpha * static_cast<double>(n);
        if (n == 0) return 1.0;
        const double s = half_alpha.value().imag() / x;
        return s * s;
    };

    const bool tiled = n_slits > 1 && std::abs(n_slits * beta - kTwoPi) <= 1e-12;
    if (n_slits == 1) {
        double acc = 0.0;
        for (long long n = n_lo; n <= n_hi; ++n, half_alpha.advance()) acc += weight(n);
        lag[0] = acc;
    } else if (tiled) {
        // e^{-i n beta d} only depends on n mod N when N beta == 2pi.
        std::vector<double> residue(static_cast<std::size_t>(n_slits), 0.0);
        long long r = ((n_lo % n_slits) + n_slits) % n_slits;
        for (long long n = n_lo; n <= n_hi; ++n, half_alpha.advance()) {
            residue[static_cast<std::size_t>(r)] += weight(n);
            if (++r == n_slits) r = 0;
        }
        for (int d = 0; d < n_slits; ++d) {
            Complex acc{0.0, 0.0};
            for (int q = 0; q < n_slits; ++q) {
                const long long phase_index = (static_cast<long long>(q) * d) % n_slits;
                acc += residue[static_cast<std::size_t>(q)] *
                       std::polar(1.0, -kTwoPi * static_cast<double>(phase_index) / n_slits);
            }
            lag[static_cast<std::size_t>(d)] = acc;
        }
    } else {
        Rotor step(-beta, n_lo);
        for (long long n = n_lo; n <= n_hi; ++n, half_alpha.advance(), step.advance()) {
            const double w = weight(n);
            const Complex z = step.value();
            Complex zd{1.0, 0.0};
            for (int d = 0; d < n_slits; ++d) {
                lag[static_cast<std::size_t>(d)] += w * zd;
                zd *= z;
            }
        }
    }

    const double scale = (alpha / kTwoPi) * (alpha / kTwoPi);
    const auto slits = mask.slits();
    OverlapMatrix out{CMatrix(n_slits, n_slits), {}};
    for (int a = 0; a < n_slits; ++a) {
        out.labels.push_back(ModeLabel{l, slits[static_cast<std::size_t>(a)]});
        for (int b = 0; b < n_slits; ++b) {
            const int d = b - a;
            const Complex g = lag[static_cast<std::size_t>(std::abs(d))];
            out.entries(a, b) = scale * (d >= 0 ? g : std::conj(g));
        }
    }
    return out;
}

int recommended_truncation(int max_abs_l, double alpha) {
    if (!(alpha > 0.0)) throw InvalidArgument("recommended truncation needs alpha > 0");
    const double extra = std::ceil(2000.0 / alpha);
    const double total = std::abs(max_abs_l) + extra;
    if (total > static_cast<double>(1 << 28)) {
        throw InvalidArgument("aperture " + std::to_string(alpha) +
                              " needs a truncation beyond the supported range");
    }
    return static_cast<int>(total);
}

}  // namespace aq
