#include "aq/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace aq {

namespace {

constexpr double kImagTol = 1e-10;
constexpr double kPurityOvershoot = 1e-9;
constexpr double kGramFloor = 1e-12;

int half_dimension(Eigen::Index dim) {
    if (dim < 1 || dim % 2 == 0) {
        throw InvalidArgument("OAM weights need an odd dimension 2n+1, got " + std::to_string(dim));
    }
    return static_cast<int>(dim / 2);
}

void require_matching(const CVector& c, const OverlapMatrix& b) {
    if (b.entries.rows() != b.entries.cols() || b.entries.rows() != c.size()) {
        throw InvalidArgument("overlap matrix size " + std::to_string(b.entries.rows()) +
                              " does not match " + std::to_string(c.size()) + " weights");
    }
    half_dimension(c.size());
}

// Accessor for the idler overlap of the pair (l, k) in index space.
std::function<Complex(Eigen::Index, Eigen::Index)> idler_view(const OverlapMatrix& b,
                                                              IdlerIndexing indexing) {
    const Eigen::Index last = b.entries.rows() - 1;
    if (indexing == IdlerIndexing::mirrored) {
        return [&b, last](Eigen::Index l, Eigen::Index k) { return b.entries(last - l, last - k); };
    }
    return [&b](Eigen::Index l, Eigen::Index k) { return b.entries(l, k); };
}

// Hermitian factor R with R^dagger R == G on the retained eigenspace.
struct GramFactor {
    CMatrix r;
    bool deflated = false;
};

GramFactor factor_gram(const OverlapMatrix& g) {
    if (g.entries.rows() != g.entries.cols() || g.entries.rows() == 0) {
        throw InvalidArgument("Gram matrix must be square and non-empty");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(g.entries);
    const RVector& lambda = eig.eigenvalues();
    const double top = lambda.maxCoeff();
    if (!(top > 0.0)) throw NumericalDegeneracy("Gram matrix has no positive eigenvalue");

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) > kGramFloor * top) keep.push_back(i);
    }
    GramFactor out;
    out.deflated = static_cast<Eigen::Index>(keep.size()) < lambda.size();
    out.r.resize(static_cast<Eigen::Index>(keep.size()), g.entries.cols());
    for (std::size_t row = 0; row < keep.size(); ++row) {
        const Eigen::Index i = keep[row];
        out.r.row(static_cast<Eigen::Index>(row)) =
            std::sqrt(lambda(i)) * eig.eigenvectors().col(i).adjoint();
    }
    return out;
}

EntanglementReport report_from_weights(RVector w) {
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::max(w(i), 0.0);
    const double total = w.sum();
    if (!(total > 0.0)) throw DegenerateState("state has zero norm");

    std::vector<double> spectrum(w.data(), w.data() + w.size());
    std::sort(spectrum.begin(), spectrum.end(), std::greater<>());
    for (double& x : spectrum) x /= total;

    // 1 - sum p_i^2 == 2 sum_{i<j} p_i p_j, summed without cancellation
    double linear_entropy = 0.0;
    double tail = 0.0;
    for (auto it = spectrum.rbegin(); it != spectrum.rend(); ++it) {
        linear_entropy += *it * tail;
        tail += *it;
    }
    linear_entropy *= 2.0;

    EntanglementReport out;
    out.schmidt_spectrum = std::move(spectrum);
    out.purity = 1.0 - linear_entropy;
    out.concurrence = concurrence(out.purity);
    return out;
}

}  // namespace

int EntanglementReport::effective_rank() const {
    return static_cast<int>(std::count_if(schmidt_spectrum.begin(), schmidt_spectrum.end(),
                                          [](double x) { return x > kRankThreshold; }));
}

BiphotonState oam_biphoton(const CVector& c) {
    const int n = half_dimension(c.size());
    const Eigen::Index dim = c.size();
    BiphotonState s;
    s.coeffs = CMatrix::Zero(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) s.coeffs(a, dim - 1 - a) = c(a);
    s.input_coeffs = c;
    s.truncation = n;
    s.normalized = std::abs(c.squaredNorm() - 1.0) <= 1e-12;
    return s;
}

CVector uniform_weights(int dimension) {
    if (dimension < 1) throw InvalidArgument("dimension must be positive");
    return CVector::Constant(dimension, Complex{1.0 / std::sqrt(static_cast<double>(dimension)), 0.0});
}

double normalization_constant(const CVector& c, const OverlapMatrix& b, IdlerIndexing indexing) {
    require_matching(c, b);
    const auto idler = idler_view(b, indexing);
    const Eigen::Index dim = c.size();
    Complex acc{0.0, 0.0};
    for (Eigen::Index l = 0; l < dim; ++l) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            acc += std::conj(c(l)) * c(k) * b.entries(l, k) * idler(l, k);
        }
    }
    if (std::abs(acc.imag()) > kImagTol || !(acc.real() > 0.0)) {
        throw NumericalDegeneracy("normalization constant is not real and positive: (" +
                                  std::to_string(acc.real()) + ", " + std::to_string(acc.imag()) +
                                  ")");
    }
    return acc.real();
}

CMatrix reduced_density(const CVector& c, const OverlapMatrix& b, IdlerIndexing indexing) {
    const double norm = normalization_constant(c, b, indexing);
    const auto idler = idler_view(b, indexing);
    const Eigen::Index dim = c.size();
    const CVector ct = c / std::sqrt(norm);
    CMatrix rho(dim, dim);
    for (Eigen::Index l = 0; l < dim; ++l) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            // Tr over the idler contracts <psi_{-k}|psi_{-l}>
            rho(l, k) = ct(l) * std::conj(ct(k)) * idler(k, l);
        }
    }
    return rho;
}

Complex physical_trace(const CMatrix& rho, const OverlapMatrix& b) {
    if (rho.rows() != b.entries.rows() || rho.cols() != b.entries.cols()) {
        throw InvalidArgument("density and overlap matrices differ in size");
    }
    Complex acc{0.0, 0.0};
    for (Eigen::Index l = 0; l < rho.rows(); ++l) {
        for (Eigen::Index k = 0; k < rho.cols(); ++k) acc += rho(l, k) * b.entries(k, l);
    }
    return acc;
}

double purity(const CVector& c, const OverlapMatrix& b, IdlerIndexing indexing) {
    const double norm = normalization_constant(c, b, indexing);
    const auto idler = idler_view(b, indexing);
    const Eigen::Index dim = c.size();
    const CMatrix& g = b.entries;

    Complex acc{0.0, 0.0};
    for (Eigen::Index l = 0; l < dim; ++l) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            const Complex lk = std::conj(c(l)) * c(k) * idler(l, k);
            for (Eigen::Index p = 0; p < dim; ++p) {
                const Complex lkp = lk * std::conj(c(p)) * g(p, k);
                for (Eigen::Index q = 0; q < dim; ++q) {
                    acc += lkp * c(q) * idler(p, q) * g(l, q);
                }
            }
        }
    }
    const Complex value = acc / (norm * norm);
    if (std::abs(value.imag()) > kImagTol || value.real() < -kPurityOvershoot ||
        value.real() > 1.0 + kPurityOvershoot) {
        throw TruncationInsufficient("purity (" + std::to_string(value.real()) + ", " +
                                     std::to_string(value.imag()) + ") is outside [0, 1]");
    }
    return std::clamp(value.real(), 0.0, 1.0);
}

double purity_symmetric(const OverlapMatrix& b) {
    const CMatrix& g = b.entries;
    const Eigen::Index dim = g.rows();
    if (g.cols() != dim) throw InvalidArgument("overlap matrix must be square");
    half_dimension(dim);
    for (Eigen::Index l = 0; l < dim; ++l) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            const Complex v = g(l, k);
            if (std::abs(v.imag()) > 1e-12 || std::abs(v - g(k, l)) > 1e-12 ||
                std::abs(v - g(dim - 1 - l, dim - 1 - k)) > 1e-12) {
                throw InvalidArgument("symmetric purity needs real b with b_lk == b_kl == b_{-l,-k}");
            }
        }
    }
    const RMatrix r = g.real();
    double num = 0.0;
    for (Eigen::Index l = 0; l < dim; ++l) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            for (Eigen::Index p = 0; p < dim; ++p) {
                const double lkp = r(l, k) * r(l, p);
                for (Eigen::Index q = 0; q < dim; ++q) num += lkp * r(p, q) * r(k, q);
            }
        }
    }
    const double den = r.cwiseAbs2().sum();
    const double value = num / (den * den);
    if (value > 1.0 + kPurityOvershoot) {
        throw TruncationInsufficient("symmetric purity exceeds 1: " + std::to_string(value));
    }
    return std::min(value, 1.0);
}

double concurrence(double purity) {
    if (!std::isfinite(purity) || purity > 1.0 + kPurityOvershoot || purity < -kPurityOvershoot) {
        throw InvalidArgument("purity " + std::to_string(purity) + " is outside [0, 1]");
    }
    const double p = std::clamp(purity, 0.0, 1.0);
    return std::sqrt(2.0 * (1.0 - p));
}

double normalized_concurrence(double concurrence, int dimension) {
    if (dimension < 2) throw InvalidArgument("normalized concurrence needs dimension >= 2");
    return concurrence * std::sqrt(dimension / (2.0 * (dimension - 1)));
}

EntanglementReport report_from_singular_values(const RVector& singular_values) {
    return report_from_weights(singular_values.cwiseAbs2());
}

EntanglementReport schmidt_oracle(const BiphotonState& state, const OverlapMatrix& b_signal,
                                  const OverlapMatrix& b_idler) {
    if (state.coeffs.rows() != b_signal.size() || state.coeffs.cols() != b_idler.size()) {
        throw InvalidArgument("coefficient matrix does not match the Gram matrices");
    }
    const GramFactor fs = factor_gram(b_signal);
    const GramFactor fi = factor_gram(b_idler);
    const CMatrix x = fs.r * state.coeffs * fi.r.transpose();
    Eigen::JacobiSVD<CMatrix> svd(x);

    EntanglementReport out = report_from_singular_values(svd.singularValues());
    out.truncation_used = state.truncation;
    out.deflated = fs.deflated || fi.deflated;
    return out;
}

AngularBiphoton oam_angular_state(const CVector& c, double alpha, double offset) {
    const int n = half_dimension(c.size());
    const ApertureMask mask = ApertureMask::single(alpha, offset);
    const SlitIndex k0 = SlitIndex::from_integer(0);
    const Complex amp{1.0 / std::sqrt(mask.alpha()), 0.0};

    AngularBiphoton s;
    for (int l = -n; l <= n; ++l) {
        s.signal.push_back(AngularMode{mask.support(k0), OamIndex{l}, amp});
        s.idler.push_back(AngularMode{mask.support(k0), OamIndex{l}, amp});
    }
    s.coeffs = oam_biphoton(c).coeffs;
    return s;
}

namespace {

EntanglementReport grid_spectrum(const AngularBiphoton& state, int cells) {
    auto side_factor = [cells](const std::vector<AngularMode>& modes) {
        const auto cuts = breakpoints_of(modes);
        const AngularGrid grid(cells, cuts);
        const CMatrix samples = grid.sample(modes);
        Eigen::HouseholderQR<CMatrix> qr(samples);
        const Eigen::Index k = std::min(samples.rows(), samples.cols());
        return CMatrix(qr.matrixQR().topRows(k).triangularView<Eigen::Upper>());
    };
    const CMatrix rs = side_factor(state.signal);
    const CMatrix ri = side_factor(state.idler);
    const CMatrix x = rs * state.coeffs * ri.transpose();
    // one-photon correlation matrix of the signal in the sampled orthonormal frame
    const CMatrix corr = x * x.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(corr, Eigen::EigenvaluesOnly);
    return report_from_weights(eig.eigenvalues());
}

}  // namespace

EntanglementReport grid_oracle(const AngularBiphoton& state, int grid_points) {
    if (grid_points < (1 << 12) || (grid_points & (grid_points - 1)) != 0) {
        throw InvalidArgument("grid oracle needs a power-of-two grid of at least 4096 points");
    }
    if (state.coeffs.rows() != static_cast<Eigen::Index>(state.signal.size()) ||
        state.coeffs.cols() != static_cast<Eigen::Index>(state.idler.size())) {
        throw InvalidArgument("coefficient matrix does not match the sampled modes");
    }
    EntanglementReport out = grid_spectrum(state, grid_points);
    const EntanglementReport fine = grid_spectrum(state, 2 * grid_points);
    out.converged = std::abs(fine.concurrence - out.concurrence) <= 1e-6;
    out.truncation_used = 0;
    return out;
}

}  // namespace aq
