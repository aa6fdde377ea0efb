#include "aq/path.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>

namespace aq {

namespace {

constexpr long long kDenseLimit = 1LL << 22;

double intersection_length(const std::vector<Arc>& a, const std::vector<Arc>& b) {
    double total = 0.0;
    for (const Arc& x : a) {
        for (const Arc& y : b) total += std::max(0.0, std::min(x.hi, y.hi) - std::max(x.lo, y.lo));
    }
    return total;
}

// integral of e^{i q phi} over [lo, hi]
Complex arc_fourier(const Arc& arc, int q) {
    if (q == 0) return {arc.length(), 0.0};
    const Complex iq{0.0, static_cast<double>(q)};
    return (std::polar(1.0, q * arc.hi) - std::polar(1.0, q * arc.lo)) / iq;
}

std::string sanitize(std::string text) {
    std::replace(text.begin(), text.end(), ',', ' ');
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

void append_note(std::string& notes, const std::string& token) {
    if (token.empty()) return;
    if (!notes.empty()) notes += ';';
    notes += token;
}

}  // namespace

std::string_view to_string(CorrelationModel model) {
    switch (model) {
        case CorrelationModel::constant: return "constant";
        case CorrelationModel::overlap: return "overlap";
        case CorrelationModel::diagonal: return "diagonal";
    }
    return "unknown";
}

CorrelationModel parse_correlation_model(std::string_view name) {
    if (name == "constant") return CorrelationModel::constant;
    if (name == "overlap") return CorrelationModel::overlap;
    if (name == "diagonal") return CorrelationModel::diagonal;
    throw InvalidArgument("unknown correlation model '" + std::string(name) + "'");
}

double PathConfig::signal_separation() const {
    if (n_signal < 1) throw InvalidArgument("signal mask needs at least one slit");
    return beta_signal.value_or(kTwoPi / n_signal);
}

double PathConfig::idler_separation() const {
    if (n_idler < 1) throw InvalidArgument("idler mask needs at least one slit");
    return beta_idler.value_or(kTwoPi / n_idler);
}

int PathConfig::resolved_truncation() const {
    if (truncation) {
        if (*truncation < std::abs(l0)) throw InvalidArgument("truncation does not cover l0");
        return *truncation;
    }
    return recommended_truncation(l0, alpha);
}

std::pair<ApertureMask, ApertureMask> build_masks(const PathConfig& config) {
    const double bs = config.signal_separation();
    const double bi = config.idler_separation();
    if (config.alpha > std::min(bs, bi) * (1.0 + 1e-12)) {
        throw InvalidArgument("slit width " + std::to_string(config.alpha) +
                              " exceeds the smallest slit separation " +
                              std::to_string(std::min(bs, bi)));
    }
    return {ApertureMask(config.n_signal, config.alpha, bs), ApertureMask(config.n_idler, config.alpha, bi)};
}

CorrelationWeights correlation_weights(CorrelationModel model, const ApertureMask& signal,
                                       const ApertureMask& idler) {
    const int n = signal.n_slits();
    const int m = idler.n_slits();
    CorrelationWeights out{CMatrix::Zero(n, m)};
    switch (model) {
        case CorrelationModel::constant:
            out.weights.setOnes();
            break;
        case CorrelationModel::diagonal:
            if (n != m) {
                throw InvalidArgument("diagonal correlation needs equal slit counts, got " +
                                      std::to_string(n) + " x " + std::to_string(m));
            }
            out.weights.setIdentity();
            break;
        case CorrelationModel::overlap: {
            const auto ks = signal.slits();
            const auto ki = idler.slits();
            for (int a = 0; a < n; ++a) {
                const auto sa = signal.support(ks[static_cast<std::size_t>(a)]);
                for (int b = 0; b < m; ++b) {
                    const double len = intersection_length(sa, idler.support(ki[static_cast<std::size_t>(b)]));
                    out.weights(a, b) = std::clamp(len / signal.alpha(), 0.0, 1.0);
                }
            }
            break;
        }
    }
    return out;
}

BiphotonState path_coefficients(const PathConfig& config, const CorrelationWeights& weights) {
    const auto [ms, mi] = build_masks(config);
    const int trunc = config.resolved_truncation();
    const long long dim = 2LL * trunc + 1;
    if (dim * dim > kDenseLimit) {
        throw InvalidArgument("dense coefficient matrix for truncation " + std::to_string(trunc) +
                              " is too large; use path_state");
    }
    if (weights.weights.rows() != ms.n_slits() || weights.weights.cols() != mi.n_slits()) {
        throw InvalidArgument("correlation weights do not match the masks");
    }

    const auto ks = ms.slits();
    const auto ki = mi.slits();
    CMatrix u(dim, ms.n_slits());
    CMatrix v(dim, mi.n_slits());
    for (int a = 0; a < ms.n_slits(); ++a) {
        u.col(a) = diffracted_mode(ms, ks[static_cast<std::size_t>(a)], OamIndex{config.l0}, trunc).coeffs;
    }
    for (int b = 0; b < mi.n_slits(); ++b) {
        v.col(b) = diffracted_mode(mi, ki[static_cast<std::size_t>(b)], OamIndex{-config.l0}, trunc).coeffs;
    }

    BiphotonState out;
    out.coeffs = u * weights.weights * v.transpose();
    const double norm = out.coeffs.norm();
    if (!(norm > 0.0)) throw DegenerateState("all path amplitudes vanish");
    out.coeffs /= norm;
    out.truncation = trunc;
    out.normalized = true;
    return out;
}

PathState path_state(const PathConfig& config, int truncation) {
    const auto [ms, mi] = build_masks(config);
    const CorrelationWeights w = correlation_weights(config.model, ms, mi);
    if (w.weights.cwiseAbs().maxCoeff() == 0.0) {
        throw DegenerateState("no signal slit overlaps an idler slit");
    }
    PathState out;
    out.slit_coeffs.coeffs = w.weights;
    out.slit_coeffs.truncation = truncation;
    out.gram_signal = slit_mode_gram(ms, OamIndex{config.l0}, truncation, TruncationWindow::relative);
    out.gram_idler = slit_mode_gram(mi, OamIndex{-config.l0}, truncation, TruncationWindow::relative);
    return out;
}

AngularBiphoton path_angular_state(const PathConfig& config) {
    const auto [ms, mi] = build_masks(config);
    const CorrelationWeights w = correlation_weights(config.model, ms, mi);
    AngularBiphoton out;
    for (SlitIndex k : ms.slits()) out.signal.push_back(angular_mode(ms, k, OamIndex{config.l0}));
    for (SlitIndex k : mi.slits()) out.idler.push_back(angular_mode(mi, k, OamIndex{-config.l0}));
    out.coeffs = w.weights;
    return out;
}

Complex generalized_overlap(const ApertureMask& signal, const ApertureMask& idler, OamIndex l,
                            OamIndex m) {
    const int q = m.value - l.value;
    Complex acc{0.0, 0.0};
    for (SlitIndex ks : signal.slits()) {
        const auto sa = signal.support(ks);
        for (SlitIndex ki : idler.slits()) {
            for (const Arc& x : sa) {
                for (const Arc& y : idler.support(ki)) {
                    const Arc both{std::max(x.lo, y.lo), std::min(x.hi, y.hi)};
                    if (both.hi > both.lo) acc += arc_fourier(both, q);
                }
            }
        }
    }
    return acc;
}

EntanglementReport path_entanglement(const PathConfig& config) {
    const int trunc = config.truncation.value_or(recommended_truncation(0, config.alpha));
    auto evaluate = [&](int t) {
        const PathState s = path_state(config, t);
        return schmidt_oracle(s.slit_coeffs, s.gram_signal, s.gram_idler);
    };
    EntanglementReport out = evaluate(trunc);
    const EntanglementReport doubled = evaluate(2 * trunc);
    out.converged = std::abs(doubled.concurrence - out.concurrence) < kTruncationTolerance;
    out.truncation_used = trunc;
    return out;
}

EffectiveGeometry effective_geometry(const PathConfig& config, double alpha) {
    if (!std::isfinite(alpha) || !(alpha > 0.0) || alpha > kTwoPi * (1.0 + 1e-12)) {
        throw InvalidArgument("slit width " + std::to_string(alpha) + " is outside (0, 2pi]");
    }
    EffectiveGeometry out{config, {}};
    out.config.alpha = std::min(alpha, kTwoPi);

    auto merge = [&](int& n, std::optional<double>& beta, double separation, const char* side) {
        if (alpha <= separation * (1.0 + 1e-12)) return;
        const int merged = std::max(1, static_cast<int>(std::floor(kTwoPi / alpha + 1e-12)));
        append_note(out.note, std::string("merged_") + side + '=' + std::to_string(n) + "->" +
                                  std::to_string(merged));
        n = merged;
        beta = kTwoPi / merged;
    };
    merge(out.config.n_signal, out.config.beta_signal, config.signal_separation(), "signal");
    merge(out.config.n_idler, out.config.beta_idler, config.idler_separation(), "idler");
    return out;
}

std::vector<PathPoint> path_concurrence_curve(const PathConfig& config, std::span<const double> alphas,
                                              int parallelism) {
    std::vector<double> sorted(alphas.begin(), alphas.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<PathPoint> points(sorted.size());

    detail::parallel_for(sorted.size(), parallelism, [&](std::size_t i) {
        PathPoint& pt = points[i];
        pt.alpha = sorted[i];
        try {
            const EffectiveGeometry geom = effective_geometry(config, sorted[i]);
            append_note(pt.notes, geom.note);
            pt.report = path_entanglement(geom.config);
        } catch (const DegenerateState&) {
            pt.degenerate = true;
            pt.report = EntanglementReport{};
            pt.report.truncation_used = 0;
            append_note(pt.notes, "degenerate:no-coincidences");
        } catch (const std::exception& e) {
            pt.failure = sanitize(e.what());
            pt.report = EntanglementReport{};
            pt.report.converged = false;
            append_note(pt.notes, "error:" + *pt.failure);
        }
    });
    return points;
}

}  // namespace aq
