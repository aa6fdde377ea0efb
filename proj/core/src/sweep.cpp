#include "aq/sweep.hpp"

#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#ifndef AQ_VERSION
#define AQ_VERSION "0.0.0"
#endif

namespace aq {

namespace {

using nlohmann::json;

constexpr int kSymmetricPurityLimit = 31;

struct PresetCurve {
    SweepMode mode;
    int dimension;  // oam
    int n_signal;   // path
    int n_idler;
};

struct Preset {
    std::string name;
    std::vector<PresetCurve> curves;
    double alpha_max;
};

std::vector<PresetCurve> oam_curves(std::initializer_list<int> dims) {
    std::vector<PresetCurve> out;
    for (int d : dims) out.push_back({SweepMode::oam, d, 0, 0});
    return out;
}

std::vector<PresetCurve> path_curves(std::initializer_list<std::pair<int, int>> pairs) {
    std::vector<PresetCurve> out;
    for (auto [n, m] : pairs) out.push_back({SweepMode::path, 0, n, m});
    return out;
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = [] {
        const auto square = path_curves({{2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}});
        const auto up_to_five = path_curves({{2, 2}, {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}});
        const auto up_to_eight = path_curves({{5, 6}, {5, 7}, {5, 8}, {6, 7}, {6, 8}, {7, 8}});
        return std::vector<Preset>{
            {"fig2", oam_curves({3, 5, 7, 9, 11}), kTwoPi},
            {"fig3", square, kTwoPi / 6},
            {"fig4", up_to_five, kTwoPi / 5},
            {"fig5", up_to_eight, kTwoPi / 8},
            {"figA1", square, kTwoPi},
            {"figA2", up_to_five, kTwoPi},
            {"figA3", up_to_eight, kTwoPi},
        };
    }();
    return table;
}

const Preset& find_preset(const std::string& name) {
    for (const Preset& p : presets()) {
        if (p.name == name) return p;
    }
    throw InvalidArgument("unknown preset '" + name + "'");
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void append_note(std::string& notes, const std::string& token) {
    if (token.empty()) return;
    if (!notes.empty()) notes += ';';
    notes += token;
}

std::string curve_label(const SweepConfig& c) {
    if (c.mode == SweepMode::oam) return "D=" + std::to_string(c.dimension);
    return std::to_string(c.n_signal) + "x" + std::to_string(c.n_idler);
}

int workers(const SweepConfig& c) { return c.parallelism.value_or(0); }

// Gram matrix of the unit-normalized truncated single-aperture modes l = -n..n.
OverlapMatrix truncated_oam_overlaps(int n, double alpha, int truncation) {
    const ApertureMask mask = ApertureMask::single(alpha);
    std::vector<ModeVector> modes;
    for (int l = -n; l <= n; ++l) {
        modes.push_back(diffracted_mode(mask, SlitIndex::from_integer(0), OamIndex{l}, truncation,
                                        Normalization::unit));
    }
    return overlap_matrix(modes);
}

SweepRow oam_row(const SweepConfig& config, double alpha) {
    const int n = config.dimension / 2;
    SweepRow row;
    row.alpha = alpha;

    auto evaluate = [&](const OverlapMatrix& b) {
        const CVector c = uniform_weights(config.dimension);
        const EntanglementReport schmidt = schmidt_oracle(oam_biphoton(c), b, b);
        const double p = config.dimension <= kSymmetricPurityLimit ? purity_symmetric(b) : schmidt.purity;
        return std::pair{p, schmidt.effective_rank()};
    };

    if (!config.truncation) {
        const auto [p, rank] = evaluate(single_aperture_overlaps(n, alpha));
        row.purity = p;
        row.schmidt_rank_effective = rank;
        row.truncation_used = 0;
        row.converged = true;
    } else {
        const int t = *config.truncation;
        const auto [p, rank] = evaluate(truncated_oam_overlaps(n, alpha, t));
        const auto [p2, rank2] = evaluate(truncated_oam_overlaps(n, alpha, 2 * t));
        row.purity = p;
        row.schmidt_rank_effective = rank;
        row.truncation_used = t;
        row.converged = std::abs(concurrence(p2) - concurrence(p)) < kTruncationTolerance;
        (void)rank2;
    }
    row.concurrence = concurrence(row.purity);
    return row;
}

}  // namespace

std::string_view to_string(SweepMode mode) { return mode == SweepMode::oam ? "oam" : "path"; }

std::string_view to_string(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

std::string_view library_version() { return AQ_VERSION; }

void SweepConfig::validate() const {
    if (!std::isfinite(alpha_min) || !std::isfinite(alpha_max) || alpha_min < 0.0 ||
        !(alpha_min < alpha_max) || alpha_max > kTwoPi * (1.0 + 1e-12)) {
        throw InvalidArgument("aperture range must satisfy 0 <= alpha-min < alpha-max <= 2pi");
    }
    if (steps < 2) throw InvalidArgument("steps must be at least 2");
    if (parallelism && *parallelism < 1) throw InvalidArgument("parallelism must be positive");
    if (preset) {
        find_preset(*preset);
        if (truncation && *truncation < std::abs(l0)) {
            throw InvalidArgument("truncation must cover |l0|");
        }
        return;
    }
    if (mode == SweepMode::oam) {
        if (dimension < 3 || dimension % 2 == 0) {
            throw InvalidArgument("OAM dimension must be odd and at least 3, got " + std::to_string(dimension));
        }
        if (truncation && *truncation < dimension / 2) {
            throw InvalidArgument("truncation must cover the OAM range");
        }
    } else {
        if (n_signal < 1 || n_idler < 1) throw InvalidArgument("slit counts must be positive");
        if (model == CorrelationModel::diagonal && n_signal != n_idler) {
            throw InvalidArgument("diagonal correlation needs equal slit counts");
        }
        if (truncation && (*truncation < 1 || *truncation < std::abs(l0))) {
            throw InvalidArgument("truncation must be positive and cover |l0|");
        }
    }
}

std::vector<double> alpha_grid(const SweepConfig& config) {
    std::vector<double> out(static_cast<std::size_t>(config.steps));
    const double span = config.alpha_max - config.alpha_min;
    for (int i = 0; i < config.steps; ++i) {
        out[static_cast<std::size_t>(i)] =
            i + 1 == config.steps ? config.alpha_max
                                  : config.alpha_min + span * static_cast<double>(i) / (config.steps - 1);
    }
    if (out.front() == 0.0) out.front() = kAlphaFloor;
    return out;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const Preset& p : presets()) out.push_back(p.name);
    return out;
}

std::vector<SweepCurve> expand_preset(const SweepConfig& config) {
    if (!config.preset) return {SweepCurve{curve_label(config), config}};
    const Preset& p = find_preset(*config.preset);
    std::vector<SweepCurve> out;
    for (const PresetCurve& pc : p.curves) {
        SweepConfig c = config;
        c.preset.reset();
        c.mode = pc.mode;
        c.alpha_min = 0.0;
        c.alpha_max = p.alpha_max;
        if (pc.mode == SweepMode::oam) {
            c.dimension = pc.dimension;
        } else {
            c.n_signal = pc.n_signal;
            c.n_idler = pc.n_idler;
        }
        out.push_back(SweepCurve{curve_label(c), c});
    }
    return out;
}

std::vector<SweepRow> run_oam_sweep(const SweepConfig& config) {
    if (config.mode != SweepMode::oam) throw InvalidArgument("run_oam_sweep needs mode=oam");
    const std::vector<double> alphas = alpha_grid(config);
    std::vector<SweepRow> rows(alphas.size());
    detail::parallel_for(alphas.size(), workers(config), [&](std::size_t i) {
        try {
            rows[i] = oam_row(config, alphas[i]);
        } catch (const std::exception& e) {
            rows[i] = SweepRow{};
            rows[i].alpha = alphas[i];
            rows[i].converged = false;
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ' ');
            rows[i].notes = "error:" + msg;
        }
    });
    if (config.alpha_min == 0.0) append_note(rows.front().notes, "alpha_floor");
    return rows;
}

std::vector<SweepRow> run_path_sweep(const SweepConfig& config) {
    if (config.mode != SweepMode::path) throw InvalidArgument("run_path_sweep needs mode=path");
    PathConfig pc;
    pc.n_signal = config.n_signal;
    pc.n_idler = config.n_idler;
    pc.alpha = config.alpha_max;
    pc.l0 = config.l0;
    pc.model = config.model;
    pc.truncation = config.truncation;

    const std::vector<double> alphas = alpha_grid(config);
    const auto points = path_concurrence_curve(pc, alphas, workers(config));

    std::vector<SweepRow> rows;
    rows.reserve(points.size());
    for (const PathPoint& pt : points) {
        SweepRow row;
        row.alpha = pt.alpha;
        row.purity = pt.report.purity;
        row.concurrence = pt.report.concurrence;
        row.schmidt_rank_effective = pt.degenerate ? 0 : pt.report.effective_rank();
        row.truncation_used = pt.report.truncation_used;
        row.converged = pt.report.converged && !pt.failure;
        row.notes = "model=" + std::string(to_string(config.model));
        append_note(row.notes, pt.notes);
        rows.push_back(std::move(row));
    }
    if (config.alpha_min == 0.0) append_note(rows.front().notes, "alpha_floor");
    return rows;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    config.validate();
    std::vector<SweepRow> out;
    for (const SweepCurve& curve : expand_preset(config)) {
        curve.config.validate();
        auto rows = curve.config.mode == SweepMode::oam ? run_oam_sweep(curve.config)
                                                        : run_path_sweep(curve.config);
        for (SweepRow& r : rows) {
            std::string notes = "curve=" + curve.label;
            append_note(notes, r.notes);
            r.notes = std::move(notes);
            out.push_back(std::move(r));
        }
    }
    return out;
}

double unconverged_fraction(const std::vector<SweepRow>& rows) {
    if (rows.empty()) return 0.0;
    const auto bad = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.converged; });
    return static_cast<double>(bad) / static_cast<double>(rows.size());
}

std::string render_csv(const std::vector<SweepRow>& rows) {
    std::string out = "alpha_rad,concurrence,purity,schmidt_rank_effective,truncation_used,converged,notes\n";
    for (const SweepRow& r : rows) {
        out += format_number(r.alpha);
        out += ',';
        out += format_number(r.concurrence);
        out += ',';
        out += format_number(r.purity);
        out += ',';
        out += std::to_string(r.schmidt_rank_effective);
        out += ',';
        out += std::to_string(r.truncation_used);
        out += ',';
        out += r.converged ? "true" : "false";
        out += ',';
        out += r.notes;
        out += '\n';
    }
    return out;
}

std::string render_json(const std::vector<SweepRow>& rows, const SweepConfig& config) {
    json meta;
    meta["version"] = std::string(library_version());
    json cfg;
    cfg["mode"] = std::string(to_string(config.mode));
    cfg["preset"] = config.preset ? json(*config.preset) : json(nullptr);
    cfg["dimension"] = config.dimension;
    cfg["slits"] = {config.n_signal, config.n_idler};
    cfg["l0"] = config.l0;
    cfg["correlation_model"] = std::string(to_string(config.model));
    cfg["alpha_min"] = config.alpha_min;
    cfg["alpha_max"] = config.alpha_max;
    cfg["steps"] = config.steps;
    cfg["truncation"] = config.truncation ? json(*config.truncation) : json(nullptr);
    cfg["format"] = std::string(to_string(config.format));
    meta["config"] = std::move(cfg);

    json jrows = json::array();
    for (const SweepRow& r : rows) {
        jrows.push_back({{"alpha_rad", r.alpha},
                         {"concurrence", r.concurrence},
                         {"purity", r.purity},
                         {"schmidt_rank_effective", r.schmidt_rank_effective},
                         {"truncation_used", r.truncation_used},
                         {"converged", r.converged},
                         {"notes", r.notes}});
    }
    json doc;
    doc["meta"] = std::move(meta);
    doc["rows"] = std::move(jrows);
    return doc.dump(2) + "\n";
}

std::vector<SweepRow> parse_json_rows(std::string_view document) {
    const json doc = json::parse(document);
    std::vector<SweepRow> out;
    for (const json& j : doc.at("rows")) {
        SweepRow r;
        r.alpha = j.at("alpha_rad").get<double>();
        r.concurrence = j.at("concurrence").get<double>();
        r.purity = j.at("purity").get<double>();
        r.schmidt_rank_effective = j.at("schmidt_rank_effective").get<int>();
        r.truncation_used = j.at("truncation_used").get<int>();
        r.converged = j.at("converged").get<bool>();
        r.notes = j.at("notes").get<std::string>();
        out.push_back(std::move(r));
    }
    return out;
}

void emit(const std::vector<SweepRow>& rows, const SweepConfig& config, std::ostream& console) {
    if (rows.empty()) throw InvalidArgument("nothing to emit");
    const std::string body =
        config.format == OutputFormat::csv ? render_csv(rows) : render_json(rows, config);
    if (config.output_path.empty()) {
        console << body << std::flush;
        if (!console) throw IoError("failed writing to standard output");
        return;
    }
    std::ofstream out(config.output_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + config.output_path + "' for writing");
    out << body;
    out.flush();
    if (!out) throw IoError("failed writing '" + config.output_path + "'");
}

void emit(const std::vector<SweepRow>& rows, const SweepConfig& config) { emit(rows, config, std::cout); }

}  // namespace aq
