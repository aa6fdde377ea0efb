#include "sweep_cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace aq::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Pulls `--config FILE` / `--config=FILE` out of the argument list.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> file_tokens;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
            auto t = config_file_tokens(args[++i]);
            file_tokens.insert(file_tokens.end(), t.begin(), t.end());
        } else if (a.rfind("--config=", 0) == 0) {
            auto t = config_file_tokens(a.substr(9));
            file_tokens.insert(file_tokens.end(), t.begin(), t.end());
        } else {
            rest.push_back(a);
        }
    }
    // file values first so that later command-line flags take precedence
    file_tokens.insert(file_tokens.end(), rest.begin(), rest.end());
    return file_tokens;
}

}  // namespace

std::vector<std::string> config_file_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::vector<std::string> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty() || key == "config") {
            throw UsageError(path + ":" + std::to_string(line_no) + ": invalid key '" + key + "'");
        }
        tokens.push_back("--" + key);
        std::istringstream values(line.substr(eq + 1));
        for (std::string v; values >> v;) tokens.push_back(v);
    }
    return tokens;
}

SweepConfig parse_config(const std::vector<std::string>& args) {
    SweepConfig config;
    std::string mode = "oam";
    std::string model = "overlap";
    std::string format = "csv";
    std::vector<int> slits;
    int truncation = 0;
    int parallelism = 0;
    std::string preset;

    CLI::App app{"Concurrence of OAM and path-entangled photon pairs behind angular-slit masks",
                 "qudit-sweep"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto* o_mode = app.add_option("--mode", mode, "oam or path")
                       ->check(CLI::IsMember({"oam", "path"}));
    auto* o_dim = app.add_option("--dimension", config.dimension, "OAM dimension D = 2N+1 (oam)");
    auto* o_slits = app.add_option("--slits", slits, "signal and idler slit counts N M (path)")
                        ->expected(2);
    app.add_option("--l0", config.l0, "initial OAM of the signal photon (path)");
    app.add_option("--correlation-model", model, "constant, overlap or diagonal (path)")
        ->check(CLI::IsMember({"constant", "overlap", "diagonal"}));
    auto* o_amin = app.add_option("--alpha-min", config.alpha_min, "smallest aperture [rad]");
    auto* o_amax = app.add_option("--alpha-max", config.alpha_max, "largest aperture [rad]");
    app.add_option("--steps", config.steps, "grid points including both endpoints");
    auto* o_trunc = app.add_option("--truncation", truncation, "OAM truncation |l'| <= L");
    auto* o_preset = app.add_option("--preset", preset, "named figure configuration");
    app.add_option("--output", config.output_path, "output file (default: standard output)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    auto* o_par = app.add_option("--parallelism", parallelism, "worker threads (default: all cores)");

    std::vector<std::string> tokens = expand_config(args);
    std::reverse(tokens.begin(), tokens.end());
    try {
        app.parse(tokens);
    } catch (const CLI::CallForHelp&) {
        throw;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    config.mode = mode == "oam" ? SweepMode::oam : SweepMode::path;
    config.model = parse_correlation_model(model);
    config.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (o_slits->count() > 0) {
        if (slits.size() != 2) throw UsageError("--slits needs two counts: N M");
        config.n_signal = slits.at(0);
        config.n_idler = slits.at(1);
    }
    if (o_trunc->count() > 0) config.truncation = truncation;
    if (o_par->count() > 0) config.parallelism = parallelism;
    if (o_preset->count() > 0) {
        for (const auto* o : {o_mode, o_dim, o_slits, o_amin, o_amax}) {
            if (o->count() > 0) {
                throw UsageError("--preset fixes the geometry; drop " + o->get_name());
            }
        }
        config.preset = preset;
    } else {
        if (config.mode == SweepMode::oam && o_slits->count() > 0) {
            throw UsageError("--slits only applies to --mode path");
        }
        if (config.mode == SweepMode::path && o_dim->count() > 0) {
            throw UsageError("--dimension only applies to --mode oam");
        }
    }

    try {
        config.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    return config;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    SweepConfig config;
    try {
        config = parse_config(args);
    } catch (const CLI::CallForHelp&) {
        out << "usage: qudit-sweep [--config FILE] [--mode oam|path] [--dimension D] [--slits N M]\n"
               "                   [--l0 L] [--correlation-model constant|overlap|diagonal]\n"
               "                   [--alpha-min A] [--alpha-max A] [--steps S] [--truncation L]\n"
               "                   [--preset NAME] [--output FILE] [--format csv|json]\n"
               "                   [--parallelism P]\n"
               "presets:";
        for (const auto& name : preset_names()) out << ' ' << name;
        out << '\n';
        return kOk;
    } catch (const UsageError& e) {
        err << "qudit-sweep: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidArgument& e) {
        err << "qudit-sweep: " << e.what() << '\n';
        return kUsage;
    }

    std::vector<SweepRow> rows;
    try {
        rows = run_sweep(config);
    } catch (const InvalidArgument& e) {
        err << "qudit-sweep: " << e.what() << '\n';
        return kUsage;
    }

    try {
        emit(rows, config, out);
    } catch (const IoError& e) {
        err << "qudit-sweep: " << e.what() << '\n';
        return kIo;
    }

    const double bad = unconverged_fraction(rows);
    if (bad > kMaxUnconvergedFraction) {
        err << "qudit-sweep: " << bad * 100.0 << "% of rows did not converge\n";
        return kConvergence;
    }
    return kOk;
}

}  // namespace aq::cli
