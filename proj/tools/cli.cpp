#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hypecurve/analysis.hpp"
#include "hypecurve/error.hpp"
#include "hypecurve/fit.hpp"
#include "hypecurve/series.hpp"
#include "hypecurve/synth.hpp"
#include "outputs.hpp"

namespace hypecurve::cli {

namespace {

namespace fs = std::filesystem;

// Thrown for input/output problems, carries the exit code to use.
struct Failure {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw Failure{code, std::move(message)}; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(exit_input_error, path + ": cannot open for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content) || !out.flush()) {
        fail(exit_input_error, path.string() + ": cannot write");
    }
}

std::string resolve_timestamp(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) return env;
    return "unset";
}

YearSeries load_series(const std::vector<std::string>& paths, const std::string& label,
                       Manifest& manifest, std::ostream& err) {
    std::vector<YearSeries> sources;
    for (const auto& path : paths) {
        const auto text = read_file(path);
        manifest.inputs.push_back({path, fnv1a64_hex(text)});
        try {
            sources.push_back(parse_csv(text, label));
        } catch (const Error& e) {
            fail(exit_input_error, path + ": " + std::string(to_string(e.code())) + ": " + e.what());
        }
        for (const auto& w : sources.back().warnings()) err << "warning: " << path << ": " << w << '\n';
    }
    auto merged = average_sources(sources);
    for (const auto& w : merged.warnings()) err << "warning: " << label << ": " << w << '\n';
    return merged;
}

void require(bool ok, const std::string& flag, const std::string& what) {
    if (!ok) fail(exit_usage, flag + ": " + what);
}

// Model parameter flags shared by simulate, forecast and curve.
struct ParamFlags {
    std::optional<double> k, r, t0, p, tstar, pub_peak, pat_plateau;

    void add_to(CLI::App& app, bool with_amplitudes) {
        app.add_option("--k", k, "Carrying capacity (total publications)");
        app.add_option("--r", r, "Growth rate, 1/year");
        app.add_option("--t0", t0, "Inflection (peak publication) year");
        app.add_option("--p", p, "Patents per accumulated publication");
        app.add_option("--tstar", tstar, "Delay of the technology phase, years");
        if (with_amplitudes) {
            app.add_option("--pub-peak", pub_peak, "Peak of N; sets k = 4 * peak / r");
            app.add_option("--pat-plateau", pat_plateau, "Plateau of P; sets p = plateau / k");
        }
    }

    bool any() const { return k || r || t0 || p || tstar || pub_peak || pat_plateau; }

    /// Returns params and whether the tech half was given.
    std::pair<HypeParams, bool> resolve() const {
        require(r.has_value(), "--r", "required");
        require(std::isfinite(*r) && *r > 0.0, "--r", "must be > 0");
        require(t0.has_value(), "--t0", "required");
        require(std::isfinite(*t0), "--t0", "must be finite");
        require(!(k && pub_peak), "--pub-peak", "excludes --k");
        require(k || pub_peak, "--k", "required (or --pub-peak)");
        HypeParams hp;
        hp.science.r = *r;
        hp.science.t0 = *t0;
        if (k) {
            require(std::isfinite(*k) && *k > 0.0, "--k", "must be > 0");
            hp.science.k = *k;
        } else {
            require(std::isfinite(*pub_peak) && *pub_peak > 0.0, "--pub-peak", "must be > 0");
            hp.science.k = 4.0 * *pub_peak / *r;
        }

        const bool has_tech = p || tstar || pat_plateau;
        if (has_tech) {
            require(!(p && pat_plateau), "--pat-plateau", "excludes --p");
            require(p || pat_plateau, "--p", "required with --tstar (or --pat-plateau)");
            require(tstar.has_value(), "--tstar", "required with --p");
            require(std::isfinite(*tstar), "--tstar", "must be finite");
            if (p) {
                require(std::isfinite(*p) && *p > 0.0, "--p", "must be > 0");
                hp.tech.p = *p;
            } else {
                require(std::isfinite(*pat_plateau) && *pat_plateau > 0.0, "--pat-plateau",
                        "must be > 0");
                hp.tech.p = *pat_plateau / hp.science.k;
            }
            hp.tech.tstar = *tstar;
        }
        return {hp, has_tech};
    }
};

const std::map<std::string, FitMode> fit_modes{{"joint", FitMode::joint},
                                               {"independent", FitMode::independent}};
const std::map<std::string, ForwardModel> forward_models{
    {"bin", ForwardModel::bin_integral}, {"midpoint", ForwardModel::midpoint}};
const std::map<std::string, TriggerCurve> trigger_bases{
    {"cumulative", TriggerCurve::cumulative}, {"rate", TriggerCurve::pub_rate}};
const std::map<std::string, NoiseKind> noise_kinds{
    {"none", NoiseKind::none}, {"poisson", NoiseKind::poisson}, {"gaussian", NoiseKind::gaussian}};

void print_params(std::ostream& out, const HypeParams& hp, bool has_tech) {
    out << "k      = " << hp.science.k << '\n'
        << "r      = " << hp.science.r << '\n'
        << "t0     = " << hp.science.t0 << '\n';
    if (has_tech) {
        out << "p      = " << hp.tech.p << '\n' << "tstar  = " << hp.tech.tstar << '\n';
    }
}

// ---- fit ------------------------------------------------------------------

struct FitOptions {
    std::vector<std::string> pub, pat;
    FitConfig fit;
    ReportConfig report;
    std::string out_dir = ".";
    std::string prefix = "hype";
    std::string timestamp;
};

int cmd_fit(const FitOptions& o, std::ostream& out, std::ostream& err) {
    Manifest manifest;
    manifest.command = "fit";
    manifest.timestamp = resolve_timestamp(o.timestamp);

    const auto pub = load_series(o.pub, "publications", manifest, err);
    std::optional<YearSeries> pat;
    if (!o.pat.empty()) pat = load_series(o.pat, "patents", manifest, err);

    manifest.config = {{"mode", to_string(o.fit.mode)},
                       {"forward_model", to_string(o.fit.forward)},
                       {"starts", o.fit.starts},
                       {"max_iters", o.fit.max_iters},
                       {"tolerance", o.fit.tolerance},
                       {"seed", o.fit.seed},
                       {"epsilon", o.report.epsilon},
                       {"horizon", o.report.horizon_years},
                       {"pub_trigger_basis", to_string(o.report.pub_trigger_basis)},
                       {"source_averaging", "per_year_mean"}};

    FitResult fit;
    HypeReport rep;
    const int last_year = pat ? std::max(pub.last_year(), pat->last_year()) : pub.last_year();
    const int first_year = pat ? std::min(pub.first_year(), pat->first_year()) : pub.first_year();
    try {
        fit = pat ? fit_joint(pub, *pat, o.fit) : fit_science(pub, o.fit);
        rep = build_report(fit, last_year, o.report);
    } catch (const Error& e) {
        fail(exit_fit_failure, std::string(to_string(e.code())) + ": " + e.what());
    }

    Json doc;
    doc["schema"] = report_schema;
    doc["manifest"] = manifest.to_json();
    doc["fit"] = fit_json(fit, o.fit.mode, o.fit.forward);
    doc["report"] = report_json(rep, o.report);

    const fs::path dir(o.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    const auto base = [&](const std::string& suffix) { return dir / (o.prefix + suffix); };

    if (pat) {
        const auto norm = normalize_pair(pub, *pat);
        doc["normalization"] = {{"pub_scale", norm.pub_scale}, {"pat_scale", norm.pat_scale}};
        write_file(base(".pub.normalized.csv"), to_csv(norm.publications));
        write_file(base(".pat.normalized.csv"), to_csv(norm.patents));
    } else {
        if (!(pub.max_count() > 0.0)) fail(exit_input_error, "publications are identically zero");
        const double scale = 1.0 / pub.max_count();
        doc["normalization"] = {{"pub_scale", scale}};
        write_file(base(".pub.normalized.csv"), to_csv(pub.scaled(scale)));
    }
    write_file(base(".report.json"), doc.dump(2) + '\n');
    write_file(base(".curve.csv"),
               curve_csv(fit.params, fit.has_tech, first_year,
                         last_year + 1 + o.report.horizon_years));

    print_params(out, fit.params, fit.has_tech);
    out << "r2     = " << fit.r_squared << '\n';
    out << "trigger(publications) = " << rep.pub_trigger_year << '\n';
    if (fit.has_tech) {
        out << "trigger(patents)      = " << rep.pat_trigger_year << '\n'
            << "delay                 = " << rep.delay_years << '\n'
            << "dip                   = " << (rep.dip ? "yes" : "no") << '\n';
    }
    for (const auto& w : fit.warnings) err << "warning: " << w << '\n';
    out << "wrote " << base(".report.json").string() << '\n';
    return exit_ok;
}

// ---- simulate -------------------------------------------------------------

struct SimulateOptions {
    ParamFlags params;
    std::string preset;
    std::optional<int> from, to;
    std::string noise = "none";
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::string forward = "bin";
    std::string pub_out, pat_out;
    std::string timestamp;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
    Manifest manifest;
    manifest.command = "simulate";
    manifest.timestamp = resolve_timestamp(o.timestamp);

    SeriesPair pair{YearSeries("publications", {{0, 0}, {1, 0}, {2, 0}}),
                    YearSeries("patents", {{0, 0}, {1, 0}, {2, 0}})};
    if (o.preset == "oled") {
        require(!o.params.any(), "--preset", "excludes explicit parameter flags");
        auto fx = oled_fixture();
        manifest.config = {{"preset", "oled"},
                           {"params", params_json(fx.truth, true)},
                           {"from", oled::first_year},
                           {"to", oled::last_year},
                           {"noise", "poisson"},
                           {"seed", oled::seed}};
        pair = {std::move(fx.publications), std::move(fx.patents)};
    } else {
        const auto [hp, has_tech] = o.params.resolve();
        require(has_tech, "--p", "simulate needs the full parameter set (--p, --tstar)");
        require(o.from.has_value(), "--from", "required");
        require(o.to.has_value(), "--to", "required");
        require(*o.to > *o.from + 2, "--to", "must exceed --from by more than 2 years");
        require(std::isfinite(o.sigma) && o.sigma >= 0.0, "--sigma", "must be >= 0");
        const NoiseSpec noise{noise_kinds.at(o.noise), o.sigma, o.seed};
        manifest.config = {{"params", params_json(hp, true)},
                           {"from", *o.from},
                           {"to", *o.to},
                           {"noise", o.noise},
                           {"sigma", o.sigma},
                           {"seed", o.seed},
                           {"forward_model", o.forward}};
        pair = generate(hp, *o.from, *o.to, noise, forward_models.at(o.forward));
    }
    manifest.config["prng"] = "xoshiro256**-1.0/splitmix64";

    write_file(o.pub_out, to_csv(pair.publications));
    write_file(o.pat_out, to_csv(pair.patents));
    out << manifest.to_json().dump(2) << '\n';
    return exit_ok;
}

// ---- forecast -------------------------------------------------------------

struct ForecastOptions {
    std::string report;
    ParamFlags params;
    std::optional<int> from;
    int horizon = 10;
    std::string out_path;
    std::string timestamp;
};

int cmd_forecast(const ForecastOptions& o, std::ostream& out) {
    Manifest manifest;
    manifest.command = "forecast";
    manifest.timestamp = resolve_timestamp(o.timestamp);

    HypeParams hp;
    bool has_tech = false;
    int default_from = 0;
    if (!o.report.empty()) {
        require(!o.params.any(), "--report", "excludes explicit parameter flags");
        const auto text = read_file(o.report);
        manifest.inputs.push_back({o.report, fnv1a64_hex(text)});
        Json doc;
        try {
            doc = Json::parse(text);
            const auto stored = params_from_report(doc);
            hp = stored.params;
            has_tech = stored.has_tech;
            default_from = stored.forecast_from_year;
            validate(has_tech ? hp : HypeParams{hp.science, {1.0, 0.0}});
        } catch (const Json::exception& e) {
            fail(exit_input_error, o.report + ": " + e.what());
        } catch (const Error& e) {
            fail(exit_input_error, o.report + ": " + e.what());
        }
    } else {
        require(o.params.any(), "--report", "either --report or parameter flags are required");
        std::tie(hp, has_tech) = o.params.resolve();
        default_from = static_cast<int>(std::floor(hp.science.t0));
    }
    if (!has_tech) hp.tech = {1.0, 0.0};
    require(o.horizon >= 0, "--horizon", "must be >= 0");

    const int from = o.from.value_or(default_from);
    auto rows = forecast(hp, from, o.horizon);
    if (!has_tech) {
        for (auto& row : rows) {
            row.pat_rate = 0.0;
            row.hype = row.pub_rate;
        }
    }
    manifest.config = {{"params", params_json(hp, has_tech)}, {"from", from}, {"horizon", o.horizon}};
    write_file(o.out_path, forecast_csv(rows));

    out << manifest.to_json().dump(2) << '\n';
    if (const auto half = first_year_below(rows, hp.science.t0, 0.5)) {
        out << "publication rate first below half of peak in " << *half << '\n';
    } else {
        out << "publication rate stays at or above half of peak through " << from + o.horizon
            << '\n';
    }
    if (has_tech && rows.size() >= 2) {
        const double a = rows[rows.size() - 2].pat_rate;
        const double b = rows.back().pat_rate;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f%%", 100.0 * (b - a) / a);
        out << "patent rate change over final year: " << buf << '\n';
    }
    return exit_ok;
}

// ---- curve ----------------------------------------------------------------

struct CurveOptions {
    ParamFlags params;
    std::optional<double> from, to;
    double step = 0.1;
    std::string out_path;
    std::string summary_path;
    double epsilon = 0.05;
    std::string timestamp;
};

int cmd_curve(const CurveOptions& o, std::ostream& out) {
    const auto [hp, has_tech] = o.params.resolve();
    require(o.from.has_value(), "--from", "required");
    require(o.to.has_value(), "--to", "required");
    require(std::isfinite(*o.from) && std::isfinite(*o.to) && *o.to > *o.from, "--to",
            "must exceed --from");
    require(std::isfinite(o.step) && o.step > 0.0, "--step", "must be > 0");
    require(o.epsilon > 0.0 && o.epsilon < 1.0, "--epsilon", "must lie in (0, 1)");

    Manifest manifest;
    manifest.command = "curve";
    manifest.timestamp = resolve_timestamp(o.timestamp);
    manifest.config = {{"params", params_json(hp, has_tech)},
                       {"from", *o.from},
                       {"to", *o.to},
                       {"step", o.step}};

    write_file(o.out_path, curve_csv(hp, has_tech, *o.from, *o.to, o.step));
    if (!o.summary_path.empty()) {
        ReportConfig rc;
        rc.epsilon = o.epsilon;
        rc.horizon_years = 0;
        const auto hp_full = has_tech ? hp : HypeParams{hp.science, {1.0, 0.0}};
        const auto rep = report_from_params(hp_full, has_tech,
                                            static_cast<int>(std::floor(hp.science.t0)), rc);
        Json doc;
        doc["manifest"] = manifest.to_json();
        doc["params"] = params_json(hp, has_tech);
        doc["summary"] = report_json(rep, rc);
        write_file(o.summary_path, doc.dump(2) + '\n');
    }
    out << manifest.to_json().dump(2) << '\n';
    return exit_ok;
}

template <class T>
CLI::Option* add_choice(CLI::App& app, const std::string& name, std::string& target,
                        const std::map<std::string, T>& choices, const std::string& help) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : choices) keys.push_back(k);
    return app.add_option(name, target, help)->check(CLI::IsMember(keys))->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fit and analyse hype-type publication/patent growth curves", "hypecurve"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    FitOptions fo;
    std::string fit_mode = "joint", fit_forward = "bin", basis = "cumulative";
    auto* fit = app.add_subcommand("fit", "Fit the model to yearly publication (and patent) counts");
    fit->add_option("--pub", fo.pub, "Publication CSV (repeat to average several databases)")
        ->required();
    fit->add_option("--pat", fo.pat, "Patent CSV (repeat to average); omit for publications only");
    add_choice(*fit, "--mode", fit_mode, fit_modes, "Parameter estimation mode");
    add_choice(*fit, "--forward", fit_forward, forward_models, "Yearly forward model");
    fit->add_option("--starts", fo.fit.starts, "Multi-start count")->capture_default_str();
    fit->add_option("--max-iters", fo.fit.max_iters, "Simplex iterations per start")
        ->capture_default_str();
    fit->add_option("--tolerance", fo.fit.tolerance, "Relative objective spread")
        ->capture_default_str();
    fit->add_option("--seed", fo.fit.seed, "Start-point jitter seed")->capture_default_str();
    fit->add_option("--epsilon", fo.report.epsilon, "Trigger threshold (fraction of peak)")
        ->capture_default_str();
    fit->add_option("--horizon", fo.report.horizon_years, "Forecast years past the data")
        ->capture_default_str();
    add_choice(*fit, "--pub-trigger-basis", basis, trigger_bases,
               "Curve used for the publication trigger");
    fit->add_option("--out-dir", fo.out_dir, "Output directory")->capture_default_str();
    fit->add_option("--prefix", fo.prefix, "Output file prefix")->capture_default_str();
    fit->add_option("--timestamp", fo.timestamp, "Manifest timestamp");

    SimulateOptions so;
    auto* sim = app.add_subcommand("simulate", "Generate synthetic yearly series");
    so.params.add_to(*sim, false);
    sim->add_option("--preset", so.preset, "Bundled parameter set")->check(CLI::IsMember({"oled"}));
    sim->add_option("--from", so.from, "First year");
    sim->add_option("--to", so.to, "Last year (inclusive)");
    add_choice(*sim, "--noise", so.noise, noise_kinds, "Noise model");
    sim->add_option("--sigma", so.sigma, "Gaussian sd as a fraction of the expectation")
        ->capture_default_str();
    sim->add_option("--seed", so.seed, "Noise seed")->capture_default_str();
    add_choice(*sim, "--forward", so.forward, forward_models, "Yearly forward model");
    sim->add_option("--pub-out", so.pub_out, "Publication CSV to write")->required();
    sim->add_option("--pat-out", so.pat_out, "Patent CSV to write")->required();
    sim->add_option("--timestamp", so.timestamp, "Manifest timestamp");

    ForecastOptions fc;
    auto* fcst = app.add_subcommand("forecast", "Per-year forecast from a report or parameters");
    fcst->add_option("--report", fc.report, "Report written by `hypecurve fit`");
    fc.params.add_to(*fcst, false);
    fcst->add_option("--from", fc.from, "First forecast year");
    fcst->add_option("--horizon", fc.horizon, "Years after --from")->capture_default_str();
    fcst->add_option("--out", fc.out_path, "Forecast CSV to write")->required();
    fcst->add_option("--timestamp", fc.timestamp, "Manifest timestamp");

    CurveOptions co;
    auto* curve = app.add_subcommand("curve", "Sample N, P and H on a time grid");
    co.params.add_to(*curve, true);
    curve->add_option("--from", co.from, "First t");
    curve->add_option("--to", co.to, "Last t");
    curve->add_option("--step", co.step, "Sampling step")->capture_default_str();
    curve->add_option("--out", co.out_path, "Curve CSV to write")->required();
    curve->add_option("--summary", co.summary_path, "Also write peak/trigger/dip summary JSON");
    curve->add_option("--epsilon", co.epsilon, "Trigger threshold")->capture_default_str();
    curve->add_option("--timestamp", co.timestamp, "Manifest timestamp");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (*fit) {
            fo.fit.mode = fit_modes.at(fit_mode);
            fo.fit.forward = forward_models.at(fit_forward);
            fo.report.pub_trigger_basis = trigger_bases.at(basis);
            require(fo.fit.starts >= 1, "--starts", "must be >= 1");
            require(fo.fit.max_iters >= 1, "--max-iters", "must be >= 1");
            require(std::isfinite(fo.fit.tolerance) && fo.fit.tolerance > 0.0, "--tolerance",
                    "must be > 0");
            require(fo.report.epsilon > 0.0 && fo.report.epsilon < 1.0, "--epsilon",
                    "must lie in (0, 1)");
            require(fo.report.horizon_years >= 0, "--horizon", "must be >= 0");
            return cmd_fit(fo, out, err);
        }
        if (*sim) return cmd_simulate(so, out);
        if (*fcst) return cmd_forecast(fc, out);
        if (*curve) return cmd_curve(co, out);
    } catch (const Failure& f) {
        err << "error: " << f.message << '\n';
        return f.code;
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return e.code() == Errc::degenerate_fit || e.code() == Errc::unconverged_fit
                   ? exit_fit_failure
                   : exit_input_error;
    }
    return exit_usage;
}

}  // namespace hypecurve::cli
