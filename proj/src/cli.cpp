#include "lcdsc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "lcdsc/error.hpp"
#include "lcdsc/io.hpp"
#include "lcdsc/spectral.hpp"

namespace lcdsc::cli {

namespace fs = std::filesystem;

namespace {

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trimmed(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError(what + ": bad number '" + s + "'");
    return v;
}

/// Options shared by every command that decomposes a series.
struct EmdOptions {
    EmdConfig emd;
    void attach(CLI::App* app, bool with_seed = true) {
        if (with_seed) app->add_option("--seed", emd.seed, "Master seed for ensemble noise");
        app->add_option("--ensemble-size", emd.ensemble_size, "EEMD trials")
            ->check(CLI::PositiveNumber);
        app->add_option("--noise-amplitude", emd.noise_amplitude,
                        "Ensemble noise sd as a fraction of the series sd")
            ->check(CLI::NonNegativeNumber);
        app->add_option("--s-number", emd.s_number, "S-stoppage count")->check(CLI::PositiveNumber);
        app->add_option("--max-sift-iters", emd.max_sift_iters)->check(CLI::PositiveNumber);
        app->add_option("--max-imfs", emd.max_imfs, "0 picks floor(log2 n) - 1");
    }
};

struct CleanOptions {
    EmdOptions emd;
    std::string penalty = "mbic";
    double beta = 2.0;
    std::size_t min_seg_len = 10;
    double gamma = 1.0;
    double alpha = 0.05;
    bool include_residual = false;

    void attach(CLI::App* app, bool with_gamma, bool with_seed = true) {
        emd.attach(app, with_seed);
        app->add_option("--penalty", penalty, "aic, bic or mbic");
        app->add_option("--beta", beta, "AIC weight per change point");
        app->add_option("--min-seg-len", min_seg_len, "Shortest amplitude segment");
        if (with_gamma) app->add_option("--gamma", gamma, "Variance ratio threshold (>= 1)");
        app->add_option("--alpha", alpha, "Family-wise error level");
        app->add_flag("--include-residual", include_residual, "Add the residual to cleaned.csv");
    }

    LcdscConfig config() const {
        LcdscConfig c;
        c.emd = emd.emd;
        c.penalty = PenaltyKind::parse(penalty, beta);
        c.min_seg_len = min_seg_len;
        c.gamma = gamma;
        c.alpha = alpha;
        c.include_residual = include_residual;
        c.validate();
        return c;
    }
};

struct InputOptions {
    std::string path;
    std::string format = "auto";
    void attach(CLI::App* app) {
        app->add_option("input", path, "Series file (csv t,value or one value per line)")
            ->required();
        app->add_option("--format", format, "auto, csv or plain");
    }
    io::Ingested load() const { return io::ingest(path, io::parse_format(format)); }
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create '" + dir.string() + "'");
}

void attach_config(CLI::App* app) {
    app->add_option("--config")->description("key = value file; flags take precedence");
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

/// Replaces `--config FILE` in `args` (args[0] is the subcommand) by the
/// options the file sets, skipping any given explicitly.
void expand_config(const CLI::App& sub, std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config '" + path + "'");

    std::vector<std::string> extra;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        const std::string where = path + " line " + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(where + ": expected key = value");
        std::string key = trimmed(line.substr(0, eq));
        std::string value = trimmed(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        std::replace(key.begin(), key.end(), '_', '-');
        const std::string flag = "--" + key;
        const CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw(flag);
        if (opt == nullptr) throw UsageError(where + ": unknown key '" + key + "'");
        if (given_on_command_line(args, flag)) continue;
        if (opt->get_expected_min() == 0) {
            if (value == "true" || value == "1" || value == "yes") extra.push_back(flag);
            else if (value != "false" && value != "0" && value != "no") {
                throw UsageError(where + ": '" + key + "' takes true or false");
            }
            continue;
        }
        extra.push_back(flag);
        extra.push_back(value);
    }
    args.insert(args.begin() + 1, extra.begin(), extra.end());
}

std::string gamma_dir_name(double g) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "gamma_%g", g);
    return buf;
}

}  // namespace

std::vector<BenchCell> parse_grid(const std::string& text) {
    std::map<std::string, std::vector<std::string>> keys;
    std::stringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "grid line " + std::to_string(lineno);
        if (eq == std::string::npos) throw UsageError(where + ": expected key = value");
        const std::string key = trimmed(line.substr(0, eq));
        if (key != "scenario" && key != "T" && key != "sigma" && key != "param") {
            throw UsageError(where + ": unknown key '" + key + "'");
        }
        if (keys.count(key)) throw UsageError(where + ": repeated key '" + key + "'");
        auto values = split_list(line.substr(eq + 1));
        if (values.empty()) throw UsageError(where + ": empty value list");
        keys[key] = std::move(values);
    }

    std::vector<Scenario> scenarios{Scenario::Local};
    if (keys.count("scenario")) {
        scenarios.clear();
        for (const auto& s : keys["scenario"]) {
            if (s == "local") scenarios.push_back(Scenario::Local);
            else if (s == "double") scenarios.push_back(Scenario::Double);
            else throw UsageError("grid: unknown scenario '" + s + "'");
        }
    }
    auto numbers = [&](const std::string& key, std::vector<double> fallback) {
        if (!keys.count(key)) return fallback;
        std::vector<double> out;
        for (const auto& s : keys[key]) out.push_back(number(s, "grid " + key));
        return out;
    };
    const auto lengths = numbers("T", {2500});
    const auto sigmas = numbers("sigma", {0.2});
    const auto params = numbers("param", {0.25});

    std::vector<BenchCell> grid;
    for (Scenario sc : scenarios) {
        for (double t : lengths) {
            if (!(t >= 4) || t != std::floor(t)) throw UsageError("grid: T must be an integer >= 4");
            for (double s : sigmas) {
                if (!(s >= 0)) throw UsageError("grid: sigma must be >= 0");
                for (double p : params) {
                    if (sc == Scenario::Double && (p < 0 || p != std::floor(p))) {
                        throw UsageError("grid: double scenario needs an integer gap >= 0");
                    }
                    if (sc == Scenario::Local && !(p > 0)) {
                        throw UsageError("grid: locality ratio must be > 0");
                    }
                    grid.push_back({sc, static_cast<std::size_t>(t), s, p});
                }
            }
        }
    }
    return grid;
}

namespace {

int dispatch(int argc, const char* const* argv, std::ostream& out) {
    CLI::App app{"Local change point signal cleaning"};
    app.name("lcdsc");
    app.require_subcommand(1);

    // decompose
    auto* decompose = app.add_subcommand("decompose", "EEMD of a series into imfs.csv");
    InputOptions dec_in;
    EmdOptions dec_emd;
    std::string dec_out;
    bool dec_amps = false;
    dec_in.attach(decompose);
    dec_emd.attach(decompose);
    decompose->add_option("--out-dir", dec_out)->required();
    decompose->add_flag("--amplitudes", dec_amps, "Also write amplitudes.csv");
    attach_config(decompose);

    // clean
    auto* clean = app.add_subcommand("clean", "Full cleaning pipeline with report.json");
    InputOptions clean_in;
    CleanOptions clean_opts;
    std::string clean_out;
    clean_in.attach(clean);
    clean_opts.attach(clean, true);
    clean->add_option("--out-dir", clean_out)->required();
    attach_config(clean);

    // sweep-gamma
    auto* sweep = app.add_subcommand("sweep-gamma", "One cleaning report per gamma");
    InputOptions sweep_in;
    CleanOptions sweep_opts;
    std::string sweep_out;
    std::string gamma_list;
    sweep_in.attach(sweep);
    sweep_opts.attach(sweep, false);
    sweep->add_option("--gammas", gamma_list, "Comma-separated gammas")->required();
    sweep->add_option("--out-dir", sweep_out)->required();
    attach_config(sweep);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Write noisy.csv and truth.csv");
    std::string sim_kind;
    std::string sim_out;
    std::size_t sim_len = 2500;
    std::size_t sim_start = 1000;
    std::size_t sim_end = 1500;
    std::size_t sim_delta = 500;
    double sim_sigma = 0.2;
    double sim_f0 = 0.01;
    double sim_f1 = 0.1;
    std::uint64_t sim_seed = 0;
    simulate->add_option("kind", sim_kind, "doppler, chirp or double")
        ->required()
        ->check(CLI::IsMember({"doppler", "chirp", "double"}));
    simulate->add_option("--out", sim_out, "Output directory")->required();
    simulate->add_option("--length", sim_len, "Series length (doppler, chirp)");
    simulate->add_option("--start", sim_start, "First active sample (doppler)");
    simulate->add_option("--end", sim_end, "Last active sample (doppler)");
    simulate->add_option("--delta", sim_delta, "Gap between the bursts (double)");
    simulate->add_option("--sigma", sim_sigma, "Noise sd")->check(CLI::NonNegativeNumber);
    simulate->add_option("--f0", sim_f0, "Start frequency, cycles per sample (chirp)");
    simulate->add_option("--f1", sim_f1, "End frequency, cycles per sample (chirp)");
    simulate->add_option("--seed", sim_seed);
    attach_config(simulate);

    // bench
    auto* bench = app.add_subcommand("bench", "Seeded method comparison over a grid");
    std::string bench_grid;
    std::string bench_methods = "lcdsc,khigh,llow,band,powerset,wht,wit,none";
    std::size_t bench_reps = 20;
    std::uint64_t bench_seed = 0;
    std::string bench_out;
    bool bench_timing = false;
    CleanOptions bench_opts;
    bench->add_option("--grid", bench_grid, "Grid file")->required();
    bench->add_option("--methods", bench_methods, "Comma-separated method names");
    bench->add_option("--replicates", bench_reps)->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_seed, "Base seed for instances and ensembles");
    bench->add_option("--out", bench_out, "Output CSV")->required();
    bench->add_flag("--timing", bench_timing, "Record wall time in the seconds column");
    bench_opts.attach(bench, true, false);
    attach_config(bench);

    // compare
    auto* compare = app.add_subcommand("compare", "RSS of each method against a known truth");
    InputOptions cmp_in;
    CleanOptions cmp_opts;
    std::string cmp_truth;
    std::string cmp_methods = "lcdsc,khigh,llow,band,powerset,wht,wit,none";
    std::string cmp_out;
    cmp_in.attach(compare);
    cmp_opts.attach(compare, true);
    compare->add_option("--truth", cmp_truth, "Truth series, same layout as the input")->required();
    compare->add_option("--methods", cmp_methods, "Comma-separated method names");
    compare->add_option("--out", cmp_out, "Output CSV")->required();
    attach_config(compare);

    std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
    if (!args.empty()) {
        if (const CLI::App* sub = app.get_subcommand_no_throw(args.front())) expand_config(*sub, args);
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0) throw;
        return app.exit(e, out, out);
    }

    if (*decompose) {
        const auto in = dec_in.load();
        dec_emd.emd.validate();
        const Decomposition d = eemd(in.series, dec_emd.emd);
        ensure_dir(dec_out);
        std::vector<std::vector<double>> cols;
        for (const auto& imf : d.imfs) cols.push_back(imf.samples);
        cols.push_back(d.residual);
        auto header = io::imf_header(d.imfs.size());
        header.push_back("residual");
        io::write_atomic(fs::path(dec_out) / "imfs.csv", io::matrix_csv(header, cols));
        if (dec_amps) {
            std::vector<std::vector<double>> amps;
            for (const auto& imf : d.imfs) amps.push_back(instantaneous_amplitude(imf.samples));
            header.pop_back();
            io::write_atomic(fs::path(dec_out) / "amplitudes.csv", io::matrix_csv(header, amps));
        }
        out << d.imfs.size() << " IMFs written to " << dec_out << "\n";
    } else if (*clean) {
        const LcdscConfig config = clean_opts.config();
        const auto in = clean_in.load();
        const CleaningReport report = lcdsc_clean(in.series, config);
        io::write_cleaning_outputs(clean_out, report, in.t0);
        out << "significant IMFs: " << report.significant_imfs.size() << " of "
            << report.decomposition.imfs.size() << "\n";
    } else if (*sweep) {
        const LcdscConfig config = sweep_opts.config();
        std::vector<double> gammas;
        for (const auto& g : split_list(gamma_list)) gammas.push_back(number(g, "--gammas"));
        const auto in = sweep_in.load();
        const auto reports = gamma_sweep(in.series, gammas, config);
        ensure_dir(sweep_out);
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const fs::path dir = fs::path(sweep_out) / gamma_dir_name(gammas[i]);
            io::write_cleaning_outputs(dir, reports[i], in.t0);
            std::size_t nonzero = 0;
            for (double v : reports[i].cleaned_signal) nonzero += v != 0.0;
            out << dir.filename().string() << ": " << nonzero << " nonzero samples\n";
        }
    } else if (*simulate) {
        std::vector<double> noisy;
        std::vector<double> truth;
        if (sim_kind == "doppler") {
            LocalSignalSpec spec;
            spec.total_len = sim_len;
            spec.active = {sim_start, sim_end};
            spec.noise_sigma = sim_sigma;
            spec.seed = sim_seed;
            if (sim_end >= sim_len) throw UsageError("--end must be below --length");
            auto sig = local_doppler(spec);
            noisy = std::move(sig.noisy.samples);
            truth = std::move(sig.truth);
        } else if (sim_kind == "chirp") {
            noisy = chirp(sim_len, sim_f0, sim_f1, sim_sigma, sim_seed).samples;
            truth = chirp(sim_len, sim_f0, sim_f1, 0.0, sim_seed).samples;
        } else {
            auto sig = double_doppler(sim_delta, sim_sigma, sim_seed);
            noisy = std::move(sig.noisy.samples);
            truth = std::move(sig.truth);
        }
        ensure_dir(sim_out);
        io::write_atomic(fs::path(sim_out) / "noisy.csv", io::series_csv(noisy, 0.0, 1.0));
        io::write_atomic(fs::path(sim_out) / "truth.csv", io::series_csv(truth, 0.0, 1.0));
        out << noisy.size() << " samples written to " << sim_out << "\n";
    } else if (*bench) {
        const LcdscConfig config = bench_opts.config();
        const auto methods = split_list(bench_methods);
        check_methods(methods);
        std::ifstream grid_file(bench_grid);
        if (!grid_file) throw DataError("cannot open '" + bench_grid + "'");
        std::ostringstream grid_text;
        grid_text << grid_file.rdbuf();
        const auto grid = parse_grid(grid_text.str());
        if (grid.empty()) throw UsageError("grid has no cells");
        const auto rows = run_benchmark(methods, grid, bench_reps, bench_seed, config);
        std::ostringstream csv;
        write_benchmark_csv(csv, rows, bench_timing);
        io::write_atomic(bench_out, csv.str());
        out << rows.size() << " rows written to " << bench_out << "\n";
    } else if (*compare) {
        const LcdscConfig config = cmp_opts.config();
        const auto methods = split_list(cmp_methods);
        check_methods(methods);
        const auto in = cmp_in.load();
        const auto truth = io::ingest(cmp_truth, io::parse_format(cmp_in.format));
        if (truth.series.size() != in.series.size()) {
            throw DataError("truth has " + std::to_string(truth.series.size()) +
                            " samples, input has " + std::to_string(in.series.size()));
        }
        const bool needs_decomposition = std::any_of(
            methods.begin(), methods.end(), [](const std::string& m) { return m != "none"; });
        Decomposition d;
        if (needs_decomposition) d = eemd(in.series, config.emd);
        std::string csv = "method,rss\n";
        for (const auto& m : methods) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g",
                          method_rss(m, in.series, truth.series.samples, d, config));
            csv += m + "," + buf + "\n";
        }
        io::write_atomic(cmp_out, csv);
        out << methods.size() << " methods written to " << cmp_out << "\n";
    }
    return 0;
}

std::string one_line(std::string msg) {
    for (char& c : msg) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    while (!msg.empty() && msg.back() == ' ') msg.pop_back();
    return msg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(argc, argv, out);
    } catch (const CLI::ParseError& e) {
        err << "lcdsc: usage error: " << one_line(e.what()) << "\n";
        return 1;
    } catch (const UsageError& e) {
        err << "lcdsc: usage error: " << one_line(e.what()) << "\n";
        return 1;
    } catch (const DataError& e) {
        err << "lcdsc: data error: " << one_line(e.what()) << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "lcdsc: numerical error: " << one_line(e.what()) << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "lcdsc: error: " << one_line(e.what()) << "\n";
        return 3;
    }
}

}  // namespace lcdsc::cli
