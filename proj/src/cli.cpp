#include "bimodal/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bimodal/config.hpp"
#include "bimodal/decoupling.hpp"
#include "bimodal/dynamics.hpp"
#include "bimodal/io.hpp"
#include "bimodal/models.hpp"
#include "bimodal/verify.hpp"

namespace bimodal {
namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Data output goes to --out when given, otherwise to the stream the caller
// handed in (stdout in the real binary).
struct OutputTarget {
    std::ofstream file;
    std::ostream* stream = nullptr;

    OutputTarget(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            stream = &fallback;
        } else {
            file.open(path);
            if (!file) {
                throw std::runtime_error("cannot open output file: " + path);
            }
            stream = &file;
        }
    }
};

Config load_config(const std::string& path) {
    if (path.empty()) return Config::parse_string("", "<no config>");
    return Config::parse_file(path);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string token = text.substr(pos, comma - pos);
        const auto a = token.find_first_not_of(" \t");
        if (a != std::string::npos) {
            const auto b = token.find_last_not_of(" \t");
            out.push_back(token.substr(a, b - a + 1));
        }
        pos = comma + 1;
    }
    return out;
}

// Every CSV preamble repeats the model in config syntax, so a run can be
// reproduced by pasting the "# " lines into a [model] section.
void append_model_header(std::vector<KeyValue>& kv, const ModelParams& p) {
    const auto real = [&](const char* key, double v) {
        kv.push_back({key, format_double(v)});
    };
    const auto complex_pair = [&](const std::string& base, Complex c) {
        kv.push_back({base + "_re", format_double(c.real())});
        kv.push_back({base + "_im", format_double(c.imag())});
    };
    real("omega0", p.omega0);
    real("omega", p.omega);
    real("s", p.s);
    real("r1", p.r1);
    real("r2", p.r2);
    complex_pair("g1", p.g1);
    complex_pair("g2", p.g2);
    complex_pair("lambda1", p.lambda1);
    complex_pair("lambda2", p.lambda2);
    complex_pair("g", p.g);
    real("spin_ladder_scale", p.spin_ladder_scale);
    kv.push_back({"enforce_resonance", p.enforce_resonance ? "true" : "false"});
}

void append_detector_header(std::vector<KeyValue>& kv,
                            const ParityDetector& det) {
    kv.push_back({"band", format_double(det.band)});
    kv.push_back({"window_frac", format_double(det.window_frac)});
    kv.push_back({"dominance", format_double(det.dominance)});
}

struct VerifyArgs {
    std::string config_path;
    std::string out_path;
    std::string suites;
    std::uint64_t seed = 0;
    int n_draws = 0;
    int n_max = 0;
    bool suites_set = false;
    bool seed_set = false;
    bool n_draws_set = false;
    bool n_max_set = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    Config cfg = load_config(a.config_path);
    const ModelParams p = model_from_config(cfg, "model", ModelParams{});

    std::string suites = cfg.get_string("verify", "suites",
                                        "canonicity,decoupling,constants,frame");
    std::uint64_t seed = cfg.get_uint64("verify", "seed", 12345);
    int n_draws = cfg.get_int("verify", "n_draws", 100);
    int n_max = cfg.get_int("verify", "n_max", 10);
    const int canonicity_n_max = cfg.get_int("verify", "canonicity_n_max", 8);
    const int n0 = cfg.get_int("verify", "n0", 4);
    const int n_points = cfg.get_int("verify", "n_points", 200);
    cfg.finish();

    if (a.suites_set) suites = a.suites;
    if (a.seed_set) seed = a.seed;
    if (a.n_draws_set) n_draws = a.n_draws;
    if (a.n_max_set) n_max = a.n_max;

    const std::vector<std::string> selected = split_list(suites);
    if (selected.empty()) {
        throw std::runtime_error("no suites selected");
    }

    std::vector<CheckResult> results;
    for (const std::string& name : selected) {
        std::vector<CheckResult> part;
        if (name == "canonicity") {
            part = suite_canonicity(seed, n_draws, canonicity_n_max);
        } else if (name == "decoupling") {
            part = suite_decoupling(p, n_max);
        } else if (name == "constants") {
            part = suite_constants_of_motion(p, n_max);
        } else if (name == "frame") {
            part = suite_frame_equivalence(p, n_max, n0, n_points);
        } else {
            throw std::runtime_error(
                "unknown suite: " + name +
                " (expected canonicity, decoupling, constants, frame)");
        }
        results.insert(results.end(), part.begin(), part.end());
    }

    OutputTarget target(a.out_path, out);
    write_check_results_jsonl(*target.stream, results);

    int n_pass = 0, n_fail = 0, n_degenerate = 0;
    for (const CheckResult& r : results) {
        if (r.status == CheckStatus::pass) ++n_pass;
        else if (r.status == CheckStatus::fail) ++n_fail;
        else ++n_degenerate;
    }
    err << "verify: " << results.size() << " checks, " << n_pass << " pass, "
        << n_fail << " fail, " << n_degenerate << " not asserted; worst residual ratio "
        << format_double(worst_residual_ratio(results)) << "\n";
    return all_passed(results) ? kExitSuccess : kExitCheckFailed;
}

struct EvolveArgs {
    std::string config_path;
    std::string out_path;
    int n0 = 0;
    double t_max = 0.0;
    int n_steps = 0;
    int n_max = 0;
    bool n0_set = false;
    bool t_max_set = false;
    bool n_steps_set = false;
    bool n_max_set = false;
};

void write_signature(std::ostream& err, const ParitySignature& sig) {
    err << "signature: classification=" << parity_class_name(sig.classification)
        << " drop_time=" << format_double(sig.drop_time)
        << " plateau_found=" << (sig.plateau_found ? "true" : "false")
        << " plateau_t0=" << format_double(sig.plateau_t0)
        << " plateau_t1=" << format_double(sig.plateau_t1)
        << " event_time=" << format_double(sig.event_time) << "\n";
}

int cmd_evolve(const EvolveArgs& a, std::ostream& out, std::ostream& err) {
    Config cfg = load_config(a.config_path);
    const ModelParams p = model_from_config(cfg, "model", parity_default_params());

    int n0 = cfg.get_int("evolve", "n0", 4);
    double t_max = cfg.get_double("evolve", "t_max", kParityDefaultTMax);
    int n_steps = cfg.get_int("evolve", "n_steps", kParityDefaultSteps);
    int n_max = cfg.get_int("evolve", "n_max", -1);
    ParityDetector det;
    det.band = cfg.get_double("evolve", "band", det.band);
    det.window_frac = cfg.get_double("evolve", "window_frac", det.window_frac);
    det.dominance = cfg.get_double("evolve", "dominance", det.dominance);
    cfg.finish();

    if (a.n0_set) n0 = a.n0;
    if (a.t_max_set) t_max = a.t_max;
    if (a.n_steps_set) n_steps = a.n_steps;
    if (a.n_max_set) n_max = a.n_max;

    const ParityResult result = parity_experiment(p, n0, t_max, n_steps, n_max, det);

    std::vector<KeyValue> header;
    header.push_back({"command", "evolve"});
    header.push_back({"n0", std::to_string(n0)});
    header.push_back({"t_max", format_double(t_max)});
    header.push_back({"n_steps", std::to_string(n_steps)});
    header.push_back({"n_max", std::to_string(n_max < 0 ? n0 : n_max)});
    append_detector_header(header, det);
    append_model_header(header, p);

    OutputTarget target(a.out_path, out);
    write_trajectory_csv(*target.stream, result.trajectory, header);
    write_signature(err, result.signature);
    return kExitSuccess;
}

struct ScanArgs {
    std::string config_path;
    std::string out_path;
    std::string axis;
    int n_max = 0;
    bool axis_set = false;
    bool n_max_set = false;
};

int cmd_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
    Config cfg = load_config(a.config_path);

    std::string axis = cfg.get_string("scan", "axis", "n0");
    if (a.axis_set) axis = a.axis;
    if (axis != "n0" && axis != "lambda2_detune") {
        throw std::runtime_error("unknown scan axis: " + axis +
                                 " (expected n0 or lambda2_detune)");
    }

    // The two axes probe different regimes, so they start from different
    // baselines: the pure-pair-coupling point for the parity scan, the
    // cross-coupled point satisfying the decoupling relations for the
    // detuning scan.
    const ModelParams defaults =
        axis == "n0" ? parity_default_params() : ModelParams{};
    const ModelParams p = model_from_config(cfg, "model", defaults);

    OutputTarget target(a.out_path, out);
    std::ostream& data = *target.stream;

    if (axis == "n0") {
        const int n0_min = cfg.get_int("scan", "n0_min", 1);
        const int n0_max = cfg.get_int("scan", "n0_max", 8);
        const double t_max = cfg.get_double("scan", "t_max", kParityDefaultTMax);
        const int n_steps = cfg.get_int("scan", "n_steps", kParityDefaultSteps);
        int n_max = cfg.get_int("scan", "n_max", -1);
        ParityDetector det;
        det.band = cfg.get_double("scan", "band", det.band);
        det.window_frac = cfg.get_double("scan", "window_frac", det.window_frac);
        det.dominance = cfg.get_double("scan", "dominance", det.dominance);
        cfg.finish();
        if (a.n_max_set) n_max = a.n_max;

        std::vector<KeyValue> header;
        header.push_back({"command", "scan"});
        header.push_back({"axis", "n0"});
        header.push_back({"n0_min", std::to_string(n0_min)});
        header.push_back({"n0_max", std::to_string(n0_max)});
        header.push_back({"t_max", format_double(t_max)});
        header.push_back({"n_steps", std::to_string(n_steps)});
        header.push_back({"n_max", std::to_string(n_max)});
        append_detector_header(header, det);
        append_model_header(header, p);
        for (const KeyValue& kv : header) {
            data << "# " << kv.key << " = " << kv.value << "\n";
        }
        data << "n0,classification,drop_time,event_time,plateau_found\n";
        for (int n0 = n0_min; n0 <= n0_max; ++n0) {
            const ParityResult r =
                parity_experiment(p, n0, t_max, n_steps, n_max, det);
            const ParitySignature& s = r.signature;
            data << n0 << ',' << parity_class_name(s.classification) << ','
                 << format_double(s.drop_time) << ','
                 << format_double(s.event_time) << ','
                 << (s.plateau_found ? 1 : 0) << "\n";
        }
        err << "scan: axis=n0 done\n";
        return kExitSuccess;
    }

    const double detune_min = cfg.get_double("scan", "detune_min", 0.0);
    const double detune_max = cfg.get_double("scan", "detune_max", 0.05);
    const int n_values = cfg.get_int("scan", "n_values", 6);
    int n_max = cfg.get_int("scan", "n_max", 10);
    cfg.finish();
    if (a.n_max_set) n_max = a.n_max;

    std::vector<KeyValue> header;
    header.push_back({"command", "scan"});
    header.push_back({"axis", "lambda2_detune"});
    header.push_back({"detune_min", format_double(detune_min)});
    header.push_back({"detune_max", format_double(detune_max)});
    header.push_back({"n_values", std::to_string(n_values)});
    header.push_back({"n_max", std::to_string(n_max)});
    append_model_header(header, p);
    for (const KeyValue& kv : header) {
        data << "# " << kv.key << " = " << kv.value << "\n";
    }
    data << "detune,constraint_residual,forbidden_max\n";
    for (int k = 0; k < n_values; ++k) {
        const double detune =
            n_values == 1
                ? detune_min
                : detune_min + (detune_max - detune_min) * k / (n_values - 1);
        ModelParams q = p;
        q.lambda2 += detune;
        const std::vector<CheckResult> results = suite_decoupling(q, n_max);
        double constraint_residual = 0.0;
        double forbidden_max = 0.0;
        for (const CheckResult& r : results) {
            if (r.check_id == "decoupling.constraints") {
                constraint_residual = r.residual;
            } else if (r.check_id == "decoupling.forbidden_coefficients") {
                forbidden_max = r.residual;
            }
        }
        data << format_double(detune) << ',' << format_double(constraint_residual)
             << ',' << format_double(forbidden_max) << "\n";
    }
    err << "scan: axis=lambda2_detune done\n";
    return kExitSuccess;
}

struct CoeffsArgs {
    std::string config_path;
    std::string out_path;
    double theta = 0.0;
    double eta = 0.0;
    int n_max = 0;
    bool theta_set = false;
    bool eta_set = false;
    bool n_max_set = false;
};

int cmd_coeffs(const CoeffsArgs& a, std::ostream& out) {
    Config cfg = load_config(a.config_path);
    const ModelParams p = model_from_config(cfg, "model", ModelParams{});

    double theta = cfg.get_double("coeffs", "theta", std::numbers::pi / 4);
    double eta = cfg.get_double("coeffs", "eta", std::numbers::pi);
    int n_max = cfg.get_int("coeffs", "n_max", 10);
    cfg.finish();

    if (a.theta_set) theta = a.theta;
    if (a.eta_set) eta = a.eta;
    if (a.n_max_set) n_max = a.n_max;

    const HilbertSpec space = make_space(n_max);
    const OperatorMatrix v =
        transform_unitary(space, transform_for_mode_map(theta, eta));
    const OperatorMatrix h = build_quadratic_hamiltonian(space, p);
    const OperatorMatrix rotated = conjugate_frame(v, h);
    ExtractOptions opts;
    opts.enforce_family = false;
    const CoefficientExtraction extraction =
        extract_coefficients(space, rotated.entries, opts);

    nlohmann::json j;
    j["command"] = "coeffs";
    j["theta"] = theta;
    j["eta"] = eta;
    j["n_max"] = n_max;
    j["params"] = params_json(p);
    j["residual_max"] = extraction.residual_max;
    j["scale"] = extraction.scale;
    nlohmann::json coefficients;
    for (OperatorLabel l : all_operator_labels()) {
        const Complex c = extraction.table.coeff(l);
        coefficients[std::string(label_name(l))] = {c.real(), c.imag()};
    }
    j["coefficients"] = coefficients;

    OutputTarget target(a.out_path, out);
    *target.stream << j.dump(2) << "\n";
    return kExitSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"exact dynamics and verification for a two-mode cavity model"};
    app.name("bimodal");
    app.require_subcommand(1);

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand(
        "verify", "run verification suites, one JSON line per check");
    verify->add_option("--config", va.config_path, "config file (ini-style)");
    verify->add_option("--out", va.out_path, "write JSONL here instead of stdout");
    auto* v_suites = verify->add_option(
        "--suites", va.suites, "comma list: canonicity,decoupling,constants,frame");
    auto* v_seed = verify->add_option("--seed", va.seed, "sampler seed");
    auto* v_draws = verify->add_option("--n-draws", va.n_draws,
                                       "random draws for the sampled checks");
    auto* v_nmax = verify->add_option("--n-max", va.n_max,
                                      "photon-number cutoff for the model suites");

    EvolveArgs ea;
    CLI::App* evolve = app.add_subcommand(
        "evolve", "evolve |n0,0,down> and classify the parity signature");
    evolve->add_option("--config", ea.config_path, "config file (ini-style)");
    evolve->add_option("--out", ea.out_path, "write CSV here instead of stdout");
    auto* e_n0 = evolve->add_option("--n0", ea.n0, "initial photons in mode 1");
    auto* e_tmax = evolve->add_option("--t-max", ea.t_max, "time horizon");
    auto* e_steps = evolve->add_option("--n-steps", ea.n_steps, "grid steps");
    auto* e_nmax = evolve->add_option("--n-max", ea.n_max,
                                      "photon-number cutoff (-1: use n0, exact)");

    ScanArgs sa;
    CLI::App* scan = app.add_subcommand(
        "scan", "sweep one axis (n0 or lambda2_detune) into a CSV table");
    scan->add_option("--config", sa.config_path, "config file (ini-style)");
    scan->add_option("--out", sa.out_path, "write CSV here instead of stdout");
    auto* s_axis = scan->add_option("--axis", sa.axis, "n0 | lambda2_detune");
    auto* s_nmax = scan->add_option("--n-max", sa.n_max, "photon-number cutoff");

    CoeffsArgs ca;
    CLI::App* coeffs = app.add_subcommand(
        "coeffs", "coefficients of the model conjugated by a mode-map transform");
    coeffs->add_option("--config", ca.config_path, "config file (ini-style)");
    coeffs->add_option("--out", ca.out_path, "write JSON here instead of stdout");
    auto* c_theta = coeffs->add_option("--theta", ca.theta, "mode-map angle");
    auto* c_eta = coeffs->add_option("--eta", ca.eta, "mode-map relative phase");
    auto* c_nmax = coeffs->add_option("--n-max", ca.n_max, "photon-number cutoff");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    va.suites_set = v_suites->count() > 0;
    va.seed_set = v_seed->count() > 0;
    va.n_draws_set = v_draws->count() > 0;
    va.n_max_set = v_nmax->count() > 0;
    ea.n0_set = e_n0->count() > 0;
    ea.t_max_set = e_tmax->count() > 0;
    ea.n_steps_set = e_steps->count() > 0;
    ea.n_max_set = e_nmax->count() > 0;
    sa.axis_set = s_axis->count() > 0;
    sa.n_max_set = s_nmax->count() > 0;
    ca.theta_set = c_theta->count() > 0;
    ca.eta_set = c_eta->count() > 0;
    ca.n_max_set = c_nmax->count() > 0;

    try {
        if (app.got_subcommand(verify)) return cmd_verify(va, out, err);
        if (app.got_subcommand(evolve)) return cmd_evolve(ea, out, err);
        if (app.got_subcommand(scan)) return cmd_scan(sa, out, err);
        if (app.got_subcommand(coeffs)) return cmd_coeffs(ca, out);
        err << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace bimodal
