#include "cdmd/experiment.hpp"

#include "cdmd/errors.hpp"
#include "cdmd/snapshot_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace cdmd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for " + key + ": '" + value +
                                    "'");
    }
}

long long to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value for " + key + ": '" + value +
                                    "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw std::invalid_argument("config: bad boolean value for " + key + ": '" + value + "'");
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json noise_json(const NoiseSpec& n) {
    return json{{"mode", n.mode == NoiseMode::Variance ? "variance" : "snr"},
                {"sigma2", n.variance},
                {"snr_db", n.snr_db},
                {"seed", n.seed}};
}

json system_json(const SystemConfig& sys, Index n) {
    json j;
    switch (sys.kind) {
        case SystemConfig::Kind::LinearPeriodic:
            j["kind"] = "linper";
            j["n"] = n;
            break;
        case SystemConfig::Kind::Sine:
            j["kind"] = "sine";
            j["n"] = n;
            break;
        case SystemConfig::Kind::File:
            j["kind"] = "file";
            j["path"] = sys.path;
            break;
    }
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_manifest(const fs::path& dir, const ExperimentConfig& cfg,
                    const std::map<std::string, std::string>& raw) {
    json j;
    j["config"] = raw;
    j["resolved"] = {
        {"study", cfg.study == Study::EigScatter     ? "eigscatter"
                  : cfg.study == Study::Consistency ? "consistency"
                                                    : "trajectory"},
        {"system", system_json(cfg.system, cfg.n)},
        {"noise", noise_json(cfg.noise)},
        {"r", cfg.effective_r()},
        {"trials", cfg.trials},
        {"seed", cfg.seed},
        {"trial_seed_rule", "seedbase + trial_index"},
        {"truth", complex_json(cfg.effective_truth())},
        {"metric_a", cfg.metric_a},
    };
    write_text(dir / "manifest.json", j.dump(2) + "\n");
}

int run_eigscatter(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    const SystemConfig sys = cfg.system.kind == SystemConfig::Kind::File
                                 ? cfg.system
                                 : cfg.system.with_n(cfg.n);
    const Complex truth = cfg.effective_truth();
    const Index r = cfg.effective_r();

    std::ostringstream csv;
    csv << "trial,method,re,im\n";
    json batches = json::array();
    int failed = 0;

    for (const Method method : cfg.methods) {
        log << "eigscatter: " << method_name(method) << " x " << cfg.trials << " trials\n";
        const TrialBatch batch =
            monte_carlo(sys, method, cfg.noise, cfg.trials, cfg.seed, truth, r, cfg.solver);
        failed += batch.failed;

        for (std::size_t i = 0; i < batch.estimates.size(); ++i) {
            csv << batch.trial_ids[i] << ',' << batch.method << ','
                << io::format_double(batch.estimates[i].real()) << ','
                << io::format_double(batch.estimates[i].imag()) << '\n';
        }

        Complex mean(0.0, 0.0);
        for (const Complex& e : batch.estimates) mean += e;
        if (!batch.estimates.empty()) mean /= static_cast<double>(batch.estimates.size());

        json b;
        b["method"] = batch.method;
        b["n_trials"] = batch.n_trials;
        b["failed"] = batch.failed;
        b["mean_all"] = complex_json(mean);
        b["mean_abs_error"] = std::abs(mean - truth);
        try {
            const EllipseSummary e = confidence_ellipse(batch);
            b["ellipse"] = {{"center", complex_json(e.center)},
                            {"r_major", e.r_major},
                            {"r_min", e.r_min},
                            {"orientation", e.orientation},
                            {"coverage", e.coverage}};
        } catch (const DegenerateBatchError&) {
            b["ellipse"] = nullptr;
            b["degenerate"] = true;
        }
        b["error_metric"] = error_metric(batch, cfg.metric_a, /*degenerate_as_zero=*/true);
        batches.push_back(b);
    }

    json results;
    results["study"] = "eigscatter";
    results["system"] = system_json(cfg.system, cfg.n);
    results["noise"] = noise_json(cfg.noise);
    results["r"] = r;
    results["truth"] = complex_json(truth);
    results["batches"] = batches;

    write_text(dir / "trials.csv", csv.str());
    write_text(dir / "results.json", results.dump(2) + "\n");
    return failed;
}

int run_consistency(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    log << "consistency sweep over n = {";
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i)
        log << (i ? "," : "") << cfg.n_list[i];
    log << "} x " << cfg.trials << " trials\n";

    const std::vector<SweepRow> table =
        consistency_sweep(cfg.system, cfg.methods, cfg.n_list, cfg.noise, cfg.trials,
                          cfg.solver);

    std::ostringstream csv;
    csv << "method,n,sigma2,value\n";
    json rows = json::array();
    for (const SweepRow& row : table) {
        csv << row.method << ',' << row.n << ',' << io::format_double(row.sigma2) << ','
            << io::format_double(row.value) << '\n';
        rows.push_back(json{{"method", row.method},
                            {"n", row.n},
                            {"sigma2", row.sigma2},
                            {"value", row.value}});
    }

    json results;
    results["study"] = "consistency";
    results["system"] = system_json(cfg.system, cfg.n);
    results["noise"] = noise_json(cfg.noise);
    results["trials"] = cfg.trials;
    results["rows"] = rows;

    write_text(dir / "sweep.csv", csv.str());
    write_text(dir / "results.json", results.dump(2) + "\n");
    return 0;
}

int run_trajectory(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    const SystemConfig sys = cfg.system.with_n(cfg.n);
    const Index r = cfg.effective_r();

    std::ostringstream csv;
    csv << "trial,method,value\n";
    json rows = json::array();
    int failed = 0;

    for (const Method method : cfg.methods) {
        log << "trajectory: " << method_name(method) << " x " << cfg.trials << " trials\n";
        const TrajectoryStudy study =
            trajectory_study(sys, method, cfg.noise, cfg.trials, cfg.seed, r, cfg.solver);
        failed += study.failed;
        for (std::size_t t = 0; t < study.errors.size(); ++t)
            csv << t << ',' << study.method << ',' << io::format_double(study.errors[t])
                << '\n';
        rows.push_back(json{{"method", study.method},
                            {"median", study.median},
                            {"failed", study.failed},
                            {"trials", cfg.trials}});
    }

    json results;
    results["study"] = "trajectory";
    results["system"] = system_json(cfg.system, cfg.n);
    results["noise"] = noise_json(cfg.noise);
    results["r"] = r;
    results["rows"] = rows;

    write_text(dir / "trajectory.csv", csv.str());
    write_text(dir / "results.json", results.dump(2) + "\n");
    return failed;
}

}  // namespace

std::map<std::string, std::string> read_config_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::map<std::string, std::string> pairs;
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
        if (pairs.count(key))
            throw std::invalid_argument("config: duplicate key '" + key + "'");
        pairs[key] = value;
    }
    return pairs;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    const auto pairs = read_config_pairs(path);
    ExperimentConfig cfg;
    cfg.raw = pairs;
    std::set<std::string> seen;

    auto take = [&](const std::string& key) -> const std::string* {
        auto it = pairs.find(key);
        if (it == pairs.end()) return nullptr;
        seen.insert(key);
        return &it->second;
    };

    if (const auto* v = take("study")) {
        if (*v == "eigscatter")
            cfg.study = Study::EigScatter;
        else if (*v == "consistency")
            cfg.study = Study::Consistency;
        else if (*v == "trajectory")
            cfg.study = Study::Trajectory;
        else
            throw std::invalid_argument("config: unknown study '" + *v + "'");
    }

    if (const auto* v = take("system.kind")) {
        if (*v == "linper")
            cfg.system.kind = SystemConfig::Kind::LinearPeriodic;
        else if (*v == "sine")
            cfg.system.kind = SystemConfig::Kind::Sine;
        else if (*v == "file")
            cfg.system.kind = SystemConfig::Kind::File;
        else
            throw std::invalid_argument("config: unknown system.kind '" + *v + "'");
    }
    if (const auto* v = take("system.n")) cfg.n = static_cast<Index>(to_int("system.n", *v));
    if (const auto* v = take("system.path")) cfg.system.path = *v;
    if (const auto* v = take("system.r")) cfg.r = static_cast<Index>(to_int("system.r", *v));

    if (const auto* v = take("noise.mode")) {
        if (*v == "variance")
            cfg.noise.mode = NoiseMode::Variance;
        else if (*v == "snr")
            cfg.noise.mode = NoiseMode::SnrDb;
        else
            throw std::invalid_argument("config: unknown noise.mode '" + *v + "'");
    }
    if (const auto* v = take("noise.sigma2")) cfg.noise.variance = to_double("noise.sigma2", *v);
    if (const auto* v = take("noise.snr_db")) cfg.noise.snr_db = to_double("noise.snr_db", *v);

    if (const auto* v = take("run.methods")) {
        for (const std::string& name : split_list(*v)) cfg.methods.push_back(parse_method(name));
    }
    if (const auto* v = take("run.trials"))
        cfg.trials = static_cast<int>(to_int("run.trials", *v));
    if (const auto* v = take("run.seed"))
        cfg.seed = static_cast<std::uint64_t>(to_int("run.seed", *v));
    if (const auto* v = take("run.n_list")) {
        for (const std::string& item : split_list(*v))
            cfg.n_list.push_back(static_cast<Index>(to_int("run.n_list", item)));
    }

    {
        const auto* re = take("truth.re");
        const auto* im = take("truth.im");
        if (re || im) {
            cfg.truth = Complex(re ? to_double("truth.re", *re) : 0.0,
                                im ? to_double("truth.im", *im) : 0.0);
            cfg.truth_set = true;
        }
    }
    if (const auto* v = take("metric.a")) cfg.metric_a = to_double("metric.a", *v);

    if (const auto* v = take("admm.rho0")) cfg.solver.admm.rho0 = to_double("admm.rho0", *v);
    if (const auto* v = take("admm.tau")) cfg.solver.admm.tau = to_double("admm.tau", *v);
    if (const auto* v = take("admm.mu")) cfg.solver.admm.mu = to_double("admm.mu", *v);
    if (const auto* v = take("admm.eps_abs"))
        cfg.solver.admm.eps_abs = to_double("admm.eps_abs", *v);
    if (const auto* v = take("admm.eps_rel"))
        cfg.solver.admm.eps_rel = to_double("admm.eps_rel", *v);
    if (const auto* v = take("admm.max_iters"))
        cfg.solver.admm.max_iters = static_cast<int>(to_int("admm.max_iters", *v));
    if (const auto* v = take("admm.adapt_rho"))
        cfg.solver.admm.adapt_rho = to_bool("admm.adapt_rho", *v);

    if (const auto* v = take("admm2.rho0")) cfg.solver.admm2.rho0 = to_double("admm2.rho0", *v);
    if (const auto* v = take("admm2.tau")) cfg.solver.admm2.tau = to_double("admm2.tau", *v);
    if (const auto* v = take("admm2.mu"))
        cfg.solver.admm2.mu_trigger = to_double("admm2.mu", *v);
    if (const auto* v = take("admm2.eps_abs"))
        cfg.solver.admm2.eps_abs = to_double("admm2.eps_abs", *v);
    if (const auto* v = take("admm2.eps_rel"))
        cfg.solver.admm2.eps_rel = to_double("admm2.eps_rel", *v);
    if (const auto* v = take("admm2.max_iters"))
        cfg.solver.admm2.max_iters = static_cast<int>(to_int("admm2.max_iters", *v));
    if (const auto* v = take("admm2.adapt_rho"))
        cfg.solver.admm2.adapt_rho = to_bool("admm2.adapt_rho", *v);
    if (const auto* v = take("admm2.nu")) cfg.solver.admm2.nu = to_double("admm2.nu", *v);
    if (const auto* v = take("admm2.mu_reg"))
        cfg.solver.admm2.mu_reg = to_double("admm2.mu_reg", *v);

    if (const auto* v = take("output.dir")) cfg.output_dir = *v;

    for (const auto& [key, value] : pairs) {
        (void)value;
        if (!seen.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
    }

    // Cross-field validation.
    if (cfg.methods.empty()) throw std::invalid_argument("config: run.methods is required");
    if (cfg.trials < 1) throw std::invalid_argument("config: run.trials must be positive");
    if (cfg.study == Study::Consistency && cfg.n_list.empty())
        throw std::invalid_argument("config: consistency study needs run.n_list");
    if (cfg.system.kind == SystemConfig::Kind::File && cfg.system.path.empty())
        throw std::invalid_argument("config: system.kind=file needs system.path");
    if (!(cfg.metric_a >= 0.0 && cfg.metric_a <= 1.0))
        throw std::invalid_argument("config: metric.a must lie in [0,1]");
    return cfg;
}

int run_experiment(const ExperimentConfig& cfg, const std::string& out_override,
                   std::ostream& log) {
    const fs::path dir = out_override.empty() ? fs::path(cfg.output_dir)
                                              : fs::path(out_override);
    fs::create_directories(dir);
    write_manifest(dir, cfg, cfg.raw);

    int failed = 0;
    switch (cfg.study) {
        case Study::EigScatter:
            failed = run_eigscatter(cfg, dir, log);
            break;
        case Study::Consistency:
            failed = run_consistency(cfg, dir, log);
            break;
        case Study::Trajectory:
            failed = run_trajectory(cfg, dir, log);
            break;
    }
    return failed;
}

}  // namespace cdmd
