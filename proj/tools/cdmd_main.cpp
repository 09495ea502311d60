// Command-line front end: decompose (single run), experiment (config-driven
// studies), gen (synthetic snapshot files), convert (csv <-> binary).
// Exit codes: 0 success, 2 configuration/validation problem, 3 solver ran out
// of iterations (outputs still written).

#include "cdmd/errors.hpp"
#include "cdmd/experiment.hpp"
#include "cdmd/methods.hpp"
#include "cdmd/montecarlo.hpp"
#include "cdmd/parallel.hpp"
#include "cdmd/snapshot_io.hpp"
#include "cdmd/systems.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace cdmd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoConverge = 3;

struct SystemFlags {
    std::string system = "linper";
    long long n = 32;
    double sigma2 = 0.0;
    double snr_db = 0.0;
    bool use_snr = false;
    std::uint64_t seed = 0;
    std::string input;  // snapshot file instead of a generator
};

void add_system_flags(CLI::App* cmd, SystemFlags& f) {
    cmd->add_option("--system", f.system, "Synthetic system: linper|sine")
        ->check(CLI::IsMember({"linper", "sine"}))
        ->capture_default_str();
    cmd->add_option("--n", f.n, "Number of snapshot pairs")->capture_default_str();
    cmd->add_option("--sigma2", f.sigma2, "Gaussian noise variance (0 = clean)")
        ->capture_default_str();
    cmd->add_option_function<double>(
        "--snr-db",
        [&f](double v) {
            f.snr_db = v;
            f.use_snr = true;
        },
        "Noise level as SNR in dB (overrides --sigma2)");
    cmd->add_option("--seed", f.seed, "Noise seed")->capture_default_str();
    cmd->add_option("--input", f.input, "Snapshot sequence file (.csv or binary)");
}

SnapshotData make_data(const SystemFlags& f, SystemConfig* sys_out) {
    SystemConfig sys;
    if (!f.input.empty()) {
        if (!fs::exists(f.input))
            throw std::invalid_argument("input file does not exist: " + f.input);
        sys.kind = SystemConfig::Kind::File;
        sys.path = f.input;
    } else if (f.system == "linper") {
        sys.kind = SystemConfig::Kind::LinearPeriodic;
        sys.linper.n = static_cast<Index>(f.n);
    } else {
        sys.kind = SystemConfig::Kind::Sine;
        sys.sine = SineSuperpositionSpec::defaults(static_cast<Index>(f.n));
    }
    SnapshotData data = sys.generate();
    if (f.use_snr || f.sigma2 > 0.0) {
        NoiseSpec noise;
        noise.seed = f.seed;
        if (f.use_snr) {
            noise.mode = NoiseMode::SnrDb;
            noise.snr_db = f.snr_db;
        } else {
            noise.variance = f.sigma2;
        }
        data = add_noise(data, noise);
    }
    if (sys_out) *sys_out = sys;
    return data;
}

struct SolverFlags {
    SolverOptions opts;
    bool freeze_rho = false;

    void apply() {
        if (freeze_rho) {
            opts.admm.adapt_rho = false;
            opts.admm2.adapt_rho = false;
        }
    }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
    cmd->add_option("--rho0", f.opts.admm.rho0, "Initial ADMM penalty")->capture_default_str();
    cmd->add_option("--tau", f.opts.admm.tau, "Penalty multiplier")->capture_default_str();
    cmd->add_option("--mu", f.opts.admm.mu, "Residual-ratio trigger")->capture_default_str();
    cmd->add_option("--eps-abs", f.opts.admm.eps_abs, "Absolute tolerance")
        ->capture_default_str();
    cmd->add_option("--eps-rel", f.opts.admm.eps_rel, "Relative tolerance")
        ->capture_default_str();
    cmd->add_option("--max-iters", f.opts.admm.max_iters, "Iteration cap")
        ->capture_default_str();
    cmd->add_flag("--freeze-rho", f.freeze_rho, "Disable the adaptive penalty");
    cmd->add_option("--nu", f.opts.admm2.nu, "cdmd2: C-block penalty")->capture_default_str();
    cmd->add_option("--mu-reg", f.opts.admm2.mu_reg, "cdmd2: slack penalty")
        ->capture_default_str();
}

void sync_admm2(SolverFlags& f) {
    // The shared ADMM knobs drive both solver configs.
    f.opts.admm2.rho0 = f.opts.admm.rho0;
    f.opts.admm2.tau = f.opts.admm.tau;
    f.opts.admm2.mu_trigger = f.opts.admm.mu;
    f.opts.admm2.eps_abs = f.opts.admm.eps_abs;
    f.opts.admm2.eps_rel = f.opts.admm.eps_rel;
    f.opts.admm2.max_iters = f.opts.admm.max_iters;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string matrix_csv(const Mat& m) {
    std::ostringstream ss;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) ss << ',';
            ss << io::format_double(m(i, j));
        }
        ss << '\n';
    }
    return ss.str();
}

int cmd_decompose(const SystemFlags& sysf, SolverFlags& solf, const std::string& method_name_,
                  long long r_flag, const std::string& outdir) {
    solf.apply();
    sync_admm2(solf);
    const Method method = parse_method(method_name_);

    SystemConfig sys;
    const SnapshotData data = make_data(sysf, &sys);
    const Index r = r_flag > 0 ? static_cast<Index>(r_flag) : sys.default_rank();

    const MethodOutput out = run_method(data, r, method, solf.opts, /*with_backward=*/true);
    for (const std::string& w : out.warnings) std::cerr << "warning: " << w << "\n";
    if (out.effective_rank < r)
        std::cerr << "warning: rank truncated from " << r << " to " << out.effective_rank
                  << "\n";

    fs::create_directories(outdir);
    {
        std::ostringstream ss;
        ss << "index,re_discrete,im_discrete,re_continuous,im_continuous\n";
        for (Index j = 0; j < out.dmd.eigs_discrete.size(); ++j) {
            ss << j << ',' << io::format_double(out.dmd.eigs_discrete(j).real()) << ','
               << io::format_double(out.dmd.eigs_discrete(j).imag()) << ','
               << io::format_double(out.dmd.eigs_continuous(j).real()) << ','
               << io::format_double(out.dmd.eigs_continuous(j).imag()) << '\n';
        }
        write_file(fs::path(outdir) / "eigenvalues.csv", ss.str());
    }
    write_file(fs::path(outdir) / "operator.csv", matrix_csv(out.dmd.A));
    {
        // modes: column pair (re, im) per mode
        std::ostringstream ss;
        for (Index j = 0; j < out.dmd.modes.cols(); ++j) {
            if (j) ss << ',';
            ss << "mode" << j << "_re,mode" << j << "_im";
        }
        ss << '\n';
        for (Index i = 0; i < out.dmd.modes.rows(); ++i) {
            for (Index j = 0; j < out.dmd.modes.cols(); ++j) {
                if (j) ss << ',';
                ss << io::format_double(out.dmd.modes(i, j).real()) << ','
                   << io::format_double(out.dmd.modes(i, j).imag());
            }
            ss << '\n';
        }
        write_file(fs::path(outdir) / "modes.csv", ss.str());
    }
    if (method == Method::Cdmd || method == Method::Cdmd2) {
        std::ostringstream ss;
        ss << "iter,primal,dual,objective,eps_pri,eps_dual,rho\n";
        for (std::size_t k = 0; k < out.history.size(); ++k) {
            const ResidualRecord& rec = out.history[k];
            ss << k << ',' << io::format_double(rec.primal) << ','
               << io::format_double(rec.dual) << ',' << io::format_double(rec.objective) << ','
               << io::format_double(rec.eps_pri) << ',' << io::format_double(rec.eps_dual)
               << ',' << io::format_double(rec.rho) << '\n';
        }
        write_file(fs::path(outdir) / "history.csv", ss.str());
        write_file(fs::path(outdir) / "backward.csv", matrix_csv(out.backward));
        if (!out.converged) {
            std::cerr << "solver did not reach tolerance within " << out.iterations
                      << " iterations\n";
            return kExitNoConverge;
        }
    }
    std::cout << "method " << method_name(method) << ", rank " << out.effective_rank
              << ", outputs in " << outdir << "\n";
    return kExitOk;
}

int cmd_experiment(const std::string& config_path, const std::string& outdir) {
    if (!fs::exists(config_path))
        throw std::invalid_argument("config file does not exist: " + config_path);
    const ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
    const int failed = run_experiment(cfg, outdir, std::cout);
    if (failed > 0) std::cerr << failed << " trial(s) failed and were excluded\n";
    return kExitOk;
}

int cmd_gen(const SystemFlags& sysf, const std::string& output, const std::string& format) {
    Mat seq;
    double dt = 0.0;
    if (!sysf.input.empty())
        throw std::invalid_argument("gen produces synthetic data; --input is not accepted");
    if (sysf.system == "linper") {
        LinearPeriodicSpec spec;
        spec.n = static_cast<Index>(sysf.n);
        seq = linear_periodic_sequence(spec);
        dt = spec.dt();
    } else {
        const SineSuperpositionSpec spec =
            SineSuperpositionSpec::defaults(static_cast<Index>(sysf.n));
        seq = sine_sequence(spec);
        dt = spec.tgrid(1) - spec.tgrid(0);
    }
    if (sysf.sigma2 > 0.0) seq = add_noise_sequence(seq, sysf.sigma2, sysf.seed);

    io::Format fmt = io::Format::Auto;
    if (format == "csv") fmt = io::Format::Csv;
    if (format == "bin") fmt = io::Format::Binary;
    io::save_sequence(output, seq, dt, fmt);
    std::cout << "wrote " << seq.rows() << "x" << seq.cols() << " sequence to " << output
              << "\n";
    return kExitOk;
}

int cmd_convert(const std::string& input, const std::string& output,
                const std::string& in_format, const std::string& out_format) {
    if (!fs::exists(input))
        throw std::invalid_argument("input file does not exist: " + input);
    auto pick = [](const std::string& name) {
        if (name == "csv") return io::Format::Csv;
        if (name == "bin") return io::Format::Binary;
        return io::Format::Auto;
    };
    const io::Sequence seq = io::load_sequence(input, pick(in_format));
    io::save_sequence(output, seq.states, seq.dt, pick(out_format));
    std::cout << "converted " << input << " -> " << output << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Consistent dynamic mode decomposition toolkit"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads,
                   "OpenMP thread cap for trial loops (outputs are identical for any value)");

    // decompose
    auto* dec = app.add_subcommand("decompose", "Run one estimator on one dataset");
    SystemFlags dec_sys;
    SolverFlags dec_sol;
    std::string dec_method;
    long long dec_r = 0;
    std::string dec_out = "decompose_out";
    add_system_flags(dec, dec_sys);
    add_solver_flags(dec, dec_sol);
    dec->add_option("--method", dec_method, "exact|fbdmd|tlsdmd|cdmd|cdmd2")->required();
    dec->add_option("--r", dec_r, "POD rank (default: 2 for linper, 4 for sine)");
    dec->add_option("--output-dir", dec_out, "Output directory")->capture_default_str();

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a config-driven study");
    std::string exp_config;
    std::string exp_out;
    exp->add_option("--config", exp_config, "Experiment config file")->required();
    exp->add_option("--output-dir", exp_out, "Override the config's output.dir");

    // gen
    auto* gen = app.add_subcommand("gen", "Write a synthetic snapshot sequence to a file");
    SystemFlags gen_sys;
    std::string gen_output;
    std::string gen_format = "auto";
    add_system_flags(gen, gen_sys);
    gen->add_option("--output", gen_output, "Destination file")->required();
    gen->add_option("--format", gen_format, "csv|bin|auto (by extension)")
        ->check(CLI::IsMember({"csv", "bin", "auto"}))
        ->capture_default_str();

    // convert
    auto* conv = app.add_subcommand("convert", "Convert snapshot files between csv and binary");
    std::string conv_in, conv_out;
    std::string conv_informat = "auto", conv_outformat = "auto";
    conv->add_option("--input", conv_in, "Source file")->required();
    conv->add_option("--output", conv_out, "Destination file")->required();
    conv->add_option("--in-format", conv_informat, "csv|bin|auto")
        ->check(CLI::IsMember({"csv", "bin", "auto"}));
    conv->add_option("--out-format", conv_outformat, "csv|bin|auto")
        ->check(CLI::IsMember({"csv", "bin", "auto"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    par::set_threads(threads);

    try {
        if (dec->parsed()) return cmd_decompose(dec_sys, dec_sol, dec_method, dec_r, dec_out);
        if (exp->parsed()) return cmd_experiment(exp_config, exp_out);
        if (gen->parsed()) return cmd_gen(gen_sys, gen_output, gen_format);
        if (conv->parsed()) return cmd_convert(conv_in, conv_out, conv_informat, conv_outformat);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
