#include "cli.hpp"

#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sprony/error.hpp"
#include "sprony/fixtures.hpp"
#include "sprony/io.hpp"
#include "sprony/mixture.hpp"
#include "sprony/network.hpp"
#include "sprony/prony.hpp"
#include "sprony/stability.hpp"
#include "sprony/tagging.hpp"

namespace sprony::cli
{

namespace fs = std::filesystem;

namespace
{

struct Options
{
    std::string dir = ".";
    std::string tol_eig, tol_cocycle, tol_amp, tol_rank, tol_obs;

    std::string network = "network.json";
    std::string window  = "window.csv";
    std::string model   = "model.json";
    std::string tagged  = "tagged.json";
    std::string out;

    std::string h, epsilon = "0", capture_radius, prior_gap, C2, C_L, C3;
    std::string epsilons, t_grid = "0,0.05,0.1";
    std::size_t count = 0, L = 0, trials = 50;
    std::uint64_t seed = 0;
    std::string fixture_name;
    bool model_given = false;
};

Real real_flag(const std::string& text, const char* name)
{
    try
    {
        return parse_real(text);
    }
    catch (const Error&)
    {
        throw Error(ErrorKind::InvalidArgument,
                    std::string("--") + name + " expects a number, got \"" + text + "\"");
    }
}

Real positive_flag(const std::string& text, const char* name)
{
    const Real x = real_flag(text, name);
    if (!(x > 0) || !is_finite(x))
    {
        throw Error(ErrorKind::InvalidArgument, std::string("--") + name + " must be > 0");
    }
    return x;
}

struct Context
{
    const Options& opt;
    std::ostream& out;

    fs::path path(const std::string& p) const
    {
        const fs::path candidate(p);
        return candidate.is_absolute() ? candidate : fs::path(opt.dir) / candidate;
    }
    fs::path output(const std::string& fallback) const
    {
        return path(opt.out.empty() ? fallback : opt.out);
    }

    Tolerances tolerances() const
    {
        Tolerances tol;
        if (!opt.tol_eig.empty())
            tol.eig = positive_flag(opt.tol_eig, "tol-eig");
        if (!opt.tol_cocycle.empty())
            tol.cocycle = positive_flag(opt.tol_cocycle, "tol-cocycle");
        if (!opt.tol_amp.empty())
            tol.amp = positive_flag(opt.tol_amp, "tol-amp");
        if (!opt.tol_rank.empty())
            tol.rank = positive_flag(opt.tol_rank, "tol-rank");
        if (!opt.tol_obs.empty())
            tol.obs = positive_flag(opt.tol_obs, "tol-obs");
        return tol;
    }

    MixtureSpec network() const
    {
        return io::mixture_from_json(io::read_file(path(opt.network)), tolerances());
    }

    void wrote(const fs::path& p) const { out << "wrote " << p.string() << "\n"; }
};

std::string short_real(const Real& x)
{
    if (!is_finite(x))
    {
        return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
    }
    std::ostringstream s;
    s << std::setprecision(12) << to_double(x);
    return s.str();
}

std::vector<Real> parse_list(const std::string& text, const char* name)
{
    std::vector<Real> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (!item.empty())
        {
            values.push_back(real_flag(item, name));
        }
    }
    if (values.empty())
    {
        throw Error(ErrorKind::InvalidArgument, std::string("--") + name + " is empty");
    }
    return values;
}

// ---------------------------------------------------------------- commands

void cmd_fixture(const Context& c)
{
    const Fixture f  = fixture_by_name(c.opt.fixture_name);
    const fs::path p = c.output("network.json");
    io::write_file(p, io::mixture_to_json(f.spec));
    nlohmann::json info = {{"fixture", f.name},
                           {"description", f.description},
                           {"h", short_real(f.h)},
                           {"L", f.L}};
    c.out << info.dump() << "\n";
    c.wrote(p);
}

void cmd_verify_network(const Context& c)
{
    const Tolerances tol = c.tolerances();
    MixtureSpec spec     = c.network();
    CocycleNetwork& net  = spec.network;

    io::NetworkVerification v;
    ScalingFamily family;
    family.lambda = RealMatrix::Identity(static_cast<Eigen::Index>(net.size()),
                                         static_cast<Eigen::Index>(net.size()));
    for (const auto& [key, map] : net.transfers)
    {
        family.lambda(static_cast<Eigen::Index>(key.first),
                      static_cast<Eigen::Index>(key.second)) = map.scaling;
    }
    v.gauges = recover_gauges(family, spec.reference, tol);
    for (std::size_t i = 0; i < net.size(); ++i)
    {
        net.sectors[i].gauge = v.gauges[i];
    }
    v.isospectral      = check_isospectral(net.sectors, tol);
    v.cocycle          = verify_cocycle(net);
    v.intertwining     = verify_intertwining(net, parse_list(c.opt.t_grid, "t-grid"));
    v.generator        = verify_generator_identity(net);
    v.inverse_residual = inverse_residual(net);
    const bool cocycle_ok = v.cocycle.max_residual <= tol.cocycle &&
                            v.intertwining.max_residual <= tol.cocycle &&
                            v.generator.max_residual <= tol.cocycle &&
                            v.inverse_residual <= tol.cocycle;
    v.pass = v.isospectral.pass && cocycle_ok;

    const fs::path p = c.output("verification.json");
    io::write_file(p, io::verification_to_json(v));
    c.wrote(p);
    if (!v.isospectral.pass)
    {
        throw Error(ErrorKind::SpectralMismatch, "rescaled spectra differ; see " + p.string());
    }
    if (!cocycle_ok)
    {
        throw Error(ErrorKind::MultiplicativityViolation,
                    "cocycle residual above tolerance; see " + p.string());
    }
    c.out << "network verified: " << net.size() << " sectors, max cocycle residual "
          << short_real(v.cocycle.max_residual) << "\n";
}

void cmd_synth(const Context& c)
{
    const ExponentialModel m = collapse(c.network(), c.tolerances());
    const fs::path p         = c.output("model.json");
    io::write_file(p, io::model_to_json(m));
    c.out << m.size() << " terms\n";
    c.wrote(p);
}

void cmd_sample(const Context& c)
{
    const Real h = positive_flag(c.opt.h, "h");
    const Real eps = real_flag(c.opt.epsilon, "epsilon");
    const ExponentialModel m = c.opt.model_given
                                   ? io::model_from_json(io::read_file(c.path(c.opt.model)))
                                   : collapse(c.network(), c.tolerances());
    const std::size_t count = c.opt.count ? c.opt.count : 2 * m.size();
    SampleWindow w          = sample_uniform(m, h, count);
    if (eps != 0)
    {
        w = add_noise(w, eps, c.opt.seed);
    }
    const fs::path p = c.output("window.csv");
    io::write_file(p, io::window_to_csv(w));
    io::write_file(io::sidecar_path(p), io::window_sidecar_json(w));
    c.out << count << " samples\n";
    c.wrote(p);
}

void cmd_reconstruct(const Context& c)
{
    const fs::path in = c.path(c.opt.window);
    const SampleWindow w =
        io::window_from_csv(io::read_file(in), io::read_file(io::sidecar_path(in)));
    const Reconstruction r = reconstruct_detailed(w, c.opt.L, c.tolerances());
    const fs::path p       = c.output("model.json");
    io::write_file(p, io::model_to_json(r.model));
    for (const auto& t : r.model.terms)
    {
        c.out << "rate " << short_real(t.rate) << "  amplitude "
              << short_real(t.amplitude.real());
        if (t.amplitude.imag() != 0)
        {
            c.out << (t.amplitude.imag() < 0 ? " - " : " + ")
                  << short_real(abs(t.amplitude.imag())) << "i";
        }
        c.out << "\n";
    }
    if (r.ill_conditioned)
    {
        c.out << "warning: Vandermonde condition " << short_real(r.vandermonde_condition)
              << "\n";
    }
    c.wrote(p);
}

void cmd_tag(const Context& c)
{
    const ExponentialModel m = io::model_from_json(io::read_file(c.path(c.opt.model)));
    const MixtureSpec spec   = c.network();
    TagOptions options;
    options.tol = c.tolerances();
    if (!c.opt.capture_radius.empty())
    {
        options.capture_radius = positive_flag(c.opt.capture_radius, "capture-radius");
    }
    if (!c.opt.prior_gap.empty())
    {
        options.prior_gap = positive_flag(c.opt.prior_gap, "prior-gap");
    }
    const TaggedModel tagged = tag_rates(m, spec.network.sectors, options);
    const fs::path p         = c.output("tagged.json");
    io::write_file(p, io::tagged_to_json(tagged));
    for (const auto& t : tagged.terms)
    {
        c.out << "rate " << short_real(t.rate_raw) << " -> sector " << t.sector
              << ", eigenvalue " << short_real(t.alpha) << "\n";
    }
    c.out << "gap " << short_real(tagged.gap) << "\n";
    c.wrote(p);
}

void cmd_recover(const Context& c)
{
    const TaggedModel tagged = io::tagged_from_json(io::read_file(c.path(c.opt.tagged)));
    const auto comps = recover_eigencomponents(tagged, c.network(), c.tolerances());
    const fs::path p = c.output("components.json");
    io::write_file(p, io::components_to_json(comps));
    for (const auto& e : comps)
    {
        c.out << "sector " << e.sector << ", eigenvalue " << short_real(e.alpha)
              << ": coefficient " << short_real(e.coefficient.real()) << "\n";
    }
    c.wrote(p);
}

StabilityConfig stability_config(const Options& opt)
{
    StabilityConfig cfg;
    if (!opt.C2.empty())
        cfg.C2 = positive_flag(opt.C2, "C2");
    if (!opt.C_L.empty())
        cfg.C_L = positive_flag(opt.C_L, "CL");
    if (!opt.C3.empty())
        cfg.C3 = positive_flag(opt.C3, "C3");
    return cfg;
}

void cmd_stability(const Context& c)
{
    const Real h = positive_flag(c.opt.h, "h");
    const StabilityReport r =
        stability_report(c.network(), h, stability_config(c.opt), c.tolerances());
    const fs::path p = c.output("stability.json");
    io::write_file(p, io::stability_to_json(r));
    c.out << "kappa_exp " << short_real(r.kappa_exp) << ", bound "
          << short_real(r.kappa_upper_bound) << ", gap " << short_real(r.gap)
          << ", epsilon0 " << short_real(r.epsilon0) << "\n";
    c.wrote(p);
}

void cmd_sweep(const Context& c)
{
    const Real h             = positive_flag(c.opt.h, "h");
    const Tolerances tol     = c.tolerances();
    const MixtureSpec spec   = c.network();
    const std::size_t L      = c.opt.L ? c.opt.L : collapse(spec, tol).size();
    const auto eps           = parse_epsilons(c.opt.epsilons);
    const auto records = noise_sweep(spec, h, L, eps, c.opt.trials, c.opt.seed, tol);
    const fs::path p   = c.output("sweep.csv");
    io::write_file(p, io::sweep_to_csv(records));
    for (const auto& r : records)
    {
        c.out << "epsilon " << short_real(r.epsilon) << ": median error "
              << short_real(r.median_error()) << ", tag failures " << r.tag_failures
              << ", reconstruction failures " << r.recon_failures << "\n";
    }
    try
    {
        c.out << "slope " << short_real(loglog_slope(records)) << "\n";
    }
    catch (const Error&)
    {
        // fewer than two usable noise levels: no slope to report
    }
    c.out << "empirical locality " << short_real(empirical_locality(records)) << "\n";
    c.wrote(p);
}

void report(std::ostream& err, const std::string& kind, const std::string& stage,
            const std::string& message)
{
    nlohmann::json j = {{"error", kind}, {"message", message}};
    if (!stage.empty())
    {
        j["stage"] = stage;
    }
    err << j.dump() << "\n";
}

} // namespace

std::vector<Real> parse_epsilons(const std::string& text)
{
    if (text.find(':') == std::string::npos)
    {
        return parse_list(text, "epsilons");
    }
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':'))
    {
        parts.push_back(item);
    }
    if (parts.size() != 3)
    {
        throw Error(ErrorKind::InvalidArgument, "--epsilons range must be a:b:n");
    }
    const Real a = positive_flag(parts[0], "epsilons");
    const Real b = positive_flag(parts[1], "epsilons");
    std::size_t n = 0;
    try
    {
        n = std::stoul(parts[2]);
    }
    catch (const std::exception&)
    {
    }
    if (n < 1)
    {
        throw Error(ErrorKind::InvalidArgument, "--epsilons count must be >= 1");
    }
    if (n == 1)
    {
        return {a};
    }
    std::vector<Real> out;
    for (std::size_t k = 0; k < n; ++k)
    {
        out.push_back(k + 1 == n ? b : a * pow(b / a, Real(k) / Real(n - 1)));
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options opt;
    CLI::App app{"Sector-resolved Prony reconstruction", "sprony"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--dir", opt.dir, "Directory for relative input and output paths");
    app.add_option("--tol-eig", opt.tol_eig, "Eigenvalue equality tolerance");
    app.add_option("--tol-cocycle", opt.tol_cocycle, "Relative multiplicativity tolerance");
    app.add_option("--tol-amp", opt.tol_amp, "Amplitude pruning threshold");
    app.add_option("--tol-rank", opt.tol_rank, "Relative Hankel rank cutoff");
    app.add_option("--tol-obs", opt.tol_obs, "Observability threshold");

    auto network_opt = [&](CLI::App* sub) {
        sub->add_option("--network", opt.network, "NetworkConfig JSON")->capture_default_str();
    };
    auto out_opt = [&](CLI::App* sub, const char* fallback) {
        sub->add_option("--out,-o", opt.out, std::string("Output file (default ") + fallback + ")");
    };

    std::map<CLI::App*, std::function<void(const Context&)>> handlers;

    auto* fixture = app.add_subcommand("fixture", "Write a built-in setup as network.json");
    fixture->add_option("name", opt.fixture_name, "ex5 | ex6 | example1 | example3 | example4")
        ->required();
    out_opt(fixture, "network.json");
    handlers[fixture] = cmd_fixture;

    auto* verify = app.add_subcommand("verify-network", "Check gauges, spectra and the cocycle");
    network_opt(verify);
    verify->add_option("--t-grid", opt.t_grid, "Comma-separated times for the intertwining check")
        ->capture_default_str();
    out_opt(verify, "verification.json");
    handlers[verify] = cmd_verify_network;

    auto* synth = app.add_subcommand("synth", "Collapse the mixture to an exponential model");
    network_opt(synth);
    out_opt(synth, "model.json");
    handlers[synth] = cmd_synth;

    auto* sample = app.add_subcommand("sample", "Sample the observable on a uniform grid");
    network_opt(sample);
    auto* model_flag = sample->add_option("--model", opt.model, "Sample this model instead of the network");
    sample->add_option("--h", opt.h, "Sampling step")->required();
    sample->add_option("--count", opt.count, "Number of samples (default 2L)");
    sample->add_option("--epsilon", opt.epsilon, "l2 norm of the added noise")->capture_default_str();
    sample->add_option("--seed", opt.seed, "Noise seed")->capture_default_str();
    out_opt(sample, "window.csv");
    handlers[sample] = cmd_sample;

    auto* recon = app.add_subcommand("reconstruct", "Hankel-Prony reconstruction of a window");
    recon->add_option("--window", opt.window, "Window CSV (sidecar .json alongside)")
        ->capture_default_str();
    recon->add_option("--L", opt.L, "Number of exponential terms")->required()->check(CLI::PositiveNumber);
    out_opt(recon, "model.json");
    handlers[recon] = cmd_reconstruct;

    auto* tag = app.add_subcommand("tag", "Attribute reconstructed rates to sectors");
    network_opt(tag);
    tag->add_option("--model", opt.model, "Reconstructed model JSON")->capture_default_str();
    tag->add_option("--capture-radius", opt.capture_radius, "Maximum rate-to-eigenvalue distance");
    tag->add_option("--prior-gap", opt.prior_gap, "Known gap; capture radius becomes gap/2");
    out_opt(tag, "tagged.json");
    handlers[tag] = cmd_tag;

    auto* recover = app.add_subcommand("recover-components", "Eigenspace components from a tagged model");
    network_opt(recover);
    recover->add_option("--tagged", opt.tagged, "Tagged model JSON")->capture_default_str();
    out_opt(recover, "components.json");
    handlers[recover] = cmd_recover;

    auto* stability = app.add_subcommand("stability", "Conditioning and tagging threshold");
    network_opt(stability);
    stability->add_option("--h", opt.h, "Sampling step")->required();
    stability->add_option("--C2", opt.C2, "Calibration constant C2 (default 1)");
    stability->add_option("--CL", opt.C_L, "Calibration constant C_L (default 1)");
    stability->add_option("--C3", opt.C3, "Override C3 (default C2 * 2 / (h z_min))");
    out_opt(stability, "stability.json");
    handlers[stability] = cmd_stability;

    auto* sweep = app.add_subcommand("sweep", "Seeded noise sweep");
    network_opt(sweep);
    sweep->add_option("--h", opt.h, "Sampling step")->required();
    sweep->add_option("--L", opt.L, "Number of terms (default: all terms of the observable)");
    sweep->add_option("--epsilons", opt.epsilons, "a:b:n (log-spaced) or a comma list")->required();
    sweep->add_option("--trials", opt.trials, "Trials per noise level")->capture_default_str()->check(CLI::PositiveNumber);
    sweep->add_option("--seed", opt.seed, "Base seed; trial k uses seed + k")->capture_default_str();
    out_opt(sweep, "sweep.csv");
    handlers[sweep] = cmd_sweep;

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp& e)
    {
        out << app.help();
        return Success;
    }
    catch (const CLI::ParseError& e)
    {
        report(err, "InvalidArgument", "", e.what());
        return ValidationFailure;
    }
    opt.model_given = model_flag->count() > 0;

    CLI::App* chosen = app.get_subcommands().front();
    Context ctx{opt, out};
    try
    {
        handlers.at(chosen)(ctx);
        return Success;
    }
    catch (const Error& e)
    {
        report(err, std::string(to_string(e.kind())), e.stage(), e.detail());
        return is_mathematical(e.kind()) ? MathematicalFailure : ValidationFailure;
    }
    catch (const fs::filesystem_error& e)
    {
        report(err, "InvalidArgument", "", e.what());
        return ValidationFailure;
    }
}

} // namespace sprony::cli
