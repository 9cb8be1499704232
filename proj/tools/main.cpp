#include "phqs/classify.hpp"
#include "phqs/json_io.hpp"
#include "phqs/oracle.hpp"
#include "phqs/parallel.hpp"
#include "phqs/power_sums.hpp"
#include "phqs/reconstruct.hpp"
#include "phqs/rng.hpp"
#include "phqs/states.hpp"
#include "phqs/stream_file.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace phqs;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitTolerance = 4;

// Raised by `oracle` checks that finish outside their tolerance.
struct tolerance_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr std::size_t kChunk = 1 << 20;

std::string read_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io::io_error(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io::io_error(path + ": cannot open for writing");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    if (!out) throw io::io_error(path + ": write failed");
}

// Generate `count` samples in chunks and feed them to a batch accumulator.
stats::CumulantSet measure_stream(const states::StateConfig& cfg, std::uint64_t count,
                                  std::uint64_t batches) {
    states::QuadratureSampler sampler(cfg);
    stats::BatchOptions opts;
    opts.batches = batches;
    stats::BatchAccumulator acc(count, opts);
    std::vector<double> buf(std::size_t(std::min<std::uint64_t>(count, kChunk)));
    std::uint64_t index = 0;
    while (index < count) {
        const std::size_t take =
            std::size_t(std::min<std::uint64_t>(buf.size(), count - index));
        sampler.generate(index, std::span<double>(buf.data(), take));
        acc.add(std::span<const double>(buf.data(), take));
        index += take;
    }
    return acc.finish();
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char out[32];
    std::snprintf(out, sizeof(out), "%.10g", v);
    return out;
}

// ---- simulate ----------------------------------------------------------

struct SimulateArgs {
    std::string config_path;
    std::uint64_t samples = 0;
    std::int64_t seed = -1;  // -1: keep the config's seed
    std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
    states::StateConfig cfg = io::state_config_from_string(read_text(a.config_path));
    if (a.samples == 0) throw std::invalid_argument("--samples must be >= 1");
    if (a.seed >= 0) cfg.seed = std::uint64_t(a.seed);
    states::QuadratureSampler sampler(cfg);
    io::StreamWriter writer(a.out, cfg, a.samples);
    std::vector<double> buf(std::size_t(std::min<std::uint64_t>(a.samples, kChunk)));
    std::uint64_t index = 0;
    while (index < a.samples) {
        const std::size_t take =
            std::size_t(std::min<std::uint64_t>(buf.size(), a.samples - index));
        sampler.generate(index, std::span<double>(buf.data(), take));
        writer.write(std::span<const double>(buf.data(), take));
        index += take;
    }
    writer.close();
    std::cerr << "wrote " << a.samples << " samples to " << a.out << "\n";
    return kExitOk;
}

// ---- cumulants ---------------------------------------------------------

struct CumulantsArgs {
    std::string stream_path;
    std::uint64_t batches = 100;
    std::string shift = "0";
    bool compensated = false;
    std::string json_out;
};

int cmd_cumulants(const CumulantsArgs& a) {
    io::StreamReader reader(a.stream_path);
    stats::BatchOptions opts;
    opts.batches = a.batches;
    opts.compensated = a.compensated;

    std::vector<double> buf(std::size_t(std::min<std::uint64_t>(reader.count(), kChunk)));
    std::size_t pending = reader.read(buf);
    if (a.shift == "first") {
        opts.shift = pending > 0 ? buf[0] : 0.0;
    } else {
        try {
            opts.shift = std::stod(a.shift);
        } catch (const std::exception&) {
            throw std::invalid_argument("--shift expects a number or 'first'");
        }
    }

    stats::BatchAccumulator acc(reader.count(), opts);
    while (pending > 0) {
        acc.add(std::span<const double>(buf.data(), pending));
        pending = reader.read(buf);
    }
    write_output(a.json_out, io::to_json(acc.finish()).dump(2));
    return kExitOk;
}

// ---- reconstruct -------------------------------------------------------

struct ReconstructArgs {
    std::string signal_path;
    std::string noise_path;
    std::string json_out;
};

json reconstruct_report(const stats::CumulantSet& signal,
                        const stats::CumulantSet* noise) {
    std::vector<std::string> warnings;
    stats::CumulantSet cs = signal;
    if (noise) {
        bool negative_c2 = false;
        cs = stats::subtract_noise(signal, *noise, &negative_c2);
        if (negative_c2)
            warnings.push_back("noise subtraction left C2 < 0; calibration is inconsistent");
    }
    const reconstruct::PhotonMoments pm = reconstruct::photon_moments(cs);
    if (pm.n < 0.0)
        warnings.push_back("reconstructed <n> is negative; check calibration");
    classify::ClassicalityReport rep = classify::classical_bounds(pm);
    if (!pm.se) {
        // measured inputs without SEs: margins only, verdict withheld
        rep.verdict = classify::Verdict::Indeterminate;
        warnings.push_back("inputs carry no standard errors; verdict withheld");
    }
    return json{{"schema_version", io::kSchemaVersion},
                {"photon_moments", io::to_json(pm)},
                {"classicality", io::to_json(rep)},
                {"warnings", warnings}};
}

int cmd_reconstruct(const ReconstructArgs& a) {
    const stats::CumulantSet signal =
        io::cumulant_set_from_json(json::parse(read_text(a.signal_path)));
    std::optional<stats::CumulantSet> noise;
    if (!a.noise_path.empty())
        noise = io::cumulant_set_from_json(json::parse(read_text(a.noise_path)));
    const json report = reconstruct_report(signal, noise ? &*noise : nullptr);
    for (const auto& w : report.at("warnings"))
        std::cerr << "warning: " << w.get<std::string>() << "\n";
    write_output(a.json_out, report.dump(2));
    return kExitOk;
}

// ---- sweep -------------------------------------------------------------

struct SweepArgs {
    std::string state = "coherent";
    std::string scheme = "triangular";
    double n_from = 1e-2;
    double n_to = 1.0;
    unsigned points = 13;
    std::uint64_t samples = 10'000'000;
    double noise_photons = 0.0;
    std::uint64_t seed = 1;
    std::uint64_t batches = 100;
    std::string out;
    unsigned threads = 0;
};

states::StateConfig sweep_signal_config(const SweepArgs& a, double n_target) {
    states::StateConfig cfg;
    cfg.kind = states::state_kind_from_string(a.state);
    switch (cfg.kind) {
        case states::StateKind::Coherent: cfg.alpha2 = n_target; break;
        case states::StateKind::Thermal: cfg.nbar = n_target; break;
        case states::StateKind::SqueezedVacuum:
            cfg.squeeze_r = std::asinh(std::sqrt(n_target));
            break;
        case states::StateKind::ModulatedCoherent:
            cfg.ibar = n_target;
            cfg.scheme = states::mod_scheme_from_string(a.scheme);
            break;
        default:
            throw std::invalid_argument(
                "sweep supports coherent, thermal, squeezed, modulated");
    }
    cfg.noise_photons = a.noise_photons;
    return cfg;
}

constexpr char kSweepHeader[] =
    "n_target,n_est,dn2_est,dn3_est,se_n,se_dn2,se_dn3,fano,verdict";

int cmd_sweep(const SweepArgs& a) {
    if (!(a.n_from > 0.0) || !(a.n_to > 0.0))
        throw std::invalid_argument("sweep grid bounds must be > 0 (logarithmic grid)");
    if (a.points < 1) throw std::invalid_argument("--points must be >= 1");
    if (a.samples < 2 * a.batches)
        throw std::invalid_argument("--samples-per-point too small for batch statistics");

    std::vector<double> grid(a.points);
    for (unsigned k = 0; k < a.points; ++k)
        grid[k] = a.points == 1
                      ? a.n_from
                      : a.n_from * std::pow(a.n_to / a.n_from, double(k) / (a.points - 1));

    std::vector<std::string> rows(a.points);
    const unsigned threads = std::min<unsigned>(resolve_threads(a.threads), a.points);
    parallel_chunks(a.points, threads, [&](unsigned, std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            states::StateConfig sig = sweep_signal_config(a, grid[k]);
            sig.seed = a.seed ^ SampleRng::mix(2 * k);
            states::StateConfig ref;
            ref.kind = states::StateKind::Background;
            ref.noise_photons = a.noise_photons;
            ref.seed = a.seed ^ SampleRng::mix(2 * k + 1);

            const stats::CumulantSet cs_sig = measure_stream(sig, a.samples, a.batches);
            const stats::CumulantSet cs_ref = measure_stream(ref, a.samples, a.batches);
            const stats::CumulantSet cs = stats::subtract_noise(cs_sig, cs_ref);
            const reconstruct::PhotonMoments pm = reconstruct::photon_moments(cs);
            const classify::ClassicalityReport rep = classify::classical_bounds(pm);

            std::string row = format_double(grid[k]);
            for (double v : {pm.n, pm.dn2, pm.dn3, (*pm.se)[0], (*pm.se)[1], (*pm.se)[2],
                             rep.fano})
                row += "," + format_double(v);
            row += ",";
            row += classify::to_string(rep.verdict);
            rows[k] = row;
        }
    });

    std::string csv = kSweepHeader;
    csv += '\n';
    for (const auto& r : rows) {
        csv += r;
        csv += '\n';
    }
    write_output(a.out, csv);
    return kExitOk;
}

// ---- region-curves -----------------------------------------------------

struct CurvesArgs {
    double n_from = 1e-2;
    double n_to = 1.0;
    unsigned points = 25;
    std::string spacing = "log";
    std::string out;
};

int cmd_region_curves(const CurvesArgs& a) {
    if (a.points < 1) throw std::invalid_argument("--points must be >= 1");
    std::vector<double> grid(a.points);
    for (unsigned k = 0; k < a.points; ++k) {
        const double t = a.points == 1 ? 0.0 : double(k) / (a.points - 1);
        if (a.spacing == "log") {
            if (!(a.n_from > 0.0))
                throw std::invalid_argument("log spacing needs n-from > 0");
            grid[k] = a.n_from * std::pow(a.n_to / a.n_from, t);
        } else if (a.spacing == "linear") {
            grid[k] = a.n_from + (a.n_to - a.n_from) * t;
        } else {
            throw std::invalid_argument("--spacing must be log or linear");
        }
    }
    std::string csv = "n,dn2_coherent,dn2_squeezed\n";
    for (const auto& pt : classify::region_curves(grid)) {
        csv += format_double(pt.n) + "," + format_double(pt.dn2_coherent) + "," +
               format_double(pt.dn2_squeezed) + "\n";
    }
    write_output(a.out, csv);
    return kExitOk;
}

// ---- oracle ------------------------------------------------------------

struct OracleArgs {
    std::string check;
    int n_trunc = oracle::kDefaultTrunc;
    std::uint64_t seed = 20260810;
    std::string json_out;
};

oracle::PhotonDistribution random_diagonal_state(std::uint64_t seed, int n_trunc) {
    SampleRng rng(seed, 0);
    const double decay = 0.3 + 0.5 * rng.next_unit();
    oracle::PhotonDistribution p;
    p.p.resize(n_trunc + 1);
    double total = 0.0, w = 1.0;
    for (int n = 0; n <= n_trunc; ++n) {
        p.p[n] = w * (0.05 + 0.95 * rng.next_unit());
        total += p.p[n];
        w *= decay;
    }
    for (double& v : p.p) v /= total;
    return p;
}

json check_eq3(const OracleArgs& a) {
    json cases = json::array();
    double max_err = 0.0;
    for (int s = 0; s < 10; ++s) {
        const auto p = random_diagonal_state(a.seed + s, a.n_trunc);
        for (int k = 1; k <= 3; ++k) {
            bool warn = false;
            const double closed = oracle::quadrature_even_moment(p, k);
            const double brute = oracle::bruteforce_symmetric_sum(p, k, &warn);
            const double err = std::abs(closed - brute);
            max_err = std::max(max_err, err);
            cases.push_back({{"state", s},
                             {"k", k},
                             {"closed_form", closed},
                             {"brute_force", brute},
                             {"error", err},
                             {"truncation_warning", warn}});
        }
    }
    return json{{"check", "eq3"},
                {"tolerance", 1e-10},
                {"max_error", max_err},
                {"passed", max_err <= 1e-10},
                {"cases", cases}};
}

json check_cgf(const OracleArgs&) {
    json cases = json::array();
    bool passed = true;
    auto run = [&](const states::StateConfig& cfg, const std::string& name,
                   const std::array<double, 6>& target) {
        for (int k = 1; k <= 6; ++k) {
            const double got = oracle::cumulant_via_cgf(cfg, k);
            const double want = target[k - 1];
            const double err = want != 0.0 ? std::abs((got - want) / want) : std::abs(got);
            const bool ok = err <= 1e-5;
            passed = passed && ok;
            cases.push_back({{"state", name},
                             {"k", k},
                             {"value", got},
                             {"target", want},
                             {"relative_error", err},
                             {"passed", ok}});
        }
    };
    for (double nbar : {0.5, 1.0, 2.0}) {
        states::StateConfig cfg;
        cfg.kind = states::StateKind::Thermal;
        cfg.nbar = nbar;
        run(cfg, "thermal " + format_double(nbar), {0, nbar + 0.5, 0, 0, 0, 0});
    }
    for (double a2 : {0.1, 1.0, 4.0}) {
        states::StateConfig cfg;
        cfg.kind = states::StateKind::Coherent;
        cfg.alpha2 = a2;
        run(cfg, "coherent " + format_double(a2),
            {0, a2 + 0.5, 0, -1.5 * a2 * a2, 0, 10.0 * a2 * a2 * a2});
    }
    return json{
        {"check", "cgf"}, {"tolerance", 1e-5}, {"passed", passed}, {"cases", cases}};
}

json check_roundtrip(const OracleArgs& a) {
    json cases = json::array();
    double max_err = 0.0;
    auto run = [&](const states::StateConfig& cfg, const std::string& name) {
        const auto rep = oracle::roundtrip(cfg, a.n_trunc);
        max_err = std::max(max_err, rep.max_abs_error);
        cases.push_back({{"state", name},
                         {"n", rep.reconstructed.n},
                         {"dn2", rep.reconstructed.dn2},
                         {"dn3", rep.reconstructed.dn3},
                         {"error", rep.max_abs_error}});
    };
    for (double a2 : {0.5, 2.0}) {
        states::StateConfig cfg;
        cfg.kind = states::StateKind::Coherent;
        cfg.alpha2 = a2;
        run(cfg, "coherent " + format_double(a2));
    }
    for (double nbar : {0.5, 2.0}) {
        states::StateConfig cfg;
        cfg.kind = states::StateKind::Thermal;
        cfg.nbar = nbar;
        run(cfg, "thermal " + format_double(nbar));
    }
    for (int n = 0; n <= 5; ++n) {
        states::StateConfig cfg;
        cfg.kind = states::StateKind::Fock;
        cfg.fock_n = n;
        run(cfg, "fock " + std::to_string(n));
    }
    for (double r : {0.25, 0.5, 1.0}) {
        states::StateConfig cfg;
        cfg.kind = states::StateKind::SqueezedVacuum;
        cfg.squeeze_r = r;
        run(cfg, "squeezed " + format_double(r));
    }
    return json{{"check", "roundtrip"},
                {"tolerance", 1e-9},
                {"max_error", max_err},
                {"passed", max_err <= 1e-9},
                {"cases", cases}};
}

json check_displace(const OracleArgs&) {
    const double pi = 3.14159265358979323846;
    json cases = json::array();
    double max_err = 0.0;
    double min_squeezed_fano = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::string, states::StateConfig>> cfgs;
    {
        states::StateConfig c;
        c.kind = states::StateKind::Coherent;
        c.alpha2 = 1.0;
        cfgs.emplace_back("coherent 1", c);
        states::StateConfig s;
        s.kind = states::StateKind::SqueezedVacuum;
        s.squeeze_r = 0.5;
        cfgs.emplace_back("squeezed 0.5", s);
        states::StateConfig f;
        f.kind = states::StateKind::Fock;
        f.fock_n = 1;
        cfgs.emplace_back("fock 1", f);
    }
    for (const auto& [name, cfg] : cfgs) {
        for (double r : {0.0, 0.5, 1.0, 2.0}) {
            for (double theta : {0.0, pi / 4.0, pi / 2.0}) {
                const auto st = oracle::displaced_stats(cfg, r, theta);
                max_err = std::max(max_err, st.max_difference());
                if (cfg.kind == states::StateKind::SqueezedVacuum && theta == 0.0 &&
                    st.n_direct > 0.0)
                    min_squeezed_fano =
                        std::min(min_squeezed_fano, st.dn2_direct / st.n_direct);
                cases.push_back({{"state", name},
                                 {"r", r},
                                 {"theta", theta},
                                 {"n", st.n_direct},
                                 {"dn2", st.dn2_direct},
                                 {"difference", st.max_difference()}});
            }
        }
    }
    const bool crossing = min_squeezed_fano < 1.0;
    return json{{"check", "displace"},
                {"tolerance", 1e-8},
                {"max_error", max_err},
                {"squeezed_min_fano", min_squeezed_fano},
                {"passed", max_err <= 1e-8 && crossing},
                {"cases", cases}};
}

int cmd_oracle(const OracleArgs& a) {
    json report;
    if (a.check == "eq3")
        report = check_eq3(a);
    else if (a.check == "cgf")
        report = check_cgf(a);
    else if (a.check == "roundtrip")
        report = check_roundtrip(a);
    else if (a.check == "displace")
        report = check_displace(a);
    else
        throw std::invalid_argument("--check must be one of eq3, cgf, roundtrip, displace");
    write_output(a.json_out, report.dump(2));
    if (!report.at("passed").get<bool>())
        throw tolerance_failure(a.check + " check exceeded its tolerance");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"photocount statistics from continuous quadrature streams"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "generate a quadrature stream file");
    c_sim->add_option("config", sim.config_path, "state config JSON path ('-' for stdin)")
        ->required();
    c_sim->add_option("--samples", sim.samples, "number of samples")->required();
    c_sim->add_option("--seed", sim.seed, "override the config's seed");
    c_sim->add_option("--out", sim.out, "output stream file")->required();

    CumulantsArgs cum;
    auto* c_cum = app.add_subcommand("cumulants", "streaming cumulants of a stream file");
    c_cum->add_option("stream", cum.stream_path, "input stream file")->required();
    c_cum->add_option("--batches", cum.batches, "batch count for standard errors");
    c_cum->add_option("--shift", cum.shift, "accumulator shift: number or 'first'");
    c_cum->add_flag("--compensated", cum.compensated, "compensated summation");
    c_cum->add_option("--json", cum.json_out, "write JSON here instead of stdout");

    ReconstructArgs rec;
    auto* c_rec = app.add_subcommand(
        "reconstruct", "photocount moments and classicality from cumulants");
    c_rec->add_option("--signal", rec.signal_path, "signal-run CumulantSet JSON")
        ->required();
    c_rec->add_option("--noise", rec.noise_path, "noise-only-run CumulantSet JSON");
    c_rec->add_option("--json", rec.json_out, "write JSON here instead of stdout");

    SweepArgs sw;
    auto* c_sw =
        app.add_subcommand("sweep", "simulate/reconstruct over a photon-number grid");
    c_sw->add_option("--state", sw.state, "coherent|thermal|squeezed|modulated");
    c_sw->add_option("--scheme", sw.scheme, "modulation scheme for --state modulated");
    c_sw->add_option("--n-from", sw.n_from, "grid start (mean photons)");
    c_sw->add_option("--n-to", sw.n_to, "grid end");
    c_sw->add_option("--points", sw.points, "grid points (logarithmic)");
    c_sw->add_option("--samples-per-point", sw.samples, "samples per run");
    c_sw->add_option("--noise-photons", sw.noise_photons, "background noise photons");
    c_sw->add_option("--seed", sw.seed, "master seed");
    c_sw->add_option("--batches", sw.batches, "batch count for standard errors");
    c_sw->add_option("--out", sw.out, "output CSV ('-' for stdout)");
    c_sw->add_option("--threads", sw.threads, "worker threads (0: PHQS_THREADS or cores)");

    CurvesArgs cv;
    auto* c_cv = app.add_subcommand("region-curves",
                                    "coherent and squeezed-vacuum reference curves");
    c_cv->add_option("--n-from", cv.n_from, "grid start");
    c_cv->add_option("--n-to", cv.n_to, "grid end");
    c_cv->add_option("--points", cv.points, "grid points");
    c_cv->add_option("--spacing", cv.spacing, "log|linear");
    c_cv->add_option("--out", cv.out, "output CSV ('-' for stdout)");

    OracleArgs ora;
    auto* c_ora = app.add_subcommand("oracle", "exact Fock-space verification checks");
    c_ora->add_option("--check", ora.check, "eq3|cgf|roundtrip|displace")->required();
    c_ora->add_option("--n-trunc", ora.n_trunc, "truncation dimension");
    c_ora->add_option("--seed", ora.seed, "seed for randomized states");
    c_ora->add_option("--json", ora.json_out, "write JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*c_sim) return cmd_simulate(sim);
        if (*c_cum) return cmd_cumulants(cum);
        if (*c_rec) return cmd_reconstruct(rec);
        if (*c_sw) return cmd_sweep(sw);
        if (*c_cv) return cmd_region_curves(cv);
        if (*c_ora) return cmd_oracle(ora);
    } catch (const tolerance_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTolerance;
    } catch (const io::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const stats::stream_corruption_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
