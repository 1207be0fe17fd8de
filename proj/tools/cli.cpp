#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "igahmm/benchmarks.hpp"
#include "igahmm/convergence.hpp"
#include "igahmm/errors.hpp"
#include "igahmm/patch_io.hpp"
#include "igahmm/svg.hpp"

namespace igahmm::cli {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
    std::string problem = "square_fast";
    std::string patch;
    std::vector<int> degrees{2};
    int q = 1;
    std::string continuity = "c0";
    std::string macro_continuity = "cmax";
    std::string coupling = "periodic";
    std::string strategy = "l2";
    double eps = 1e-6;
    int delta_mult = 1;
    std::vector<int> meshes{2, 4, 8};
    int nmac = 8;
    int threads = 1;
    std::string out = "out";
    bool timing = true;
    int samples = 20;
    int reference_elements = 128;
    int reference_degree = 5;
};

Continuity parse_continuity(const std::string& s) {
    if (s == "c0") return Continuity::C0;
    if (s == "cmax") return Continuity::Cmax;
    throw ConfigError("continuity must be c0 or cmax, got '" + s + "'");
}

Coupling parse_coupling(const std::string& s) {
    if (s == "periodic") return Coupling::Periodic;
    if (s == "dirichlet") return Coupling::Dirichlet;
    throw ConfigError("coupling must be periodic or dirichlet, got '" + s + "'");
}

Strategy parse_strategy(const std::string& s) {
    if (s == "l2") return Strategy::L2;
    if (s == "h1") return Strategy::H1;
    throw ConfigError("strategy must be l2 or h1, got '" + s + "'");
}

void apply_json(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError("config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "problem") cfg.problem = value.get<std::string>();
            else if (key == "patch") cfg.patch = value.get<std::string>();
            else if (key == "p") cfg.degrees = value.is_array() ? value.get<std::vector<int>>() : std::vector<int>{value.get<int>()};
            else if (key == "q") cfg.q = value.get<int>();
            else if (key == "continuity") cfg.continuity = value.get<std::string>();
            else if (key == "macro_continuity") cfg.macro_continuity = value.get<std::string>();
            else if (key == "coupling") cfg.coupling = value.get<std::string>();
            else if (key == "strategy") cfg.strategy = value.get<std::string>();
            else if (key == "eps") cfg.eps = value.get<double>();
            else if (key == "delta_mult") cfg.delta_mult = value.get<int>();
            else if (key == "meshes") cfg.meshes = value.get<std::vector<int>>();
            else if (key == "nmac") cfg.nmac = value.get<int>();
            else if (key == "threads") cfg.threads = value.get<int>();
            else if (key == "out") cfg.out = value.get<std::string>();
            else if (key == "timing") cfg.timing = value.get<bool>();
            else if (key == "samples") cfg.samples = value.get<int>();
            else if (key == "reference_elements") cfg.reference_elements = value.get<int>();
            else if (key == "reference_degree") cfg.reference_degree = value.get<int>();
            else throw ConfigError("config file '" + path + "': unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::type_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

void validate(const RunConfig& cfg) {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    need(!cfg.degrees.empty(), "at least one macro degree (-p) is required");
    for (int p : cfg.degrees) need(p >= 1, "macro degree p must be >= 1");
    need(cfg.q >= 1, "micro degree q must be >= 1");
    need(cfg.eps > 0.0 && std::isfinite(cfg.eps), "eps must be positive");
    need(cfg.delta_mult >= 1, "delta multiple must be a positive integer");
    need(cfg.threads >= 1, "thread count must be >= 1");
    need(cfg.nmac >= 1, "nmac must be >= 1");
    for (int n : cfg.meshes) need(n >= 1, "mesh sizes must be >= 1");
    need(cfg.samples >= 1, "samples must be >= 1");
    need(cfg.reference_elements >= 1 && cfg.reference_degree >= 1, "reference mesh settings must be >= 1");
    parse_continuity(cfg.continuity);
    parse_continuity(cfg.macro_continuity);
    parse_coupling(cfg.coupling);
    parse_strategy(cfg.strategy);
}

ProblemSpec load_problem(const RunConfig& cfg) {
    ProblemSpec spec = problem_by_name(cfg.problem, cfg.eps);
    if (!cfg.patch.empty()) {
        spec.geometry = read_patch_file(cfg.patch);
        spec.edges = classify_edges(spec.geometry, spec.on_dirichlet);
    }
    return spec;
}

StudyOptions study_options(const RunConfig& cfg) {
    StudyOptions o;
    o.degrees = cfg.degrees;
    o.q = cfg.q;
    o.micro_continuity = parse_continuity(cfg.continuity);
    o.macro_continuity = parse_continuity(cfg.macro_continuity);
    o.coupling = parse_coupling(cfg.coupling);
    o.strategy = parse_strategy(cfg.strategy);
    o.meshes = cfg.meshes;
    o.delta_multiple = cfg.delta_mult;
    o.threads = cfg.threads;
    o.timing = cfg.timing;
    o.reference_elements = cfg.reference_elements;
    o.reference_degree = cfg.reference_degree;
    return o;
}

fs::path prepare_out(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return fs::path(dir);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw IoError("write failed for '" + path.string() + "'");
}

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    const ProblemSpec spec = load_problem(cfg);
    const fs::path dir = prepare_out(cfg.out);
    StudyOptions opts = study_options(cfg);
    const int p = cfg.degrees.front();

    std::optional<SolutionField> reference;
    if (!spec.has_solution() && spec.homogenized)
        reference = reference_solve(spec, spec.homogenized, cfg.reference_elements, cfg.reference_degree);

    SolutionField field;
    const ConvergenceRecord rec = run_single(spec, opts, p, cfg.nmac, reference ? &*reference : nullptr, &field);

    std::ostringstream csv;
    write_solution_csv(csv, field, cfg.samples);
    write_text(dir / "solution.csv", csv.str());

    std::ostringstream s;
    s << "problem " << spec.id << "\n"
      << "p " << p << "  q " << cfg.q << "  strategy " << cfg.strategy << "  micro continuity " << cfg.continuity
      << "  coupling " << cfg.coupling << "\n"
      << "N_mac " << rec.n_mac << "  N_mic " << rec.n_mic << "\n"
      << "macro dofs " << rec.macro_dofs << "\n"
      << "micro control points " << rec.micro_control_points << "  micro unknowns " << rec.micro_dofs
      << " (summed over micro problems)\n"
      << "errH1 " << format("%.6e", rec.err_h1) << "  errL2 " << format("%.6e", rec.err_l2) << "  errL2_alt "
      << format("%.6e", rec.err_l2_alt) << (spec.has_solution() ? "  (analytic u0)" : "  (reference solve)") << "\n";
    write_text(dir / "summary.txt", s.str());
    out << s.str();
    return Ok;
}

int cmd_convergence(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    validate(cfg);
    if (cfg.meshes.empty()) throw ConfigError("convergence needs a non-empty mesh list (--meshes)");
    const ProblemSpec spec = load_problem(cfg);
    const fs::path dir = prepare_out(cfg.out);
    const StudyResult res = run_convergence_study(spec, study_options(cfg));

    std::ostringstream csv;
    write_records_csv(csv, res.records);
    write_text(dir / "convergence.csv", csv.str());
    const std::string tag = spec.id + " q=" + std::to_string(cfg.q) + " " + cfg.strategy + " strategy";
    write_text(dir / "convergence_h1.svg", convergence_svg(res.records, ErrorColumn::H1, "H1 error, " + tag));
    write_text(dir / "convergence_l2.svg", convergence_svg(res.records, ErrorColumn::L2Alt, "L2 error, " + tag));

    std::ostringstream s;
    for (const auto& f : res.slopes) {
        s << "p=" << f.p << "  slope H1 " << format("%.3f", f.h1) << "  L2 " << format("%.3f", f.l2) << "  L2_alt "
          << format("%.3f", f.l2_alt) << "\n";
    }
    write_text(dir / "slopes.txt", s.str());
    out << csv.str() << s.str();
    if (!res.error.empty()) {
        err << "error: " << res.error << " (partial results written)\n";
        return SolverFailure;
    }
    return Ok;
}

int cmd_geometry(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    const NurbsPatch base = cfg.patch.empty() ? problem_by_name(cfg.problem, cfg.eps).geometry : read_patch_file(cfg.patch);
    const int p = cfg.degrees.front();
    const Continuity c = parse_continuity(cfg.macro_continuity);
    const NurbsPatch refined = p < std::max(base.degree_u(), base.degree_v()) ? bilinear_approximation(base, cfg.nmac)
                                                                              : make_mesh(base, cfg.nmac, p, c);
    const fs::path dir = prepare_out(cfg.out);
    write_patch_file((dir / "refined.patch").string(), refined);
    write_text(dir / "mesh.svg", patch_svg(refined, std::to_string(cfg.nmac) + "x" + std::to_string(cfg.nmac) +
                                                        " mesh, degree " + std::to_string(p)));
    out << "wrote " << (dir / "refined.patch").string() << " (" << refined.count_u() << "x" << refined.count_v()
        << " control points)\n";
    return Ok;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return ConfigFailure;
        case ErrorKind::Solver: return SolverFailure;
        case ErrorKind::Geometry: return GeometryFailure;
        case ErrorKind::Io: return IoFailure;
    }
    return SolverFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"IGA-HMM solver for two-scale elliptic problems"};
    app.require_subcommand(1);
    RunConfig flags;
    std::string config_path;
    bool no_timing = false;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;

    auto common = [&](CLI::App* sub) {
        auto add = [&](CLI::Option* opt, std::function<void(RunConfig&)> apply) { overrides.emplace_back(opt, std::move(apply)); };
        add(sub->add_option("--problem", flags.problem, "square_fast | square_slowfast | quarter_annulus"),
            [&](RunConfig& c) { c.problem = flags.problem; });
        add(sub->add_option("--patch", flags.patch, "patch file replacing the problem geometry"),
            [&](RunConfig& c) { c.patch = flags.patch; });
        add(sub->add_option("-p", flags.degrees, "macro degree(s)")->delimiter(','),
            [&](RunConfig& c) { c.degrees = flags.degrees; });
        add(sub->add_option("-q", flags.q, "micro degree"), [&](RunConfig& c) { c.q = flags.q; });
        add(sub->add_option("--continuity", flags.continuity, "micro continuity c0 | cmax"),
            [&](RunConfig& c) { c.continuity = flags.continuity; });
        add(sub->add_option("--macro-continuity", flags.macro_continuity, "macro continuity c0 | cmax"),
            [&](RunConfig& c) { c.macro_continuity = flags.macro_continuity; });
        add(sub->add_option("--coupling", flags.coupling, "periodic | dirichlet"),
            [&](RunConfig& c) { c.coupling = flags.coupling; });
        add(sub->add_option("--strategy", flags.strategy, "l2 | h1"), [&](RunConfig& c) { c.strategy = flags.strategy; });
        add(sub->add_option("--eps", flags.eps, "fine-scale period"), [&](RunConfig& c) { c.eps = flags.eps; });
        add(sub->add_option("--delta-mult", flags.delta_mult, "sampling size delta / eps (positive integer)"),
            [&](RunConfig& c) { c.delta_mult = flags.delta_mult; });
        add(sub->add_option("--meshes", flags.meshes, "macro meshes for a study")->delimiter(','),
            [&](RunConfig& c) { c.meshes = flags.meshes; });
        add(sub->add_option("--nmac", flags.nmac, "macro elements per direction"), [&](RunConfig& c) { c.nmac = flags.nmac; });
        add(sub->add_option("--threads", flags.threads, "worker threads for micro problems"),
            [&](RunConfig& c) { c.threads = flags.threads; });
        add(sub->add_option("--out", flags.out, "output directory"), [&](RunConfig& c) { c.out = flags.out; });
        add(sub->add_option("--samples", flags.samples, "solution CSV grid intervals"),
            [&](RunConfig& c) { c.samples = flags.samples; });
        add(sub->add_option("--reference-elements", flags.reference_elements, "reference mesh size"),
            [&](RunConfig& c) { c.reference_elements = flags.reference_elements; });
        add(sub->add_option("--reference-degree", flags.reference_degree, "reference degree"),
            [&](RunConfig& c) { c.reference_degree = flags.reference_degree; });
        add(sub->add_flag("--no-timing", no_timing, "write 0 in the seconds column"),
            [&](RunConfig& c) { c.timing = !no_timing; });
        sub->add_option("--config", config_path, "JSON config file; flags override it");
    };

    CLI::App* solve = app.add_subcommand("solve", "single IGA-HMM solve");
    CLI::App* conv = app.add_subcommand("convergence", "convergence study over a mesh list");
    CLI::App* geom = app.add_subcommand("geometry", "refine a patch and plot its mesh");
    common(solve);
    common(conv);
    common(geom);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return ConfigFailure;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) apply_json(cfg, config_path);
        for (const auto& [opt, apply] : overrides) {
            if (opt->count() > 0) apply(cfg);
        }
        if (solve->parsed()) return cmd_solve(cfg, out);
        if (conv->parsed()) return cmd_convergence(cfg, out, err);
        return cmd_geometry(cfg, out);
    } catch (const Error& e) {
        err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error [solver]: " << e.what() << "\n";
        return SolverFailure;
    }
}

}  // namespace igahmm::cli
