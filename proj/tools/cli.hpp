#pragma once
#ifndef MGEOM_TOOLS_CLI_HPP
#define MGEOM_TOOLS_CLI_HPP

#include <mgeom/io/json.hpp>
#include <mgeom/mgeom.hpp>
#include <mgeom/verify.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace mgeom::cli {

namespace fs = std::filesystem;
using io::json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutDirEnv = "MGEOM_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "mgeom_out";

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ull;
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedInput("cannot read input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to a sibling temporary file and renames it over `path`.
inline void write_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error("write to '" + tmp.string() + "' failed");
        }
    }
    fs::rename(tmp, path);
}

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw MalformedInput(what + ": " + e.what());
    }
}

/// Comma-separated rationals; entries may also be written 2^k.
inline std::vector<Rational> parse_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
        if (item.rfind("2^", 0) == 0) {
            try {
                out.push_back(pow2(std::stoll(item.substr(2))));
            } catch (const std::logic_error&) {
                throw MalformedInput("not a power of two: '" + item + "'");
            }
        } else {
            out.push_back(parse_rational(item));
        }
    }
    if (out.empty()) throw MalformedInput("empty list");
    return out;
}

/// Inputs, outputs and parameters of one run; written as manifest.json.
class Session {
public:
    explicit Session(fs::path out_dir) : out_dir_(std::move(out_dir)) {}

    std::string input(const std::string& path) {
        std::string bytes = read_file(path);
        inputs_.push_back({{"path", path}, {"fnv1a64", hex64(fnv1a64(bytes))}});
        return bytes;
    }

    json input_json(const std::string& path) { return parse_json(input(path), "'" + path + "'"); }

    AnySpace input_space(const std::string& path) { return io::space_from_json(input_json(path)); }

    void output(const std::string& name, const std::string& content) {
        fs::create_directories(out_dir_);
        fs::path p = out_dir_ / name;
        write_atomic(p, content);
        outputs_.push_back({{"path", p.string()}, {"fnv1a64", hex64(fnv1a64(content))}});
    }

    void output_json(const std::string& name, const json& j) { output(name, j.dump(2) + "\n"); }

    json& parameters() { return params_; }

    void write_manifest(const std::vector<std::string>& args, const std::string& subcommand, double seconds) {
        json m{{"tool", "mgeom"},
               {"version", kVersion},
               {"arguments", args},
               {"subcommand", subcommand},
               {"parameters", params_},
               {"inputs", inputs_},
               {"outputs", outputs_},
               {"wall_clock_seconds", seconds}};
        fs::create_directories(out_dir_);
        write_atomic(out_dir_ / "manifest.json", m.dump(2) + "\n");
    }

    const fs::path& out_dir() const { return out_dir_; }

private:
    fs::path out_dir_;
    json inputs_ = json::array();
    json outputs_ = json::array();
    json params_ = json::object();
};

struct Options {
    std::string out;
    std::uint64_t seed = verify::kDefaultSeed;

    // build
    std::string target, tdim, block, family, config;
    std::uint64_t depth = 0, budget = 256, grid = 0;

    // dims
    std::uint64_t terms = 1000, window = 200;
    std::string eps;

    // gh, ugh
    std::string a, b;
    bool exact = false, bounds = false;

    // telescope, fingerprint
    std::string q, flavor = "u";
    std::uint64_t levels = 0;
    double scale = 1.0;

    // path audit
    std::string from = "v1", to = "v2";
    std::uint64_t branch = 1;

    // verify
    std::string suite = "all";
    std::uint64_t cases = verify::kDefaultCases;
    bool inject_fault = false;

    // export
    std::string format = "csv";
};

inline std::string default_out_dir() {
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return kDefaultOutDir;
}

namespace detail {

inline std::uint64_t default_if_zero(std::uint64_t v, std::uint64_t fallback) { return v ? v : fallback; }

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline void cmd_build(const Options& o, Session& s, std::ostream& out) {
    int modes = !o.target.empty() + !o.block.empty() + !o.family.empty() + !o.config.empty();
    if (modes != 1) throw MalformedInput("build needs exactly one of --target, --block, --family, --config");
    if (!o.target.empty()) {
        DimensionalType t = DimensionalType::parse(o.target);
        if (!o.tdim.empty()) t.tdim = Dim::parse(o.tdim);
        t.check();
        if (t.tdim) {
            TdimAssembly a = prescribed_with_tdim(t, default_if_zero(o.grid, 4), o.budget);
            json j = io::assembly_to_json(a.cantor);
            j["tdim"] = a.tdim.str();
            j["note"] = a.note;
            s.output_json("assembly.json", j);
            if (a.space) s.output_json("space.json", io::space_to_json(*a.space));
            out << "assembly with " << a.cantor.components.size() << " Cantor component(s); " << a.note << "\n";
            return;
        }
        CantorAssembly a = prescribed_factory(t);
        s.output_json("assembly.json", io::assembly_to_json(a));
        AnySpace space = enumerate_assembly(a, o.budget);
        s.output_json("space.json", io::space_to_json(space));
        out << "assembly for " << t.str() << " with " << a.components.size() << " component(s), "
            << to_float(space).size() << " points\n";
        return;
    }
    if (!o.block.empty()) {
        BuildingBlock b = building_block(o.block);
        AnySpace space = b.family ? AnySpace(enumerate_blocks(*b.family, default_if_zero(o.depth, 2), 1))
                                  : enumerate(b.spec->with_depth(default_if_zero(o.depth, 4)));
        s.output_json("block.json",
                      json{{"tag", b.tag}, {"description", b.description}, {"type", io::type_to_json(b.analytic)}});
        s.output_json("space.json", io::space_to_json(space));
        out << "block " << b.tag << " " << b.analytic.str() << ", " << to_float(space).size() << " points\n";
        return;
    }
    io::FamilyConfig f = o.config.empty() ? io::family_from_text(o.family) : io::family_from_json(s.input_json(o.config));
    CantorSpec spec = o.depth ? f.spec.with_depth(o.depth) : f.spec;
    AnySpace space = enumerate(spec);
    s.output_json("space.json", io::space_to_json(space));
    out << f.name << " truncated at depth " << spec.depth << ", " << to_float(space).size() << " points\n";
}

inline void cmd_dims(const Options& o, Session& s, std::ostream& out) {
    if (o.family.empty() == o.config.empty()) throw MalformedInput("dims needs exactly one of --family, --config");
    io::FamilyConfig f = o.config.empty() ? io::family_from_text(o.family) : io::family_from_json(s.input_json(o.config));
    if (o.terms < 10) throw DomainError("--terms must be at least 10");
    std::vector<Rational> eps = parse_list(o.eps.empty() ? "2^-1,2^-2,2^-3,2^-4,2^-6,2^-8,2^-10,2^-12" : o.eps);

    DimensionTable table = dim_sequences(f.spec, o.terms);
    if (table.rows.empty()) throw DomainError("no rows with alpha(n) < 1 up to --terms");
    std::vector<ThetaResult> theta;
    bool non_doubling = false;
    for (const auto& e : eps) {
        theta.push_back(theta_eta(f.spec, e, o.window));
        non_doubling = non_doubling || non_doubling_flag(theta.back());
    }
    s.output("dims.csv", io::dims_csv(table));
    s.output("theta.csv", io::theta_csv(theta));

    const auto& last = table.rows.back();
    auto [h, p] = table.window(o.terms / 10, o.terms);
    out << "family " << f.name << ": h_" << last.n << " = " << io::magnitude_text(last.h) << ", p_" << last.n << " = "
        << io::magnitude_text(last.p) << "; window [" << o.terms / 10 << ", " << o.terms
        << "] liminf h = " << io::magnitude_text(h) << ", limsup p = " << io::magnitude_text(p) << "; eta:";
    for (const auto& t : theta) out << " " << io::magnitude_text(t.eta);
    out << "; non-doubling: " << yes_no(non_doubling);
    if (f.analytic) out << "; analytic type " << f.analytic->str();
    out << "\n";
}

template <Scalar T>
void gh_pair(const Options& o, const BasicSpace<T>& a, const BasicSpace<T>& b, bool ultra, Session& s,
             std::ostream& out) {
    GhResult<T> r;
    if (ultra) {
        r = ugh(a, b);
    } else {
        if (o.exact && a.size() + b.size() > kGhExactGuard) {
            throw SizeError("exact search is limited to |a| + |b| <= " + std::to_string(kGhExactGuard));
        }
        r = gh_exact(a, b, o.bounds ? 0 : kGhExactGuard);
    }
    json j = io::gh_to_json(r, a, b);
    s.output_json(ultra ? "ugh.json" : "gh.json", j);
    out << j.dump() << "\n";
}

inline void cmd_gh(const Options& o, Session& s, std::ostream& out, bool ultra) {
    if (o.exact && o.bounds) throw MalformedInput("--exact and --bounds are exclusive");
    AnySpace a = s.input_space(o.a), b = s.input_space(o.b);
    if (std::holds_alternative<ExactSpace>(a) && std::holds_alternative<ExactSpace>(b)) {
        gh_pair(o, std::get<ExactSpace>(a), std::get<ExactSpace>(b), ultra, s, out);
    } else {
        gh_pair(o, to_float(a), to_float(b), ultra, s, out);
    }
}

inline void cmd_qiu(const Options& o, Session& s, std::ostream& out) {
    ExactSpace x;
    if (!o.a.empty()) {
        AnySpace in = s.input_space(o.a);
        if (!std::holds_alternative<ExactSpace>(in)) throw MalformedInput("qiu needs exact distances");
        x = std::get<ExactSpace>(std::move(in));
    } else {
        x = enumerate_exact(CantorSpec(BranchingSequence::constant(2), sequences::geometric(1), default_if_zero(o.depth, 4)));
    }
    auto rows = qiu_demo(x, parse_list(o.eps.empty() ? "1,1/10,1/100" : o.eps));
    std::string csv = io::qiu_csv(rows);
    s.output("qiu.csv", csv);
    out << csv;
}

inline void cmd_telescope(const Options& o, Session& s, std::ostream&) {
    if (o.q.empty()) throw MalformedInput("telescope needs --q");
    TelescopeSpec spec;
    for (const auto& v : parse_list(o.q)) spec.q.push_back(to_double(v));
    spec.levels = o.levels ? o.levels : spec.q.size() - 1;
    if (spec.q.size() < spec.levels + 1) spec.q.resize(spec.levels + 1, 0.0);
    spec.flavor = parse_flavor(o.flavor);
    spec.scale = o.scale;
    s.output_json("telescope.json", io::space_to_json(telescope(spec)));
}

inline void cmd_fingerprint(const Options& o, Session& s, std::ostream& out) {
    FloatSpace x = to_float(s.input_space(o.a));
    FingerprintResult f = o.levels ? fingerprint_embedded(x, o.levels) : fingerprint(x);
    json j = io::fingerprint_to_json(f);
    s.output_json("fingerprint.json", j);
    out << j.dump() << "\n";
    if (!f.ok) throw DomainError("no telescope fingerprint: " + f.failure);
}

inline void cmd_path_audit(const Options& o, Session& s, std::ostream& out) {
    PathSpec path = io::path_from_json(s.input_json(o.a));
    SimplexPoint from = SimplexPoint::parse(o.from, path.n), to = SimplexPoint::parse(o.to, path.n);
    ContinuityAudit audit = path_continuity_audit(path, from, to, default_if_zero(o.grid, 100), o.branch);
    s.output("audit.csv", io::audit_csv(audit));
    out << "max sup distance " << io::format_double(audit.max_sup) << "; start matches its component: "
        << yes_no(audit.start_matches) << "; end matches its component: " << yes_no(audit.end_matches) << "\n";
}

inline bool cmd_verify(const Options& o, Session& s, std::ostream& out) {
    verify::Options vo;
    vo.seed = o.seed;
    vo.cases = o.cases;
    vo.inject_fault = o.inject_fault;
    auto results = verify::run(o.suite, vo);
    s.output("junit.xml", verify::junit_xml(results));
    for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name;
        if (!r.passed) out << " -- " << r.message;
        out << "\n";
    }
    return verify::all_passed(results);
}

inline void cmd_export(const Options& o, Session& s, std::ostream&) {
    AnySpace x = s.input_space(o.a);
    if (o.format == "csv") {
        s.output("matrix.csv", std::visit([](const auto& v) { return io::matrix_csv(v); }, x));
    } else if (o.format == "json") {
        s.output_json("space.json", io::space_to_json(x));
    } else {
        throw MalformedInput("--format must be csv or json");
    }
}

inline json option_values(const CLI::App& app) {
    json j = json::object();
    for (const CLI::Option* opt : app.get_options()) {
        std::string name = opt->get_single_name();
        if (name == "help" || name == "version") continue;
        if (opt->count()) j[name] = opt->results().size() == 1 ? json(opt->results().front()) : json(opt->results());
        else if (!opt->get_default_str().empty()) j[name] = opt->get_default_str();
    }
    return j;
}

}  // namespace detail

/**
 * Runs the tool on `args` (without the program name). Exit codes: 0 success,
 * 1 internal error or failed verification, 2 user input error.
 */
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Options o;
    o.out = default_out_dir();
    CLI::App app{"Metric geometry toolkit: Cantor dimensions, Gromov-Hausdorff distances, telescopes", "mgeom"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--out", o.out, "output directory (default $MGEOM_OUT_DIR or ./mgeom_out)");
    app.add_option("--seed", o.seed, "seed for randomized suites")->capture_default_str();

    auto* build = app.add_subcommand("build", "build a space from a target type, block tag or family");
    build->add_option("--target", o.target, "dimensional type a1,a2,a3,a4 (entries rational or inf)");
    build->add_option("--tdim", o.tdim, "topological dimension label l (integer or inf)");
    build->add_option("--block", o.block, "building block tag, e.g. 0111");
    build->add_option("--family", o.family, "family name or JSON config text");
    build->add_option("--config", o.config, "family config file");
    build->add_option("--depth", o.depth, "truncation depth (blocks: number of blocks)");
    build->add_option("--grid", o.grid, "cube grid steps per axis when --tdim is finite");
    build->add_option("--budget", o.budget, "point budget per Cantor component")->capture_default_str();

    auto* dims = app.add_subcommand("dims", "dimension sequences and Assouad function tables");
    dims->add_option("--family", o.family, "family name (geometric, harmonic, lemma1111, ...) or JSON config text");
    dims->add_option("--config", o.config, "family config file");
    dims->add_option("--terms", o.terms, "sequence terms N")->capture_default_str();
    dims->add_option("--eps", o.eps, "comma list of epsilons, e.g. 2^-1,2^-4 or 1/2,0.1");
    dims->add_option("--window", o.window, "largest ball index scanned for Theta")->capture_default_str();

    auto* gh = app.add_subcommand("gh", "Gromov-Hausdorff distance between two space files");
    gh->add_option("a", o.a, "first space JSON")->required();
    gh->add_option("b", o.b, "second space JSON")->required();
    gh->add_flag("--exact", o.exact, "require the exact value");
    gh->add_flag("--bounds", o.bounds, "interval bounds only");

    auto* ughc = app.add_subcommand("ugh", "non-Archimedean Gromov-Hausdorff distance between two ultrametrics");
    ughc->add_option("a", o.a, "first space JSON")->required();
    ughc->add_option("b", o.b, "second space JSON")->required();

    auto* qiu = app.add_subcommand("qiu", "GH versus u_GH between d and (1+eps) d");
    qiu->add_option("space", o.a, "exact ultrametric space JSON (default: S(2, 2^-(n+1)) at --depth)");
    qiu->add_option("--depth", o.depth, "depth of the built-in space (default 4)");
    qiu->add_option("--eps", o.eps, "comma list of epsilons (default 1,1/10,1/100)");

    auto* tel = app.add_subcommand("telescope", "telescope space for a Hilbert-cube point");
    tel->add_option("--q", o.q, "comma list q_0,q_1,... in [0,1]; padded with zeros up to --levels");
    tel->add_option("--levels", o.levels, "last level J (default: len(q) - 1)");
    tel->add_option("--flavor", o.flavor, "u (metric) or v (ultrametric)")->capture_default_str();
    tel->add_option("--scale", o.scale, "scale K")->capture_default_str();

    auto* fp = app.add_subcommand("fingerprint", "recover (q, K) from a telescope distance matrix");
    fp->add_option("space", o.a, "space JSON")->required();
    fp->add_option("--levels", o.levels, "search for an embedded telescope with levels 0..J");

    auto* path = app.add_subcommand("path", "simplex-path family tools");
    path->require_subcommand(1);
    auto* audit = path->add_subcommand("audit", "sup distances along a segment of the simplex");
    audit->add_option("config", o.a, "path config JSON")->required();
    audit->add_option("--from", o.from, "start point: v<i> or barycentric list")->capture_default_str();
    audit->add_option("--to", o.to, "end point: v<i> or barycentric list")->capture_default_str();
    audit->add_option("--grid", o.grid, "segment steps (default 100)");
    audit->add_option("--branch", o.branch, "branch index k")->capture_default_str();

    auto* ver = app.add_subcommand("verify", "run the property suites");
    ver->add_option("--suite", o.suite, "metric-core, cantor-dims, gromov, telescope or all")->capture_default_str();
    ver->add_option("--cases", o.cases, "cases per property")->capture_default_str();
    ver->add_flag("--inject-fault", o.inject_fault, "add a perturbed ultrametric that must be reported");

    auto* exp = app.add_subcommand("export", "convert a space file");
    exp->add_option("space", o.a, "space JSON")->required();
    exp->add_option("--format", o.format, "csv or json")->capture_default_str();

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    std::string name = sub->get_name();
    if (name == "path") {
        sub = sub->get_subcommands().front();
        name = "path " + sub->get_name();
    }
    Session session(o.out);
    session.parameters() = detail::option_values(app);
    session.parameters().update(detail::option_values(*sub));
    auto t0 = std::chrono::steady_clock::now();
    try {
        bool ok = true;
        if (name == "build") detail::cmd_build(o, session, out);
        else if (name == "dims") detail::cmd_dims(o, session, out);
        else if (name == "gh") detail::cmd_gh(o, session, out, false);
        else if (name == "ugh") detail::cmd_gh(o, session, out, true);
        else if (name == "qiu") detail::cmd_qiu(o, session, out);
        else if (name == "telescope") detail::cmd_telescope(o, session, out);
        else if (name == "fingerprint") detail::cmd_fingerprint(o, session, out);
        else if (name == "path audit") detail::cmd_path_audit(o, session, out);
        else if (name == "verify") ok = detail::cmd_verify(o, session, out);
        else if (name == "export") detail::cmd_export(o, session, out);
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        session.write_manifest(args, name, seconds);
        return ok ? 0 : 1;
    } catch (const Error& e) {
        err << "mgeom " << name << ": " << e.what() << "\n";
        return e.user_error() ? 2 : 1;
    } catch (const json::exception& e) {
        err << "mgeom " << name << ": malformed JSON: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "mgeom " << name << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "mgeom " << name << ": internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mgeom::cli

#endif  // MGEOM_TOOLS_CLI_HPP
