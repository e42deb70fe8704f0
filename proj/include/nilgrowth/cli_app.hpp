#ifndef NILGROWTH_CLI_APP_HPP
#define NILGROWTH_CLI_APP_HPP

// The command-line tool behind tools/nilgrowth_cli.cpp, kept in a header so
// the exit-status contract is testable in-process.
//
// Commands: growth, profile, hdim, prog-check, heisenberg {collapse,
// prop16, cc}. Exit status 0 on success, 1 on invalid input (diagnostic on
// the error stream), 2 when the enumeration budget cut a run short (partial
// files are still written, growth tables end with the marker row "<m>,,").
// The budget is taken from --budget, else the NILGROWTH_BUDGET environment
// variable, else 2*10^7 elements. Identical configurations produce
// byte-identical output files.

#include "nilgrowth/balls.hpp"
#include "nilgrowth/descriptor.hpp"
#include "nilgrowth/growth_profile.hpp"
#include "nilgrowth/heisenberg.hpp"
#include "nilgrowth/io.hpp"
#include "nilgrowth/lie_algebra.hpp"
#include "nilgrowth/progressions.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace nilgrowth {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitBudget = 2;

struct RunConfig {
    std::string command;                       // growth | profile | hdim | prog-check |
                                               // heisenberg-collapse | heisenberg-prop16 | heisenberg-cc
    std::string group;                         // group descriptor text
    std::string algebra;                       // Lie-algebra file path
    std::string gens;                          // generator spec ("" = standard)
    std::string lengths;                       // comma-separated progression lengths
    int max_m = 10;                            // growth radius bound
    int compare_max_m = 0;                     // profile comparison window (0 = analytic only)
    std::string c_constant;                    // upper-triangularity constant (prog-check)
    std::string proper_m;                      // properness scale (prog-check)
    std::string grid = "3,12,12";              // collapse grid bounds i,j,m
    std::string n_list = "2,3,4,5";            // prop16 sizes
    std::string f_list;                        // prop16 normalizations ("" = all 1)
    std::string point;                         // cc target, three rationals
    std::string scales = "2,3,4,5";            // cc refinement scales
    std::optional<unsigned long long> budget;  // --budget when given
    std::string out;                           // output path ("" = standard output)
    std::string format = "csv";                // growth output format: csv | json
};

namespace cli_detail {

inline std::size_t resolve_budget(const std::optional<unsigned long long>& flag) {
    if (flag) {
        if (*flag == 0) throw std::invalid_argument("budget must be positive");
        return static_cast<std::size_t>(*flag);
    }
    if (const char* env = std::getenv("NILGROWTH_BUDGET")) {
        const std::string text(env);
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos || text == "0") {
            throw std::invalid_argument("NILGROWTH_BUDGET must be a positive integer, got \"" + text + "\"");
        }
        return static_cast<std::size_t>(std::stoull(text));
    }
    return kDefaultEnumerationBudget;
}

inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
    } else {
        atomic_write_file(path, content);
    }
}

inline std::vector<long long> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<long long> out;
    for (const std::string& piece : detail::split(text, ',')) out.push_back(detail::parse_int(piece, what));
    return out;
}

inline std::vector<Rational> parse_rational_list(const std::string& text, const std::string& what) {
    std::vector<Rational> out;
    for (const std::string& piece : detail::split(text, ',')) {
        try {
            out.push_back(Rational::parse(piece));
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed " + what + ": \"" + piece + "\"");
        }
    }
    return out;
}

// Ordered progression base u_1..u_d: "standard" gives one generator per
// coordinate direction in their natural order; otherwise an ordered element
// list. Named symmetric families make no sense here and are rejected.
template <typename Context>
std::vector<typename Context::Element> ordered_base(const Context& ctx, const std::string& spec) {
    if (detail::parse_s_family_spec(spec)) {
        throw std::invalid_argument("progressions take an ordered generator tuple, not a symmetric family");
    }
    std::vector<typename Context::Element> out;
    if (spec.empty() || spec == "standard") {
        if constexpr (std::is_same_v<Context, HeisenbergContext>) {
            out = {HeisenbergElement{1, 0, 0}, HeisenbergElement{0, 1, 0}};
        } else if constexpr (std::is_same_v<Context, UnitriangularContext>) {
            for (int i = 0; i + 1 < ctx.n(); ++i) {
                auto e = ctx.identity();
                e[ctx.pos(i, i + 1)] = 1;
                out.push_back(std::move(e));
            }
        } else if constexpr (std::is_same_v<Context, FreeNilpotentContext>) {
            for (int g = 0; g < ctx.d(); ++g) out.push_back(ctx.generator(g));
        } else if constexpr (std::is_same_v<Context, LieLatticeContext>) {
            for (int g = 0; g < ctx.dim(); ++g) out.push_back(ctx.generator(g));
        } else {
            out.push_back(1 % ctx.modulus());
        }
        return out;
    }
    if constexpr (std::is_same_v<Context, HeisenbergContext>) {
        for (const auto& fields : detail::parse_tuple_list(spec)) {
            out.push_back(detail::parse_heisenberg_element(fields));
        }
    } else if constexpr (std::is_same_v<Context, UnitriangularContext>) {
        for (const auto& fields : detail::parse_tuple_list(spec)) {
            if (fields.size() != ctx.coord_count()) {
                throw std::invalid_argument("unitriangular elements take " + std::to_string(ctx.coord_count()) +
                                            " strictly-upper entries");
            }
            UnitriangularElement e;
            for (const auto& f : fields) e.push_back(detail::parse_int(f, "matrix entry"));
            out.push_back(std::move(e));
        }
    } else if constexpr (std::is_same_v<Context, FreeNilpotentContext>) {
        for (const auto& fields : detail::parse_tuple_list(spec)) {
            out.push_back(detail::parse_rational_vector(fields, static_cast<std::size_t>(ctx.table().dim())));
        }
    } else if constexpr (std::is_same_v<Context, LieLatticeContext>) {
        for (const auto& fields : detail::parse_tuple_list(spec)) {
            out.push_back(detail::parse_rational_vector(fields, static_cast<std::size_t>(ctx.dim())));
        }
    } else {
        for (const auto& fields : detail::parse_tuple_list(spec)) {
            if (fields.size() != 1) throw std::invalid_argument("cyclic elements take one coordinate");
            long long raw = detail::parse_int(fields[0], "residue");
            out.push_back(((raw % ctx.modulus()) + ctx.modulus()) % ctx.modulus());
        }
    }
    return out;
}

// [e1,e2] = e3 and e3 central, in the given basis.
inline bool is_standard_heisenberg(const LieAlgebra& algebra) {
    if (algebra.dim() != 3) return false;
    auto is_unit_e3 = [](const RationalVector& v) {
        return v[0].is_zero() && v[1].is_zero() && v[2] == Rational(1);
    };
    auto is_zero = [](const RationalVector& v) {
        for (const auto& c : v) {
            if (!c.is_zero()) return false;
        }
        return true;
    };
    return is_unit_e3(algebra.ops.bracket(0, 1)) && is_zero(algebra.ops.bracket(0, 2)) &&
           is_zero(algebra.ops.bracket(1, 2));
}

inline MarkedLieAlgebra fully_marked(const LieAlgebra& algebra) {
    RationalMatrix marks;
    for (int i = 0; i < algebra.dim(); ++i) {
        RationalVector v(static_cast<std::size_t>(algebra.dim()));
        v[static_cast<std::size_t>(i)] = Rational(1);
        marks.push_back(std::move(v));
    }
    return MarkedLieAlgebra{algebra, std::move(marks), algebra.ops.step};
}

// ---------------------------------------------------------------------------
// Command bodies. Each returns the exit status and writes its own files.

inline int run_growth(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.group.empty()) throw std::invalid_argument("growth needs --group");
    if (cfg.max_m < 0) throw std::invalid_argument("--max-m must be nonnegative");
    if (cfg.format != "csv" && cfg.format != "json") {
        throw std::invalid_argument("unknown format \"" + cfg.format + "\"");
    }
    const std::size_t budget = resolve_budget(cfg.budget);
    GroupDescriptor desc = parse_group_descriptor(cfg.group);
    std::string gens_spec = cfg.gens;
    if (desc.generators) {
        if (!gens_spec.empty()) throw std::invalid_argument("generators given both in --group and --gens");
        gens_spec = *desc.generators;
    }
    GrowthSeries series = std::visit(
        [&](const auto& ctx) {
            auto gens = resolve_generators(ctx, gens_spec, budget);
            return ball_growth(gens, cfg.max_m, budget);
        },
        make_context(desc));
    if (cfg.format == "json") {
        nlohmann::ordered_json doc;
        doc["group"] = desc.canonical();
        doc["overflow"] = series.overflow;
        doc["records"] = nlohmann::ordered_json::array();
        for (const auto& rec : series.records) {
            doc["records"].push_back({{"m", rec.m}, {"ball", rec.ball}, {"sphere", rec.sphere}});
        }
        emit(cfg.out, doc.dump(2) + "\n", out);
    } else {
        emit(cfg.out, growth_to_csv(series).to_string(), out);
    }
    if (series.overflow) {
        err << "budget of " << budget << " exhausted at radius " << series.max_radius() + 1 << "\n";
        return kExitBudget;
    }
    return kExitOk;
}

inline int run_profile(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.algebra.empty()) throw std::invalid_argument("profile needs --algebra");
    if (cfg.lengths.empty()) throw std::invalid_argument("profile needs --lengths");
    if (cfg.compare_max_m < 0) throw std::invalid_argument("--compare-max-m must be nonnegative");
    if (cfg.compare_max_m > 0 && cfg.out.empty()) {
        throw std::invalid_argument("--compare-max-m needs --out to place the deviation table next to");
    }
    const std::size_t budget = resolve_budget(cfg.budget);
    LieAlgebra algebra = load_lie_algebra(cfg.algebra);
    std::vector<Rational> lengths = parse_rational_list(cfg.lengths, "length");

    MarkedLieAlgebra marked = fully_marked(algebra);
    LieProgression prog = make_lie_progression(marked, lengths);
    GrowthPolynomial poly = growth_polynomial(prog);
    PiecewiseMonomial env = envelope(poly);
    LogLogProfile profile = loglog_profile(env);
    emit(cfg.out, profile_to_json(poly, env, profile).dump(2) + "\n", out);
    if (cfg.compare_max_m == 0) return kExitOk;

    // Measured comparison: realize the progression as a generating set and
    // run the ball enumeration. The standard Heisenberg algebra with lengths
    // (j,j,k) uses the box family S(j,k); any other integral-length setup
    // symmetrizes the ordered progression of its basis one-parameter steps.
    std::vector<long long> int_lengths;
    for (const auto& l : lengths) {
        if (!l.is_integer() || l.sign() <= 0) {
            throw std::invalid_argument("--compare-max-m needs positive integer lengths, got " + l.str());
        }
        int_lengths.push_back(detail::to_int64(l.floor(), "length"));
    }
    const std::string dev_path = cfg.out + ".deviation.csv";
    GrowthSeries series;
    try {
        if (is_standard_heisenberg(algebra) && algebra.dim() == 3 && int_lengths[0] == int_lengths[1]) {
            auto gens = s_family(int_lengths[0], int_lengths[2], budget);
            series = ball_growth(gens, cfg.compare_max_m, budget);
        } else {
            LieLatticeContext ctx(algebra);
            auto base = ordered_base(ctx, "standard");
            auto enumerated = enumerate_progression(make_progression(ctx, base, int_lengths), budget);
            auto gens = make_generating_set(ctx, enumerated.elements);
            series = ball_growth(gens, cfg.compare_max_m, budget);
        }
    } catch (const BudgetExceeded& e) {
        atomic_write_file(dev_path, deviation_to_csv(DeviationReport{}, true, 1).to_string());
        err << e.what() << "\n";
        return kExitBudget;
    }
    DeviationReport report;
    if (series.max_radius() >= 1) report = profile_deviation(series, profile);
    atomic_write_file(dev_path, deviation_to_csv(report, series.overflow, series.max_radius() + 1).to_string());
    if (series.overflow) {
        err << "budget of " << budget << " exhausted at radius " << series.max_radius() + 1 << "\n";
        return kExitBudget;
    }
    return kExitOk;
}

inline int run_hdim(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    if (cfg.algebra.empty()) throw std::invalid_argument("hdim needs --algebra");
    LieAlgebra algebra = load_lie_algebra(cfg.algebra);
    const std::string line =
        "dim=" + std::to_string(algebra.dim()) + " hdim=" + std::to_string(homogeneous_dimension(algebra)) + "\n";
    out << line;
    if (!cfg.out.empty()) atomic_write_file(cfg.out, line);
    return kExitOk;
}

inline int run_prog_check(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    if (cfg.group.empty()) throw std::invalid_argument("prog-check needs --group");
    if (cfg.lengths.empty()) throw std::invalid_argument("prog-check needs --lengths");
    if (cfg.c_constant.empty() && cfg.proper_m.empty()) {
        throw std::invalid_argument("prog-check needs --C and/or --proper-m");
    }
    const std::size_t budget = resolve_budget(cfg.budget);
    GroupDescriptor desc = parse_group_descriptor(cfg.group);
    std::string gens_spec = cfg.gens;
    if (desc.generators) {
        if (!gens_spec.empty()) throw std::invalid_argument("generators given both in --group and --gens");
        gens_spec = *desc.generators;
    }
    std::vector<long long> lengths = parse_int_list(cfg.lengths, "length");
    std::string lines = std::visit(
        [&](const auto& ctx) {
            auto base = ordered_base(ctx, gens_spec);
            auto prog = make_progression(ctx, base, lengths);
            std::string text;
            if (!cfg.c_constant.empty()) {
                Rational c = Rational::parse(cfg.c_constant);
                text += "upper-triangular(C=" + c.str() + "): " +
                        (upper_triangular_check(prog, c, budget) ? "yes" : "no") + "\n";
            }
            if (!cfg.proper_m.empty()) {
                Rational m = Rational::parse(cfg.proper_m);
                text += "proper(m=" + m.str() + "): " + (is_m_proper(prog, m, budget) ? "yes" : "no") + "\n";
            }
            return text;
        },
        make_context(desc));
    out << lines;
    if (!cfg.out.empty()) atomic_write_file(cfg.out, lines);
    return kExitOk;
}

inline int run_collapse(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::size_t budget = resolve_budget(cfg.budget);
    std::vector<long long> grid = parse_int_list(cfg.grid, "grid bound");
    if (grid.size() != 3 || grid[0] < 1 || grid[1] < 1 || grid[2] < 1) {
        throw std::invalid_argument("--grid takes three positive bounds i,j,m");
    }
    auto cells = collapsing_grid(grid[0], grid[1], static_cast<int>(grid[2]), budget);
    emit(cfg.out, collapsing_to_csv(cells).to_string(), out);
    const auto expected = static_cast<std::size_t>(grid[0]) * static_cast<std::size_t>(grid[1]) *
                          static_cast<std::size_t>(grid[2]);
    if (cells.size() < expected) {
        err << expected - cells.size() << " of " << expected << " grid cells exceeded the budget of " << budget
            << " and were skipped\n";
        return kExitBudget;
    }
    return kExitOk;
}

inline int run_prop16(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::size_t budget = resolve_budget(cfg.budget);
    std::vector<long long> n_raw = parse_int_list(cfg.n_list, "size");
    std::vector<int> n_list;
    for (long long n : n_raw) n_list.push_back(static_cast<int>(n));
    std::vector<Rational> f_values = cfg.f_list.empty()
                                         ? std::vector<Rational>(n_list.size(), Rational(1))
                                         : parse_rational_list(cfg.f_list, "normalization");
    auto rows = prop16_table(n_list, f_values, budget);
    emit(cfg.out, prop16_to_csv(rows).to_string(), out);
    for (const auto& row : rows) {
        if (row.partial) {
            err << "power enumeration for n=" << row.n << " stopped at exponent " << row.completed_power
                << " under the budget of " << budget << "\n";
            return kExitBudget;
        }
    }
    return kExitOk;
}

inline int run_cc(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.point.empty()) throw std::invalid_argument("cc needs --point");
    const std::size_t budget = resolve_budget(cfg.budget);
    std::vector<Rational> coords = parse_rational_list(cfg.point, "coordinate");
    if (coords.size() != 3) throw std::invalid_argument("--point takes three coordinates u,v,w");
    std::array<Rational, 3> g = {coords[0], coords[1], coords[2]};
    std::vector<long long> scales = parse_int_list(cfg.scales, "scale");
    std::vector<std::pair<long long, Rational>> rows;
    for (long long r : scales) {
        if (r < 1) throw std::invalid_argument("scales must be positive");
        try {
            rows.emplace_back(r, cc_estimate(g, r, r, budget));
        } catch (const BudgetExceeded& e) {
            emit(cfg.out, cc_to_csv(rows, true, r).to_string(), out);
            err << e.what() << "\n";
            return kExitBudget;
        }
    }
    emit(cfg.out, cc_to_csv(rows, false, 0).to_string(), out);
    return kExitOk;
}

}  // namespace cli_detail

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.command == "growth") return cli_detail::run_growth(cfg, out, err);
        if (cfg.command == "profile") return cli_detail::run_profile(cfg, out, err);
        if (cfg.command == "hdim") return cli_detail::run_hdim(cfg, out, err);
        if (cfg.command == "prog-check") return cli_detail::run_prog_check(cfg, out, err);
        if (cfg.command == "heisenberg-collapse") return cli_detail::run_collapse(cfg, out, err);
        if (cfg.command == "heisenberg-prop16") return cli_detail::run_prop16(cfg, out, err);
        if (cfg.command == "heisenberg-cc") return cli_detail::run_cc(cfg, out, err);
        err << "error: unknown command \"" << cfg.command << "\"\n";
        return kExitInvalid;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}

// argv -> RunConfig -> run(). Returns the process exit status.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    unsigned long long budget_flag = 0;

    CLI::App app{"word-metric ball growth in finitely generated nilpotent groups"};
    app.require_subcommand(1);

    auto add_budget = [&](CLI::App* cmd) {
        cmd->add_option("--budget", budget_flag,
                        "enumeration budget in elements (default: NILGROWTH_BUDGET or 20000000)");
    };
    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", cfg.out, "output file (default: standard output)");
    };

    CLI::App* growth = app.add_subcommand("growth", "ball and sphere sizes up to a radius, as CSV");
    growth->add_option("--group", cfg.group, "group descriptor, e.g. heisenberg or free:d=2,s=3")->required();
    growth->add_option("--gens", cfg.gens, "generating set: standard, S(j,k), or (a,b,..);(c,d,..)");
    growth->add_option("--max-m", cfg.max_m, "largest radius to enumerate");
    growth->add_option("--format", cfg.format, "output format: csv or json");
    add_budget(growth);
    add_out(growth);

    CLI::App* profile = app.add_subcommand(
        "profile", "analytic growth profile of a Lie progression, optionally compared to measured balls");
    profile->add_option("--algebra", cfg.algebra, "Lie-algebra JSON file")->required();
    profile->add_option("--lengths", cfg.lengths, "progression side lengths L1,..,Ld")->required();
    profile->add_option("--compare-max-m", cfg.compare_max_m,
                        "also measure balls to this radius and write <out>.deviation.csv");
    add_budget(profile);
    add_out(profile);

    CLI::App* hdim = app.add_subcommand("hdim", "dimension and homogeneous dimension of an algebra");
    hdim->add_option("--algebra", cfg.algebra, "Lie-algebra JSON file")->required();
    add_out(hdim);

    CLI::App* prog = app.add_subcommand("prog-check", "upper-triangularity and properness of a progression");
    prog->add_option("--group", cfg.group, "group descriptor")->required();
    prog->add_option("--gens", cfg.gens, "ordered base tuple (default: standard)");
    prog->add_option("--lengths", cfg.lengths, "progression side lengths L1,..,Ld")->required();
    prog->add_option("--C", cfg.c_constant, "upper-triangularity constant to test");
    prog->add_option("--proper-m", cfg.proper_m, "properness scale to test");
    add_budget(prog);
    add_out(prog);

    CLI::App* heis = app.add_subcommand("heisenberg", "diagnostics for the S(j,k) box families");
    heis->require_subcommand(1);
    CLI::App* collapse = heis->add_subcommand("collapse", "power collapse comparison over a parameter grid");
    collapse->add_option("--grid", cfg.grid, "bounds i,j,m of the grid (default 3,12,12)");
    add_budget(collapse);
    add_out(collapse);
    CLI::App* prop16 = heis->add_subcommand("prop16", "|S_n| and |S_n^n| against their growth normalizations");
    prop16->add_option("--n", cfg.n_list, "sizes n to tabulate (default 2,3,4,5)");
    prop16->add_option("--f", cfg.f_list, "normalizations f(n), one per size (default all 1)");
    add_budget(prop16);
    add_out(prop16);
    CLI::App* cc = heis->add_subcommand("cc", "word-metric estimates of the cc distance to a point");
    cc->add_option("--point", cfg.point, "target point u,v,w (rationals)")->required();
    cc->add_option("--scales", cfg.scales, "refinement scales (default 2,3,4,5)");
    add_budget(cc);
    add_out(cc);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    if (growth->parsed()) cfg.command = "growth";
    if (profile->parsed()) cfg.command = "profile";
    if (hdim->parsed()) cfg.command = "hdim";
    if (prog->parsed()) cfg.command = "prog-check";
    if (heis->parsed()) {
        if (collapse->parsed()) cfg.command = "heisenberg-collapse";
        if (prop16->parsed()) cfg.command = "heisenberg-prop16";
        if (cc->parsed()) cfg.command = "heisenberg-cc";
    }
    for (CLI::App* cmd : {growth, profile, prog, collapse, prop16, cc}) {
        if (cmd->parsed() && cmd->count("--budget")) cfg.budget = budget_flag;
    }
    return run(cfg, out, err);
}

}  // namespace nilgrowth

#endif  // NILGROWTH_CLI_APP_HPP
