#include "nilgrowth/cli_app.hpp"
#include "nilgrowth/descriptor.hpp"
#include "nilgrowth/io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using namespace nilgrowth;

namespace {

struct CliResult {
    int status = 0;
    std::string out;
    std::string err;
};

CliResult invoke(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    CliResult res;
    res.status = run_cli(args, out, err);
    res.out = out.str();
    res.err = err.str();
    return res;
}

// A fresh scratch directory per test file run.
std::filesystem::path scratch_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() / "nilgrowth-cli-tests";
        std::filesystem::remove_all(d);
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string scratch_file(const std::string& name) { return (scratch_dir() / name).string(); }

const char* kHeisenbergJson = R"({"dim": 3, "labels": ["x", "y", "z"], "brackets": [[1, 2, [[3, 1, 1]]]]})";

std::string heisenberg_file() {
    static const std::string path = [] {
        std::string p = scratch_file("heis.json");
        atomic_write_file(p, kHeisenbergJson);
        return p;
    }();
    return path;
}

}  // namespace

TEST_CASE("group descriptors parse, validate, and round-trip") {
    auto heis = parse_group_descriptor("heisenberg");
    CHECK(heis.kind == GroupKind::heisenberg);
    CHECK(heis.canonical() == "heisenberg");

    auto free_desc = parse_group_descriptor("free:d=2,s=3");
    CHECK(free_desc.canonical() == "free:d=2,s=3");
    auto free_ctx = std::get<FreeNilpotentContext>(make_context(free_desc));
    CHECK(free_ctx.table().dim() == 5);  // Witt: 2 + 1 + 2

    CHECK(parse_group_descriptor("unitriangular:n=4").canonical() == "unitriangular:n=4");
    CHECK(parse_group_descriptor("lattice:d=2").canonical() == "lattice:d=2");
    CHECK(parse_group_descriptor("cyclic:q=7").canonical() == "cyclic:q=7");

    // Combined group:generators form.
    auto combined = parse_group_descriptor("heisenberg:S(2,8)");
    REQUIRE(combined.generators.has_value());
    CHECK(*combined.generators == "S(2,8)");
    CHECK(combined.canonical() == "heisenberg:S(2,8)");
    CHECK(parse_group_descriptor(combined.canonical()).canonical() == combined.canonical());

    CHECK_THROWS_WITH(parse_group_descriptor("dihedral:n=4"), Catch::Matchers::ContainsSubstring("unknown group kind"));
    CHECK_THROWS_AS(parse_group_descriptor("unitriangular"), std::invalid_argument);
    CHECK_THROWS_AS(parse_group_descriptor("free:d=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_group_descriptor("free:d=2,s=3,x=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_group_descriptor("cyclic:q=0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_group_descriptor("unitriangular:n=x"), std::invalid_argument);
}

TEST_CASE("generator specs resolve to the named families") {
    HeisenbergContext heis;
    CHECK(resolve_generators(heis, "standard", 1000).elements.size() == 5);
    CHECK(resolve_generators(heis, "", 1000).elements.size() == 5);
    CHECK(resolve_generators(heis, "S(2,8)", kDefaultEnumerationBudget).elements.size() == 461);
    CHECK(resolve_generators(heis, "S(1,1)", kDefaultEnumerationBudget).elements.size() == 31);

    // Explicit lists are validated, not repaired.
    CHECK_THROWS_WITH(resolve_generators(heis, "(1,0,0);(0,1,0)", 1000),
                      Catch::Matchers::ContainsSubstring("does not contain the identity"));
    CHECK_THROWS_WITH(resolve_generators(heis, "(0,0,0);(1,0,0)", 1000),
                      Catch::Matchers::ContainsSubstring("missing inverse of (1,0,0)"));
    auto explicit_set = resolve_generators(heis, "(0,0,0);(1,0,0);(-1,0,0)", 1000);
    CHECK(explicit_set.elements.size() == 3);

    auto lattice = integer_lattice_context(2);
    CHECK_THROWS_WITH(resolve_generators(lattice, "S(2,8)", 1000),
                      Catch::Matchers::ContainsSubstring("Heisenberg generating set"));
    CHECK(resolve_generators(lattice, "(1,0);(-1,0);(0,0)", 1000).elements.size() == 3);
    CHECK_THROWS_WITH(resolve_generators(lattice, "(1,0);(-1,0)", 1000),
                      Catch::Matchers::ContainsSubstring("does not contain the identity"));

    CyclicContext cyc(7);
    auto cyc_set = resolve_generators(cyc, "(0);(1);(-1)", 1000);
    CHECK(cyc_set.elements == std::vector<long long>{0, 1, 6});

    // Canonical rendering round-trips element lists through re-parsing.
    const std::string spec = "(0,0,0);(2,1,0);(-2,-1,2)";
    auto resolved = resolve_generators(heis, spec, 1000);
    std::string canon = canonical_generator_spec(heis, spec, resolved);
    auto reparsed = resolve_generators(heis, canon, 1000);
    CHECK(reparsed.elements == resolved.elements);
    CHECK(canonical_generator_spec(heis, canon, reparsed) == canon);
    CHECK(canonical_generator_spec(heis, "standard", resolve_generators(heis, "standard", 1000)) == "standard");
}

TEST_CASE("growth command emits exact tables and honors the exit contract") {
    const std::string path = scratch_file("growth.csv");
    auto res = invoke({"growth", "--group", "heisenberg", "--gens", "standard", "--max-m", "5", "--out", path});
    REQUIRE(res.status == 0);
    const std::string expected =
        "m,ball,sphere\n"
        "0,1,1\n"
        "1,5,4\n"
        "2,17,12\n"
        "3,53,36\n"
        "4,135,82\n"
        "5,299,164\n";
    CHECK(read_file(path) == expected);

    SECTION("identical configurations are byte-identical") {
        const std::string again = scratch_file("growth-again.csv");
        auto rerun = invoke({"growth", "--group", "heisenberg", "--gens", "standard", "--max-m", "5", "--out", again});
        REQUIRE(rerun.status == 0);
        CHECK(read_file(again) == read_file(path));
    }

    SECTION("CSV round-trips to the in-memory series") {
        GrowthSeries series = growth_from_csv(parse_csv(read_file(path)));
        REQUIRE(series.records.size() == 6);
        CHECK_FALSE(series.overflow);
        CHECK(series.ball(5) == 299);
        CHECK(series.records[5].sphere == 164);
        CHECK(growth_to_csv(series).to_string() == read_file(path));
        CsvTable table = parse_csv(read_file(path));
        CHECK(parse_csv(table.to_string()) == table);
    }

    SECTION("budget overflow writes a partial table with a marker row and exits 2") {
        const std::string partial = scratch_file("growth-partial.csv");
        auto over = invoke({"growth", "--group", "heisenberg", "--max-m", "12", "--budget", "5000", "--out", partial});
        CHECK(over.status == kExitBudget);
        CHECK(over.err.find("budget") != std::string::npos);
        const std::string text = read_file(partial);
        CHECK(text.find("10,4309,1464\n11,,\n") != std::string::npos);
        GrowthSeries series = growth_from_csv(parse_csv(text));
        CHECK(series.overflow);
        CHECK(series.max_radius() == 10);
    }

    SECTION("stdout when --out is omitted") {
        auto direct = invoke({"growth", "--group", "heisenberg", "--max-m", "2"});
        REQUIRE(direct.status == 0);
        CHECK(direct.out == "m,ball,sphere\n0,1,1\n1,5,4\n2,17,12\n");
    }

    SECTION("json format") {
        auto direct = invoke({"growth", "--group", "lattice:d=2", "--max-m", "3", "--format", "json"});
        REQUIRE(direct.status == 0);
        auto doc = nlohmann::json::parse(direct.out);
        CHECK(doc["group"] == "lattice:d=2");
        CHECK(doc["overflow"] == false);
        REQUIRE(doc["records"].size() == 4);
        CHECK(doc["records"][3]["ball"] == 25);
        CHECK_FALSE(doc.contains("timestamp"));
    }

    SECTION("generator spec may ride on the group descriptor") {
        auto res1 = invoke({"growth", "--group", "heisenberg:S(1,1)", "--max-m", "1"});
        REQUIRE(res1.status == 0);
        CHECK(res1.out == "m,ball,sphere\n0,1,1\n1,31,30\n");
        auto clash = invoke({"growth", "--group", "heisenberg:standard", "--gens", "standard", "--max-m", "1"});
        CHECK(clash.status == kExitInvalid);
        CHECK(clash.err.find("both") != std::string::npos);
    }
}

TEST_CASE("invalid inputs exit 1 with a diagnostic") {
    auto unknown = invoke({"growth", "--group", "dihedral:n=3"});
    CHECK(unknown.status == kExitInvalid);
    CHECK(unknown.err.find("unknown group kind") != std::string::npos);

    auto malformed = invoke({"growth", "--group", "heisenberg:S(9,x)"});
    CHECK(malformed.status == kExitInvalid);
    CHECK(malformed.err.find("S(j,k) parameter") != std::string::npos);

    auto missing = invoke({"growth"});
    CHECK(missing.status == kExitInvalid);

    auto nocmd = invoke({});
    CHECK(nocmd.status == kExitInvalid);

    auto badfile = invoke({"hdim", "--algebra", scratch_file("absent.json")});
    CHECK(badfile.status == kExitInvalid);
    CHECK(badfile.err.find("cannot open") != std::string::npos);

    const std::string badjson = scratch_file("bad.json");
    atomic_write_file(badjson, "{\"dim\": 2, \"brackets\": [[2, 1, [[1, 1, 1]]]]}");
    auto badbracket = invoke({"hdim", "--algebra", badjson});
    CHECK(badbracket.status == kExitInvalid);
    CHECK(badbracket.err.find("malformed bracket") != std::string::npos);

    auto help = invoke({"--help"});
    CHECK(help.status == 0);
    CHECK(help.out.find("growth") != std::string::npos);
}

TEST_CASE("hdim reports dimension and homogeneous dimension") {
    auto res = invoke({"hdim", "--algebra", heisenberg_file()});
    REQUIRE(res.status == 0);
    CHECK(res.out == "dim=3 hdim=4\n");

    const std::string path = scratch_file("hdim.txt");
    auto filed = invoke({"hdim", "--algebra", heisenberg_file(), "--out", path});
    REQUIRE(filed.status == 0);
    CHECK(read_file(path) == "dim=3 hdim=4\n");
}

TEST_CASE("profile command writes the analytic profile and the deviation table") {
    const std::string out = scratch_file("profile.json");
    auto res = invoke({"profile", "--algebra", heisenberg_file(), "--lengths", "2,2,8", "--compare-max-m", "6",
                       "--out", out});
    REQUIRE(res.status == 0);

    auto doc = nlohmann::json::parse(read_file(out));
    CHECK(doc["slopes"] == std::vector<int>{3, 4});
    CHECK(doc["polynomial"] == nlohmann::json::parse("[[3,256,1],[4,128,1]]"));
    CHECK(doc["envelope"] == nlohmann::json::parse("[[3,256,1],[4,128,1]]"));
    REQUIRE(doc["breakpoints"].size() == 1);
    CHECK(doc["breakpoints"][0]["ratio"] == nlohmann::json::parse("[2,1]"));
    CHECK(doc["breakpoints"][0]["root"] == 1);

    CsvTable dev = parse_csv(read_file(out + ".deviation.csv"));
    CHECK(dev.header == std::vector<std::string>{"m", "log_ball", "profile", "residual"});
    REQUIRE(dev.rows.size() == 6);
    CHECK(dev.rows[0][0] == "1");
    CHECK(dev.rows[0][3] == "0");  // residual vanishes at the normalization radius
    CHECK(dev.rows[1][3].substr(0, 7) == "-0.0952");

    SECTION("reruns are byte-identical") {
        const std::string again = scratch_file("profile-again.json");
        auto rerun = invoke({"profile", "--algebra", heisenberg_file(), "--lengths", "2,2,8", "--compare-max-m", "6",
                             "--out", again});
        REQUIRE(rerun.status == 0);
        CHECK(read_file(again) == read_file(out));
        CHECK(read_file(again + ".deviation.csv") == read_file(out + ".deviation.csv"));
    }

    SECTION("analytic-only run needs no output file") {
        auto direct = invoke({"profile", "--algebra", heisenberg_file(), "--lengths", "1,1,1"});
        REQUIRE(direct.status == 0);
        auto slim = nlohmann::json::parse(direct.out);
        CHECK(slim["slopes"] == std::vector<int>{3, 4});
    }

    SECTION("comparison without --out is rejected") {
        auto bad = invoke({"profile", "--algebra", heisenberg_file(), "--lengths", "2,2,8", "--compare-max-m", "4"});
        CHECK(bad.status == kExitInvalid);
    }

    SECTION("comparison with fractional lengths is rejected") {
        auto bad = invoke({"profile", "--algebra", heisenberg_file(), "--lengths", "2,2,17/2", "--compare-max-m", "4",
                           "--out", scratch_file("frac.json")});
        CHECK(bad.status == kExitInvalid);
        CHECK(bad.err.find("integer lengths") != std::string::npos);
    }

    SECTION("abelian algebras take the generic enumeration path") {
        const std::string z2 = scratch_file("z2.json");
        atomic_write_file(z2, "{\"dim\": 2}");
        const std::string zout = scratch_file("z2-profile.json");
        auto res2 = invoke({"profile", "--algebra", z2, "--lengths", "1,1", "--compare-max-m", "8", "--out", zout});
        REQUIRE(res2.status == 0);
        auto doc2 = nlohmann::json::parse(read_file(zout));
        CHECK(doc2["slopes"] == std::vector<int>{2});
        CsvTable dev2 = parse_csv(read_file(zout + ".deviation.csv"));
        REQUIRE(dev2.rows.size() == 8);
        // Measured balls are the l^infty boxes (2m+1)^2; the profile is 4m^2.
        CHECK(dev2.rows[7][0] == "8");
    }

    SECTION("budget overflow on the measured side still writes both files") {
        const std::string small = scratch_file("profile-small.json");
        auto over = invoke({"profile", "--algebra", heisenberg_file(), "--lengths", "2,2,8", "--compare-max-m", "25",
                            "--budget", "5000", "--out", small});
        CHECK(over.status == kExitBudget);
        auto doc2 = nlohmann::json::parse(read_file(small));
        CHECK(doc2["slopes"] == std::vector<int>{3, 4});
        CsvTable dev2 = parse_csv(read_file(small + ".deviation.csv"));
        REQUIRE_FALSE(dev2.rows.empty());
        CHECK(dev2.rows.back()[1].empty());  // marker row
    }
}

TEST_CASE("prog-check reports upper-triangularity and properness") {
    auto res = invoke({"prog-check", "--group", "heisenberg", "--gens", "(1,0,0);(0,1,0);(0,0,1)", "--lengths",
                       "2,2,8", "--C", "1", "--proper-m", "2"});
    REQUIRE(res.status == 0);
    CHECK(res.out == "upper-triangular(C=1): yes\nproper(m=2): yes\n");

    auto res2 = invoke({"prog-check", "--group", "heisenberg", "--gens", "standard", "--lengths", "3,3", "--C", "4"});
    REQUIRE(res2.status == 0);
    CHECK(res2.out == "upper-triangular(C=4): no\n");

    auto neither = invoke({"prog-check", "--group", "heisenberg", "--lengths", "3,3"});
    CHECK(neither.status == kExitInvalid);
    CHECK(neither.err.find("--C") != std::string::npos);

    auto family = invoke({"prog-check", "--group", "heisenberg", "--gens", "S(2,8)", "--lengths", "2,2", "--C", "1"});
    CHECK(family.status == kExitInvalid);
    CHECK(family.err.find("ordered generator tuple") != std::string::npos);
}

TEST_CASE("heisenberg diagnostics emit CSV matrices") {
    SECTION("collapse grid") {
        const std::string path = scratch_file("collapse.csv");
        auto res = invoke({"heisenberg", "collapse", "--grid", "1,2,2", "--out", path});
        REQUIRE(res.status == 0);
        CsvTable table = parse_csv(read_file(path));
        CHECK(table.header.front() == "i");
        REQUIRE(table.rows.size() == 4);
        // j = 1 = i^2 compares S(1,1)^m with itself.
        CHECK(table.rows[0] == std::vector<std::string>{"1", "1", "1", "0", "1", "31", "31", "", "", ""});
        CHECK(table.rows[2][5] == "49");  // |S(1,2)| = 3*3*5 + 4 corners
    }

    SECTION("first collapsing counterexample at (2,1,3)") {
        const std::string path = scratch_file("collapse-wide.csv");
        auto res = invoke({"heisenberg", "collapse", "--grid", "2,1,3", "--out", path});
        REQUIRE(res.status == 0);
        CsvTable table = parse_csv(read_file(path));
        REQUIRE(table.rows.size() == 6);
        const auto& cell = table.rows.back();  // i=2, j=1, m=3
        CHECK(cell[3] == "1");                 // (mi)^2 >= 10mj holds
        CHECK(cell[4] == "0");                 // yet the powers differ
        CHECK_FALSE(cell[7].empty());          // witness present
    }

    SECTION("prop16 row matches the hand-checked n=2 values") {
        auto res = invoke({"heisenberg", "prop16", "--n", "2", "--f", "1"});
        REQUIRE(res.status == 0);
        CHECK(res.out ==
              "n,a_n,k,s_cardinality,power_cardinality,completed_power,partial,ratio,s_normalized,power_normalized\n"
              "2,0,8,461,3353,2,0,3353/3688,14.40625,13.09765625\n");
    }

    SECTION("prop16 budget cut marks the row partial and exits 2") {
        auto res = invoke({"heisenberg", "prop16", "--n", "3", "--budget", "50000"});
        CHECK(res.status == kExitBudget);
        CsvTable table = parse_csv(res.out);
        REQUIRE(table.rows.size() == 1);
        CHECK(table.rows[0][6] == "1");  // partial
        CHECK(table.rows[0][5] == "2");  // |S_3^3| = 75529 exceeds the budget, |S_3^2| does not
    }

    SECTION("cc estimates are exact rationals alongside their decimal rendering") {
        auto res = invoke({"heisenberg", "cc", "--point", "0,0,1", "--scales", "2,3,4,5"});
        REQUIRE(res.status == 0);
        CsvTable table = parse_csv(res.out);
        REQUIRE(table.rows.size() == 4);
        CHECK(table.rows[0][2] == "3/2");
        CHECK(table.rows[1][2] == "5/3");
        CHECK(table.rows[2][2] == "2");
        CHECK(table.rows[3][2] == "2");
        for (const auto& row : table.rows) {
            CHECK(Rational::parse(row[2]).to_double() == Catch::Approx(std::stod(row[1])).epsilon(1e-13));
        }
    }

    SECTION("horizontal points sit at distance exactly 1") {
        auto res = invoke({"heisenberg", "cc", "--point", "1,0,0", "--scales", "2,3,4,5,6"});
        REQUIRE(res.status == 0);
        CsvTable table = parse_csv(res.out);
        for (const auto& row : table.rows) CHECK(row[2] == "1");
    }
}

TEST_CASE("budget resolution prefers the flag over the environment") {
    setenv("NILGROWTH_BUDGET", "5000", 1);
    auto from_env = invoke({"growth", "--group", "heisenberg", "--max-m", "12", "--out", scratch_file("env.csv")});
    CHECK(from_env.status == kExitBudget);
    auto flag_wins = invoke({"growth", "--group", "heisenberg", "--max-m", "12", "--budget", "20000000", "--out",
                             scratch_file("flag.csv")});
    CHECK(flag_wins.status == 0);
    setenv("NILGROWTH_BUDGET", "not-a-number", 1);
    auto broken = invoke({"growth", "--group", "heisenberg", "--max-m", "2"});
    CHECK(broken.status == kExitInvalid);
    CHECK(broken.err.find("NILGROWTH_BUDGET") != std::string::npos);
    unsetenv("NILGROWTH_BUDGET");
    auto fresh = invoke({"growth", "--group", "heisenberg", "--max-m", "12", "--out", scratch_file("default.csv")});
    CHECK(fresh.status == 0);
}

TEST_CASE("lie-algebra files round-trip through their JSON form") {
    LieAlgebra heis = load_lie_algebra(heisenberg_file());
    CHECK(heis.dim() == 3);
    CHECK(heis.labels == std::vector<std::string>{"x", "y", "z"});
    CHECK(heis.ops.step == 2);

    auto doc = lie_algebra_to_json(heis);
    LieAlgebra again = lie_algebra_from_json(doc);
    CHECK(again.dim() == heis.dim());
    CHECK(again.labels == heis.labels);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(again.ops.bracket(i, j) == heis.ops.bracket(i, j));
        }
    }

    // Omitted brackets are zero: the abelian plane needs only "dim".
    LieAlgebra plane = lie_algebra_from_json(nlohmann::json::parse("{\"dim\": 2}"));
    CHECK(plane.ops.step == 1);
    CHECK(homogeneous_dimension(plane) == 2);

    // Fractional structure constants survive the round trip.
    auto frac = nlohmann::json::parse(R"({"dim": 3, "brackets": [[1, 2, [[3, 1, 2]]]]})");
    LieAlgebra half = lie_algebra_from_json(frac);
    CHECK(half.ops.bracket(0, 1)[2] == Rational(BigInt(1), BigInt(2)));
    CHECK(lie_algebra_from_json(lie_algebra_to_json(half)).ops.bracket(0, 1)[2] == Rational(BigInt(1), BigInt(2)));

    CHECK_THROWS_WITH(lie_algebra_from_json(nlohmann::json::parse("{}")),
                      Catch::Matchers::ContainsSubstring("dim"));
    CHECK_THROWS_WITH(lie_algebra_from_json(nlohmann::json::parse(R"({"dim": 2, "brackets": [[1, 1, []]]})")),
                      Catch::Matchers::ContainsSubstring("1 <= i < j"));
    CHECK_THROWS_WITH(lie_algebra_from_json(nlohmann::json::parse(R"({"dim": 2, "brackets": [[1, 2, [[1, 1, 0]]]]})")),
                      Catch::Matchers::ContainsSubstring("zero denominator"));
}
