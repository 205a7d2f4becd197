#include <doctest.h>

#include "qbarrier/cli.hpp"
#include "qbarrier/quantized.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace qbarrier;
using namespace qbarrier::cli;

namespace {

namespace fs = std::filesystem;

fs::path test_dir() {
    const fs::path dir = fs::temp_directory_path() / "qbarrier_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream out;
    out << f.rdbuf();
    return out.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

} // namespace

TEST_CASE("numeric cells carry 12 significant digits") {
    CHECK(format_sig12(0.0) == "0.00000000000e+00");
    CHECK(format_sig12(1.0) == "1.00000000000e+00");
    CHECK(format_sig12(-0.5) == "-5.00000000000e-01");
    CHECK(format_sig12(std::exp(-1.0)) == "3.67879441171e-01");

    // Parsing the token back and reformatting reproduces it byte for byte.
    for (double v : {1.0, -3.14159, 2.718281828459045e-7, 9.87e99, 4.4e-300, 123456.789}) {
        const std::string tok = format_sig12(v);
        char* end = nullptr;
        const double back = std::strtod(tok.c_str(), &end);
        CHECK(format_sig12(back) == tok);
        CHECK(std::fabs(back - v) <= 5e-12 * std::fabs(v));
    }
}

TEST_CASE("csv and json serializers") {
    Table t;
    t.columns = {"tag", "n", "value"};
    t.rows = {{"x_plus", "0", "1.50000000000e+00"}, {"x_minus", "1", "0"}};

    CHECK(to_csv(t) == "tag,n,value\nx_plus,0,1.50000000000e+00\nx_minus,1,0\n");

    // Numeric tokens stay bare in JSON; strings are quoted and escaped.
    CHECK(to_json(t) == "{\"columns\":[\"tag\",\"n\",\"value\"],"
                        "\"rows\":[[\"x_plus\",0,1.50000000000e+00],"
                        "[\"x_minus\",1,0]]}\n");

    Table esc;
    esc.columns = {"a\"b"};
    esc.rows = {{"back\\slash"}};
    CHECK(to_json(esc) ==
          "{\"columns\":[\"a\\\"b\"],\"rows\":[[\"back\\\\slash\"]]}\n");
}

TEST_CASE("atomic writer leaves no partial artifact") {
    const fs::path path = test_dir() / "atomic_probe.txt";
    write_atomic(path.string(), "first\n");
    CHECK(slurp(path.string()) == "first\n");
    write_atomic(path.string(), "second\n");
    CHECK(slurp(path.string()) == "second\n");
    CHECK(!fs::exists(path.string() + ".tmp"));
    CHECK_THROWS_AS(write_atomic("/no_such_dir_qbarrier/x.csv", "y"), IoError);
}

TEST_CASE("config files parse to ordered key-value pairs") {
    const fs::path path = test_dir() / "read_probe.ini";
    write_atomic(path.string(),
                 "# full-line comment\n"
                 "lambda-bar = 2.0\n"
                 "\n"
                 "; another comment style\n"
                 "  omega-tau=1.0  \n"
                 "out = \"with spaces.csv\"\n"
                 "format=json\n");
    const auto entries = read_config_file(path.string());
    REQUIRE(entries.size() == 4);
    CHECK(entries[0] == std::pair<std::string, std::string>{"lambda-bar", "2.0"});
    CHECK(entries[1] == std::pair<std::string, std::string>{"omega-tau", "1.0"});
    CHECK(entries[2] == std::pair<std::string, std::string>{"out", "with spaces.csv"});
    CHECK(entries[3] == std::pair<std::string, std::string>{"format", "json"});

    // An empty value survives; the key still counts as present.
    write_atomic(path.string(), "out=\n");
    const auto empty_value = read_config_file(path.string());
    REQUIRE(empty_value.size() == 1);
    CHECK(empty_value[0].first == "out");
    CHECK(empty_value[0].second.empty());

    // Malformed lines and repeats are rejected, missing files are io errors.
    write_atomic(path.string(), "lambda-bar\n");
    CHECK_THROWS_AS(read_config_file(path.string()), ConfigError);
    write_atomic(path.string(), "=2.0\n");
    CHECK_THROWS_AS(read_config_file(path.string()), ConfigError);
    write_atomic(path.string(), "n0=1\nn0=2\n");
    CHECK_THROWS_AS(read_config_file(path.string()), ConfigError);
    CHECK_THROWS_AS(read_config_file((test_dir() / "absent.ini").string()), IoError);
}

TEST_CASE("figure presets pin every field") {
    const RunConfig fig3 = preset_config("fig3");
    CHECK(fig3.command == Command::Fock);
    CHECK(fig3.lambda_caps == std::vector<double>{0.0, 0.5, 1.0, 2.0});
    CHECK(fig3.n0_max == 24);
    CHECK(fig3.n_max == 24);
    CHECK(fig3.out_path == "fig3.csv");
    CHECK(fig3.params.omega_tau == std::numbers::pi);

    const RunConfig fig4 = preset_config("fig4");
    CHECK(fig4.command == Command::Thermal);
    CHECK(fig4.lambda_caps == std::vector<double>{0.0, 1.0, 2.0, 4.0});
    CHECK(fig4.y == 0.90483741803595957);
    CHECK(fig4.out_path == "fig4.csv");

    const RunConfig fig5 = preset_config("fig5");
    CHECK(fig5.command == Command::Coherent);
    CHECK(fig5.cap_lambda == 1.0);
    CHECK(fig5.alpha_abs == 3.0);
    CHECK(fig5.params.phi_alpha == 0.0);
    CHECK(fig5.n_out_max == 45);
    CHECK(fig5.out_path == "fig5.csv");

    const RunConfig fig6 = preset_config("fig6");
    CHECK(fig6.command == Command::Coherent);
    CHECK(fig6.circle_points == 256);
    CHECK(fig6.out_path == "fig6.csv");

    CHECK_THROWS_AS(preset_config("fig7"), ConfigError);
    CHECK_THROWS_AS(preset_config(""), ConfigError);
}

TEST_CASE("dataset runs are byte-identical across invocations") {
    RunConfig c;
    c.command = Command::Fock;
    c.lambda_caps = {0.5, 1.0};
    c.n0_max = 6;
    c.n_max = 6;

    const fs::path a = test_dir() / "det_a.csv";
    const fs::path b = test_dir() / "det_b.csv";
    c.out_path = a.string();
    REQUIRE(run(c).exit_code == 0);
    c.out_path = b.string();
    REQUIRE(run(c).exit_code == 0);
    CHECK(slurp(a.string()) == slurp(b.string()));

    c.format = OutputFormat::Json;
    const fs::path ja = test_dir() / "det_a.json";
    const fs::path jb = test_dir() / "det_b.json";
    c.out_path = ja.string();
    REQUIRE(run(c).exit_code == 0);
    c.out_path = jb.string();
    REQUIRE(run(c).exit_code == 0);
    CHECK(slurp(ja.string()) == slurp(jb.string()));
    CHECK(slurp(ja.string()).substr(0, 12) == "{\"columns\":[");
}

TEST_CASE("csv cells round-trip through parse and reformat") {
    RunConfig c;
    c.command = Command::Fock;
    c.lambda_caps = {1.0};
    c.n0_max = 5;
    c.n_max = 5;
    const fs::path path = test_dir() / "roundtrip.csv";
    c.out_path = path.string();
    REQUIRE(run(c).exit_code == 0);

    const std::vector<std::string> lines = split(slurp(path.string()), '\n');
    REQUIRE(lines.front() == "lambda_cap,n0,n,probability");
    REQUIRE(lines.size() >= 38); // header + 36 rows + trailing empty
    int checked = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        const std::vector<std::string> cells = split(lines[i], ',');
        REQUIRE(cells.size() == 4);
        char* end = nullptr;
        const double p = std::strtod(cells[3].c_str(), &end);
        CHECK(format_sig12(p) == cells[3]);
        CHECK(p >= 0.0);
        ++checked;
    }
    CHECK(checked == 36);
}

TEST_CASE("dataset tables match the library closed forms") {
    RunConfig c;
    c.command = Command::Vacuum;
    c.cap_lambda = 1.0;
    const Table vac = make_vacuum_table(c);
    REQUIRE(vac.columns == std::vector<std::string>{"n", "probability"});
    CHECK(vac.rows[0][1] == format_sig12(std::exp(-1.0)));
    CHECK(vac.rows[1][1] == format_sig12(std::exp(-1.0)));

    RunConfig e;
    e.command = Command::Entropy;
    e.lambda_caps = {0.0, 1.0};
    e.n0_max = 4;
    const Table ent = make_entropy_table(e);
    REQUIRE(ent.rows.size() == 10);
    for (int n0 = 0; n0 <= 4; ++n0)
        CHECK(ent.rows[static_cast<std::size_t>(n0)][2] == "0.00000000000e+00");

    RunConfig s;
    s.command = Command::Sweep;
    s.n0 = 2;
    s.sweep_lambda_max = 2.0;
    s.sweep_steps = 5;
    const Table sweep = make_sweep_table(s);
    REQUIRE(sweep.columns.size() == 6);
    REQUIRE(sweep.rows.size() == 5);
    CHECK(sweep.rows.front()[1] == format_sig12(0.0));
    CHECK(sweep.rows.back()[1] == format_sig12(2.0));
    // Particle and field energies sum to the conserved total on every row.
    for (const auto& row : sweep.rows) {
        const double particle = std::strtod(row[4].c_str(), nullptr);
        const double field = std::strtod(row[5].c_str(), nullptr);
        CHECK(std::fabs((particle + field) - (1e6 + 2.0 + 0.5)) < 1e-9);
    }
}

TEST_CASE("coherent command writes the conditional and circle pair") {
    RunConfig c = preset_config("fig5");
    const fs::path base = test_dir() / "coh.csv";
    c.out_path = base.string();
    const RunResult r = run(c);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.outputs.size() == 2);
    const std::string cond = (test_dir() / "coh_conditional.csv").string();
    const std::string circle = (test_dir() / "coh_circle.csv").string();
    CHECK(r.outputs[0] == cond);
    CHECK(r.outputs[1] == circle);

    const std::vector<std::string> cond_lines = split(slurp(cond), '\n');
    CHECK(cond_lines.front() == "position_tag,n,probability");
    // n_out_max = 45 rows per detector, both detectors present.
    CHECK(cond_lines.size() == 1 + 2 * 46 + 1);
    CHECK(cond_lines[1].substr(0, 8) == "x_minus,");
    CHECK(cond_lines[47].substr(0, 7) == "x_plus,");

    const std::vector<std::string> circle_lines = split(slurp(circle), '\n');
    CHECK(circle_lines.front() == "x_over_period,re_xi,im_xi");
    CHECK(circle_lines.size() == 1 + 256 + 1);
}

TEST_CASE("validation suite passes clean and fails under the negative control") {
    RunConfig c;
    c.command = Command::Validate;
    const fs::path report = test_dir() / "validate.json";
    c.out_path = report.string();

    const RunResult clean = run(c);
    CHECK(clean.exit_code == 0);
    const std::string body = slurp(report.string());
    CHECK(body.find("\"all_pass\":true") != std::string::npos);
    CHECK(body.find("route_agreement_algebraic") != std::string::npos);
    CHECK(body.find("energy_conservation") != std::string::npos);

    c.inject_perturbation = true;
    const fs::path bad_report = test_dir() / "validate_bad.json";
    c.out_path = bad_report.string();
    const RunResult bad = run(c);
    CHECK(bad.exit_code == 1);
    CHECK(slurp(bad_report.string()).find("\"all_pass\":false") != std::string::npos);
}

TEST_CASE("validation report serialization") {
    const std::vector<ValidationRecord> records = {
        {"alpha", 1e-3, 1e-2, true},
        {"beta", 2.0, 1.0, false},
    };
    CHECK(validation_report_json(records) ==
          "{\"records\":[{\"name\":\"alpha\",\"max_deviation\":1.00000000000e-03,"
          "\"tolerance\":1.00000000000e-02,\"pass\":true},"
          "{\"name\":\"beta\",\"max_deviation\":2.00000000000e+00,"
          "\"tolerance\":1.00000000000e+00,\"pass\":false}],\"all_pass\":false}\n");
}

TEST_CASE("run maps errors onto exit codes without throwing") {
    // Config error: tail tolerance outside (0, 1).
    RunConfig bad_cfg;
    bad_cfg.command = Command::Vacuum;
    bad_cfg.tail_tol = 0.0;
    bad_cfg.out_path = (test_dir() / "never.csv").string();
    const RunResult cfg = run(bad_cfg);
    CHECK(cfg.exit_code == 2);
    CHECK(!cfg.message.empty());
    CHECK(cfg.outputs.empty());

    // IO error: unwritable directory.
    RunConfig bad_io;
    bad_io.command = Command::Vacuum;
    bad_io.cap_lambda = 1.0;
    bad_io.out_path = "/no_such_dir_qbarrier/out.csv";
    CHECK(run(bad_io).exit_code == 2);

    // Numeric error: every sideband evanescent.
    RunConfig bad_num;
    bad_num.command = Command::Classical;
    bad_num.params.lambda_bar = 3.0;
    bad_num.params.omega_tau = std::numbers::pi;
    bad_num.params.e0_ratio = 0.5;
    bad_num.out_path = (test_dir() / "never2.csv").string();
    const RunResult num = run(bad_num);
    CHECK(num.exit_code == 3);
    CHECK(!num.message.empty());
}
