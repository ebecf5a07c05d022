// End-to-end checks of the command-line tool: exit codes, file outputs,
// reproducibility.  Invoked as: omsq_tests_cli <path-to-omsq-binary>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
    if (ok) {
        std::cout << "[ok]   " << what << "\n";
    } else {
        std::cout << "[FAIL] " << what << "\n";
        ++g_failures;
    }
}

int run_cmd(const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: omsq_tests_cli <omsq-binary>\n";
        return 2;
    }
    const std::string bin = argv[1];
    const fs::path dir = fs::temp_directory_path() / "omsq_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const std::string vacuum_cfg =
        "[effective]\nkappa1 = 3\ngamma_m = 0.4\n";
    const std::string squeezed_cfg =
        "[effective]\nkappa1 = 100\ngamma_m = 1e-6\nG1 = 0.1\n"
        "phi = 1.5707963267948966\ndelta_c = 10\nLambda = 10\nchi_mag = 40\n";
    const std::string unstable_cfg =
        "[effective]\nkappa1 = 100\ngamma_m = 1e-6\nG1 = 5\n"
        "phi = 0.62831853071795865\ndelta_c = 10\nLambda = 0.5\nchi_mag = 40\n";
    const std::string bad_cfg = "[effective]\nkapa1 = 3\n";
    const std::string zero_drive_cfg =
        "[physical]\nomega_m_si = 1.2566370614359172e8\nomega_L = 2.5e7\n"
        "delta_bar_c = 10\nkappa1 = 100\nkappa2 = 2000\ngamma_m = 1e-6\n"
        "g1 = 1e-4\ng2 = 1e-4\neta = 1e-4\nchi0_mag = 1e-3\nP1 = 0\nP2 = 0\n";
    const std::string sweep_cfg =
        "[effective]\nkappa1 = 3\ngamma_m = 0.4\n"
        "[sweep]\nname = tiny\naxis1 = n_th\naxis1_values = 0\n";

    write_file(dir / "vacuum.cfg", vacuum_cfg);
    write_file(dir / "squeezed.cfg", squeezed_cfg);
    write_file(dir / "unstable.cfg", unstable_cfg);
    write_file(dir / "bad.cfg", bad_cfg);
    write_file(dir / "zero_drive.cfg", zero_drive_cfg);
    write_file(dir / "sweep.cfg", sweep_cfg);

    const std::string out = (dir / "out").string();

    check(run_cmd(bin + " squeeze --config " + (dir / "vacuum.cfg").string() +
                  " --out " + out) == 0,
          "squeeze on the vacuum point exits 0");
    check(run_cmd(bin + " squeeze --config " + (dir / "squeezed.cfg").string() +
                  " --out " + out) == 0,
          "squeeze on the squeezed point exits 0");
    check(run_cmd(bin + " squeeze --config " + (dir / "unstable.cfg").string() +
                  " --out " + out) == 4,
          "squeeze on an unstable point exits 4");
    check(run_cmd(bin + " squeeze --config " + (dir / "bad.cfg").string() +
                  " --out " + out) == 2,
          "config error exits 2");
    check(run_cmd(bin + " steady --config " + (dir / "zero_drive.cfg").string() +
                  " --out " + out) == 0,
          "steady on the zero-drive config exits 0");
    check(run_cmd(bin + " steady --config " + (dir / "bad.cfg").string()) == 2,
          "steady with a malformed config exits 2");
    check(run_cmd(bin + " sweep --config " + (dir / "sweep.cfg").string() +
                  " --out " + out) == 0,
          "one-point sweep exits 0");
    check(fs::exists(fs::path(out) / "tiny.csv"), "sweep writes <name>.csv");
    check(fs::exists(fs::path(out) / "tiny.meta"), "sweep writes <name>.meta");
    {
        std::ifstream csv(fs::path(out) / "tiny.csv");
        std::string header, row, extra;
        std::getline(csv, header);
        std::getline(csv, row);
        const bool one_row = !row.empty() && !std::getline(csv, extra);
        check(one_row, "one-point sweep csv has exactly one data row");
    }
    check(run_cmd(bin + " sweep --config " + (dir / "vacuum.cfg").string() +
                  " --out " + out) == 2,
          "sweep without a [sweep] section exits 2");

    // figure presets: fig4 writes the angle-scan table
    check(run_cmd(bin + " figure fig4 --out " + out) == 0, "figure fig4 exits 0");
    check(fs::exists(fs::path(out) / "fig4.csv"), "figure fig4 writes fig4.csv");
    check(fs::exists(fs::path(out) / "fig4.svg"), "figure fig4 writes fig4.svg");
    {
        std::ifstream csv(fs::path(out) / "fig4.csv");
        std::string header;
        std::getline(csv, header);
        check(header.find("theta") != std::string::npos &&
                  header.find("S_db") != std::string::npos,
              "fig4.csv carries the theta scan columns");
    }
    check(run_cmd(bin + " figure fig9 --out " + out) == 2,
          "unknown figure preset exits 2");

    // reproducibility: identical config + seed give byte-identical output
    const std::string out_a = (dir / "rep_a").string();
    const std::string out_b = (dir / "rep_b").string();
    run_cmd(bin + " sweep --config " + (dir / "sweep.cfg").string() +
            " --seed 9 --out " + out_a);
    run_cmd(bin + " sweep --config " + (dir / "sweep.cfg").string() +
            " --seed 9 --threads 4 --out " + out_b);
    check(read_file(fs::path(out_a) / "tiny.csv") ==
                read_file(fs::path(out_b) / "tiny.csv") &&
            !read_file(fs::path(out_a) / "tiny.csv").empty(),
          "sweep output is byte-identical across runs and thread counts");

    // steady at the laboratory drive writes the mean-field row
    write_file(dir / "lab.cfg",
               "[physical]\nomega_m_si = 1.2566370614359172e8\nomega_L = 2.5e7\n"
               "delta_bar_c = 10\nkappa1 = 100\nkappa2 = 2000\ngamma_m = 1e-6\n"
               "g1 = 1e-4\ng2 = 1e-4\neta = 1e-4\nchi0_mag = 1e-3\n"
               "P1 = 5e-3\nP2 = 5e-3\n");
    check(run_cmd(bin + " steady --config " + (dir / "lab.cfg").string() +
                  " --out " + out) == 0,
          "steady at the laboratory drive exits 0");
    check(fs::exists(fs::path(out) / "steady.csv"), "steady writes steady.csv");

    // json output mode
    check(run_cmd(bin + " squeeze --config " + (dir / "squeezed.cfg").string() +
                  " --out " + out + " --format json") == 0,
          "squeeze --format json exits 0");
    check(fs::exists(fs::path(out) / "squeeze.json"),
          "squeeze --format json writes squeeze.json");

    std::cout << (g_failures == 0 ? "all cli checks passed\n"
                                  : "cli checks FAILED\n");
    return g_failures == 0 ? 0 : 1;
}
