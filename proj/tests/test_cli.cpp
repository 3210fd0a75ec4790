// Black-box checks of the command line binary: exit codes, error routing,
// and agreement between printed documents and the library run in-process.
// Usage: metricstats_cli_tests <cli-binary> <fixture-dir>

#include "io.hpp"
#include "resultdoc.hpp"

#include "metricstats/dispersion.hpp"
#include "metricstats/spaces.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

using namespace metricstats;
using namespace metricstats::cli;

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& label) {
    if (!ok) {
        ++g_failures;
        std::cout << "FAIL: " << label << "\n";
    }
}

struct RunResult {
    int code = -1;
    std::string output;
};

RunResult run(const std::string& command) {
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        return result;
    }
    char buffer[4096];
    size_t got = 0;
    while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.output.append(buffer, got);
    }
    const int status = pclose(pipe);
    if (WIFEXITED(status)) {
        result.code = WEXITSTATUS(status);
    }
    return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cout << "usage: metricstats_cli_tests <cli-binary> <fixture-dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::string fixtures = argv[2];
    const std::string three = fixtures + "/three.csv";

    namespace fs = std::filesystem;
    const fs::path work = fs::temp_directory_path() / "metricstats_cli_test";
    fs::remove_all(work);
    fs::create_directories(work);

    {
        const RunResult help = run(cli + " --help 2>&1");
        expect(help.code == 0, "--help exits 0");
        expect(contains(help.output, "dispersion"), "--help lists subcommands");
    }

    {
        const RunResult bad = run(cli + " dispersion --bogus 2>&1");
        expect(bad.code == 1, "unknown flag exits 1");

        const RunResult none = run(cli + " 2>&1");
        expect(none.code == 1, "missing subcommand exits 1");
    }

    {
        const RunResult res =
            run(cli + " dispersion --space euclidean:1 --input " + three + " 2>/dev/null");
        expect(res.code == 0, "dispersion exits 0");

        const ResultDocument doc = result_from_json_text(res.output);
        expect(to_json_text(doc) == res.output, "dispersion output round trips byte for byte");
        expect(doc.input_digest == digest_string(read_file_bytes(three)),
               "input digest matches the file bytes");
        expect(doc.dispersion.has_value(), "dispersion section present");

        const ObjectSample sample =
            read_sample(three, SpaceKind::parse("euclidean:1"), InputFormat::Auto);
        const DispersionEstimate est = dispersion(sample);
        expect(doc.dispersion->v_m == est.v_m, "printed v_m equals the library value");
        expect(doc.dispersion->v_f == est.v_f, "printed v_f equals the library value");
        expect(doc.dispersion->sigma == est.sigma, "printed sigma equals the library value");
        expect(doc.dispersion->v_m == 1.0, "v_m for {0,1,2} is 1");
    }

    {
        const RunResult res =
            run(cli + " curvature-test --space euclidean:1 --input " + three + " 2>&1");
        expect(res.code == 2, "euclidean identity makes the test degenerate (exit 2)");
        expect(contains(res.output, "variance of the curvature statistic is zero"),
               "degenerate error names the condition");
    }

    {
        const RunResult res = run(cli + " intrinsic-test --space euclidean:1 --radius 0.01 --input " +
                                  three + " 2>&1");
        expect(res.code == 3, "disconnected graph exits 3");
        expect(contains(res.output, "radius 0.01"), "error echoes the requested radius");
        expect(contains(res.output, "connecting radius"), "error reports the connecting radius");
    }

    {
        const RunResult res = run(cli + " dispersion --space euclidean:1 --input " + fixtures +
                                  "/bad.csv 2>&1");
        expect(res.code == 1, "malformed csv exits 1");
        expect(contains(res.output, "line 2"), "csv error carries the line number");
    }

    {
        const std::string scenario = (work / "hemi.scn").string();
        write_text(scenario, "design=hemisphere\nn=20\nnoise=0.1\nseed=5\n");
        const std::string out_a = (work / "a.csv").string();
        const std::string out_b = (work / "b.csv").string();

        const RunResult first =
            run(cli + " simulate --scenario " + scenario + " --out " + out_a + " 2>/dev/null");
        const RunResult second =
            run(cli + " simulate --scenario " + scenario + " --out " + out_b + " 2>/dev/null");
        expect(first.code == 0 && second.code == 0, "simulate exits 0");
        expect(read_file_bytes(out_a) == read_file_bytes(out_b),
               "repeated simulate writes identical bytes");

        const ResultDocument doc = result_from_json_text(first.output);
        expect(doc.simulation.has_value(), "simulation section present");
        expect(doc.simulation->output_digest == digest_string(read_file_bytes(out_a)),
               "simulation digest matches the written file");
        expect(doc.simulation->n == 20, "simulation echoes n");

        const RunResult reseeded = run(cli + " simulate --scenario " + scenario + " --seed 6 --out " +
                                       out_b + " 2>/dev/null");
        expect(reseeded.code == 0, "seed override exits 0");
        expect(read_file_bytes(out_a) != read_file_bytes(out_b),
               "seed override changes the sample");

        const RunResult intrinsic = run(cli + " intrinsic-test --space euclidean:3 --input " +
                                        out_a + " 2>/dev/null");
        expect(intrinsic.code == 0, "intrinsic test on a curved sample exits 0");
        const ResultDocument idoc = result_from_json_text(intrinsic.output);
        expect(idoc.intrinsic.has_value() && idoc.intrinsic->radius > 0,
               "intrinsic section reports the resolved radius");
        expect(idoc.test.has_value(), "intrinsic run carries a test section");
        expect(idoc.dispersion.has_value() && idoc.dispersion->mean_index >= 0,
               "intrinsic run restricts the mean to a sample index");
    }

    {
        const std::string scenario = (work / "rot.scn").string();
        write_text(scenario, "design=rotated-gaussians\nn=6\nseed=1\n");
        const std::string out = (work / "rot.jsonl").string();
        run(cli + " simulate --scenario " + scenario + " --out " + out + " 2>/dev/null");

        const RunResult res = run(cli + " geodesic --space gaussbw:2 --input " + out +
                                  " --from 0 --to 3 --steps 3 --mode wasserstein 2>/dev/null");
        expect(res.code == 0, "wasserstein geodesic exits 0");
        const ResultDocument doc = result_from_json_text(res.output);
        expect(doc.geodesic.size() == 3, "geodesic has the requested number of steps");
        if (doc.geodesic.size() == 3) {
            const ObjectSample sample =
                read_sample(out, SpaceKind::parse("gaussbw:2"), InputFormat::Auto);
            expect(doc.geodesic.front().t == 0.0 && doc.geodesic.back().t == 1.0,
                   "geodesic parameter spans [0, 1]");
            expect(doc.geodesic.front().object == sample.objects.row(0).transpose(),
                   "geodesic start reproduces the sample object");
            expect(doc.geodesic.front().has_spectrum, "matrix steps carry a spectrum");
        }
    }

    {
        const std::string scenario = (work / "plane.scn").string();
        write_text(scenario, "design=plane\nn=25\nnoise=0.05\nseed=0\n");
        const std::string grid = (work / "grid.txt").string();
        write_text(grid, "n=25\nn=30\n");

        const RunResult res = run(cli + " power --scenario " + scenario + " --grid " + grid +
                                  " --runs 2 --mode ambient 2>/dev/null");
        expect(res.code == 0, "power grid exits 0");
        const ResultDocument doc = result_from_json_text(res.output);
        expect(doc.power.size() == 2, "one power row per grid line");
        if (doc.power.size() == 2) {
            expect(doc.power[0].runs == 2, "power rows echo the run count");
            expect(doc.power[0].used == 0 && doc.power[0].degenerate == 2,
                   "flat ambient cells are fully degenerate");
            expect(doc.power[0].degenerate_warning, "degenerate cells carry the warning flag");
            expect(doc.power[1].n == 30, "grid overrides apply per row");
        }
        expect(!doc.warnings.empty(), "document warns about degenerate cells");
    }

    fs::remove_all(work);

    if (g_failures == 0) {
        std::cout << "cli checks passed\n";
        return 0;
    }
    std::cout << g_failures << " cli check(s) failed\n";
    return 1;
}
