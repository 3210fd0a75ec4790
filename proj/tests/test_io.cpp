#include "io.hpp"
#include "resultdoc.hpp"

#include "metricstats/dispersion.hpp"
#include "metricstats/errors.hpp"
#include "metricstats/inference.hpp"
#include "metricstats/spaces.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

using namespace metricstats;
using namespace metricstats::cli;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("format names parse and default by space family") {
    REQUIRE(parse_format("csv") == InputFormat::Csv);
    REQUIRE(parse_format("jsonl") == InputFormat::Jsonl);
    REQUIRE(parse_format("auto") == InputFormat::Auto);
    REQUIRE(parse_format("") == InputFormat::Auto);
    REQUIRE_THROWS_WITH(parse_format("xml"), ContainsSubstring("unknown format 'xml'"));

    REQUIRE(default_format(SpaceKind::parse("euclidean:2")) == InputFormat::Csv);
    REQUIRE(default_format(SpaceKind::parse("sphere:2")) == InputFormat::Csv);
    REQUIRE(default_format(SpaceKind::parse("hyperbolic2")) == InputFormat::Csv);
    REQUIRE(default_format(SpaceKind::parse("spd:2:frobenius")) == InputFormat::Jsonl);
    REQUIRE(default_format(SpaceKind::parse("gaussbw:2")) == InputFormat::Jsonl);
    REQUIRE(default_format(SpaceKind::parse("w1d:5")) == InputFormat::Jsonl);
    REQUIRE(default_format(SpaceKind::parse("fisherrao:4")) == InputFormat::Jsonl);
}

TEST_CASE("csv parsing accepts commas, whitespace, and comments") {
    const SpaceKind space = SpaceKind::parse("euclidean:2");
    const ObjectSample sample = parse_sample_text(
        "# header comment\n"
        "1, 2\n"
        "\n"
        "3 4   # trailing note\n"
        "5,\t6\n",
        space, InputFormat::Csv);
    REQUIRE(sample.objects.rows() == 3);
    REQUIRE(sample.objects(0, 0) == 1.0);
    REQUIRE(sample.objects(1, 1) == 4.0);
    REQUIRE(sample.objects(2, 0) == 5.0);
    REQUIRE(sample.space.name() == "euclidean:2");
}

TEST_CASE("csv parsing reports line numbers for malformed input") {
    const SpaceKind space = SpaceKind::parse("euclidean:2");
    REQUIRE_THROWS_WITH(parse_sample_text("1,2\n1\n", space, InputFormat::Csv),
                        ContainsSubstring("csv line 2") &&
                            ContainsSubstring("expected 2 values for space 'euclidean:2', got 1"));
    REQUIRE_THROWS_WITH(parse_sample_text("1,x\n3,4\n", space, InputFormat::Csv),
                        ContainsSubstring("csv line 1") &&
                            ContainsSubstring("cannot parse number 'x'"));
    REQUIRE_THROWS_WITH(parse_sample_text("1,2junk\n3,4\n", space, InputFormat::Csv),
                        ContainsSubstring("cannot parse number '2junk'"));
    REQUIRE_THROWS_WITH(parse_sample_text("1,2\n", space, InputFormat::Csv),
                        ContainsSubstring("at least 2 objects"));
    REQUIRE_THROWS_WITH(parse_sample_text("", space, InputFormat::Csv),
                        ContainsSubstring("at least 2 objects"));
}

TEST_CASE("parsed samples are validated for the space") {
    const SpaceKind sphere = SpaceKind::parse("sphere:2");
    REQUIRE_THROWS_AS(parse_sample_text("2,0\n1,0\n", sphere, InputFormat::Csv),
                      InvalidInputError);
    REQUIRE_NOTHROW(parse_sample_text("1,0\n0,1\n", sphere, InputFormat::Csv));
}

TEST_CASE("jsonl records use the key of their space family") {
    const ObjectSample plain = parse_sample_text(
        "{\"values\":[1,2]}\n{\"values\":[3,4]}\n",
        SpaceKind::parse("euclidean:2"), InputFormat::Jsonl);
    REQUIRE(plain.objects(1, 1) == 4.0);

    const ObjectSample spd = parse_sample_text(
        "{\"dim\":2,\"values\":[2,0,0,1]}\n{\"values\":[1,0,0,3]}\n",
        SpaceKind::parse("spd:2:frobenius"), InputFormat::Jsonl);
    REQUIRE(spd.objects(0, 0) == 2.0);

    const ObjectSample quantiles = parse_sample_text(
        "{\"quantiles\":[0,1,2]}\n{\"values\":[1,2,3]}\n",
        SpaceKind::parse("w1d:3"), InputFormat::Jsonl);
    REQUIRE(quantiles.objects(1, 2) == 3.0);

    // Trapezoid weights on a 3-point grid are (0.25, 0.5, 0.25), so these
    // rows carry unit mass.
    const ObjectSample densities = parse_sample_text(
        "{\"density\":[0.5,1.5,0.5]}\n{\"density\":[1.0,1.0,1.0]}\n",
        SpaceKind::parse("fisherrao:3"), InputFormat::Jsonl);
    REQUIRE(densities.objects(0, 1) == 1.5);
}

TEST_CASE("jsonl parsing reports line numbers and schema problems") {
    const SpaceKind spd = SpaceKind::parse("spd:2:frobenius");
    REQUIRE_THROWS_WITH(
        parse_sample_text("{\"dim\":3,\"values\":[2,0,0,1]}\n", spd, InputFormat::Jsonl),
        ContainsSubstring("jsonl line 1") && ContainsSubstring("'dim' must equal 2"));
    REQUIRE_THROWS_WITH(parse_sample_text("{\"dim\":2}\n", spd, InputFormat::Jsonl),
                        ContainsSubstring("missing 'values'"));
    REQUIRE_THROWS_WITH(
        parse_sample_text("{\"values\":[1,\"a\",0,1]}\n", spd, InputFormat::Jsonl),
        ContainsSubstring("'values' must contain only numbers"));
    REQUIRE_THROWS_WITH(parse_sample_text("[1,2]\n", spd, InputFormat::Jsonl),
                        ContainsSubstring("record must be an object"));
    REQUIRE_THROWS_WITH(parse_sample_text("{oops\n", spd, InputFormat::Jsonl),
                        ContainsSubstring("jsonl line 1"));
    REQUIRE_THROWS_WITH(
        parse_sample_text("{\"values\":[1]}\n{\"values\":[2]}\n",
                          SpaceKind::parse("euclidean:2"), InputFormat::Jsonl),
        ContainsSubstring("expected 2 values"));
    REQUIRE_THROWS_WITH(parse_sample_text("{\"density\":[1,0]}\n",
                                          SpaceKind::parse("w1d:2"), InputFormat::Jsonl),
                        ContainsSubstring("missing 'quantiles'"));
}

TEST_CASE("csv formatting round trips bit for bit") {
    ObjectSample sample;
    sample.space = SpaceKind::parse("euclidean:3");
    sample.objects.resize(3, 3);
    sample.objects << 1.0 / 3.0, std::sqrt(2.0), -1e-9,
        123456.789, 0.1, 2.0 / 7.0,
        1e300, -4.25, 0.0;

    const std::string text = format_sample_text(sample, InputFormat::Csv);
    const ObjectSample back = parse_sample_text(text, sample.space, InputFormat::Csv);
    REQUIRE(back.objects == sample.objects);
    REQUIRE(format_sample_text(back, InputFormat::Csv) == text);
}

TEST_CASE("jsonl formatting round trips bit for bit") {
    ObjectSample sample;
    sample.space = SpaceKind::parse("gaussbw:2");
    sample.objects.resize(2, 4);
    sample.objects << 4.0, 1.0 / 3.0, 1.0 / 3.0, 2.0,
        0.7, 0.1, 0.1, 1.0 / 7.0;

    const std::string text = format_sample_text(sample, InputFormat::Auto);
    REQUIRE_THAT(text, ContainsSubstring("\"dim\":2"));
    const ObjectSample back = parse_sample_text(text, sample.space, InputFormat::Jsonl);
    REQUIRE(back.objects == sample.objects);
    REQUIRE(format_sample_text(back, InputFormat::Jsonl) == text);

    ObjectSample quantiles;
    quantiles.space = SpaceKind::parse("w1d:3");
    quantiles.objects.resize(2, 3);
    quantiles.objects << 0.0, 0.5, 1.0, 1.0, 1.5, 2.0;
    REQUIRE_THAT(format_sample_text(quantiles, InputFormat::Auto),
                 ContainsSubstring("\"quantiles\""));
}

TEST_CASE("file bytes round trip through a temp directory") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "metricstats_io_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string path = (dir / "sample.csv").string();

    const std::string bytes = "0\n1\n2\n";
    write_file_bytes(path, bytes);
    REQUIRE(read_file_bytes(path) == bytes);

    const ObjectSample sample = read_sample(path, SpaceKind::parse("euclidean:1"),
                                            InputFormat::Auto);
    REQUIRE(sample.objects.rows() == 3);

    REQUIRE_THROWS_WITH(read_file_bytes((dir / "missing.csv").string()),
                        ContainsSubstring("cannot open"));
    REQUIRE_THROWS_WITH(write_file_bytes((dir / "no/such/dir.csv").string(), bytes),
                        ContainsSubstring("cannot write"));
    fs::remove_all(dir);
}

TEST_CASE("power grids override the base scenario per line") {
    ScenarioSpec base;
    base.design = ScenarioSpec::Design::SphereCap;
    base.n = 100;
    base.seed = 5;

    const std::vector<ScenarioSpec> cells = parse_power_grid_text(
        "kappa=0 n=200\n"
        "# middle curvature\n"
        "kappa=0.5\n"
        "\n"
        "kappa=1 seed=9\n",
        base);
    REQUIRE(cells.size() == 3);
    REQUIRE(cells[0].kappa == 0.0);
    REQUIRE(cells[0].n == 200);
    REQUIRE(cells[0].seed == 5);
    REQUIRE(cells[1].kappa == 0.5);
    REQUIRE(cells[1].n == 100);
    REQUIRE(cells[2].seed == 9);
    REQUIRE(cells[2].design == ScenarioSpec::Design::SphereCap);

    REQUIRE_THROWS_WITH(parse_power_grid_text("kappa\n", base),
                        ContainsSubstring("grid line 1") &&
                            ContainsSubstring("expected key=value, got 'kappa'"));
    REQUIRE_THROWS_WITH(parse_power_grid_text("n=50\nkappa=zz\n", base),
                        ContainsSubstring("grid line 2") &&
                            ContainsSubstring("cannot parse number 'zz'"));
    REQUIRE_THROWS_WITH(parse_power_grid_text("# nothing here\n", base),
                        ContainsSubstring("no cells found"));
}

TEST_CASE("byte digests match known fingerprints") {
    REQUIRE(digest_string("") == "fnv1a64:cbf29ce484222325");
    REQUIRE(digest_string("abc") == "fnv1a64:e71fa2190541574b");
    REQUIRE(digest_string("0,1,2") == "fnv1a64:1c2c3ac2c828864a");
    REQUIRE(fnv1a64("") == 14695981039346656037ULL);
}

TEST_CASE("alternative names round trip") {
    for (const Alternative alt :
         {Alternative::TwoSided, Alternative::Positive, Alternative::Negative}) {
        REQUIRE(parse_alternative(alternative_name(alt)) == alt);
    }
    REQUIRE_THROWS_WITH(parse_alternative("sideways"),
                        ContainsSubstring("unknown alternative 'sideways'"));
}

namespace {

ResultDocument full_document() {
    ResultDocument doc;
    doc.command = "curvature-test --space euclidean:1 sample.csv";
    doc.input_digest = digest_string("0\n1\n2\n");
    doc.warnings.push_back("demo warning");

    DispersionEstimate est;
    est.n = 100;
    est.v_m = 1.0;
    est.v_f = 1.2;
    est.sigma << 0.4, 0.1, 0.1, 0.3;
    est.mean_index = 7;
    est.mean_object = Eigen::Vector3d(0.1, 0.2, 1.0 / 3.0);
    doc.dispersion = est;
    doc.test = curvature_test(est, 0.05, Alternative::TwoSided);

    IntrinsicSummary intrinsic;
    intrinsic.radius = 0.25;
    intrinsic.escalations = 1;
    intrinsic.components = 1;
    intrinsic.edge_count = 1234;
    doc.intrinsic = intrinsic;

    doc.geodesic_mode = "gaussian";
    GeodesicStep start;
    start.t = 0.0;
    start.object = Eigen::Vector4d(4.0, 0.0, 0.0, 1.0);
    start.eigenvalues = {4.0, 1.0};
    start.angle = 0.0;
    start.has_spectrum = true;
    GeodesicStep end;
    end.t = 1.0;
    end.object = Eigen::Vector4d(1.0, 0.0, 0.0, 4.0);
    doc.geodesic = {start, end};

    SimulationSummary sim;
    sim.design = "hemisphere";
    sim.space = "euclidean:3";
    sim.n = 50;
    sim.seed = 123456789012345ULL;
    sim.output_path = "out.csv";
    sim.output_digest = digest_string("x");
    doc.simulation = sim;

    PowerRow row;
    row.design = "sphere-cap";
    row.n = 200;
    row.kappa = 0.5;
    row.seed = 3;
    row.runs = 10;
    row.used = 9;
    row.rejections = 4;
    row.degenerate = 1;
    row.rate = 4.0 / 9.0;
    row.std_error = std::sqrt(row.rate * (1 - row.rate) / 9.0);
    row.degenerate_warning = true;
    doc.power = {row};
    return doc;
}

} // namespace

TEST_CASE("result documents serialize and round trip byte for byte") {
    const ResultDocument doc = full_document();
    const std::string text = to_json_text(doc);

    const ResultDocument back = result_from_json_text(text);
    REQUIRE(back.schema == 1);
    REQUIRE(back.command == doc.command);
    REQUIRE(back.warnings == doc.warnings);
    REQUIRE(back.dispersion->v_f == 1.2);
    REQUIRE(back.dispersion->mean_object.size() == 3);
    REQUIRE(back.test->reject == doc.test->reject);
    REQUIRE(back.test->ci_lower == doc.test->ci_lower);
    REQUIRE(back.intrinsic->edge_count == 1234);
    REQUIRE(back.geodesic.size() == 2);
    REQUIRE(back.geodesic[0].has_spectrum);
    REQUIRE_FALSE(back.geodesic[1].has_spectrum);
    REQUIRE(back.simulation->seed == 123456789012345ULL);
    REQUIRE(back.power.size() == 1);
    REQUIRE(back.power[0].rate == 4.0 / 9.0);

    REQUIRE(to_json_text(back) == text);
}

TEST_CASE("result serialization rejects non finite numbers") {
    ResultDocument doc = full_document();
    doc.dispersion->v_m = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_WITH(to_json_text(doc),
                        ContainsSubstring("non-finite value in result field 'v_m'"));

    REQUIRE_THROWS_WITH(result_from_json_text("not json"),
                        ContainsSubstring("result document:"));
}
