#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lcm/bench.hpp"
#include "lcm/generate.hpp"
#include "lcm/ingest.hpp"
#include "lcm/io.hpp"
#include "lcm/rng.hpp"

using namespace lcm;
namespace fs = std::filesystem;

namespace {

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name, const std::string& contents) {
        path = fs::temp_directory_path() / ("lcm_test_" + name);
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() {
        std::error_code ec;
        fs::remove(path, ec);
    }
};

}  // namespace

TEST_SUITE("ingest_bench") {

TEST_CASE("ingest_csv parses clean files") {
    TempFile f("clean.csv", "1,0,1\n0,0,1\n");
    const ResponseMatrix r = ingest_csv(f.path.string(), 0);
    CHECK(r.rows() == 2);
    CHECK(r.cols() == 3);
    CHECK(r(0, 0) == 1.0);
    CHECK(r(1, 1) == 0.0);
    CHECK(r.fully_observed());
}

TEST_CASE("ingest_csv imputes NA cells reproducibly") {
    TempFile f("na.csv", "1,0,NA\n1,1,NA\n");
    const ResponseMatrix a = ingest_csv(f.path.string(), 7);
    const ResponseMatrix b = ingest_csv(f.path.string(), 7);
    CHECK(a.dense() == b.dense());
    CHECK(a.fully_observed());
    CHECK((a(0, 2) == 0.0 || a(0, 2) == 1.0));
    // Row 2 has positive rate 1, so its imputed cell must be 1.
    CHECK(b(1, 2) == 1.0);
}

TEST_CASE("ingest_csv of all zeros performs no imputation") {
    TempFile f("zeros.csv", "0,0\n0,0\n0,0\n");
    const ResponseMatrix r = ingest_csv(f.path.string(), 1);
    CHECK(r.dense().isZero());
}

TEST_CASE("ingest_csv error paths") {
    SUBCASE("malformed cell with location") {
        TempFile f("bad.csv", "1,0\n1,x\n");
        try {
            ingest_csv(f.path.string(), 0);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.row() == 2);
            CHECK(e.col() == 2);
        }
    }
    SUBCASE("empty file") {
        TempFile f("empty.csv", "");
        CHECK_THROWS_AS(ingest_csv(f.path.string(), 0), std::runtime_error);
    }
    SUBCASE("entirely missing row") {
        TempFile f("allna.csv", "1,0\nNA,NA\n");
        CHECK_THROWS_AS(ingest_csv(f.path.string(), 0), std::runtime_error);
    }
    SUBCASE("ragged row") {
        TempFile f("ragged.csv", "1,0\n1\n");
        CHECK_THROWS_AS(ingest_csv(f.path.string(), 0), ParseError);
    }
}

TEST_CASE("ingest_csv header and drop-rows options") {
    TempFile f("opts.csv", "c1,c2\n1,0\n0,1\n1,1\n");
    TempFile drop("drop.txt", "2\n");
    IngestOptions opts;
    opts.header = true;
    opts.drop_rows_file = drop.path.string();
    const ResponseMatrix r = ingest_csv(f.path.string(), 0, opts);
    CHECK(r.rows() == 2);  // data rows 1 and 3 survive
    CHECK(r(0, 0) == 1.0);
    CHECK(r(1, 0) == 1.0);
    CHECK(r(1, 1) == 1.0);
}

TEST_CASE("ingest_csv handles a senate-shaped file with sparse NAs") {
    // 94 x 486 planted two-class instance with ~5% missing cells.
    Rng rng(314);
    std::ostringstream csv;
    for (Index i = 0; i < 94; ++i) {
        const bool first = i < 47;
        for (Index j = 0; j < 486; ++j) {
            if (j) csv << ',';
            if (rng.uniform01() < 0.05) {
                csv << "NA";
            } else {
                const double p = first == (j % 2 == 0) ? 0.9 : 0.1;
                csv << (rng.bernoulli(p) ? 1 : 0);
            }
        }
        csv << '\n';
    }
    TempFile f("senate.csv", csv.str());
    const ResponseMatrix r = ingest_csv(f.path.string(), 11);
    CHECK(r.rows() == 94);
    CHECK(r.cols() == 486);
    CHECK(r.fully_observed());
}

TEST_CASE("bench config parsing") {
    std::istringstream in(
        "# comment\n"
        "methods=spec,sola\n"
        "beta=1,8\n"
        "replicates=3\n"
        "base_seed=9\n"
        "grid=20,10,2\n"
        "grid=30,15,2\n"
        "failure_policy=exclude\n");
    const BenchConfig cfg = parse_bench_config(in);
    CHECK(cfg.methods == std::vector<std::string>{"spec", "sola"});
    CHECK(cfg.beta_a == 1.0);
    CHECK(cfg.beta_b == 8.0);
    CHECK(cfg.replicates == 3);
    CHECK(cfg.base_seed == 9);
    REQUIRE(cfg.grid.size() == 2);
    CHECK(cfg.grid[1][0] == 30);
}

TEST_CASE("bench config errors carry line numbers") {
    std::istringstream bad("methods=spec\ngrid=20,10\n");
    try {
        parse_bench_config(bad);
        FAIL("expected config error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::istringstream unknown("methods=warp\ngrid=20,10,2\n");
    CHECK_THROWS_AS(parse_bench_config(unknown), std::runtime_error);
}

TEST_CASE("bench presets") {
    const BenchConfig sim2 = bench_preset("sim2-small");
    CHECK(sim2.beta_a == 1.0);
    CHECK(sim2.beta_b == 8.0);
    CHECK(sim2.replicates == 50);
    REQUIRE(sim2.grid.size() == 3);
    CHECK(sim2.grid[0][1] == 25);
    CHECK(sim2.grid[2][0] == 190);
    CHECK_THROWS_AS(bench_preset("sim9"), std::runtime_error);
}

TEST_CASE("bench pairs instances across methods and reruns deterministically") {
    BenchConfig cfg;
    cfg.methods = {"spec", "sola", "oracle"};
    cfg.grid = {{40, 20, 2}};
    cfg.replicates = 4;
    cfg.base_seed = 123;
    cfg.beta_a = 1.0;
    cfg.beta_b = 8.0;
    cfg.timing = false;
    cfg.threads = 2;

    const std::vector<BenchRow> rows = run_bench(cfg);
    REQUIRE(rows.size() == 12);

    // Same replicate => same instance hash across methods.
    for (int rep = 0; rep < 4; ++rep) {
        std::uint64_t h = 0;
        for (const auto& row : rows) {
            if (row.replicate != rep) continue;
            if (h == 0) h = row.instance_hash;
            CHECK(row.instance_hash == h);
        }
    }

    cfg.threads = 1;  // schedule independence
    const std::vector<BenchRow> rows_serial = run_bench(cfg);
    std::ostringstream a, b;
    write_rows_csv(a, rows);
    write_rows_csv(b, rows_serial);
    CHECK(a.str() == b.str());

    for (const auto& row : rows) {
        if (!row.failed) {
            CHECK(row.loss >= 0.0);
            CHECK(row.loss <= 1.0);
        }
    }
}

TEST_CASE("bench aggregates exclude failures from the mean loss") {
    std::vector<BenchRow> rows;
    BenchRow r;
    r.method = "spec";
    r.n = 10;
    r.j = 5;
    r.k = 2;
    r.loss = 0.2;
    r.replicate = 0;
    rows.push_back(r);
    r.replicate = 1;
    r.loss = 0.4;
    rows.push_back(r);
    r.replicate = 2;
    r.loss = 0.9;
    r.failed = true;
    rows.push_back(r);

    const auto aggs = aggregate_rows(rows);
    REQUIRE(aggs.size() == 1);
    CHECK(aggs[0].replicates == 3);
    CHECK(aggs[0].failures == 1);
    CHECK(aggs[0].mean_loss == doctest::Approx(0.3));
}

}  // TEST_SUITE
