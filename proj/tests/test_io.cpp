#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cdmd/errors.hpp"
#include "cdmd/snapshot_io.hpp"
#include "cdmd/systems.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>

using namespace cdmd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cdmd_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

Mat awkward_matrix() {
    // values that stress shortest-round-trip formatting
    Mat m(3, 4);
    m << 0.1, -1.0 / 3.0, 1e-300, 12345.6789,
         2.0, 1e300, -0.0, 3.141592653589793,
         -7.25, 5e-324, 1.0000000000000002, 0.0;
    return m;
}

}  // namespace

TEST_CASE("csv round trip is bit exact") {
    TempDir tmp;
    const Mat m = awkward_matrix();
    const std::string path = tmp.file("seq.csv");
    io::save_sequence(path, m, 0.05);
    const io::Sequence loaded = io::load_sequence(path);
    CHECK(loaded.dt == 0.05);
    CHECK(loaded.states == m);
}

TEST_CASE("binary round trip is bit exact") {
    TempDir tmp;
    const Mat m = awkward_matrix();
    const std::string path = tmp.file("seq.snap");
    io::save_sequence(path, m, 0.25);
    const io::Sequence loaded = io::load_sequence(path);
    CHECK(loaded.dt == 0.25);
    CHECK(loaded.states == m);
}

TEST_CASE("load_snapshots pairs consecutive columns") {
    TempDir tmp;
    LinearPeriodicSpec spec;
    spec.n = 8;
    const Mat seq = linear_periodic_sequence(spec);
    const std::string path = tmp.file("lin.csv");
    io::save_sequence(path, seq, spec.dt());
    const SnapshotData d = io::load_snapshots(path);
    CHECK(d.X.cols() == 8);
    CHECK(d.X == seq.leftCols(8));
    CHECK(d.Y == seq.rightCols(8));
    CHECK(d.dt == spec.dt());
}

TEST_CASE("csv with mismatched row lengths names the row") {
    TempDir tmp;
    const std::string path = tmp.file("ragged.csv");
    {
        std::ofstream out(path);
        out << "# dt=0.1\n1,2,3\n4,5\n";
    }
    try {
        io::load_sequence(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.where == 3);  // 1-based line of the short row
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("csv without the dt header is rejected") {
    TempDir tmp;
    const std::string path = tmp.file("nodt.csv");
    {
        std::ofstream out(path);
        out << "1,2\n3,4\n";
    }
    CHECK_THROWS_AS(io::load_sequence(path), ParseError);
}

TEST_CASE("csv with a bad numeric field is rejected") {
    TempDir tmp;
    const std::string path = tmp.file("badnum.csv");
    {
        std::ofstream out(path);
        out << "# dt=0.1\n1,banana\n";
    }
    CHECK_THROWS_AS(io::load_sequence(path), ParseError);
}

TEST_CASE("binary payload size mismatch is a validation error") {
    TempDir tmp;
    const std::string path = tmp.file("short.snap");
    io::save_sequence(path, Mat::Ones(4, 5), 0.1);
    // truncate the payload
    fs::resize_file(path, fs::file_size(path) - 8);
    CHECK_THROWS_AS(io::load_sequence(path), ParseError);
}

TEST_CASE("binary with a bad magic is rejected") {
    TempDir tmp;
    const std::string path = tmp.file("bad.snap");
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOTMAGIC" << std::string(64, '\0');
    }
    try {
        io::load_sequence(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.where == 0);  // offending byte offset
    }
}

TEST_CASE("non-finite entries are rejected on load") {
    TempDir tmp;
    const std::string path = tmp.file("inf.csv");
    {
        std::ofstream out(path);
        out << "# dt=0.1\n1,inf\n2,3\n";
    }
    CHECK_THROWS(io::load_sequence(path));
}

TEST_CASE("format round trip survives csv <-> binary conversion") {
    TempDir tmp;
    std::mt19937_64 rng(8);
    std::normal_distribution<double> dist;
    Mat m(6, 9);
    for (Index j = 0; j < 9; ++j)
        for (Index i = 0; i < 6; ++i) m(i, j) = dist(rng);

    const std::string csv = tmp.file("a.csv");
    const std::string bin = tmp.file("a.snap");
    io::save_sequence(csv, m, 0.5);
    const io::Sequence s1 = io::load_sequence(csv);
    io::save_sequence(bin, s1.states, s1.dt);
    const io::Sequence s2 = io::load_sequence(bin);
    CHECK(s2.states == m);
    CHECK(s2.dt == 0.5);
}
