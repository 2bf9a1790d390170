#include "zetastrips/cache.hpp"
#include "zetastrips/error.hpp"
#include "zetastrips/io.hpp"

#include <doctest.h>

#include <atomic>
#include <clocale>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

using namespace zetastrips;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    TempDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("zetastrips_test_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("number formatting")
{
    CHECK(io::fmt12(9.6669080561234567) == "9.66690805612");
    CHECK(io::fmt12(0.5) == "0.5");
    CHECK(io::fmt12(-1234567.891234567) == "-1234567.89123");
    CHECK(io::fmt12(1e-20) == "1e-20");
    CHECK(io::fmt_exact(0.1) == "0.1");
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1e4, 1e4);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng);
        CHECK(io::parse_double(io::fmt_exact(v)) == v);
        CHECK(std::abs(io::parse_double(io::fmt12(v)) - v) <= 1e-11 * std::abs(v));
    }
    CHECK_THROWS_AS(io::parse_double("1.5x"), Error);
    CHECK_THROWS_AS(io::parse_double(""), Error);
    CHECK(io::parse_long("-17") == -17);
    CHECK_THROWS_AS(io::parse_long("3.5"), Error);
}

TEST_CASE("formatting ignores the process locale")
{
    const char* previous = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved = previous ? previous : "C";
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) {
        CHECK(io::fmt12(1.5) == "1.5");
        CHECK(io::parse_double("2.25") == 2.25);
    }
    std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("checksum")
{
    CHECK(io::checksum("") == "cbf29ce484222325");
    CHECK(io::checksum("a") == "af63dc4c8601ec8c");
    CHECK(io::checksum("abc") != io::checksum("abd"));
    CHECK(io::checksum("abc").size() == 16);
}

TEST_CASE("CSV writer and parser round trip")
{
    io::CsvWriter w({"m", "t", "name"});
    w.cell(3L).cell(14.134725141734693).cell("x");
    w.end_row();
    w.cell(4L).exact(0.1).cell("y");
    w.end_row();
    CHECK(w.str() == "m,t,name\n3,14.1347251417,x\n4,0.1,y\n");

    const io::CsvTable table = io::parse_csv(w.str());
    CHECK(table.header == std::vector<std::string>{"m", "t", "name"});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[1][2] == "y");
    CHECK(table.column("t") == 1);
    CHECK_THROWS_AS(table.column("missing"), Error);
    CHECK_THROWS_AS(io::parse_csv("a,b\n1\n"), Error);
}

TEST_CASE("atomic writes")
{
    TempDir dir;
    const fs::path file = dir.path / "out.csv";
    io::write_atomic(file, "first");
    CHECK(io::read_file(file) == "first");
    io::write_atomic(file, "second");
    CHECK(io::read_file(file) == "second");
    for (const auto& entry : fs::directory_iterator(dir.path)) {
        CHECK(entry.path() == file);
    }
    CHECK_THROWS_AS(io::read_file(dir.path / "absent"), Error);
    CHECK_THROWS_AS(io::write_atomic(file / "child", "x"), Error);
}

TEST_CASE("cache store, load, stale and corrupt entries")
{
    TempDir dir;
    Cache cache(dir.path);
    CHECK(cache.status(CacheKind::Gram, "k1") == CacheStatus::Missing);
    CHECK_FALSE(cache.load(CacheKind::Gram, "k1").has_value());

    cache.store(CacheKind::Gram, "k1", "n,g\n-1,9.6\n");
    CHECK(cache.status(CacheKind::Gram, "k1") == CacheStatus::Valid);
    CHECK(cache.load(CacheKind::Gram, "k1") == "n,g\n-1,9.6\n");
    CHECK(cache.status(CacheKind::Gram, "k2") == CacheStatus::Stale);
    CHECK_FALSE(cache.load(CacheKind::Gram, "k2").has_value());
    CHECK(cache.status(CacheKind::Zeros, "k1") == CacheStatus::Missing);

    {
        std::ofstream f(cache.payload_path(CacheKind::Gram), std::ios::app);
        f << "0,17.8\n";
    }
    CHECK(cache.status(CacheKind::Gram, "k1") == CacheStatus::Corrupt);
    CHECK_THROWS_AS(cache.load(CacheKind::Gram, "k1"), Error);
    const auto audit = cache.audit();
    REQUIRE(audit.size() == 1);
    CHECK(audit[0].first == CacheKind::Gram);
    CHECK(audit[0].second == CacheStatus::Corrupt);

    // garbage sidecar
    io::write_atomic(cache.meta_path(CacheKind::Gram), "{not json");
    CHECK(cache.status(CacheKind::Gram, "k1") == CacheStatus::Corrupt);

    cache.store(CacheKind::Gram, "k1", "fresh\n");
    CHECK(cache.load(CacheKind::Gram, "k1") == "fresh\n");
}

TEST_CASE("readers never observe a torn cache entry")
{
    TempDir dir;
    Cache cache(dir.path);
    auto payload = [](int i) {
        return std::string(20000 + 1000 * (i % 7), static_cast<char>('a' + i % 26)) + "\n";
    };
    cache.store(CacheKind::Zeros, "key", payload(0));
    std::atomic<bool> done{false};
    std::atomic<int> torn{0};
    std::atomic<int> reads{0};
    std::thread writer([&] {
        for (int i = 1; i < 200; ++i) {
            cache.store(CacheKind::Zeros, "key", payload(i));
        }
        done = true;
    });
    std::vector<std::thread> readers;
    for (int r = 0; r < 3; ++r) {
        readers.emplace_back([&] {
            const Cache view(dir.path);
            while (!done) {
                try {
                    const auto got = view.load(CacheKind::Zeros, "key");
                    if (got) {
                        ++reads;
                        const char c = got->front();
                        if (got->find_first_not_of(c) != got->size() - 1) {
                            ++torn;
                        }
                    }
                } catch (const Error& e) {
                    // payload and sidecar from different generations: detected, never served
                    CHECK(e.kind() == ErrorKind::CacheCorrupt);
                }
            }
        });
    }
    writer.join();
    for (auto& t : readers) {
        t.join();
    }
    CHECK(torn == 0);
    CHECK(cache.load(CacheKind::Zeros, "key") == payload(199));
}
