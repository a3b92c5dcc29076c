#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "nilmkit/redd.hpp"
#include "test_util.hpp"

using namespace nilmkit;
using testutil::TempDir;
using testutil::WarningCapture;

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("labels parsing maps channels to names") {
    auto table = parse_labels("1 mains\n2 oven\n");
    REQUIRE(table.entries.size() == 2);
    CHECK(table.entries.at(1) == "mains");
    CHECK(table.entries.at(2) == "oven");
}

TEST_CASE("labels parsing accepts empty input and blank lines") {
    CHECK(parse_labels("").entries.empty());
    CHECK(parse_labels("\n\n").entries.empty());
    auto table = parse_labels("\n1 mains\n\n2 oven\n");
    CHECK(table.entries.size() == 2);
}

TEST_CASE("labels parsing tolerates a missing trailing newline") {
    auto table = parse_labels("1 mains\n2 oven");
    CHECK(table.entries.at(2) == "oven");
}

TEST_CASE("labels parsing rejects duplicates with the line number") {
    try {
        parse_labels("3 oven\n3 stove\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("3") != std::string::npos);
    }
}

TEST_CASE("labels parsing rejects malformed lines") {
    CHECK_THROWS_AS(parse_labels("1 mains extra\n"), DataError);
    CHECK_THROWS_AS(parse_labels("abc oven\n"), DataError);
    CHECK_THROWS_AS(parse_labels("0 oven\n"), DataError);
    CHECK_THROWS_AS(parse_labels("-2 oven\n"), DataError);
    CHECK_THROWS_AS(parse_labels("1\n"), DataError);
}

TEST_CASE("labels parsing is insensitive to line order") {
    std::vector<std::string> lines = {"1 mains", "2 oven", "3 fridge", "4 light"};
    auto reference = parse_labels("1 mains\n2 oven\n3 fridge\n4 light\n");
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(lines.begin(), lines.end(), rng);
        std::string text;
        for (const auto& line : lines) text += line + "\n";
        CHECK(parse_labels(text) == reference);
    }
}

TEST_CASE("channel parsing reads timestamped samples") {
    auto trace = parse_channel("1303132929 243.1\n1303132932 242.5\n", 5);
    REQUIRE(trace.samples.size() == 2);
    CHECK(trace.channel == 5);
    CHECK(trace.samples[0].timestamp == 1303132929);
    CHECK(trace.samples[0].watts == 243.1);
    CHECK(trace.samples[1].watts == 242.5);
}

TEST_CASE("channel parsing accepts empty input") {
    CHECK(parse_channel("", 1).samples.empty());
}

TEST_CASE("channel parsing rejects non-increasing timestamps") {
    try {
        parse_channel("5 1.0\n4 1.0\n", 1);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        std::string msg = e.what();
        CHECK(msg.find("sample 1") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_channel("5 1.0\n5 2.0\n", 1), DataError);
}

TEST_CASE("channel parsing rejects malformed values with line numbers") {
    try {
        parse_channel("abc 5\n", 1);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 1") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_channel("1 -3.5\n", 1), DataError);
    CHECK_THROWS_AS(parse_channel("1 2e3\n", 1), DataError);
    CHECK_THROWS_AS(parse_channel("1 nan\n", 1), DataError);
    CHECK_THROWS_AS(parse_channel("1\n", 1), DataError);
    CHECK_THROWS_AS(parse_channel("1 2.0 3\n", 1), DataError);
    CHECK_THROWS_AS(parse_channel("1 2..0\n", 1), DataError);
}

TEST_CASE("channel writing renders plain decimal watts") {
    PowerTrace trace;
    trace.channel = 1;
    trace.samples = {{10, 0.0}};
    CHECK(write_channel(trace) == "10 0\n");

    trace.samples = {{1, 243.1}, {2, 242.5}};
    CHECK(write_channel(trace) == "1 243.1\n2 242.5\n");

    trace.samples.clear();
    CHECK(write_channel(trace) == "");
}

TEST_CASE("channel writing never uses scientific notation") {
    PowerTrace trace;
    trace.channel = 1;
    trace.samples = {{1, 1e-4}, {2, 123456789.0}, {3, 0.1 + 0.2}};
    std::string text = write_channel(trace);
    CHECK(text.find('e') == std::string::npos);
    CHECK(text.find('E') == std::string::npos);
}

TEST_CASE("channel round-trip is exact") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        auto trace = testutil::random_trace(rng);
        auto back = parse_channel(write_channel(trace), trace.channel);
        REQUIRE(back.samples.size() == trace.samples.size());
        for (std::size_t i = 0; i < trace.samples.size(); ++i) {
            CHECK(back.samples[i].timestamp == trace.samples[i].timestamp);
            CHECK(back.samples[i].watts == trace.samples[i].watts);
        }
    }
}

TEST_CASE("labels round-trip is exact") {
    LabelsTable table;
    table.entries = {{1, "mains"}, {3, "oven"}, {9, "washer_dryer"}};
    CHECK(parse_labels(write_labels(table)) == table);
}

TEST_CASE("channel filenames follow the channel_<n>.dat pattern") {
    CHECK(channel_filename(1) == "channel_1.dat");
    CHECK(channel_filename(17) == "channel_17.dat");
}

TEST_CASE("house loading reads every labeled channel") {
    TempDir dir("house");
    write_file(dir.path() / "labels.dat", "1 mains\n2 oven\n");
    write_file(dir.path() / "channel_1.dat", "100 1.5\n101 2.5\n");
    write_file(dir.path() / "channel_2.dat", "100 0\n");

    auto house = load_house(dir.path());
    REQUIRE(house.traces.size() == 2);
    CHECK(house.labels.entries.at(1) == "mains");
    CHECK(house.traces.at(1).samples.size() == 2);
    CHECK(house.traces.at(2).samples.size() == 1);
    CHECK(house.traces.at(2).channel == 2);
}

TEST_CASE("house loading requires labels.dat") {
    TempDir dir("nolabels");
    CHECK_THROWS_AS(load_house(dir.path()), DataError);
}

TEST_CASE("house loading reports a labeled channel with no data file") {
    TempDir dir("missingchan");
    write_file(dir.path() / "labels.dat", "1 mains\n2 oven\n");
    write_file(dir.path() / "channel_1.dat", "100 1.5\n");
    try {
        load_house(dir.path());
        FAIL("expected DataError");
    } catch (const DataError& e) {
        std::string msg = e.what();
        CHECK(msg.find("channel 2") != std::string::npos);
    }
}

TEST_CASE("house loading warns about unlabeled channel files") {
    TempDir dir("surplus");
    write_file(dir.path() / "labels.dat", "1 mains\n");
    write_file(dir.path() / "channel_1.dat", "100 1.5\n");
    write_file(dir.path() / "channel_7.dat", "100 9\n");

    WarningCapture capture;
    auto house = load_house(dir.path());
    CHECK(house.traces.size() == 1);
    CHECK(capture.any_contains("channel_7.dat"));
}

TEST_CASE("house loading prefixes parse errors with the file path") {
    TempDir dir("badfile");
    write_file(dir.path() / "labels.dat", "1 mains\n");
    write_file(dir.path() / "channel_1.dat", "100 bogus\n");
    try {
        load_house(dir.path());
        FAIL("expected DataError");
    } catch (const DataError& e) {
        std::string msg = e.what();
        CHECK(msg.find("channel_1.dat") != std::string::npos);
        CHECK(msg.find("line 1") != std::string::npos);
    }
}

TEST_CASE("house loading on arbitrary directories either fails or yields a consistent house") {
    std::mt19937_64 rng(23);
    const char* junk[] = {"", "garbage\n", "1 mains\n", "1 2.5\n", "-1 x\n", "1 1\n2 2\n"};
    for (int trial = 0; trial < 40; ++trial) {
        TempDir dir("fuzz");
        if (rng() % 2) write_file(dir.path() / "labels.dat", junk[rng() % 6]);
        for (int ch = 1; ch <= 3; ++ch)
            if (rng() % 2)
                write_file(dir.path() / channel_filename(ch), junk[rng() % 6]);
        WarningCapture capture;
        try {
            auto house = load_house(dir.path());
            CHECK(house.traces.size() == house.labels.entries.size());
            for (const auto& [channel, trace] : house.traces) {
                CHECK(house.labels.entries.count(channel) == 1);
                CHECK(trace.channel == channel);
            }
        } catch (const DataError&) {
            // malformed inputs are rejected, never half-loaded
        }
    }
}
