#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "bsgs/csv.hpp"
#include "test_util.hpp"

using namespace bsgs;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("/tmp/bsgs_test_" + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_SUITE_BEGIN("csv");

TEST_CASE("three-column design maps to two groups") {
    TempFile design("d1.csv",
                    "a,b,c,y\n"
                    "1.0,2.0,3.0,1.5\n"
                    "2.0,1.0,0.5,2.5\n"
                    "0.5,0.0,1.0,0.0\n");
    TempFile groups("g1.csv",
                    "column,group\n"
                    "a,g1\n"
                    "b,g1\n"
                    "c,g2\n");
    IngestedData data = ingest_csv(design.path, "y", groups.path);
    CHECK(data.structure.num_groups() == 2);
    CHECK(data.structure.num_predictors() == 3);
    CHECK(data.group_labels == std::vector<std::string>{"g1", "g2"});
    CHECK(data.column_names == std::vector<std::string>{"a", "b", "c"});
    CHECK(data.y_raw[1] == doctest::Approx(2.5));
    CHECK(data.x_raw(0, 2) == doctest::Approx(3.0));
}

TEST_CASE("groups are ordered by label with design order inside") {
    TempFile design("d2.csv",
                    "w,x,y,z\n"
                    "1,2,3,4\n"
                    "5,6,7,8\n");
    TempFile groups("g2.csv",
                    "column,group\n"
                    "w,g2\n"
                    "x,g1\n"
                    "z,g1\n");
    IngestedData data = ingest_csv(design.path, "y", groups.path);
    CHECK(data.group_labels == std::vector<std::string>{"g1", "g2"});
    CHECK(data.column_names == std::vector<std::string>{"x", "z", "w"});
    CHECK(data.x_raw(0, 0) == doctest::Approx(2));
    CHECK(data.x_raw(0, 2) == doctest::Approx(1));
}

TEST_CASE("response listed in the group map is flagged as misuse") {
    TempFile design("d3.csv", "a,y\n1,2\n3,4\n");
    TempFile groups("g3.csv", "column,group\na,g1\ny,g1\n");
    CHECK_THROWS_AS(ingest_csv(design.path, "y", groups.path), unmapped_column_error);
}

TEST_CASE("parse errors name the row and column") {
    TempFile design("d4.csv", "a,y\n1,2\nfoo,4\n");
    TempFile groups("g4.csv", "column,group\na,g1\n");
    try {
        ingest_csv(design.path, "y", groups.path);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("'a'") != std::string::npos);
    }
}

TEST_CASE("ragged rows are rejected") {
    TempFile design("d5.csv", "a,y\n1,2\n3\n");
    TempFile groups("g5.csv", "column,group\na,g1\n");
    CHECK_THROWS_AS(ingest_csv(design.path, "y", groups.path), parse_error);
}

TEST_CASE("unknown and unmapped columns are distinguished") {
    TempFile design("d6.csv", "a,b,y\n1,2,3\n4,5,6\n");
    TempFile groups_extra("g6.csv", "column,group\na,g1\nb,g1\nq,g2\n");
    CHECK_THROWS_AS(ingest_csv(design.path, "y", groups_extra.path), unknown_column_error);
    TempFile groups_missing("g7.csv", "column,group\na,g1\n");
    CHECK_THROWS_AS(ingest_csv(design.path, "y", groups_missing.path), unmapped_column_error);
    CHECK_THROWS_AS(ingest_csv(design.path, "nope", groups_missing.path), unknown_column_error);
}

TEST_CASE("write + ingest round-trips the data") {
    RandomStream stream(421);
    mat_t x = testutil::random_matrix(stream, 12, 4);
    vec_t y = testutil::random_vector(stream, 12);
    const std::string design_path = "/tmp/bsgs_test_rt_design.csv";
    const std::string groups_path = "/tmp/bsgs_test_rt_groups.csv";
    write_design_csv(design_path, x, y, {"c1", "c2", "c3", "c4"}, "resp");
    write_group_map_csv(groups_path, {"c1", "c2", "c3", "c4"}, {"a", "a", "b", "b"});
    IngestedData data = ingest_csv(design_path, "resp", groups_path);
    CHECK((data.x_raw - x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((data.y_raw - y).cwiseAbs().maxCoeff() == 0.0);
    CHECK(data.structure.num_groups() == 2);
    std::remove(design_path.c_str());
    std::remove(groups_path.c_str());
}

TEST_SUITE_END();
