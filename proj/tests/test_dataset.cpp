#include "sdr/dataset.hpp"
#include "sdr/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace sdr;
using testutil::TempDir;
using testutil::write_file;

TEST_CASE("load_csv separates the label column")
{
    TempDir dir("ds");
    const auto path = dir.file("a.csv");
    write_file(path, "a,class,b\n1,x,2\n3,y,4\n5,x,6\n7,z,8\n");
    const auto d = load_csv(path, {.label_column = "class", .aux_label_columns = {}});
    CHECK(d.size() == 4);
    CHECK(d.dims() == 2);
    CHECK(d.points(3, 1) == 8.0);
    CHECK(d.column_names == std::vector<std::string>{"a", "b"});
    CHECK(*d.labels == LabelVector{0, 1, 0, 2});
    CHECK(d.label_names == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("text labels encode by first occurrence")
{
    std::vector<std::string> names;
    CHECK(encode_labels({"walk", "sit", "walk"}, names) == LabelVector{0, 1, 0});
    CHECK(names == std::vector<std::string>{"walk", "sit"});
}

TEST_CASE("load_csv reports bad input with its position")
{
    TempDir dir("ds");
    SUBCASE("non-numeric cell")
    {
        write_file(dir.file("b.csv"), "a,b\n1,2\n3,oops\n");
        try {
            (void)load_csv(dir.file("b.csv"));
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("row 3, column 2") != std::string::npos);
        }
    }
    SUBCASE("ragged row") { write_file(dir.file("b.csv"), "a,b\n1,2\n3\n"); }
    SUBCASE("missing label column") { write_file(dir.file("b.csv"), "a,b\n1,2\n"); }
    SUBCASE("header only") { write_file(dir.file("b.csv"), "a,b\n"); }
    SUBCASE("non-finite") { write_file(dir.file("b.csv"), "a,b\n1,inf\n"); }
    CHECK_THROWS_AS((void)load_csv(dir.file("b.csv"), {.label_column = "label", .aux_label_columns = {}}),
                    DataError);
    CHECK_THROWS_AS((void)load_csv(dir.file("missing.csv")), DataError);
}

TEST_CASE("save then load round-trips bit-identically")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 1e3);
    Dataset d;
    d.points.resize(50, 4);
    for (Eigen::Index i = 0; i < d.points.rows(); ++i)
        for (Eigen::Index j = 0; j < 4; ++j) d.points(i, j) = g(rng) * std::pow(10.0, static_cast<double>(j) - 2);
    d.points(0, 0) = 5e-324;
    d.points(1, 1) = 1.7976931348623157e308;
    d.labels = LabelVector(50);
    for (int i = 0; i < 50; ++i) (*d.labels)[static_cast<std::size_t>(i)] = i % 3;
    d.aux_labels["sublabel"] = LabelVector(50, 0);

    TempDir dir("ds");
    save_csv(d, dir.file("r.csv"));
    const auto back = load_csv(dir.file("r.csv"), {.label_column = "label", .aux_label_columns = {"sublabel"}});
    CHECK(back.points == d.points);
    CHECK(*back.labels == *d.labels);
    CHECK(back.aux_labels.at("sublabel") == d.aux_labels.at("sublabel"));
}

TEST_CASE("regroup merges classes")
{
    SUBCASE("five activities become four")
    {
        const std::vector<std::string> names{"sit", "stand", "walk", "run", "dance"};
        const auto map = ClassMap::from_names(
            names, {{"sit", "sit"}, {"stand", "stand"}, {"walk", "walk"}, {"run", "dynamic"}, {"dance", "dynamic"}});
        const auto out = regroup({0, 1, 2, 3, 4, 4, 3}, map);
        CHECK(out == LabelVector{0, 1, 2, 3, 3, 3, 3});
        CHECK(map.names.size() == 4);
    }
    SUBCASE("six activities become three")
    {
        const std::vector<std::string> names{"WALKING", "WALKING_UPSTAIRS", "WALKING_DOWNSTAIRS",
                                             "SITTING", "STANDING",         "LAYING"};
        const auto map = ClassMap::from_names(names, {{"WALKING", "walking"},
                                                      {"WALKING_UPSTAIRS", "walking"},
                                                      {"WALKING_DOWNSTAIRS", "walking"},
                                                      {"SITTING", "static"},
                                                      {"STANDING", "static"},
                                                      {"LAYING", "lying"}});
        const auto out = regroup({5, 4, 3, 2, 1, 0}, map);
        CHECK(out == LabelVector{2, 1, 1, 0, 0, 0});
        CHECK(map.names == std::vector<std::string>{"walking", "static", "lying"});
    }
    SUBCASE("identity") { CHECK(regroup({2, 0, 1, 1}, ClassMap::identity(3)) == LabelVector{2, 0, 1, 1}); }
    SUBCASE("unmapped label") { CHECK_THROWS_AS(regroup({0, 3}, ClassMap::identity(3)), DataError); }
}

TEST_CASE("regroup commutes with row permutation")
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> u(0, 5);
    LabelVector l(100);
    for (auto& v : l) v = u(rng);
    ClassMap m;
    for (int i = 0; i < 6; ++i) m.mapping[i] = i / 2;
    std::vector<std::size_t> perm(l.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    LabelVector lp(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) lp[i] = l[perm[i]];
    const auto a = regroup(l, m);
    const auto b = regroup(lp, m);
    REQUIRE(a.size() == l.size());
    for (std::size_t i = 0; i < l.size(); ++i) CHECK(b[i] == a[perm[i]]);
}

TEST_CASE("standardize")
{
    Dataset d;
    d.points.resize(3, 2);
    d.points << 2, 5, 4, 5, 6, 5;
    const auto s = standardize(d);
    CHECK(s.points.col(0).mean() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.points.col(0).squaredNorm() / 3.0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.points.col(1).isZero(0.0));

    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(3.0, 7.0);
    Dataset r;
    r.points.resize(200, 5);
    for (Eigen::Index i = 0; i < 200; ++i)
        for (Eigen::Index j = 0; j < 5; ++j) r.points(i, j) = g(rng);
    const auto once = standardize(r);
    const auto twice = standardize(once);
    CHECK((once.points - twice.points).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("validate rejects malformed datasets")
{
    Dataset d;
    CHECK_THROWS_AS(d.validate(), DataError);
    d.points = Matrix::Ones(3, 2);
    d.labels = LabelVector{0, 1};
    CHECK_THROWS_AS(d.validate(), DataError);
    d.labels = LabelVector{0, -1, 1};
    CHECK_THROWS_AS(d.validate(), DataError);
    d.labels = LabelVector{0, 1, 1};
    CHECK_NOTHROW(d.validate());
    d.points(0, 0) = std::nan("");
    CHECK_THROWS_AS(d.validate(), DataError);
}
