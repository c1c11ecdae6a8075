#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "wavemode/errors.hpp"
#include "wavemode/panel.hpp"

using namespace wavemode;

namespace {

std::string make_csv(std::size_t n_series, std::size_t n_rows) {
    std::ostringstream os;
    os << "date";
    for (std::size_t i = 1; i <= n_series; ++i) os << ",b" << i;
    os << '\n';
    for (std::size_t t = 0; t < n_rows; ++t) {
        os << t;
        for (std::size_t i = 1; i <= n_series; ++i)
            os << ',' << (double(i) + 0.25 * double(t % 7));
        os << '\n';
    }
    return os.str();
}

Panel load_text(const std::string& text, IngestConfig cfg = {}) {
    std::istringstream in(text);
    return load_panel(in, cfg);
}

} // namespace

TEST_CASE("load_panel reads a 12x1024 daily panel") {
    const Panel p = load_text(make_csv(12, 1024));
    CHECK(p.series_count() == 12);
    CHECK(p.length() == 1024);
    CHECK(p.dt == 1.0);
    CHECK(p.series_ids.front() == "b1");
    CHECK(p.series_ids.back() == "b12");
    CHECK(p.values[2][3] == 3.0 + 0.25 * 3);
}

TEST_CASE("load_panel accepts a minimal 1x2 panel of zeros") {
    const Panel p = load_text("date,a\n0,0\n1,0\n");
    CHECK(p.length() == 2);
    CHECK(p.values[0] == std::vector<double>{0.0, 0.0});
}

TEST_CASE("load_panel understands ISO-8601 dates") {
    const Panel p = load_text("date,a\n2017-11-22,1\n2017-11-23,2\n2017-11-24,3\n");
    CHECK(p.length() == 3);
    CHECK(p.dt == 1.0);
    CHECK(p.times[1] - p.times[0] == 1);
}

TEST_CASE("load_panel rejects a calendar gap") {
    CHECK_THROWS_AS(load_text("date,a\n0,1\n1,2\n3,4\n"), ValidationError);
    CHECK_THROWS_AS(load_text("date,a\n2020-01-01,1\n2020-01-02,2\n2020-01-04,3\n"),
                    ValidationError);
}

TEST_CASE("load_panel rejects non-monotonic dates") {
    CHECK_THROWS_AS(load_text("date,a\n1,1\n0,2\n"), ValidationError);
}

TEST_CASE("load_panel reports ragged rows with the line number") {
    try {
        load_text("date,a,b\n0,1,2\n1,3\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("missing cells: reject by default, forward-fill on request") {
    const std::string text = "date,a\n0,1\n1,\n2,3\n";
    CHECK_THROWS_AS(load_text(text), ValidationError);

    IngestConfig ff;
    ff.missing = MissingPolicy::forward_fill;
    const Panel p = load_text(text, ff);
    CHECK(p.values[0] == std::vector<double>{1.0, 1.0, 3.0});

    // a leading hole cannot be filled
    CHECK_THROWS_AS(load_text("date,a\n0,\n1,2\n", ff), ValidationError);
}

TEST_CASE("normalize minmax maps [2,4,6] onto [0,1]") {
    Panel p = load_text("date,a\n0,2\n1,4\n2,6\n");
    const Panel q = normalize(p, NormalizeMethod::minmax);
    CHECK(q.values[0] == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("normalize maps constant series to zeros") {
    Panel p = load_text("date,a\n0,5\n1,5\n2,5\n");
    CHECK(normalize(p, NormalizeMethod::minmax).values[0] == std::vector<double>{0, 0, 0});
    CHECK(normalize(p, NormalizeMethod::zscore).values[0] == std::vector<double>{0, 0, 0});
}

TEST_CASE("normalize zscore uses the population std") {
    // [1,3]: mean 2, population std 1
    Panel p = load_text("date,a\n0,1\n1,3\n");
    const Panel q = normalize(p, NormalizeMethod::zscore);
    CHECK(q.values[0][0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(q.values[0][1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalize properties on random panels") {
    Panel p;
    p.series_ids = {"a", "b", "c"};
    p.times = {0, 1, 2, 3, 4, 5, 6, 7};
    for (std::uint64_t i = 0; i < 3; ++i)
        p.values.push_back(testutil::random_series(8, 100 + i));
    p.validate();

    const Panel mm = normalize(p, NormalizeMethod::minmax);
    for (const auto& row : mm.values)
        for (double v : row) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }

    const Panel z = normalize(p, NormalizeMethod::zscore);
    for (const auto& row : z.values) {
        double mean = 0.0;
        for (double v : row) mean += v;
        CHECK(std::abs(mean / double(row.size())) < 1e-12);
    }

    CHECK(normalize(p, NormalizeMethod::none).values == p.values);
}

TEST_CASE("stack_for_plot offsets each series by i*gap and is invertible") {
    Panel p = load_text("date,a,b\n0,0,0\n1,0,0\n");
    const Panel s = stack_for_plot(p, 1.0);
    CHECK(s.values[0] == std::vector<double>{0.0, 0.0});
    CHECK(s.values[1] == std::vector<double>{1.0, 1.0});

    Panel recovered = s;
    for (std::size_t i = 0; i < recovered.values.size(); ++i)
        for (double& v : recovered.values[i]) v -= double(i) * 1.0;
    CHECK(recovered.values == p.values);

    CHECK_THROWS_AS(stack_for_plot(p, 0.0), ValidationError);
    CHECK_THROWS_AS(stack_for_plot(p, -1.0), ValidationError);
}

TEST_CASE("stacked normalized series stay under their lane ceiling") {
    const Panel p = load_text(make_csv(12, 64));
    const Panel stacked = stack_for_plot(normalize(p, NormalizeMethod::minmax), 1.2);
    for (std::size_t i = 0; i < stacked.series_count(); ++i)
        for (double v : stacked.values[i]) CHECK(v <= double(i) * 1.2 + 1.0 + 1e-12);
}

TEST_CASE("save/load round-trips values bit-identically") {
    Panel p;
    p.series_ids = {"x", "y"};
    p.times = {10, 11, 12};
    p.values = {{1.0 / 3.0, 2.0 / 7.0, 0.1}, {-5.25e-17, 3.14159265358979, 1e300}};
    p.validate();

    std::ostringstream os;
    save_panel(p, os);
    const Panel q = load_text(os.str());
    CHECK(q.values == p.values);
    CHECK(q.times == p.times);

    std::ostringstream os2;
    save_panel(q, os2);
    CHECK(os.str() == os2.str());
}
