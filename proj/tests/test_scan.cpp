#include "doctest.h"

#include "cpshift/scan.hpp"

#include <sstream>

using namespace cpshift;
using namespace cpshift::scan;

namespace {

ScanSpec minimal_spec() {
    ScanSpec s;
    s.quantity = Quantity::GroundShift;
    s.sweep = SweepVar::Z;
    s.range = {1.0, 2.0, 2, false};
    s.stack = {1.5, 1.5, 0.0};
    s.transitions = {{1.0, 1.0, 1.0}};
    s.cfg.rel_tol = 1e-7;
    return s;
}

} // namespace

TEST_CASE("scan validation") {
    ScanSpec s = minimal_spec();
    s.range.count = 1;
    CHECK_THROWS_AS(run_scan(s), ValidationError);
    s = minimal_spec();
    s.range.hi = s.range.lo;
    CHECK_THROWS_AS(run_scan(s), ValidationError);
    s = minimal_spec();
    s.range.log = true;
    s.range.lo = 0.0;
    CHECK_THROWS_AS(run_scan(s), ValidationError);
    s = minimal_spec();
    s.transitions.clear();
    CHECK_THROWS_AS(run_scan(s), ValidationError);
}

TEST_CASE("half-space Z^4-normalized curve flattens at large a") {
    ScanSpec s = minimal_spec();
    s.range = {40.0, 60.0, 3, false};
    s.normalization = Normalization::TimesZ4;
    const auto t = run_scan(s);
    REQUIRE(t.rows.size() == 3);
    for (const auto& r : t.rows) CHECK(r.flag == RowFlag::Ok);
    CHECK(t.rows[0].value_total ==
          doctest::Approx(t.rows[2].value_total).epsilon(2e-3));
}

TEST_CASE("deterministic output bytes") {
    ScanSpec s = minimal_spec();
    s.threads = 4;
    const auto t1 = run_scan(s);
    const auto t2 = run_scan(s);
    std::ostringstream a, b, c, d;
    emit_csv(t1, a);
    emit_csv(t2, b);
    CHECK(a.str() == b.str());
    emit_json(t1, c);
    emit_json(t2, d);
    CHECK(c.str() == d.str());
    CHECK_FALSE(c.str().empty());
    CHECK(c.str().back() == '\n');
}

TEST_CASE("csv format contract") {
    ScanSpec s = minimal_spec();
    const auto t = run_scan(s);
    std::ostringstream os;
    emit_csv(t, os);
    const std::string out = os.str();
    // spec echo present
    CHECK(out.find("# quantity=ground-shift") != std::string::npos);
    CHECK(out.find("# n_l=1.5") != std::string::npos);
    CHECK(out.find("Z,value_par,value_perp,value_total,abs_error,flag") != std::string::npos);
    // one row per sweep point
    size_t rows = 0;
    for (size_t p = out.find('\n'); p != std::string::npos; p = out.find('\n', p + 1)) ++rows;
    // header comments + column header + 2 rows, all newline-terminated
    CHECK(out.back() == '\n');
    CHECK(rows >= 4);
}

TEST_CASE("csv numbers round-trip at 17 significant digits") {
    ScanSpec s = minimal_spec();
    const auto t = run_scan(s);
    std::ostringstream os;
    emit_csv(t, os);
    std::istringstream in(os.str());
    std::string line;
    std::vector<double> parsed;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'Z') continue;
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        std::getline(ls, cell, ',');
        parsed.push_back(std::stod(cell));
    }
    REQUIRE(parsed.size() == t.rows.size());
    for (size_t i = 0; i < parsed.size(); ++i) CHECK(parsed[i] == t.rows[i].value_par);
}

TEST_CASE("trapped-mode counts are monotone along a k_par sweep") {
    ScanSpec s;
    s.quantity = Quantity::TrappedModes;
    s.sweep = SweepVar::KPar;
    s.range = {0.5, 12.0, 6, false};
    s.stack = {2.0, 1.5, 1.0};
    const auto t = run_scan(s);
    double prev = 0.0;
    for (const auto& r : t.rows) {
        CHECK(r.flag == RowFlag::Ok);
        CHECK(r.value_total >= prev);
        prev = r.value_total;
    }
}

TEST_CASE("greens scan carries the image-series companion column") {
    ScanSpec s;
    s.quantity = Quantity::Greens;
    s.sweep = SweepVar::Z;
    s.range = {0.5, 2.0, 4, false};
    s.stack = {2.0, 1.5, 0.5};
    s.rho = 0.3;
    const auto t = run_scan(s);
    for (const auto& r : t.rows) {
        CHECK(r.flag == RowFlag::Ok);
        CHECK(r.value_par == doctest::Approx(r.value_perp).epsilon(1e-9));
    }
}

TEST_CASE("failed rows are flagged without aborting the sweep") {
    ScanSpec s = minimal_spec();
    s.quantity = Quantity::GroundShift;
    s.sweep = SweepVar::NL;
    s.range = {0.5, 2.0, 4, false}; // first points have n_l < 1: invalid stacks
    const auto t = run_scan(s);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0].flag == RowFlag::Failed);
    CHECK(t.rows[3].flag == RowFlag::Ok);
}

TEST_CASE("resonant scan oscillates with decreasing extrema along L") {
    ScanSpec s;
    s.quantity = Quantity::ResonantShift;
    s.sweep = SweepVar::L;
    s.stack = {2.0 * M_PI, 2.0, 0.25};
    s.transitions = {{-1.0, 1.0, 0.0}};
    s.Z = 20.0;
    s.cfg.rel_tol = 1e-7;
    s.range = {0.25, 1.25, 5, false}; // L E in {1/4, 1/2, 3/4, 1, 5/4}
    const auto t = run_scan(s);
    // resonances at L E = 1/4, 3/4, 5/4 and anti-resonances at 1/2, 1
    const double r0 = std::abs(t.rows[0].value_total);
    const double a0 = std::abs(t.rows[1].value_total);
    const double r1 = std::abs(t.rows[2].value_total);
    const double a1 = std::abs(t.rows[3].value_total);
    const double r2 = std::abs(t.rows[4].value_total);
    CHECK(r0 > a0);
    CHECK(r1 > a1);
    CHECK(r2 > a1);
    // extrema become less pronounced
    CHECK(r1 < r0);
    CHECK(r2 < r1);
}
