#include <doctest.h>

#include <cmath>
#include <string>

#include "fmpd/counts.hpp"

using namespace fmpd::counts;

TEST_CASE("adds_fmpd") {
    CHECK(adds_fmpd(2) == 4);
    CHECK(adds_fmpd(8) == 1024);
    CHECK(adds_fmpd(1) == 1);
    CHECK_THROWS_AS(adds_fmpd(0), std::invalid_argument);
    CHECK_THROWS_AS(adds_fmpd(58), std::invalid_argument);
}

TEST_CASE("adds_fmpd_l") {
    CHECK(adds_fmpd_l(5, 2) == 73);   // 3*16 + 7*2 + 11*1
    CHECK(adds_fmpd_l(4, 3) == 32);   // l = n-1 case
    CHECK(adds_fmpd_l(10, 2) == 3004);
    CHECK(adds_fmpd_l(3, 1) == 11);
    CHECK(adds_fmpd_l(4, 1) == 26);   // 2*8 + 3*2 + 4*1
    CHECK_THROWS_AS(adds_fmpd_l(4, 4), std::invalid_argument);
}

TEST_CASE("adds_naive") {
    CHECK(adds_naive(8) == 6305);
    CHECK(adds_naive(2) == 5);
    CHECK(adds_naive(1) == 1);
}

TEST_CASE("adds_naive_l") {
    CHECK(adds_naive_l(5, 2) == 176);  // 31 + 5*15 + 10*7
    CHECK(adds_naive_l(6, 0) == 63);   // value evaluation alone: 2^n - 1
    CHECK(adds_naive_l(3, 2) == 19);
}

TEST_CASE("step 1 and step 3 counts") {
    CHECK(muls_step1(2) == 5);
    CHECK(muls_step1(1) == 1);
    CHECK(muls_step1(8) == 502);
    CHECK(muls_products(2) == 1);
    CHECK(muls_terms(2) == 3);
    CHECK(divs_step3(2) == 2);
    CHECK(divs_step3(1) == 0);
    CHECK(divs_step3(8) == 254);
}

TEST_CASE("binomial identities tie the formulas together") {
    for (int n = 1; n <= 20; ++n) {
        if (n <= 20) CHECK(adds_fmpd_l(n, n - 1) == adds_fmpd(n));
        if (n <= 20 && n <= 39) CHECK(adds_naive_l(n, n) == adds_naive(n));
    }
}

TEST_CASE("the published l=2 closed form disagrees with the general sum") {
    CHECK(adds_naive_2_closed(5) == 161);  // general sum gives 176
    CHECK(adds_naive_l(5, 2) == 176);
    CHECK(adds_naive_2_closed(10) == 16641);
    CHECK(adds_naive_2_closed(3) == adds_naive_l(3, 2));  // they agree up to n = 4
    CHECK(adds_naive_2_closed(4) == adds_naive_l(4, 2));
}

TEST_CASE("rationals reduce") {
    CHECK(Rational(474, 162).str() == "79/27");
    CHECK(Rational(5, 4).value() == 1.25);
}

TEST_CASE("r_overhead series") {
    const Rational r13 = r_overhead(3, 1);
    CHECK(r13.num == 4);
    CHECK(r13.den == 7);
    const Rational r210 = r_overhead(10, 2);
    CHECK(r210.num == 1981);
    CHECK(r210.den == 1023);
    CHECK(r210.value() == doctest::Approx(1.937).epsilon(1e-3));
    CHECK(r_overhead(10, 1).value() == doctest::Approx(0.990).epsilon(1e-3));

    // the derived convergence: R_1 -> 1 and R_2 -> 2
    CHECK(std::abs(r_overhead(20, 1).value() - 1.0) < 1e-2);
    CHECK(std::abs(r_overhead(20, 2).value() - 2.0) < 1e-1);

    const auto series = r_series(1, 6);
    REQUIRE(series.size() == 5);  // n = 2..6
    CHECK(series.front().n == 2);
    CHECK(series.back().n == 6);
}

TEST_CASE("ratio table matches the published cells except the two known ones") {
    const RatioTable table = ratio_table();
    REQUIRE(table.full_order.size() == 9);
    REQUIRE(table.order_two.size() == 9);

    const char* expected_row1[] = {"1.25", "1.58", "2.0", "2.6", "3.5", "4.6", "6.2", "8.3", "11.3"};
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(table.full_order[i].published == expected_row1[i]);
        CHECK(table.full_order[i].match);
    }

    for (const auto& cell : table.order_two) {
        const bool expected_match = cell.n != 6 && cell.n != 10;
        CHECK(cell.match == expected_match);
    }
    CHECK(table.order_two[4].derived == "2.93");  // n = 6
    CHECK(table.order_two[8].derived == "5.86");  // n = 10
    CHECK(table.order_two[3].rounded == "2.4");   // n = 5: 176/73

    const std::string text = render_ratio_table(table);
    CHECK(text.find("11.3") != std::string::npos);
    CHECK(text.find("2.93") != std::string::npos);
    CHECK(text.find("5.86") != std::string::npos);
    CHECK(text.find("DIFFERS") != std::string::npos);
}

TEST_CASE("reconcile ties instrumented counts to the closed forms") {
    const CountReport full8 = reconcile(8, std::nullopt);
    CHECK(full8.all_match());
    bool saw_1024 = false, saw_6305 = false;
    for (const auto& row : full8.rows) {
        if (row.path == "step2_additions") saw_1024 = row.formula == 1024 && row.measured == 1024;
        if (row.path == "naive_additions") saw_6305 = row.formula == 6305 && row.measured == 6305;
    }
    CHECK(saw_1024);
    CHECK(saw_6305);

    const CountReport t52 = reconcile(5, 2);
    CHECK(t52.all_match());
    bool saw_73 = false;
    for (const auto& row : t52.rows)
        if (row.path == "step2_additions_truncated") saw_73 = row.measured == 73;
    CHECK(saw_73);

    const CountReport n1 = reconcile(1, std::nullopt);
    CHECK(n1.all_match());
    for (const auto& row : n1.rows) {
        if (row.path == "step2_additions") CHECK(*row.measured == 1);
        if (row.path == "step1_muls_total") CHECK(*row.measured == 1);
        if (row.path == "step3_divisions") CHECK(*row.measured == 0);
    }

    const CountReport par = reconcile(9, 3, RunMode::parallel, 4);
    CHECK(par.all_match());
}

TEST_CASE("count report rendering") {
    const CountReport report = formula_report(8, std::nullopt);
    const std::string csv = report.to_csv();
    CHECK(csv.find("path,n,l,formula,measured,ratio,paper_value,match_flag") == 0);
    CHECK(csv.find("step2_additions,8,,1024") != std::string::npos);
    const std::string text = report.to_text();
    CHECK(text.find("1024") != std::string::npos);
    CHECK(text.find("6305") != std::string::npos);
}
