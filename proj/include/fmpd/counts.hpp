#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fmpd::counts {

// Closed-form operation counts, exact integer arithmetic throughout.
// Overflow-guarded; out-of-range arguments throw std::invalid_argument.

std::uint64_t binomial(int n, int k);

std::uint64_t adds_fmpd(int n);          // n * 2^(n-1), n in [1, 57]
std::uint64_t adds_fmpd_l(int n, int l); // truncated-transform additions, 0 <= l <= n-1
std::uint64_t adds_naive(int n);         // 3^n - 2^n, n in [1, 39]
std::uint64_t adds_naive_l(int n, int l); // sum of C(n,i)*(2^(n-i)-1), 0 <= l <= n

// Published closed-form expansion for l = 2. Disagrees with adds_naive_l
// from n = 5 on (161 vs 176); kept as a documented secondary formula, the
// general sum above is authoritative.
std::uint64_t adds_naive_2_closed(int n);

std::uint64_t muls_products(int n);      // 2^n - n - 1
std::uint64_t muls_terms(int n);         // 2^n - 1
std::uint64_t muls_step1(int n);         // 2^(n+1) - n - 2
std::uint64_t divs_step3(int n);         // 2^n - 2

// Divisions performed when every mask of order <= l is requested.
std::uint64_t divs_up_to_order(int n, int l);

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);  // reduces, normalizes sign
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;  // "num/den"
};

// A_0(n) = 2^n - 1, the additions for evaluating the polynomial alone.
std::uint64_t adds_value_only(int n);

// R_l(n) = (adds_fmpd_l(n, l) - A_0(n)) / A_0(n): the relative addition
// overhead of order-l derivatives on top of plain evaluation.
Rational r_overhead(int n, int l);

struct RSeriesEntry {
    int n;
    Rational r;
};
std::vector<RSeriesEntry> r_series(int l, int n_max);

// One cell of the additions-ratio comparison against the published table.
struct RatioCell {
    int n;
    std::uint64_t naive;
    std::uint64_t fmpd;
    Rational exact;
    std::string rounded;    // exact value at the published cell's precision
    std::string published;
    bool match;
    std::string derived;    // 3-significant-digit rendering
};

struct RatioTable {
    std::vector<RatioCell> full_order;  // A_naive_n / A_FMPD
    std::vector<RatioCell> order_two;   // A_naive_2 / A_FMPD_2
};

RatioTable ratio_table(int n_min = 2, int n_max = 10);

// Text the CLI prints for `table`: both rows, mismatch flags, R_1/R_2 series.
std::string render_ratio_table(const RatioTable& table);

struct CountRow {
    std::string path;
    int n;
    std::optional<int> l;
    std::uint64_t formula;
    std::optional<std::uint64_t> measured;
    std::optional<std::string> published;
    std::optional<bool> match;
};

struct CountReport {
    std::vector<CountRow> rows;
    bool all_match() const;
    std::string to_text() const;
    std::string to_csv() const;  // path,n,l,formula,measured,ratio,paper_value,match_flag
};

// Formula-only report for `count` without --measure.
CountReport formula_report(int n, std::optional<int> l);

enum class RunMode { sequential, parallel };

// Runs the instrumented pipeline on a seeded instance and checks every
// measured tally against its closed form.
CountReport reconcile(int n, std::optional<int> l, RunMode mode = RunMode::sequential,
                      int workers = 4, std::uint64_t seed = 0x5eed);

} // namespace fmpd::counts
