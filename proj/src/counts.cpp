#include "fmpd/counts.hpp"

#include <cinttypes>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fmpd/engine.hpp"
#include "fmpd/io.hpp"
#include "fmpd/oracle.hpp"

namespace fmpd::counts {

namespace {

std::uint64_t pow2(int e) {
    if (e < 0 || e > 62) throw std::invalid_argument("2^e out of supported range");
    return std::uint64_t{1} << e;
}

void require_n(int n, int hi, const char* what) {
    if (n < 1 || n > hi)
        throw std::invalid_argument(std::string(what) + ": n must be in [1, " +
                                    std::to_string(hi) + "]");
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

// Renders at the same number of decimals the published cell uses.
std::string round_like(double v, const std::string& published) {
    const auto dot = published.find('.');
    const int decimals = dot == std::string::npos ? 0 : static_cast<int>(published.size() - dot - 1);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

} // namespace

std::uint64_t binomial(int n, int k) {
    if (n < 0 || k < 0) throw std::invalid_argument("binomial: negative argument");
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // exact at every step: r is C(n, i-1) * something divisible by i
        const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        if (r > UINT64_MAX / num) throw std::overflow_error("binomial overflow");
        r = r * num / static_cast<std::uint64_t>(i);
    }
    return r;
}

std::uint64_t adds_fmpd(int n) {
    require_n(n, 57, "adds_fmpd");
    return static_cast<std::uint64_t>(n) * pow2(n - 1);
}

std::uint64_t adds_fmpd_l(int n, int l) {
    require_n(n, 57, "adds_fmpd_l");
    if (l < 0 || l >= n) throw std::invalid_argument("adds_fmpd_l: need 0 <= l <= n-1");
    if (l == n - 1) return adds_fmpd(n);
    std::uint64_t total = static_cast<std::uint64_t>(l + 1) * pow2(n - 1);
    for (int k = l + 2; k <= n; ++k) {
        std::uint64_t kept = 0;  // offsets of silo k with popcount <= l
        for (int i = 0; i <= l; ++i) kept += binomial(k - 1, i);
        total += kept * pow2(n - k);
    }
    return total;
}

std::uint64_t adds_naive(int n) {
    require_n(n, 39, "adds_naive");
    std::uint64_t p3 = 1;
    for (int i = 0; i < n; ++i) p3 *= 3;
    return p3 - pow2(n);
}

std::uint64_t adds_naive_l(int n, int l) {
    require_n(n, 39, "adds_naive_l");
    if (l < 0 || l > n) throw std::invalid_argument("adds_naive_l: need 0 <= l <= n");
    std::uint64_t total = 0;
    for (int i = 0; i <= l; ++i) total += binomial(n, i) * (pow2(n - i) - 1);
    return total;
}

std::uint64_t adds_naive_2_closed(int n) {
    require_n(n, 39, "adds_naive_2_closed");
    if (n < 2) throw std::invalid_argument("adds_naive_2_closed: need n >= 2");
    const std::uint64_t nn = static_cast<std::uint64_t>(n);
    return 1 + nn * pow2(n - 1) + (nn * nn - nn) * pow2(n) / 8;
}

std::uint64_t muls_products(int n) {
    require_n(n, 57, "muls_products");
    return pow2(n) - static_cast<std::uint64_t>(n) - 1;
}

std::uint64_t muls_terms(int n) {
    require_n(n, 57, "muls_terms");
    return pow2(n) - 1;
}

std::uint64_t muls_step1(int n) {
    require_n(n, 57, "muls_step1");
    return pow2(n + 1) - static_cast<std::uint64_t>(n) - 2;
}

std::uint64_t divs_step3(int n) {
    require_n(n, 57, "divs_step3");
    return pow2(n) - 2;
}

std::uint64_t divs_up_to_order(int n, int l) {
    require_n(n, 57, "divs_up_to_order");
    if (l < 0 || l > n) throw std::invalid_argument("divs_up_to_order: need 0 <= l <= n");
    if (l == n) return divs_step3(n);
    std::uint64_t total = 0;
    for (int i = 1; i <= l; ++i) total += binomial(n, i);
    return total;
}

std::uint64_t adds_value_only(int n) {
    require_n(n, 57, "adds_value_only");
    return pow2(n) - 1;
}

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::string Rational::str() const {
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational r_overhead(int n, int l) {
    if (l < 0 || l >= n) throw std::invalid_argument("r_overhead: need 0 <= l < n");
    const std::uint64_t adds = adds_fmpd_l(n, l);
    const std::uint64_t base = adds_value_only(n);
    return Rational(static_cast<std::int64_t>(adds - base), static_cast<std::int64_t>(base));
}

std::vector<RSeriesEntry> r_series(int l, int n_max) {
    if (l < 0) throw std::invalid_argument("r_series: l must be >= 0");
    std::vector<RSeriesEntry> out;
    for (int n = l + 1; n <= n_max; ++n) out.push_back({n, r_overhead(n, l)});
    return out;
}

namespace {

const char* kPublishedFullOrder[] = {"1.25", "1.58", "2.0", "2.6", "3.5",
                                     "4.6",  "6.2",  "8.3", "11.3"};
const char* kPublishedOrderTwo[] = {"1.25", "1.58", "2.0", "2.4", "2.8",
                                    "3.5",  "4.2",  "5.0", "5.5"};

RatioCell make_cell(int n, std::uint64_t naive, std::uint64_t fmpd, const char* published) {
    RatioCell cell;
    cell.n = n;
    cell.naive = naive;
    cell.fmpd = fmpd;
    cell.exact = Rational(static_cast<std::int64_t>(naive), static_cast<std::int64_t>(fmpd));
    cell.published = published ? published : "";
    const double v = cell.exact.value();
    cell.derived = fmt("%.3g", v);
    if (published) {
        cell.rounded = round_like(v, cell.published);
        cell.match = cell.rounded == cell.published;
    } else {
        cell.rounded = cell.derived;
        cell.match = true;
    }
    return cell;
}

} // namespace

RatioTable ratio_table(int n_min, int n_max) {
    if (n_min < 2 || n_max < n_min) throw std::invalid_argument("ratio_table: bad range");
    RatioTable table;
    for (int n = n_min; n <= n_max; ++n) {
        const char* pub1 = (n >= 2 && n <= 10) ? kPublishedFullOrder[n - 2] : nullptr;
        const char* pub2 = (n >= 2 && n <= 10) ? kPublishedOrderTwo[n - 2] : nullptr;
        table.full_order.push_back(make_cell(n, adds_naive(n), adds_fmpd(n), pub1));
        const int l2 = n <= 2 ? n - 1 : 2;  // "order 2" means the full transform for n = 2
        table.order_two.push_back(
            make_cell(n, adds_naive_l(n, std::min(2, n)), adds_fmpd_l(n, l2), pub2));
    }
    return table;
}

std::string render_ratio_table(const RatioTable& table) {
    std::ostringstream os;
    auto render_rows = [&os](const char* title, const std::vector<RatioCell>& cells) {
        os << title << "\n";
        os << "  n   naive  fmpd   exact        value  published  status\n";
        for (const RatioCell& c : cells) {
            char line[160];
            std::snprintf(line, sizeof(line), "  %-3d %-6" PRIu64 " %-6" PRIu64 " %-12s %-6s %-10s",
                          c.n, c.naive, c.fmpd, c.exact.str().c_str(), c.rounded.c_str(),
                          c.published.empty() ? "-" : c.published.c_str());
            os << line;
            if (c.published.empty())
                os << "-";
            else if (c.match)
                os << "ok";
            else
                os << "DIFFERS from published (derived " << c.derived << ")";
            os << "\n";
        }
    };
    os << "Additions for all partial sums, transform vs naive per-mask summation\n";
    render_rows("row A_naive_n/A_FMPD:", table.full_order);
    render_rows("row A_naive_2/A_FMPD_2:", table.order_two);

    for (int l = 1; l <= 2; ++l) {
        os << "R_" << l << "(n) = (A_FMPD_" << l << " - A_0)/A_0 series:";
        for (const RSeriesEntry& e : r_series(l, 20)) {
            if (e.n > 8 && e.n < 20) continue;  // keep the line readable
            os << "  n=" << e.n << ": " << fmt("%.6g", e.r.value());
        }
        const Rational r20 = r_overhead(20, l);
        os << "\n  R_" << l << "(20) = " << r20.str() << " ~= " << fmt("%.6f", r20.value())
           << " (series tends to " << (l == 1 ? "1" : "2") << "; published limit "
           << (l == 1 ? "1/8" : "1") << " is not reproduced by the count formula)\n";
    }
    return os.str();
}

bool CountReport::all_match() const {
    for (const CountRow& r : rows)
        if (r.match.has_value() && !*r.match) return false;
    return true;
}

std::string CountReport::to_text() const {
    std::ostringstream os;
    os << "  path                       n   l   formula     measured    match\n";
    for (const CountRow& r : rows) {
        char line[200];
        std::snprintf(line, sizeof(line), "  %-26s %-3d %-3s %-11" PRIu64 " %-11s %s\n",
                      r.path.c_str(), r.n, r.l ? std::to_string(*r.l).c_str() : "-", r.formula,
                      r.measured ? std::to_string(*r.measured).c_str() : "-",
                      r.match ? (*r.match ? "ok" : "MISMATCH") : "-");
        os << line;
    }
    return os.str();
}

std::string CountReport::to_csv() const {
    std::ostringstream os;
    os << "path,n,l,formula,measured,ratio,paper_value,match_flag\n";
    for (const CountRow& r : rows) {
        os << r.path << "," << r.n << ",";
        if (r.l) os << *r.l;
        os << "," << r.formula << ",";
        if (r.measured) os << *r.measured;
        os << ",";
        if (r.measured && r.formula != 0)
            os << fmt("%.6g", static_cast<double>(*r.measured) / static_cast<double>(r.formula));
        os << ",";
        if (r.published) os << *r.published;
        os << ",";
        if (r.match) os << (*r.match ? "ok" : "mismatch");
        os << "\n";
    }
    return os.str();
}

namespace {

CountReport build_report(int n, std::optional<int> l, bool measured, RunMode mode, int workers,
                         std::uint64_t seed) {
    CountReport report;
    auto add = [&](std::string path, std::uint64_t formula, std::optional<std::uint64_t> got,
                   std::optional<std::string> published = std::nullopt) {
        CountRow row;
        row.path = std::move(path);
        row.n = n;
        row.l = l;
        row.formula = formula;
        row.measured = got;
        row.published = std::move(published);
        if (got) row.match = *got == formula;
        report.rows.push_back(std::move(row));
    };

    std::optional<OpCounter> prod_ctr, term_ctr, add_ctr, div_ctr, naive_ctr;
    if (measured) {
        auto [poly, x] = random_instance(n, {.seed = seed});
        OpCounter c;
        LatticeBuffer products = products_table(x, &c);
        prod_ctr = c;
        c.reset();
        LatticeBuffer work = products;
        term_table(work, poly, &c);
        term_ctr = c;
        const std::vector<double> terms(work.data);
        c.reset();
        std::optional<TruncationPlan> plan;
        if (l && *l < n) plan = truncation_plan(n, *l);
        if (mode == RunMode::parallel)
            parallel_partial_sums(work, plan ? &*plan : nullptr, workers, &c);
        else if (plan)
            fmpd_partial_sums_truncated(work, *plan, &c);
        else
            fmpd_partial_sums(work, &c);
        add_ctr = c;
        c.reset();
        derivatives_from_sums(work, products, poly, l.value_or(n), &c);
        div_ctr = c;
        OpCounter nc;
        naive_sums_from_terms(terms, &nc);
        naive_ctr = nc;
    }

    auto m = [](const std::optional<OpCounter>& c,
                std::uint64_t OpCounter::*field) -> std::optional<std::uint64_t> {
        if (!c) return std::nullopt;
        return (*c).*field;
    };

    add("step1_product_muls", muls_products(n), m(prod_ctr, &OpCounter::multiplications));
    add("step1_term_muls", muls_terms(n), m(term_ctr, &OpCounter::multiplications));
    std::optional<std::uint64_t> step1_total;
    if (prod_ctr) step1_total = prod_ctr->multiplications + term_ctr->multiplications;
    add("step1_muls_total", muls_step1(n), step1_total);
    if (l && *l < n) {
        add("step2_additions_truncated", adds_fmpd_l(n, *l), m(add_ctr, &OpCounter::additions));
        add("step2_additions_full", adds_fmpd(n), std::nullopt);
    } else {
        add("step2_additions", adds_fmpd(n), m(add_ctr, &OpCounter::additions),
            n == 8 ? std::optional<std::string>("1024") : std::nullopt);
    }
    add("step3_divisions", divs_up_to_order(n, l.value_or(n)), m(div_ctr, &OpCounter::divisions));
    add("naive_additions", adds_naive(n), m(naive_ctr, &OpCounter::additions),
        n == 8 ? std::optional<std::string>("6305") : std::nullopt);
    if (l && *l < n) add("naive_additions_order_l", adds_naive_l(n, *l), std::nullopt);
    return report;
}

} // namespace

CountReport formula_report(int n, std::optional<int> l) {
    return build_report(n, l, false, RunMode::sequential, 1, 0);
}

CountReport reconcile(int n, std::optional<int> l, RunMode mode, int workers, std::uint64_t seed) {
    return build_report(n, l, true, mode, workers, seed);
}

} // namespace fmpd::counts
