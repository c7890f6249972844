// Command-line front end: evaluate multilinear polynomials, compute mixed
// derivatives, reproduce the operation-count table, benchmark the transform
// against naive summation, and emit butterfly diagrams as DOT.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fmpd/counts.hpp"
#include "fmpd/diagram.hpp"
#include "fmpd/engine.hpp"
#include "fmpd/io.hpp"
#include "fmpd/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitResource = 3;

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt_value(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

fmpd::EvalPoint parse_inline_point(const std::string& csv) {
    fmpd::EvalPoint x;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = std::min(csv.find(',', pos), csv.size());
        const std::string item = csv.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            x.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad coordinate '" + item + "' in --x");
        }
        pos = comma + 1;
        if (comma == csv.size()) break;
    }
    return x;
}

struct PointArgs {
    std::string point_file;
    std::string inline_x;

    fmpd::EvalPoint load() const {
        if (!point_file.empty() && !inline_x.empty())
            throw std::invalid_argument("use either --point or --x, not both");
        if (!point_file.empty()) return fmpd::load_point_file(point_file);
        if (!inline_x.empty()) return parse_inline_point(inline_x);
        throw std::invalid_argument("a point is required (--point FILE or --x v1,v2,...)");
    }
};

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = std::min(csv.find(',', pos), csv.size());
        const std::string item = csv.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("bad entry '") + item + "' in " + what);
        }
        pos = comma + 1;
        if (comma == csv.size()) break;
    }
    return out;
}

double relative_diff(double got, double want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

int cmd_eval(const std::string& poly_file, const PointArgs& pt, bool check, int digits,
             int workers) {
    const fmpd::MultilinearPoly poly = fmpd::load_poly_file(poly_file);
    const fmpd::EvalPoint x = pt.load();
    const fmpd::DerivativeSet set =
        fmpd::derive_all(poly, x, 0, {.workers = workers});
    const double value = set.at(0);
    std::cout << fmt_value(value, digits) << "\n";
    if (check) {
        const double oracle = fmpd::naive_partial_sum(poly, x, 0);
        std::cout << "check: oracle=" << fmt_value(oracle, digits)
                  << " rel_diff=" << fmt_value(relative_diff(value, oracle), 3) << "\n";
    }
    return kExitOk;
}

int cmd_derive(const std::string& poly_file, const PointArgs& pt, std::optional<int> order,
               const std::string& vars_csv, int workers, int digits) {
    const fmpd::MultilinearPoly poly = fmpd::load_poly_file(poly_file);
    const fmpd::EvalPoint x = pt.load();
    if (order && !vars_csv.empty())
        throw std::invalid_argument("use either --order or --vars, not both");
    if (!order && vars_csv.empty()) throw std::invalid_argument("--order or --vars is required");

    fmpd::VarMask zeros = 0;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k] == 0.0) zeros |= fmpd::VarMask{1} << k;

    std::vector<std::pair<fmpd::VarMask, double>> rows;
    if (order) {
        fmpd::DerivativeSet set = fmpd::derive_all(poly, x, *order, {.workers = workers});
        rows = std::move(set.values);
    } else {
        const std::vector<int> vars = parse_int_list(vars_csv, "--vars");
        const fmpd::VarMask mask = fmpd::mask_of_vars(vars, poly.n());
        double value;
        if (mask & zeros) {
            value = fmpd::safe_derivative(poly, x, mask);
        } else {
            fmpd::LatticeBuffer products = fmpd::products_table(x);
            fmpd::LatticeBuffer work = products;
            fmpd::term_table(work, poly);
            const int l = fmpd::mask_order(mask);
            if (l < poly.n() - 1) {
                const fmpd::TruncationPlan plan = fmpd::truncation_plan(poly.n(), l);
                if (workers > 1)
                    fmpd::parallel_partial_sums(work, &plan, workers);
                else
                    fmpd::fmpd_partial_sums_truncated(work, plan);
            } else if (workers > 1) {
                fmpd::parallel_partial_sums(work, nullptr, workers);
            } else {
                fmpd::fmpd_partial_sums(work);
            }
            const fmpd::VarMask masks[] = {mask};
            value = fmpd::derivatives_from_sums(work, products, poly, masks).at(mask);
        }
        rows.emplace_back(mask, value);
    }

    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        const int oa = fmpd::mask_order(a.first), ob = fmpd::mask_order(b.first);
        return oa != ob ? oa < ob : a.first < b.first;
    });

    if (zeros)
        std::cout << "note: zero coordinates present; affected masks use direct summation\n";
    std::cout << "mask";
    for (int pad = poly.n(); pad > 4; --pad) std::cout << ' ';
    std::cout << "  order  vars            value                      path\n";
    for (const auto& [mask, value] : rows) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-*s  %-5d  %-14s  %-25s  %s\n",
                      std::max(4, poly.n()), fmpd::mask_to_binary(mask, poly.n()).c_str(),
                      fmpd::mask_order(mask), fmpd::mask_vars_label(mask).c_str(),
                      fmt_value(value, digits).c_str(), (mask & zeros) ? "safe" : "fmpd");
        std::cout << line;
    }
    return kExitOk;
}

int cmd_count(int n, std::optional<int> l, bool measure, std::uint64_t seed, bool csv,
              int workers) {
    if (l && (*l < 0 || *l > n)) throw std::invalid_argument("need 0 <= l <= n");
    const fmpd::counts::CountReport report =
        measure ? fmpd::counts::reconcile(n, l,
                                          workers > 1 ? fmpd::counts::RunMode::parallel
                                                      : fmpd::counts::RunMode::sequential,
                                          workers, seed)
                : fmpd::counts::formula_report(n, l);
    std::cout << (csv ? report.to_csv() : report.to_text());
    if (!report.all_match())
        throw VerificationFailure("measured operation counts do not match the formulas");
    return kExitOk;
}

int cmd_table(bool csv) {
    const fmpd::counts::RatioTable table = fmpd::counts::ratio_table();
    if (!csv) {
        std::cout << fmpd::counts::render_ratio_table(table);
        return kExitOk;
    }
    std::cout << "path,n,l,formula,measured,ratio,paper_value,match_flag\n";
    auto rows = [](const char* path, const std::vector<fmpd::counts::RatioCell>& cells,
                   std::optional<int> l) {
        for (const auto& c : cells) {
            std::cout << path << "," << c.n << ",";
            if (l) std::cout << *l;
            std::cout << "," << c.naive << "," << c.fmpd << "," << c.derived << ","
                      << c.published << "," << (c.match ? "ok" : "mismatch") << "\n";
        }
    };
    rows("ratio_full_order", table.full_order, std::nullopt);
    rows("ratio_order_two", table.order_two, 2);
    return kExitOk;
}

int cmd_bench(const std::string& n_csv, std::optional<int> order, int workers, int reps,
              std::uint64_t seed, bool csv) {
    using clock = std::chrono::steady_clock;
    if (reps < 1) throw std::invalid_argument("--reps must be >= 1");
    const std::vector<int> sizes = parse_int_list(n_csv, "--n");
    if (csv) std::cout << "n,l,adds_fmpd,adds_naive,add_ratio,fmpd_us,naive_us,speedup,hash\n";
    for (const int n : sizes) {
        if (n < 1) throw std::invalid_argument("bench: n must be >= 1");
        const auto [poly, x] = fmpd::random_instance(n, {.seed = seed});
        const int l = order ? std::min(*order, n) : n;

        fmpd::LatticeBuffer terms = fmpd::products_table(x);
        fmpd::term_table(terms, poly);

        std::optional<fmpd::TruncationPlan> plan;
        if (l < n - 1) plan = fmpd::truncation_plan(n, l);

        auto run_fmpd = [&](fmpd::OpCounter* ctr) {
            fmpd::LatticeBuffer work = terms;
            if (workers > 1)
                fmpd::parallel_partial_sums(work, plan ? &*plan : nullptr, workers, ctr);
            else if (plan)
                fmpd::fmpd_partial_sums_truncated(work, *plan, ctr);
            else
                fmpd::fmpd_partial_sums(work, ctr);
            return work;
        };

        // verify agreement before timing anything
        fmpd::OpCounter fmpd_ctr, naive_ctr;
        const fmpd::LatticeBuffer sums = run_fmpd(&fmpd_ctr);
        const std::vector<double> naive = fmpd::naive_sums_from_terms(terms.data, &naive_ctr);
        double scale = 0.0;
        for (double q : terms.data) scale += std::abs(q);
        scale = std::max(scale, 1e-300);
        for (std::size_t i = 0; i < sums.size(); ++i) {
            if (plan && fmpd::mask_order(i) > l) continue;
            if (std::abs(sums[i] - naive[i]) / scale > 1e-12)
                throw VerificationFailure("bench: transform disagrees with naive summation at n=" +
                                          std::to_string(n));
        }

        auto median_time_us = [&](auto&& body) {
            std::vector<double> us;
            for (int r = 0; r < reps; ++r) {
                const auto t0 = clock::now();
                body();
                const auto t1 = clock::now();
                us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
            }
            std::sort(us.begin(), us.end());
            return us[us.size() / 2];
        };
        volatile double sink = 0.0;
        const double fmpd_us = median_time_us([&] {
            const fmpd::LatticeBuffer work = run_fmpd(nullptr);
            sink = sink + work[0];
        });
        const double naive_us = median_time_us([&] {
            const std::vector<double> got = fmpd::naive_sums_from_terms(terms.data);
            sink = sink + got[0];
        });

        const std::uint64_t hash = fmpd::instance_hash(poly, x);
        const double ratio =
            static_cast<double>(naive_ctr.additions) / static_cast<double>(fmpd_ctr.additions);
        char line[256];
        if (csv) {
            std::snprintf(line, sizeof(line), "%d,%d,%llu,%llu,%.4f,%.3f,%.3f,%.2f,%016llx\n", n,
                          l, static_cast<unsigned long long>(fmpd_ctr.additions),
                          static_cast<unsigned long long>(naive_ctr.additions), ratio, fmpd_us,
                          naive_us, naive_us / fmpd_us, static_cast<unsigned long long>(hash));
        } else {
            std::snprintf(line, sizeof(line),
                          "n=%-3d l=%-3d adds_fmpd=%-8llu adds_naive=%-8llu add_ratio=%-7.4g "
                          "fmpd_us=%-10.3f naive_us=%-10.3f speedup=%-7.2f hash=%016llx\n",
                          n, l, static_cast<unsigned long long>(fmpd_ctr.additions),
                          static_cast<unsigned long long>(naive_ctr.additions), ratio, fmpd_us,
                          naive_us, naive_us / fmpd_us, static_cast<unsigned long long>(hash));
        }
        std::cout << line;
    }
    return kExitOk;
}

int cmd_diagram(int n, std::optional<int> l, const std::string& format) {
    if (format != "dot") throw std::invalid_argument("unsupported --format (only 'dot')");
    std::cout << fmpd::butterfly_dot(n, l);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fast multilinear polynomial derivatives"};
    app.require_subcommand(1);

    std::string poly_file, vars_csv, n_csv, format = "dot";
    PointArgs pt;
    bool check = false, measure = false, csv = false;
    int digits = 17, workers = 1, n = 0, reps = 5;
    std::uint64_t seed = 42;
    std::optional<int> order, diagram_l, count_l;

    auto* eval = app.add_subcommand("eval", "evaluate the polynomial at a point");
    eval->add_option("--poly", poly_file, "polynomial file")->required();
    eval->add_option("--point", pt.point_file, "point file");
    eval->add_option("--x", pt.inline_x, "inline coordinates v1,v2,...");
    eval->add_flag("--check", check, "also run the brute-force oracle");
    eval->add_option("--digits", digits, "significant digits to print");
    eval->add_option("--workers", workers, "worker threads");

    auto* derive = app.add_subcommand("derive", "compute mixed partial derivatives");
    derive->add_option("--poly", poly_file, "polynomial file")->required();
    derive->add_option("--point", pt.point_file, "point file");
    derive->add_option("--x", pt.inline_x, "inline coordinates v1,v2,...");
    int order_value = -1;
    derive->add_option("--order", order_value, "all derivatives up to this order");
    derive->add_option("--vars", vars_csv, "one derivative by variable list k1,k2,...");
    derive->add_option("--workers", workers, "worker threads");
    derive->add_option("--digits", digits, "significant digits to print");

    auto* count = app.add_subcommand("count", "operation-count formulas and measurements");
    count->add_option("n", n, "variable count")->required();
    int count_l_value = -1;
    count->add_option("l", count_l_value, "truncation order");
    count->add_flag("--measure", measure, "run the instrumented pipeline and compare");
    count->add_option("--seed", seed, "instance seed for --measure");
    count->add_option("--workers", workers, "worker threads for --measure");
    count->add_flag("--csv", csv, "CSV output");

    auto* table = app.add_subcommand("table", "additions-ratio table vs published values");
    table->add_flag("--csv", csv, "CSV output");

    auto* bench = app.add_subcommand("bench", "time the transform against naive summation");
    bench->add_option("--n", n_csv, "comma-separated sizes")->required();
    int bench_order = -1;
    bench->add_option("--order", bench_order, "truncate to this derivative order");
    bench->add_option("--workers", workers, "worker threads");
    bench->add_option("--reps", reps, "repetitions per timing");
    bench->add_option("--seed", seed, "instance seed");
    bench->add_flag("--csv", csv, "CSV output");

    auto* diagram = app.add_subcommand("diagram", "emit the butterfly diagram");
    diagram->add_option("n", n, "variable count (<= 8)")->required();
    int diagram_l_value = -1;
    diagram->add_option("l", diagram_l_value, "truncation order (dashed omitted additions)");
    diagram->add_option("--format", format, "output format (dot)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (order_value >= 0) order = order_value;
    if (count_l_value >= 0) count_l = count_l_value;
    if (diagram_l_value >= 0) diagram_l = diagram_l_value;
    std::optional<int> bench_l;
    if (bench_order >= 0) bench_l = bench_order;

    try {
        if (eval->parsed()) return cmd_eval(poly_file, pt, check, digits, workers);
        if (derive->parsed()) return cmd_derive(poly_file, pt, order, vars_csv, workers, digits);
        if (count->parsed()) return cmd_count(n, count_l, measure, seed, csv, workers);
        if (table->parsed()) return cmd_table(csv);
        if (bench->parsed()) return cmd_bench(n_csv, bench_l, workers, reps, seed, csv);
        if (diagram->parsed()) return cmd_diagram(n, diagram_l, format);
        std::cerr << "error: no subcommand\n";
        return kExitUsage;
    } catch (const VerificationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const fmpd::ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
