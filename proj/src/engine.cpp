#include "fmpd/engine.hpp"

#include <algorithm>
#include <barrier>
#include <bit>
#include <cmath>
#include <thread>

#include "fmpd/kernels.hpp"
#include "fmpd/oracle.hpp"

namespace fmpd {

namespace {

void require_lattice(const LatticeBuffer& buf) {
    if (buf.n < 1 || buf.size() != (std::size_t{1} << buf.n))
        throw std::invalid_argument("lattice buffer length must be 2^n");
}

// Executes selection positions [a, b) of one cluster: data[j] += data[j+dist]
// for the offsets the runs select, ascending.
void run_cluster_range(double* cluster, std::size_t dist, std::span<const OffsetRun> runs,
                       std::uint64_t a, std::uint64_t b, const kernels::Kernels& k,
                       OpCounter* counter) {
    std::uint64_t pos = 0;
    for (const OffsetRun& r : runs) {
        if (pos >= b) break;
        const std::uint64_t run_end = pos + r.len;
        if (run_end > a) {
            const std::uint64_t from = std::max(a, pos);
            const std::uint64_t to = std::min(b, run_end);
            double* dst = cluster + r.start + (from - pos);
            const std::size_t len = static_cast<std::size_t>(to - from);
            if (counter) {
                for (std::size_t i = 0; i < len; ++i) {
                    dst[i] += dst[i + dist];
                    ++counter->additions;
                }
            } else {
                k.add_arrays(dst, dst + dist, len);
            }
        }
        pos = run_end;
    }
}

struct SiloSchedule {
    std::size_t dist;                    // addend distance 2^(s-1)
    std::span<const OffsetRun> runs;     // selected offsets per cluster
    std::uint64_t per_cluster;           // selected additions per cluster
    std::uint64_t base;                  // additions before this silo
};

// Full-transform patterns are a single run per silo; storage for the spans.
struct Schedule {
    std::vector<OffsetRun> full_runs;    // one per silo when plan == nullptr
    std::vector<SiloSchedule> silos;
    std::uint64_t total = 0;
};

Schedule build_schedule(int n, const TruncationPlan* plan) {
    Schedule sched;
    sched.silos.reserve(static_cast<std::size_t>(n));
    if (!plan) {
        sched.full_runs.resize(static_cast<std::size_t>(n));
        for (int s = 1; s <= n; ++s) {
            const std::size_t d = std::size_t{1} << (s - 1);
            sched.full_runs[static_cast<std::size_t>(s - 1)] = {0, d};
        }
    }
    for (int s = 1; s <= n; ++s) {
        const std::size_t d = std::size_t{1} << (s - 1);
        SiloSchedule silo;
        silo.dist = d;
        if (plan) {
            const SiloPattern& pat = plan->silos[static_cast<std::size_t>(s - 1)];
            silo.runs = pat.runs;
            silo.per_cluster = pat.per_cluster;
        } else {
            silo.runs = {&sched.full_runs[static_cast<std::size_t>(s - 1)], 1};
            silo.per_cluster = d;
        }
        silo.base = sched.total;
        sched.total += silo.per_cluster * (std::uint64_t{1} << (n - s));
        sched.silos.push_back(silo);
    }
    return sched;
}

// Executes silo-local selection indices [a, b), ascending destination order.
void run_silo_range(double* data, const SiloSchedule& silo, std::uint64_t a, std::uint64_t b,
                    const kernels::Kernels& k, OpCounter* counter) {
    if (a >= b || silo.per_cluster == 0) return;
    const std::uint64_t stride = 2 * silo.dist;
    const std::uint64_t first_cluster = a / silo.per_cluster;
    const std::uint64_t last_cluster = (b - 1) / silo.per_cluster;
    for (std::uint64_t c = first_cluster; c <= last_cluster; ++c) {
        const std::uint64_t ca = (c == first_cluster) ? a - c * silo.per_cluster : 0;
        const std::uint64_t cb = (c == last_cluster) ? b - c * silo.per_cluster : silo.per_cluster;
        run_cluster_range(data + c * stride, silo.dist, silo.runs, ca, cb, k, counter);
    }
}

void partial_sums_sequential(LatticeBuffer& buf, const TruncationPlan* plan, OpCounter* counter) {
    buf.require_stage(Stage::terms);
    require_lattice(buf);
    if (plan && plan->n != buf.n)
        throw std::invalid_argument("truncation plan dimension mismatch");
    const Schedule sched = build_schedule(buf.n, plan);
    const kernels::Kernels& k = kernels::active();
    for (const SiloSchedule& silo : sched.silos) {
        const std::uint64_t count = silo.per_cluster * (buf.size() / (2 * silo.dist));
        run_silo_range(buf.data.data(), silo, 0, count, k, counter);
    }
    buf.stage = Stage::partial_sums;
}

} // namespace

LatticeBuffer products_table(const EvalPoint& x, OpCounter* counter) {
    check_point(x);
    const int n = static_cast<int>(x.size());
    LatticeBuffer buf;
    buf.n = n;
    buf.stage = Stage::products;
    buf.data.assign(std::size_t{1} << n, 0.0);
    const kernels::Kernels& k = kernels::active();
    buf[0] = 1.0;
    for (int v = 1; v <= n; ++v) {
        const std::size_t base = std::size_t{1} << (v - 1);
        const double xv = x[static_cast<std::size_t>(v - 1)];
        buf[base] = xv;
        if (base < 2) continue;
        double* dst = buf.data.data() + base + 1;
        const double* src = buf.data.data() + 1;
        const std::size_t len = base - 1;
        if (counter) {
            for (std::size_t j = 0; j < len; ++j) {
                dst[j] = xv * src[j];
                ++counter->multiplications;
            }
        } else {
            k.scale_into(dst, src, xv, len);
        }
    }
    return buf;
}

void term_table(LatticeBuffer& buf, const MultilinearPoly& poly, OpCounter* counter) {
    buf.require_stage(Stage::products);
    require_lattice(buf);
    if (buf.n != poly.n()) throw std::invalid_argument("products/polynomial dimension mismatch");
    buf[0] = poly.coeff(0);  // products[0] == 1, assignment only
    double* dst = buf.data.data() + 1;
    const double* coeffs = poly.coeffs().data() + 1;
    const std::size_t len = buf.size() - 1;
    if (counter) {
        for (std::size_t i = 0; i < len; ++i) {
            dst[i] *= coeffs[i];
            ++counter->multiplications;
        }
    } else {
        kernels::active().mul_arrays(dst, coeffs, len);
    }
    buf.stage = Stage::terms;
}

void fmpd_partial_sums(LatticeBuffer& buf, OpCounter* counter) {
    partial_sums_sequential(buf, nullptr, counter);
}

void fmpd_partial_sums_truncated(LatticeBuffer& buf, const TruncationPlan& plan,
                                 OpCounter* counter) {
    partial_sums_sequential(buf, &plan, counter);
}

void parallel_partial_sums(LatticeBuffer& buf, const TruncationPlan* plan, int workers,
                           OpCounter* counter, std::vector<std::uint64_t>* per_worker_additions) {
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
    buf.require_stage(Stage::terms);
    require_lattice(buf);
    if (plan && plan->n != buf.n)
        throw std::invalid_argument("truncation plan dimension mismatch");

    const Schedule sched = build_schedule(buf.n, plan);
    if (workers == 1) {
        OpCounter local;
        partial_sums_sequential(buf, plan, counter ? &local : nullptr);
        if (counter) *counter += local;
        if (per_worker_additions) *per_worker_additions = {counter ? local.additions : sched.total};
        return;
    }

    const kernels::Kernels& k = kernels::active();
    const std::uint64_t m = static_cast<std::uint64_t>(workers);
    std::vector<OpCounter> local(static_cast<std::size_t>(workers));
    std::barrier sync(workers);
    double* data = buf.data.data();

    // Worker w owns the global addition range [total*w/m, total*(w+1)/m) of
    // the silo-concatenated schedule; within each silo that is a contiguous
    // ascending destination range disjoint from every other worker's.
    auto work = [&](int w) {
        const std::uint64_t lo = sched.total * static_cast<std::uint64_t>(w) / m;
        const std::uint64_t hi = sched.total * static_cast<std::uint64_t>(w + 1) / m;
        OpCounter* ctr = counter ? &local[static_cast<std::size_t>(w)] : nullptr;
        OpCounter tally;  // used only to report per-worker additions
        OpCounter* eff = ctr ? ctr : (per_worker_additions ? &tally : nullptr);
        for (const SiloSchedule& silo : sched.silos) {
            const std::uint64_t count =
                silo.per_cluster * (buf.size() / (2 * silo.dist));
            const std::uint64_t a = std::clamp(lo, silo.base, silo.base + count) - silo.base;
            const std::uint64_t b = std::clamp(hi, silo.base, silo.base + count) - silo.base;
            run_silo_range(data, silo, a, b, k, eff);
            sync.arrive_and_wait();
        }
        if (!ctr && per_worker_additions) local[static_cast<std::size_t>(w)] = tally;
    };

    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers - 1));
    for (int w = 1; w < workers; ++w) threads.emplace_back(work, w);
    work(0);
    for (auto& t : threads) t.join();

    if (per_worker_additions) {
        per_worker_additions->clear();
        for (const OpCounter& c : local) per_worker_additions->push_back(c.additions);
    }
    if (counter)
        for (const OpCounter& c : local) *counter += c;
    buf.stage = Stage::partial_sums;
}

const double* DerivativeSet::find(VarMask mask) const {
    auto it = std::lower_bound(values.begin(), values.end(), mask,
                               [](const auto& p, VarMask m) { return p.first < m; });
    if (it == values.end() || it->first != mask) return nullptr;
    return &it->second;
}

double DerivativeSet::at(VarMask mask) const {
    const double* v = find(mask);
    if (!v) throw std::out_of_range("derivative mask not present in set");
    return *v;
}

namespace {

// Zero coordinates, read off the single-bit product entries (assigned, never
// computed, so exact-0.0 detection is reliable).
VarMask zero_coordinate_mask(const LatticeBuffer& products) {
    VarMask zeros = 0;
    for (int kbit = 0; kbit < products.n; ++kbit)
        if (products[std::size_t{1} << kbit] == 0.0) zeros |= VarMask{1} << kbit;
    return zeros;
}

void require_step3_inputs(const LatticeBuffer& sums, const LatticeBuffer& products,
                          const MultilinearPoly& poly) {
    sums.require_stage(Stage::partial_sums);
    products.require_stage(Stage::products);
    require_lattice(sums);
    require_lattice(products);
    if (sums.n != products.n || sums.n != poly.n())
        throw std::invalid_argument("step 3 buffer/polynomial dimension mismatch");
}

double divide_for_mask(const LatticeBuffer& sums, const LatticeBuffer& products,
                       const MultilinearPoly& poly, VarMask zeros, VarMask mask,
                       OpCounter* counter) {
    if (mask == 0) return sums[0];
    if (mask == poly.full_mask()) return poly.coeff(mask);
    if (mask & zeros)
        throw ZeroCoordinateError("derivative mask touches a zero coordinate; "
                                  "use safe_derivative");
    if (counter) ++counter->divisions;
    return sums[mask] / products[mask];
}

} // namespace

DerivativeSet derivatives_from_sums(const LatticeBuffer& sums, const LatticeBuffer& products,
                                    const MultilinearPoly& poly, int max_order,
                                    OpCounter* counter) {
    require_step3_inputs(sums, products, poly);
    if (max_order < 0 || max_order > poly.n())
        throw std::invalid_argument("derivative order out of range");
    const VarMask zeros = zero_coordinate_mask(products);
    if (zeros != 0 && max_order >= 1)
        throw ZeroCoordinateError("point has a zero coordinate; use safe_derivative "
                                  "for masks touching it");

    DerivativeSet out;
    out.n = poly.n();
    out.max_order = max_order;
    const std::size_t size = sums.size();

    if (max_order == poly.n() && counter == nullptr && size >= 2) {
        // dense fast path: one elementwise division sweep over 1..2^n-2
        out.values.resize(size);
        std::vector<double> quot(size);
        kernels::active().div_into(quot.data() + 1, sums.data.data() + 1,
                                   products.data.data() + 1, size - 2);
        out.values[0] = {0, sums[0]};
        for (std::size_t i = 1; i + 1 < size; ++i) out.values[i] = {i, quot[i]};
        out.values[size - 1] = {poly.full_mask(), poly.coeff(poly.full_mask())};
        return out;
    }

    for (VarMask mask = 0; mask < size; ++mask) {
        if (mask_order(mask) > max_order) continue;
        out.values.emplace_back(mask, divide_for_mask(sums, products, poly, zeros, mask, counter));
    }
    return out;
}

DerivativeSet derivatives_from_sums(const LatticeBuffer& sums, const LatticeBuffer& products,
                                    const MultilinearPoly& poly, std::span<const VarMask> masks,
                                    OpCounter* counter) {
    require_step3_inputs(sums, products, poly);
    const VarMask zeros = zero_coordinate_mask(products);
    DerivativeSet out;
    out.n = poly.n();
    out.max_order = 0;
    for (VarMask mask : masks) {
        if (mask >= sums.size()) throw std::invalid_argument("derivative mask out of range");
        out.max_order = std::max(out.max_order, mask_order(mask));
        out.values.emplace_back(mask, divide_for_mask(sums, products, poly, zeros, mask, counter));
    }
    std::sort(out.values.begin(), out.values.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

double safe_derivative(const MultilinearPoly& poly, const EvalPoint& x, VarMask mask) {
    return naive_derivative(poly, x, mask);
}

DerivativeSet derive_all(const MultilinearPoly& poly, const EvalPoint& x, int l,
                         const DeriveOptions& opts) {
    check_point(x);
    check_same_n(poly, x);
    if (l < 0 || l > poly.n())
        throw std::invalid_argument("derivative order must be in [0, n]");

    OpCounter* counter = opts.counter;
    const LatticeBuffer products = products_table(x, counter);
    LatticeBuffer work = products;
    term_table(work, poly, counter);

    std::optional<TruncationPlan> plan;
    if (l < poly.n() - 1) plan = truncation_plan(poly.n(), l);
    if (opts.workers > 1)
        parallel_partial_sums(work, plan ? &*plan : nullptr, opts.workers, counter);
    else if (plan)
        fmpd_partial_sums_truncated(work, *plan, counter);
    else
        fmpd_partial_sums(work, counter);

    const VarMask zeros = zero_coordinate_mask(products);
    DerivativeSet out;
    out.n = poly.n();
    out.max_order = l;
    for (VarMask mask = 0; mask < work.size(); ++mask) {
        if (mask_order(mask) > l) continue;
        double value;
        if (mask & zeros)
            value = safe_derivative(poly, x, mask);
        else
            value = divide_for_mask(work, products, poly, zeros, mask, counter);
        out.values.emplace_back(mask, value);
    }
    return out;
}

} // namespace fmpd
