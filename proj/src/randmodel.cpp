#include "ajd/randmodel.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace ajd {
namespace randmodel {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix64(seed + kGolden * (a + 1)) ^ mix64(b + kGolden);
}

struct U128Hash {
    std::size_t operator()(u128 v) const noexcept {
        return mix64(static_cast<std::uint64_t>(v) ^ mix64(static_cast<std::uint64_t>(v >> 64)));
    }
};

// Product-space threshold below which the partial Fisher-Yates path is used.
constexpr u128 kShuffleLimit = u128{1} << 26;

}  // namespace

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x5851f42d4c957f2dull)) {}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += kGolden);
    return mix64(z);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    if (bound == 0) throw InternalError("uniform draw with zero bound");
    const std::uint64_t threshold = (-bound) % bound;  // (2^64 - bound) mod bound
    while (true) {
        std::uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

u128 SplitMix64::below128(u128 bound) {
    if (bound == 0) throw InternalError("uniform draw with zero bound");
    const u128 threshold = (-bound) % bound;
    while (true) {
        u128 r = (u128{next()} << 64) | next();
        if (r >= threshold) return r % bound;
    }
}

u128 RandomModelSpec::product() const {
    if (dims.empty()) throw Error("random model needs at least one attribute");
    u128 prod = 1;
    for (std::uint64_t d : dims) {
        if (d == 0) throw Error("domain sizes must be positive");
        if (mul_overflows(prod, u128{d}, prod)) throw Error("domain product overflows");
    }
    return prod;
}

void RandomModelSpec::check() const {
    u128 prod = product();
    if (n == 0) throw Error("random model needs N >= 1");
    if (u128{n} > prod)
        throw Error("N = " + std::to_string(n) + " exceeds the product space of size " +
                    to_string_u128(prod));
}

std::vector<u128> sample_cells(const RandomModelSpec &spec, std::uint32_t trial) {
    spec.check();
    const u128 total = spec.product();
    SplitMix64 rng(spec.seed, trial);
    std::vector<u128> cells;
    cells.reserve(spec.n);

    if (total <= kShuffleLimit) {
        // Floyd's partial-shuffle subset sampling over [0, total) with a
        // bitset membership table: at step j a uniform r <= j is taken, or j
        // itself when r is already in the sample. Exactly uniform, O(N) time,
        // one bit per cell.
        const std::uint64_t d = static_cast<std::uint64_t>(total);
        std::vector<bool> taken(d, false);
        for (std::uint64_t j = d - spec.n; j < d; ++j) {
            std::uint64_t r = rng.below(j + 1);
            std::uint64_t pick = taken[r] ? j : r;
            taken[pick] = true;
            cells.push_back(pick);
        }
        return cells;
    }

    if (u128{spec.n} * 2 <= total) {
        // Sparse regime: rejection into a set of 128-bit cell indices.
        std::unordered_set<u128, U128Hash> seen;
        seen.reserve(spec.n * 2);
        while (cells.size() < spec.n) {
            u128 c = rng.below128(total);
            if (seen.insert(c).second) cells.push_back(c);
        }
        return cells;
    }

    // Dense regime: sample the complement, then emit everything else.
    const u128 k = total - u128{spec.n};
    std::unordered_set<u128, U128Hash> excluded;
    excluded.reserve(static_cast<std::size_t>(k) * 2);
    while (excluded.size() < static_cast<std::size_t>(k)) excluded.insert(rng.below128(total));
    for (u128 c = 0; c < total; ++c)
        if (!excluded.count(c)) cells.push_back(c);
    return cells;
}

Relation sample_relation(const RandomModelSpec &spec, std::uint32_t trial) {
    auto cells = sample_cells(spec, trial);
    const std::size_t k = spec.dims.size();
    std::vector<AttributeSchema::Attribute> attrs(k);
    for (std::size_t i = 0; i < k; ++i) {
        attrs[i].name = "X" + std::to_string(i);
        attrs[i].declared = true;
        attrs[i].domain_size = spec.dims[i];
    }
    auto schema = std::make_shared<AttributeSchema>(std::move(attrs));
    std::vector<Tuple> rows;
    rows.reserve(cells.size());
    for (u128 c : cells) {
        Tuple t(k);
        for (std::size_t i = k; i-- > 0;) {
            t[i] = static_cast<Value>(c % spec.dims[i]);
            c /= spec.dims[i];
        }
        rows.push_back(std::move(t));
    }
    return Relation(std::move(schema), std::move(rows));
}

namespace {

double entropy_of_counts(const std::vector<std::uint64_t> &hist, std::uint64_t n) {
    std::vector<double> terms;
    for (std::uint64_t k : hist)
        if (k > 1) terms.push_back(static_cast<double>(k) * std::log(static_cast<double>(k)));
    return std::log(static_cast<double>(n)) - stable_sum(std::move(terms)) / static_cast<double>(n);
}

TrialResult run_one_trial(const RandomModelSpec &spec, std::uint32_t trial, double delta) {
    const std::uint64_t da = spec.dims[0];
    const std::uint64_t db = spec.dims[1];
    const std::uint64_t dc = spec.dims.size() == 3 ? spec.dims[2] : 1;
    if (da * dc > (1ull << 30) || db * dc > (1ull << 30))
        throw Error("marginal histogram would exceed memory budget");

    std::vector<std::uint64_t> hist_ac(da * dc, 0), hist_bc(db * dc, 0), hist_c(dc, 0);
    {
        auto cells = sample_cells(spec, trial);
        for (u128 cell : cells) {
            std::uint64_t c = static_cast<std::uint64_t>(cell % dc);
            std::uint64_t rest = static_cast<std::uint64_t>(cell / dc);
            std::uint64_t b, a;
            if (spec.dims.size() == 3) {
                b = rest % db;
                a = rest / db;
            } else {
                // two attributes: layout is a*dB + b
                b = static_cast<std::uint64_t>(cell % db);
                a = static_cast<std::uint64_t>(cell / db);
                c = 0;
            }
            ++hist_ac[a * dc + c];
            ++hist_bc[b * dc + c];
            ++hist_c[c];
        }
    }

    const std::uint64_t n = spec.n;
    TrialResult out;
    out.trial = trial;

    std::vector<std::uint64_t> hist_a(da, 0), hist_b(db, 0);
    for (std::uint64_t a = 0; a < da; ++a)
        for (std::uint64_t c = 0; c < dc; ++c) hist_a[a] += hist_ac[a * dc + c];
    for (std::uint64_t b = 0; b < db; ++b)
        for (std::uint64_t c = 0; c < dc; ++c) hist_b[b] += hist_bc[b * dc + c];

    out.h_a = entropy_of_counts(hist_a, n);
    out.h_b = entropy_of_counts(hist_b, n);
    out.h_c = entropy_of_counts(hist_c, n);
    const double h_ac = entropy_of_counts(hist_ac, n);
    const double h_bc = entropy_of_counts(hist_bc, n);
    const double h_abc = std::log(static_cast<double>(n));  // distinct tuples, uniform
    out.i_nats = std::max(0.0, h_bc + h_ac - h_abc - out.h_c);

    // Join size of the support MVD, one term per condition value:
    // Σ_c |π_A(R_c)| · |π_B(R_c)|.
    u128 join = 0;
    for (std::uint64_t c = 0; c < dc; ++c) {
        std::uint64_t na = 0, nb = 0;
        for (std::uint64_t a = 0; a < da; ++a) na += hist_ac[a * dc + c] > 0;
        for (std::uint64_t b = 0; b < db; ++b) nb += hist_bc[b * dc + c] > 0;
        u128 term;
        if (mul_overflows(u128{na}, u128{nb}, term) || add_overflows(join, term, join))
            throw Error("join-size count overflow");
    }
    out.rho = static_cast<double>(join - n) / static_cast<double>(n);
    out.log1p_rho = std::log1p(out.rho);

    auto eps = bounds::epsilon_star(bounds::MvdDims::normalized(da, db, dc), n, delta);
    out.epsilon = eps.epsilon;
    out.epsilon_condition_ok = eps.condition_ok;
    out.mvd_bound_pass = out.log1p_rho <= out.i_nats + out.epsilon + 1e-12;

    if (dc == 1) {
        auto eb = bounds::entropy_confidence(da, db, n, delta);
        auto mb = bounds::mi_confidence(da, db, n, delta);
        const double h_big = da >= db ? out.h_a : out.h_b;  // bound speaks of the larger side
        const double log_dmax = std::log(static_cast<double>(std::max(da, db)));
        out.entropy_lower = eb.lower;
        out.entropy_pass = h_big >= eb.lower - 1e-12 && h_big <= log_dmax + 1e-9;
        out.mi_lower = mb.lower;
        out.rho_bar = mb.rho_bar;
        out.mi_pass = out.i_nats >= mb.lower - 1e-12;
    }
    return out;
}

}  // namespace

unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("AJD_THREADS")) {
        char *end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v >= 1) hw = std::min<unsigned long>(hw, v);
    }
    return hw;
}

std::vector<TrialResult> run_mvd_trials(const RandomModelSpec &spec, double delta) {
    if (spec.dims.size() != 2 && spec.dims.size() != 3)
        throw Error("MVD trials need 2 or 3 attributes (A, B and optionally C)");
    spec.check();
    std::vector<TrialResult> out(spec.trials);
    const unsigned workers = std::min<unsigned>(thread_budget(), std::max(1u, spec.trials));
    std::atomic<std::uint32_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        while (true) {
            std::uint32_t i = cursor.fetch_add(1);
            if (i >= spec.trials) return;
            try {
                out[i] = run_one_trial(spec, i, delta);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(body);
        for (auto &t : threads) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<ScatterRow> scatter_experiment(std::uint64_t d, std::vector<double> rho_targets,
                                           std::uint32_t trials, std::uint64_t seed) {
    if (d < 1) throw Error("scatter experiment needs d >= 1");
    std::vector<ScatterRow> rows;
    for (std::size_t ti = 0; ti < rho_targets.size(); ++ti) {
        const double target = rho_targets[ti];
        if (target < 0.0) throw Error("target spurious ratio cannot be negative");
        const double n_real = static_cast<double>(d) * static_cast<double>(d) / (1.0 + target);
        const std::uint64_t n = static_cast<std::uint64_t>(std::llround(n_real));
        if (n < 1) throw Error("target rho " + fmt_double(target) + " leaves no tuples at d = " +
                               std::to_string(d));
        RandomModelSpec spec;
        spec.dims = {d, d};
        spec.n = n;
        spec.seed = derive_seed(seed, d, ti);
        spec.trials = trials;
        auto results = run_mvd_trials(spec, 0.1);
        for (const auto &t : results) {
            ScatterRow row;
            row.trial = t.trial;
            row.d = d;
            row.n = n;
            row.rho_target = target;
            row.log1p_rho_target = std::log1p(target);
            row.rho = t.rho;
            row.log1p_rho = t.log1p_rho;
            row.i_nats = t.i_nats;
            rows.push_back(row);
        }
    }
    return rows;
}

WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n) {
    if (n == 0) throw Error("Wilson interval of an empty sample");
    if (k > n) throw Error("successes exceed trials");
    constexpr double z = 1.959963984540054;  // 95%
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = (z / denom) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace randmodel
}  // namespace ajd
