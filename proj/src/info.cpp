#include "ajd/info.hpp"

#include <cmath>
#include <limits>

namespace ajd {

const char *log_base_name(LogBase base) { return base == LogBase::E ? "e" : "2"; }

LogBase parse_log_base(const std::string &name) {
    if (name == "e") return LogBase::E;
    if (name == "2") return LogBase::Two;
    throw Error("log base must be 'e' or '2', got '" + name + "'");
}

namespace info {

namespace {

constexpr double kEntropyClamp = 1e-12;
constexpr double kCmiClamp = 1e-12;

double clamp_nonneg(double v, double tol, const char *what) {
    if (v >= 0.0) return v;
    if (v >= -tol) return 0.0;
    throw InternalError(std::string(what) + " came out " + fmt_double(v) +
                        ", beyond rounding tolerance");
}

double cmi_from(double h_bc, double h_ac, double h_abc, double h_c) {
    return clamp_nonneg(h_bc + h_ac - h_abc - h_c, kCmiClamp, "conditional mutual information");
}

}  // namespace

double entropy(const EmpiricalDistribution &p, AttrMask attrs) {
    auto counts = p.marginal_counts(attrs);
    if (counts.size() == 1) return 0.0;  // constant marginal, H(empty set) included
    std::vector<double> terms;
    terms.reserve(counts.size());
    for (const auto &[t, k] : counts)
        if (k > 1) terms.push_back(static_cast<double>(k) * std::log(static_cast<double>(k)));
    const double n = static_cast<double>(p.N());
    double h = std::log(n) - stable_sum(std::move(terms)) / n;
    return clamp_nonneg(h, kEntropyClamp, "entropy");
}

double entropy(const Distribution &p, AttrMask attrs) {
    auto marg = p.marginal(attrs);
    std::vector<double> terms;
    terms.reserve(marg.size());
    for (const auto &[t, q] : marg)
        if (q > 0.0) terms.push_back(-q * std::log(q));
    return clamp_nonneg(stable_sum(std::move(terms)), kEntropyClamp, "entropy");
}

double cond_mutual_info(const EmpiricalDistribution &p, AttrMask a, AttrMask b, AttrMask c) {
    return cmi_from(entropy(p, b | c), entropy(p, a | c), entropy(p, a | b | c), entropy(p, c));
}

double cond_mutual_info(const Distribution &p, AttrMask a, AttrMask b, AttrMask c) {
    return cmi_from(entropy(p, b | c), entropy(p, a | c), entropy(p, a | b | c), entropy(p, c));
}

double kl_divergence(const Distribution &p, const Distribution &q) {
    if (!p.same_schema(q)) throw Error("KL divergence requires matching schemas");
    std::vector<double> terms;
    terms.reserve(p.support_size());
    for (const auto &[t, pm] : p.support()) {
        double qm = q.mass(t);
        if (qm == 0.0) return std::numeric_limits<double>::infinity();
        terms.push_back(pm * (std::log(pm) - std::log(qm)));
    }
    double d = stable_sum(std::move(terms));
    if (d < 0.0 && d >= -kEntropyClamp) d = 0.0;
    return d;
}

double functional_entropy(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size())
        throw Error("functional entropy: values and weights differ in length");
    if (values.empty()) throw Error("functional entropy of an empty sample");
    std::vector<double> wsum, xlogx, mean;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double x = values[i], w = weights[i];
        if (x < 0.0) throw Error("functional entropy requires non-negative samples");
        if (w < 0.0) throw Error("weights must be non-negative");
        wsum.push_back(w);
        mean.push_back(w * x);
        if (x > 0.0) xlogx.push_back(w * x * std::log(x));
    }
    if (std::fabs(stable_sum(wsum) - 1.0) > 1e-9)
        throw Error("weights must sum to 1");
    double ex = stable_sum(std::move(mean));
    double exlogx = stable_sum(std::move(xlogx));
    double ent = exlogx - (ex > 0.0 ? ex * std::log(ex) : 0.0);
    return clamp_nonneg(ent, kEntropyClamp, "functional entropy");
}

}  // namespace info

}  // namespace ajd
