#include "ajd/report.hpp"

#include <cmath>
#include <sstream>

namespace ajd {
namespace report {

namespace {

Json json_u128(u128 v) {
    if (v <= u128{1ull << 53}) return static_cast<std::uint64_t>(v);
    return to_string_u128(v);  // too wide for a JSON number, keep it exact
}

std::vector<std::string> names_of(const AttributeSchema &schema, AttrMask m) {
    std::vector<std::string> out;
    for (std::size_t i : mask_indices(m)) out.push_back(schema.at(i).name);
    return out;
}

}  // namespace

Json to_json(const bounds::BoundReport &rep, const JoinTree &tree) {
    const LogBase base = rep.log_base;
    auto conv = [&](double nats) { return in_base(nats, base); };

    Json j;
    j["J"] = conv(rep.j_nats);
    j["rho"] = rep.rho;
    j["log1p_rho"] = conv(rep.log1p_rho);
    j["rho_min"] = rep.rho_min;
    j["delta"] = rep.delta;
    j["log_base"] = log_base_name(base);

    Json mvds = Json::array();
    for (const auto &row : rep.mvds) {
        Json m;
        m["I"] = conv(row.I);
        m["rho"] = row.rho;
        m["epsilon"] = row.epsilon ? Json(conv(*row.epsilon)) : Json(nullptr);
        m["condition_ok"] = row.condition_ok ? Json(*row.condition_ok) : Json(nullptr);
        m["log1p_rho"] = conv(row.log1p_rho);
        m["key"] = names_of(tree.schema(), row.mvd.key);
        m["left"] = names_of(tree.schema(), row.mvd.left);
        m["right"] = names_of(tree.schema(), row.mvd.right);
        if (row.dims) {
            m["d_A"] = row.dims->d_A;
            m["d_B"] = row.dims->d_B;
            m["d_C"] = row.dims->d_C;
        }
        mvds.push_back(std::move(m));
    }
    j["mvds"] = std::move(mvds);

    j["upper_bound_sumI"] = rep.upper_bound_sumI ? Json(conv(*rep.upper_bound_sumI)) : Json(nullptr);
    j["upper_bound_mJ"] = rep.upper_bound_mJ ? Json(conv(*rep.upper_bound_mJ)) : Json(nullptr);

    Json verdicts;
    verdicts["j_le_log1p_rho"] = rep.lower.pass;
    verdicts["max_I_le_j"] = rep.sandwich_lower <= rep.j_nats + 1e-9;
    verdicts["j_le_sum_I"] = rep.j_nats <= rep.sandwich_upper + 1e-9;
    verdicts["log1p_rho_le_sum_mvd"] = rep.chain.pass;
    j["verdicts"] = std::move(verdicts);

    j["gap"] = conv(rep.lower.gap);
    j["sandwich"] = Json{{"lower", conv(rep.sandwich_lower)}, {"upper", conv(rep.sandwich_upper)}};
    j["chain"] = Json{{"lhs", conv(rep.chain.lhs)}, {"rhs", conv(rep.chain.rhs)}};
    j["root"] = rep.root_id;
    j["N"] = rep.n_total;
    j["distinct"] = rep.n_distinct;
    j["join_size"] = json_u128(rep.join_count);
    j["duplicates_present"] = rep.duplicates_present;
    j["conditions_ok"] =
        (rep.upper_bound_sumI ? Json(rep.all_conditions_ok) : Json(nullptr));
    j["measures"] = Json{{"J_nats", rep.j_nats},
                         {"J_bits", nats_to_bits(rep.j_nats)},
                         {"log1p_rho_nats", rep.log1p_rho},
                         {"log1p_rho_bits", nats_to_bits(rep.log1p_rho)}};
    j["warnings"] = rep.warnings;
    j["notes"] = rep.notes;
    j["version"] = kToolVersion;
    return j;
}

std::string trials_csv(const std::vector<randmodel::TrialResult> &trials,
                       const randmodel::RandomModelSpec &spec, double delta) {
    std::ostringstream out;
    out << "trial,d_A,d_B,d_C,N,delta,I_nats,rho,log1p_rho,epsilon,pass\n";
    const std::uint64_t d_c = spec.dims.size() == 3 ? spec.dims[2] : 1;
    for (const auto &t : trials) {
        out << t.trial << ',' << spec.dims[0] << ',' << spec.dims[1] << ',' << d_c << ','
            << spec.n << ',' << fmt_double(delta) << ',' << fmt_double(t.i_nats) << ','
            << fmt_double(t.rho) << ',' << fmt_double(t.log1p_rho) << ','
            << fmt_double(t.epsilon) << ',' << (t.mvd_bound_pass ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string scatter_csv(const std::vector<randmodel::ScatterRow> &rows) {
    std::ostringstream out;
    out << "trial,d,N,rho_target,log1p_rho_target,rho,log1p_rho,I_nats\n";
    for (const auto &r : rows) {
        out << r.trial << ',' << r.d << ',' << r.n << ',' << fmt_double(r.rho_target) << ','
            << fmt_double(r.log1p_rho_target) << ',' << fmt_double(r.rho) << ','
            << fmt_double(r.log1p_rho) << ',' << fmt_double(r.i_nats) << '\n';
    }
    return out.str();
}

Json sidecar(const randmodel::RandomModelSpec &spec, double delta) {
    Json j;
    j["seed"] = spec.seed;
    j["dims"] = spec.dims;
    j["N"] = spec.n;
    j["trials"] = spec.trials;
    j["delta"] = delta;
    j["log_base"] = "e";
    j["version"] = kToolVersion;
    return j;
}

Json montecarlo_summary(const std::vector<randmodel::TrialResult> &trials,
                        const randmodel::RandomModelSpec &spec, double delta) {
    Json j;
    j["seed"] = spec.seed;
    j["dims"] = spec.dims;
    j["N"] = spec.n;
    j["trials"] = trials.size();
    j["delta"] = delta;
    j["log_base"] = "e";
    j["version"] = kToolVersion;

    auto coverage = [&](std::uint64_t k, std::uint64_t n) {
        auto w = randmodel::wilson_interval(k, n);
        return Json{{"passes", k}, {"trials", n}, {"rate", w.rate}, {"wilson_low", w.low},
                    {"wilson_high", w.high}};
    };

    std::uint64_t mvd_pass = 0;
    std::uint64_t with_eta = 0, entropy_pass = 0, mi_pass = 0;
    double max_entropy_dev = 0.0;
    bool cond_eps = true, cond_eta = true;
    const std::uint64_t d_max = std::max(spec.dims[0], spec.dims[1]);
    for (const auto &t : trials) {
        mvd_pass += t.mvd_bound_pass;
        cond_eps = cond_eps && t.epsilon_condition_ok;
        if (t.entropy_pass) {
            ++with_eta;
            entropy_pass += *t.entropy_pass;
            mi_pass += t.mi_pass.value_or(false);
            double h_big = spec.dims[0] >= spec.dims[1] ? t.h_a : t.h_b;
            max_entropy_dev =
                std::max(max_entropy_dev, std::log(static_cast<double>(d_max)) - h_big);
        }
    }
    j["coverage"]["mvd_mi_bound"] = coverage(mvd_pass, trials.size());
    j["conditions"]["epsilon_condition_ok"] = cond_eps;
    if (with_eta > 0) {
        auto eb = bounds::entropy_confidence(spec.dims[0], spec.dims[1], spec.n, delta);
        auto mb = bounds::mi_confidence(spec.dims[0], spec.dims[1], spec.n, delta);
        j["coverage"]["entropy_bound"] = coverage(entropy_pass, with_eta);
        j["coverage"]["mi_bound"] = coverage(mi_pass, with_eta);
        j["bounds"]["entropy_lower"] = eb.lower;
        j["bounds"]["mi_lower"] = mb.lower;
        j["bounds"]["rho_bar"] = mb.rho_bar;
        j["conditions"]["eta_condition_ok"] = eb.condition_ok;
        j["conditions"]["eta_threshold"] = eb.eta_threshold;
        j["max_entropy_deviation_nats"] = max_entropy_dev;
        cond_eta = eb.condition_ok;
    }
    if (!cond_eps || !cond_eta)
        j["notes"] = Json::array({"outside guarantee regime: bounds evaluated but not guaranteed"});
    return j;
}

}  // namespace report
}  // namespace ajd
