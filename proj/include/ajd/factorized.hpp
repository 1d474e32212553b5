#pragma once

#include <unordered_map>

#include "ajd/jointree.hpp"

namespace ajd {

/// The tree-factorized distribution P_T(x) = Π_i P[bag_i](x) / Π_i P[sep_i](x),
/// held as the source distribution's exact bag/separator marginal counts plus
/// the evaluation rule. Points where a separator marginal vanishes carry mass
/// 0 (the bag marginals vanish there too, so no 0/0 arises).
///
/// P_T models the tree, agrees with the source on every bag and separator
/// marginal, and is the KL-closest tree-modeling distribution to the source.
class FactorizedDistribution {
  public:
    FactorizedDistribution(JoinTree tree, RootedOrder order, const EmpiricalDistribution &p);

    const JoinTree &tree() const { return tree_; }
    const RootedOrder &order() const { return order_; }
    std::uint64_t N() const { return n_; }

    /// Mass at a full tuple over the tree's attribute universe.
    double mass(const Tuple &t) const;

    /// log P_T(t), computed from the integer marginal counts:
    /// Σ log K_bag - Σ log K_sep - log N. -inf off support.
    double log_mass(const Tuple &t) const;

    /// Explicit support enumeration (the acyclic join of the bag supports).
    /// Errors when the support exceeds `cap` points.
    Distribution materialize(std::size_t cap = 1u << 20) const;

    /// Σ of mass over the enumerated support; equals 1 up to rounding because
    /// bag and separator marginals are preserved.
    double total_mass(std::size_t cap = 1u << 20) const;

    const std::unordered_map<Tuple, std::uint64_t, TupleHash> &bag_counts(std::size_t i) const {
        return bag_counts_[i];
    }
    const std::unordered_map<Tuple, std::uint64_t, TupleHash> &sep_counts(std::size_t i) const {
        return sep_counts_[i];
    }

  private:
    JoinTree tree_;
    RootedOrder order_;
    std::uint64_t n_;
    // marginal counts keyed by projected tuples (attribute-ascending layout)
    std::vector<std::unordered_map<Tuple, std::uint64_t, TupleHash>> bag_counts_;
    std::vector<std::unordered_map<Tuple, std::uint64_t, TupleHash>> sep_counts_;
    std::vector<std::vector<std::size_t>> bag_idx_;  // schema positions per bag
    std::vector<std::vector<std::size_t>> sep_idx_;
};

/// Builds P_T for a valid tree whose universe is covered by P's schema.
FactorizedDistribution factorized_distribution(const JoinTree &tree,
                                               const EmpiricalDistribution &p);

/// D(P || P_T) evaluated from integer counts only:
/// Σ_t (K_t/N) · [log K_t - Σ log K_bag(t) + Σ log K_sep(t)].
/// Requires the tree to span P's full schema. Equals the J-measure.
double kl_to_factorized(const EmpiricalDistribution &p, const FactorizedDistribution &pt);

}  // namespace ajd
