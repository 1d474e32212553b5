#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ajd/relation.hpp"

namespace ajd {

/// Probability mass over coded tuples, stored as a sorted positive support.
/// Construction checks normalization (sum within `tol` of 1).
class Distribution {
  public:
    Distribution(SchemaPtr schema, std::vector<std::pair<Tuple, double>> mass,
                 double tol = 1e-9);

    const AttributeSchema &schema() const { return *schema_; }
    const SchemaPtr &schema_ptr() const { return schema_; }
    std::size_t support_size() const { return mass_.size(); }
    const std::vector<std::pair<Tuple, double>> &support() const { return mass_; }

    double mass(const Tuple &t) const;  // 0 if off-support

    /// Marginal masses over the masked attributes, sorted by projected tuple.
    std::vector<std::pair<Tuple, double>> marginal(AttrMask mask) const;

    bool same_schema(const Distribution &other) const;

  private:
    SchemaPtr schema_;
    std::vector<std::pair<Tuple, double>> mass_;
};

/// The empirical distribution of a relation: P(t) = multiplicity(t) / N.
/// Masses are exact rationals K/N by construction; entropy-style measures are
/// computed from the integer counts to keep them sharp.
class EmpiricalDistribution {
  public:
    static EmpiricalDistribution from(const Relation &r);
    static EmpiricalDistribution from(std::shared_ptr<const Relation> r);

    const Relation &relation() const { return *rel_; }
    const AttributeSchema &schema() const { return rel_->schema(); }
    const SchemaPtr &schema_ptr() const { return rel_->schema_ptr(); }
    std::uint64_t N() const { return rel_->size(); }

    double mass(const Tuple &t) const;

    /// Counts of the projection onto `mask`, sorted by projected tuple.
    /// Marginal probability is count / N.
    std::vector<std::pair<Tuple, std::uint64_t>> marginal_counts(AttrMask mask) const;

    Distribution to_distribution() const;

  private:
    explicit EmpiricalDistribution(std::shared_ptr<const Relation> r) : rel_(std::move(r)) {}
    std::shared_ptr<const Relation> rel_;
};

/// empirical(R): errors on an empty relation.
EmpiricalDistribution empirical(const Relation &r);

}  // namespace ajd
