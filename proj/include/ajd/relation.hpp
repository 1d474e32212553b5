#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ajd/common.hpp"

namespace ajd {

/// Ordered attribute list with per-attribute finite domains.
///
/// A domain is either *declared* (a size d; values are the integers 0..d-1 and
/// input text must parse accordingly) or *inferred* (the set of observed
/// labels, interned to dense codes in first-appearance order). Codes are what
/// every algorithm operates on; labels exist for I/O.
class AttributeSchema {
  public:
    struct Attribute {
        std::string name;
        std::uint64_t domain_size = 0;
        std::vector<std::string> labels;  // empty for declared domains
        bool declared = false;
    };

    explicit AttributeSchema(std::vector<Attribute> attrs);

    std::size_t arity() const { return attrs_.size(); }
    const Attribute &at(std::size_t i) const { return attrs_[i]; }
    std::optional<std::size_t> index_of(const std::string &name) const;
    std::size_t require_index(const std::string &name) const;

    AttrMask mask_of(std::span<const std::string> names) const;
    AttrMask full_mask() const;

    std::string label(std::size_t attr, Value code) const;
    /// Code for a textual value; nullopt when the label is not in an inferred
    /// domain. Throws on declared-domain values outside 0..d-1.
    std::optional<Value> code_of(std::size_t attr, const std::string &label) const;

    /// Sub-schema consisting of the masked attributes, in schema order.
    std::shared_ptr<const AttributeSchema> subschema(AttrMask mask) const;

    bool domain_equal(std::size_t i, const AttributeSchema &other, std::size_t j) const;

  private:
    std::vector<Attribute> attrs_;
    std::unordered_map<std::string, std::size_t> index_;
};

using SchemaPtr = std::shared_ptr<const AttributeSchema>;

/// A relation instance: a multiset of tuples over a schema, stored as
/// lexicographically sorted distinct rows with multiplicities.
///
/// Dependency and join-size computations use the distinct rows; empirical
/// distributions use the multiplicities. Immutable after construction.
class Relation {
  public:
    Relation(SchemaPtr schema, std::vector<Tuple> rows);
    static Relation from_counted(SchemaPtr schema,
                                 std::vector<std::pair<Tuple, std::uint64_t>> counted);

    const AttributeSchema &schema() const { return *schema_; }
    const SchemaPtr &schema_ptr() const { return schema_; }
    std::size_t arity() const { return schema_->arity(); }

    std::size_t distinct_count() const { return mult_.size(); }
    std::uint64_t size() const { return total_; }  // N, with multiplicity
    bool empty() const { return total_ == 0; }

    std::span<const Value> row(std::size_t i) const {
        return {data_.data() + i * arity(), arity()};
    }
    std::uint64_t multiplicity(std::size_t i) const { return mult_[i]; }
    Tuple row_tuple(std::size_t i) const;

    bool contains(std::span<const Value> t) const;

    /// Projection onto the masked attributes. Distinct rows; multiplicities of
    /// collapsed rows are summed so marginals stay computable.
    Relation project(AttrMask mask) const;
    Relation project(std::span<const std::string> names) const;

    /// Rows with attr = value (textual), multiplicities preserved.
    Relation select_eq(const std::string &attr, const std::string &value) const;

    /// Decoded rows as label vectors, sorted; for reporting and test oracles.
    std::vector<std::vector<std::string>> decoded_rows() const;

  private:
    Relation(SchemaPtr schema) : schema_(std::move(schema)) {}
    void finalize(std::vector<std::pair<Tuple, std::uint64_t>> counted);

    SchemaPtr schema_;
    std::vector<Value> data_;  // row-major over distinct rows
    std::vector<std::uint64_t> mult_;
    std::uint64_t total_ = 0;
};

/// Natural join with set semantics: distinct tuples over the attribute union,
/// present iff both restrictions are present. Shared attributes are matched by
/// label; conflicting declared domain sizes are an error.
Relation natural_join(const Relation &lhs, const Relation &rhs);

/// The two-column relation {(a_i, b_i)}_{i<N} over disjoint label domains.
/// Its projections are keys, so the two-singleton-bag schema loses maximally.
Relation make_diagonal_relation(std::uint64_t n);

}  // namespace ajd
