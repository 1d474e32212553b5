#pragma once

#include <optional>

#include "ajd/factorized.hpp"
#include "ajd/jointree.hpp"
#include "ajd/randmodel.hpp"

namespace ajd {
namespace gen {

// Deterministic random instance generators for the property suites and the
// acceptance experiments. Everything draws from a SplitMix64 stream supplied
// by the caller, so suites replay exactly from a seed.

using randmodel::SplitMix64;

/// Schema over declared integer domains named X0..X{n-1}.
SchemaPtr make_schema(const std::vector<std::uint64_t> &dims);

/// A random join tree covering all schema attributes, valid by construction:
/// each node's bag is a subset of its parent's bag plus fresh attributes, so
/// the running intersection property holds.
JoinTree random_join_tree(SplitMix64 &rng, const SchemaPtr &schema, std::size_t max_nodes = 5);

/// N rows drawn with replacement (multiset; duplicates likely for small domains).
Relation random_relation_with_duplicates(SplitMix64 &rng, const SchemaPtr &schema,
                                         std::uint64_t n);

/// N distinct rows drawn without replacement (a relation instance proper);
/// n is clamped to the size of the product space.
Relation random_set_relation(SplitMix64 &rng, const SchemaPtr &schema, std::uint64_t n);

/// A random rational-mass distribution: integer counts over the cells of the
/// product domain, at least one positive, encoded as a relation whose
/// empirical distribution has the drawn masses.
Relation random_count_relation(SplitMix64 &rng, const SchemaPtr &schema,
                               std::uint64_t max_count = 4);

/// Closes a relation under the tree's join dependency by joining its
/// projections: the result satisfies the dependency exactly, so J = 0 and
/// rho = 0. Retries with more seed material if the closure exceeds `cap`.
Relation lossless_closure(SplitMix64 &rng, const SchemaPtr &schema, const JoinTree &tree,
                          std::uint64_t base_rows, std::size_t cap = 4096);

/// A distinct row whose projection onto every bag appears in at least two
/// rows; deleting it leaves all bag projections intact, so the join
/// regenerates it as a spurious tuple. nullopt when no such row exists.
std::optional<std::size_t> removable_tuple(const Relation &r, const JoinTree &tree);

Relation without_row(const Relation &r, std::size_t row);

/// A full-support distribution that models the tree, built from the source's
/// tree factorization with perturbed, uniform-smoothed conditionals.
Distribution perturbed_tree_distribution(SplitMix64 &rng, const JoinTree &tree,
                                         const EmpiricalDistribution &p, double noise = 0.5);

}  // namespace gen
}  // namespace ajd
