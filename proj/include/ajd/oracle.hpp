#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "ajd/jointree.hpp"

namespace ajd {
namespace oracle {

// Brute-force reference implementations for the test surface. Deliberately
// naive and structurally independent of the library paths they check: joins
// are nested loops over decoded labels, distributions are dense rational
// tables, and nothing here shares arithmetic with the main modules.

using Rational = boost::multiprecision::cpp_rational;

/// A decoded tuple: attribute name -> label.
using NamedTuple = std::map<std::string, std::string>;

/// Nested-loop natural join over decoded labels. Errors on an empty input
/// list or when the output would exceed `cap` tuples.
std::vector<NamedTuple> oracle_join(const std::vector<Relation> &relations,
                                    std::size_t cap = 10000);

std::vector<NamedTuple> decoded_set(const Relation &r);

/// Dense rational probability table over an explicit small product domain.
struct DenseDistribution {
    std::vector<std::string> attrs;
    std::vector<std::vector<std::string>> domains;  // labels per attribute
    std::vector<Rational> mass;                     // row-major over the domains

    std::size_t cell_count() const;
    std::size_t index_of(const std::vector<std::size_t> &coords) const;
    Rational total() const;
};

DenseDistribution dense_from_empirical(const EmpiricalDistribution &p);

/// Direct marginalization followed by plain summation of -p log p, in long
/// double. No compensation, no sorting.
double oracle_entropy(const DenseDistribution &p, const std::vector<std::string> &attrs);

/// Exact rational marginal over a subset of attributes: assignment -> mass.
std::map<std::vector<std::string>, Rational> oracle_marginal(
    const DenseDistribution &p, const std::vector<std::string> &attrs);

/// Cell-by-cell evaluation of the tree factorization
/// Π_nodes P[bag] / Π_edges P[bag ∩ bag] in exact rationals. No
/// renormalization: the result summing to 1 is itself part of what tests
/// check. Cells with a vanishing edge marginal carry mass 0.
DenseDistribution oracle_enumerate_pt(const JoinTree &tree, const DenseDistribution &p);

/// Exact KL divergence evaluated in long double from rational masses.
double oracle_kl(const DenseDistribution &p, const DenseDistribution &q);

}  // namespace oracle
}  // namespace ajd
