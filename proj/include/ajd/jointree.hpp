#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ajd/distribution.hpp"
#include "ajd/relation.hpp"

namespace ajd {

/// A join (junction) tree: nodes carry attribute bags, edges form a tree, and
/// the running intersection property must hold — for every attribute, the
/// nodes whose bags contain it induce a connected subtree.
class JoinTree {
  public:
    struct Node {
        int id;
        AttrMask bag;
    };

    JoinTree(SchemaPtr schema, std::vector<Node> nodes, std::vector<std::pair<int, int>> edges);

    const AttributeSchema &schema() const { return *schema_; }
    const SchemaPtr &schema_ptr() const { return schema_; }
    const std::vector<Node> &nodes() const { return nodes_; }
    const std::vector<std::pair<int, int>> &edges() const { return edges_; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t position_of(int id) const;  // throws on unknown id
    AttrMask bag_of(int id) const { return nodes_[position_of(id)].bag; }

    /// Union of all bags, χ(T).
    AttrMask universe() const;

  private:
    SchemaPtr schema_;
    std::vector<Node> nodes_;
    std::vector<std::pair<int, int>> edges_;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;  // e.g. one bag contained in another
};

/// Checks connectivity, acyclicity and the running intersection property.
/// Bag-subset pairs are warnings, not errors: the J-measure stays well defined.
ValidationReport validate(const JoinTree &tree);
void require_valid(const JoinTree &tree);

/// Masks are positional: a tree only applies to schemas whose universe
/// attributes sit at the tree's positions under the same names.
void require_schema_compatible(const JoinTree &tree, const AttributeSchema &schema);

/// Deterministic rooted DFS enumeration u_1..u_m (children in ascending id
/// order) with per-node separators and bag unions. Removing the edge above
/// node i splits the tree into its subtree and the rest; `subtree`/`others`
/// carry the attribute unions of the two sides. They overlap exactly in the
/// separator, so the per-edge MVD sides are disjoint after removing it.
struct RootedOrder {
    int root_id = 0;
    std::vector<int> ids;           // DFS pre-order
    std::vector<int> parent_pos;    // position of parent in the order; -1 for root
    std::vector<AttrMask> bags;     // bag of ids[i]
    std::vector<AttrMask> seps;     // separator with parent; 0 for root
    std::vector<AttrMask> prefix;   // union of bags[0..i]
    std::vector<AttrMask> subtree;  // union of bags in the subtree rooted at i
    std::vector<AttrMask> others;   // union of bags outside that subtree

    std::size_t size() const { return ids.size(); }
};

/// Roots the tree (default: smallest node id) and enumerates depth-first.
RootedOrder dfs_order(const JoinTree &tree, std::optional<int> root = std::nullopt);

/// One multivalued dependency key ->> left | right. For support MVDs the key
/// is a separator and both sides still contain it; key|left|right covers the
/// tree's attribute universe.
struct Mvd {
    AttrMask key;
    AttrMask left;
    AttrMask right;
};

/// The m-1 MVDs associated with the edges of the rooted tree: the i-th is
/// sep_i ->> others_i | subtree_i, splitting the attribute universe along the
/// edge above node i. Their joint satisfaction is equivalent to the acyclic
/// join dependency of the tree's schema.
std::vector<Mvd> mvd_support(const JoinTree &tree, const RootedOrder &order);

/// J(T) = Σ_nodes H(bag) - Σ_edges H(bag ∩ bag) - H(χ(T)), on the empirical
/// distribution. Zero iff the relation satisfies the tree's join dependency.
/// Root-free by construction; clamped to 0 within 1e-9.
double j_measure(const JoinTree &tree, const EmpiricalDistribution &p);
double j_measure(const JoinTree &tree, const Distribution &p);

/// Per-edge terms I_i = I(others_i; subtree_i | sep_i) and the sandwich
/// (max_i I_i, Σ_i I_i) that brackets the J-measure.
struct JBounds {
    double lower = 0.0;  // max_i I_i
    double upper = 0.0;  // Σ_i I_i
    std::vector<double> terms;
};
JBounds j_bounds(const JoinTree &tree, const EmpiricalDistribution &p, const RootedOrder &order);

/// True iff every I(others_i; subtree_i | sep_i) is at most `tol`.
bool models(const Distribution &p, const JoinTree &tree, double tol);

/// Exact |⋈_i π_{bag_i}(R)| by leaf-to-root counting over separator tables;
/// the join is never materialized. Errors on count overflow.
u128 join_size(const Relation &r, const JoinTree &tree);

/// Materialized acyclic join of the distinct projections, for small instances.
/// Errors when an intermediate result exceeds `cap` tuples.
Relation acyclic_join(const Relation &r, const JoinTree &tree, std::size_t cap = 1u << 20);

/// ρ(R,S) = (|⋈ π(R)| - |distinct R|) / |distinct R|. Multiset inputs are
/// measured on their distinct-tuple support.
double spurious_ratio(const Relation &r, const JoinTree &tree);

/// Size of π_left(R) ⋈ π_right(R) for a support MVD (the shared attributes
/// are exactly the key); used by the per-MVD spurious ratios.
u128 mvd_join_size(const Relation &r, const Mvd &mvd);
double mvd_spurious_ratio(const Relation &r, const Mvd &mvd);

// ---- join-tree JSON file format -------------------------------------------
//
// { "nodes": [{"id": 0, "bag": ["A","B"]}, ...],
//   "edges": [[0,1], ...],
//   "root":  0,                  // optional
//   "domains": {"A": 4, ...} }   // optional declared domain sizes

struct JoinTreeFile {
    struct Node {
        int id;
        std::vector<std::string> bag;
    };
    std::vector<Node> nodes;
    std::vector<std::pair<int, int>> edges;
    std::optional<int> root;
    std::map<std::string, std::uint64_t> domains;
};

JoinTreeFile parse_jointree_json(const std::string &text);
JoinTreeFile load_jointree_file(const std::string &path);
JoinTree bind_jointree(const JoinTreeFile &file, SchemaPtr schema);

}  // namespace ajd
