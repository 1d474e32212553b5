#include "ajd/jointree.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ajd/info.hpp"

namespace ajd {

JoinTree::JoinTree(SchemaPtr schema, std::vector<Node> nodes,
                   std::vector<std::pair<int, int>> edges)
    : schema_(std::move(schema)), nodes_(std::move(nodes)), edges_(std::move(edges)) {
    if (nodes_.empty()) throw Error("join tree must have at least one node");
    std::map<int, std::size_t> seen;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id < 0) throw Error("join-tree node ids must be non-negative");
        if (!seen.emplace(nodes_[i].id, i).second)
            throw Error("duplicate join-tree node id " + std::to_string(nodes_[i].id));
        if (nodes_[i].bag == 0)
            throw Error("join-tree node " + std::to_string(nodes_[i].id) + " has an empty bag");
        if (nodes_[i].bag & ~schema_->full_mask())
            throw Error("join-tree bag references attributes outside the schema");
    }
    for (auto [a, b] : edges_) {
        if (!seen.count(a) || !seen.count(b))
            throw Error("join-tree edge references unknown node id");
        if (a == b) throw Error("join-tree self-loop on node " + std::to_string(a));
    }
}

std::size_t JoinTree::position_of(int id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].id == id) return i;
    throw Error("unknown join-tree node id " + std::to_string(id));
}

AttrMask JoinTree::universe() const {
    AttrMask m = 0;
    for (const auto &n : nodes_) m |= n.bag;
    return m;
}

ValidationReport validate(const JoinTree &tree) {
    ValidationReport rep;
    const auto &nodes = tree.nodes();
    const std::size_t m = nodes.size();

    std::unordered_map<int, std::size_t> pos;
    for (std::size_t i = 0; i < m; ++i) pos[nodes[i].id] = i;
    std::vector<std::vector<std::size_t>> adj(m);
    for (auto [a, b] : tree.edges()) {
        adj[pos[a]].push_back(pos[b]);
        adj[pos[b]].push_back(pos[a]);
    }

    // Tree shape: connected and acyclic means exactly m-1 edges reaching all nodes.
    if (tree.edges().size() + 1 != m) {
        rep.errors.push_back(tree.edges().size() + 1 < m
                                 ? "tree is disconnected: " + std::to_string(tree.edges().size()) +
                                       " edges for " + std::to_string(m) +
                                       " nodes (connect components with an explicit edge; an "
                                       "empty separator is allowed)"
                                 : "edge set contains a cycle");
    }
    std::vector<char> visited(m, 0);
    std::vector<std::size_t> stack = {0};
    visited[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : adj[u])
            if (!visited[v]) {
                visited[v] = 1;
                ++reached;
                stack.push_back(v);
            }
    }
    if (reached != m && rep.errors.empty())
        rep.errors.push_back("tree is disconnected");

    // Running intersection: nodes containing each attribute must induce a
    // connected subtree. Only meaningful when the shape checks passed.
    if (rep.errors.empty()) {
        for (std::size_t a : mask_indices(tree.universe())) {
            AttrMask bit = AttrMask{1} << a;
            std::size_t start = m, count = 0;
            for (std::size_t i = 0; i < m; ++i)
                if (nodes[i].bag & bit) {
                    if (start == m) start = i;
                    ++count;
                }
            std::fill(visited.begin(), visited.end(), 0);
            stack = {start};
            visited[start] = 1;
            std::size_t hit = 1;
            while (!stack.empty()) {
                std::size_t u = stack.back();
                stack.pop_back();
                for (std::size_t v : adj[u])
                    if (!visited[v] && (nodes[v].bag & bit)) {
                        visited[v] = 1;
                        ++hit;
                        stack.push_back(v);
                    }
            }
            if (hit != count) {
                std::size_t other = m;
                for (std::size_t i = 0; i < m; ++i)
                    if ((nodes[i].bag & bit) && !visited[i]) other = i;
                rep.errors.push_back("running intersection violated for attribute '" +
                                     tree.schema().at(a).name + "': nodes " +
                                     std::to_string(nodes[start].id) + " and " +
                                     std::to_string(nodes[other].id) +
                                     " are not connected through it");
            }
        }
    }

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j && (nodes[i].bag & ~nodes[j].bag) == 0 && nodes[i].bag != nodes[j].bag)
                rep.warnings.push_back("bag of node " + std::to_string(nodes[i].id) +
                                       " is contained in bag of node " +
                                       std::to_string(nodes[j].id));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (nodes[i].bag == nodes[j].bag)
                rep.warnings.push_back("nodes " + std::to_string(nodes[i].id) + " and " +
                                       std::to_string(nodes[j].id) + " carry identical bags");

    rep.ok = rep.errors.empty();
    return rep;
}

void require_valid(const JoinTree &tree) {
    auto rep = validate(tree);
    if (!rep.ok) throw Error("invalid join tree: " + rep.errors.front());
}

RootedOrder dfs_order(const JoinTree &tree, std::optional<int> root) {
    require_valid(tree);
    const auto &nodes = tree.nodes();
    const std::size_t m = nodes.size();

    int root_id;
    if (root) {
        root_id = *root;
        tree.position_of(root_id);  // throws on unknown id
    } else {
        root_id = nodes[0].id;
        for (const auto &n : nodes) root_id = std::min(root_id, n.id);
    }

    std::unordered_map<int, std::size_t> pos;
    for (std::size_t i = 0; i < m; ++i) pos[nodes[i].id] = i;
    std::vector<std::vector<int>> adj(m);  // neighbor ids, ascending
    for (auto [a, b] : tree.edges()) {
        adj[pos[a]].push_back(b);
        adj[pos[b]].push_back(a);
    }
    for (auto &v : adj) std::sort(v.begin(), v.end());

    RootedOrder order;
    order.root_id = root_id;
    std::vector<char> visited(m, 0);
    // stack of (node id, parent position in order); children pushed in
    // descending id so they pop in ascending order
    std::vector<std::pair<int, int>> stack = {{root_id, -1}};
    while (!stack.empty()) {
        auto [id, ppos] = stack.back();
        stack.pop_back();
        std::size_t p = pos[id];
        if (visited[p]) continue;
        visited[p] = 1;
        int my_pos = static_cast<int>(order.ids.size());
        order.ids.push_back(id);
        order.parent_pos.push_back(ppos);
        order.bags.push_back(nodes[p].bag);
        order.seps.push_back(ppos < 0 ? 0 : (nodes[p].bag & order.bags[ppos]));
        for (auto it = adj[p].rbegin(); it != adj[p].rend(); ++it)
            if (!visited[pos[*it]]) stack.emplace_back(*it, my_pos);
    }

    order.prefix.resize(m);
    AttrMask acc = 0;
    for (std::size_t i = 0; i < m; ++i) {
        acc |= order.bags[i];
        order.prefix[i] = acc;
    }

    // DFS pre-order makes every subtree a contiguous block; fold bag unions
    // and block sizes child-to-parent.
    std::vector<std::size_t> block(m, 1);
    order.subtree = order.bags;
    for (std::size_t i = m; i-- > 1;) {
        block[order.parent_pos[i]] += block[i];
        order.subtree[order.parent_pos[i]] |= order.subtree[i];
    }
    std::vector<AttrMask> tail(m + 1, 0);  // union of bags[i..m)
    for (std::size_t i = m; i-- > 0;) tail[i] = tail[i + 1] | order.bags[i];
    order.others.resize(m);
    order.others[0] = 0;
    for (std::size_t i = 1; i < m; ++i)
        order.others[i] = order.prefix[i - 1] | tail[i + block[i]];

    // Running-intersection consequences: the separator equals the bag's
    // overlap with everything enumerated before it, and the two sides of the
    // edge above i overlap exactly in the separator.
    for (std::size_t i = 1; i < m; ++i) {
        if (order.seps[i] != (order.prefix[i - 1] & order.bags[i]))
            throw InternalError("separator mismatch in DFS order; running intersection broken");
        if ((order.subtree[i] & order.others[i]) != order.seps[i])
            throw InternalError("subtree split does not meet in the separator");
    }
    return order;
}

std::vector<Mvd> mvd_support(const JoinTree &tree, const RootedOrder &order) {
    (void)tree;
    std::vector<Mvd> out;
    for (std::size_t i = 1; i < order.size(); ++i)
        out.push_back({order.seps[i], order.others[i], order.subtree[i]});
    return out;
}

void require_schema_compatible(const JoinTree &tree, const AttributeSchema &schema) {
    for (std::size_t i : mask_indices(tree.universe()))
        if (i >= schema.arity() || tree.schema().at(i).name != schema.at(i).name)
            throw Error("join tree was built for a different schema (attribute position " +
                        std::to_string(i) + ")");
}

namespace {

constexpr double kJClamp = 1e-9;

template <class P>
double j_measure_impl(const JoinTree &tree, const P &p) {
    require_valid(tree);
    require_schema_compatible(tree, p.schema());
    std::unordered_map<AttrMask, double> memo;
    auto h = [&](AttrMask m) {
        auto it = memo.find(m);
        if (it != memo.end()) return it->second;
        double v = info::entropy(p, m);
        memo.emplace(m, v);
        return v;
    };
    std::vector<double> terms;
    for (const auto &n : tree.nodes()) terms.push_back(h(n.bag));
    for (auto [a, b] : tree.edges()) terms.push_back(-h(tree.bag_of(a) & tree.bag_of(b)));
    terms.push_back(-h(tree.universe()));
    double j = stable_sum(std::move(terms));
    if (j < 0.0) {
        if (j < -kJClamp)
            throw InternalError("J-measure came out " + fmt_double(j) +
                                ", beyond rounding tolerance");
        j = 0.0;
    }
    return j;
}

}  // namespace

double j_measure(const JoinTree &tree, const EmpiricalDistribution &p) {
    return j_measure_impl(tree, p);
}

double j_measure(const JoinTree &tree, const Distribution &p) { return j_measure_impl(tree, p); }

JBounds j_bounds(const JoinTree &tree, const EmpiricalDistribution &p, const RootedOrder &order) {
    require_schema_compatible(tree, p.schema());
    JBounds b;
    for (std::size_t i = 1; i < order.size(); ++i)
        b.terms.push_back(
            info::cond_mutual_info(p, order.others[i], order.subtree[i], order.seps[i]));
    for (double t : b.terms) b.lower = std::max(b.lower, t);
    b.upper = stable_sum(b.terms);
    return b;
}

bool models(const Distribution &p, const JoinTree &tree, double tol) {
    require_schema_compatible(tree, p.schema());
    auto order = dfs_order(tree);
    for (std::size_t i = 1; i < order.size(); ++i)
        if (info::cond_mutual_info(p, order.others[i], order.subtree[i], order.seps[i]) > tol)
            return false;
    return true;
}

namespace {

u128 checked_mul(u128 a, u128 b) {
    u128 out;
    if (mul_overflows(a, b, out)) throw Error("join-size count overflow");
    return out;
}

u128 checked_add(u128 a, u128 b) {
    u128 out;
    if (add_overflows(a, b, out)) throw Error("join-size count overflow");
    return out;
}

}  // namespace

u128 join_size(const Relation &r, const JoinTree &tree) {
    require_schema_compatible(tree, r.schema());
    auto order = dfs_order(tree);
    const std::size_t m = order.size();

    // Distinct projection of R onto each bag, as raw tuples.
    std::vector<Relation> proj;
    proj.reserve(m);
    std::vector<std::vector<std::size_t>> bag_idx(m);
    for (std::size_t i = 0; i < m; ++i) {
        proj.push_back(r.project(order.bags[i]));
        bag_idx[i] = mask_indices(order.bags[i]);
    }

    // children by position
    std::vector<std::vector<std::size_t>> children(m);
    for (std::size_t i = 1; i < m; ++i) children[order.parent_pos[i]].push_back(i);

    // Leaf-to-root: table[i] maps a separator tuple (over seps[i]) to the
    // number of joinable tuple combinations in i's subtree.
    std::vector<std::unordered_map<Tuple, u128, TupleHash>> table(m);
    for (std::size_t i = m; i-- > 1;) {
        // positions of each child's separator attributes within this bag tuple
        std::vector<std::vector<std::size_t>> child_sel;
        for (std::size_t c : children[i]) {
            std::vector<std::size_t> sel;
            for (std::size_t a : mask_indices(order.seps[c]))
                sel.push_back(static_cast<std::size_t>(
                    std::lower_bound(bag_idx[i].begin(), bag_idx[i].end(), a) -
                    bag_idx[i].begin()));
            child_sel.push_back(std::move(sel));
        }
        std::vector<std::size_t> sep_sel;
        for (std::size_t a : mask_indices(order.seps[i]))
            sep_sel.push_back(static_cast<std::size_t>(
                std::lower_bound(bag_idx[i].begin(), bag_idx[i].end(), a) - bag_idx[i].begin()));

        auto &out = table[i];
        for (std::size_t t = 0; t < proj[i].distinct_count(); ++t) {
            auto row = proj[i].row(t);
            u128 combos = 1;
            bool dead = false;
            for (std::size_t ci = 0; ci < children[i].size(); ++ci) {
                Tuple key(child_sel[ci].size());
                for (std::size_t j = 0; j < key.size(); ++j) key[j] = row[child_sel[ci][j]];
                auto it = table[children[i][ci]].find(key);
                if (it == table[children[i][ci]].end()) {
                    dead = true;
                    break;
                }
                combos = checked_mul(combos, it->second);
            }
            if (dead) continue;
            Tuple sep_key(sep_sel.size());
            for (std::size_t j = 0; j < sep_key.size(); ++j) sep_key[j] = row[sep_sel[j]];
            auto [it, inserted] = out.emplace(std::move(sep_key), combos);
            if (!inserted) it->second = checked_add(it->second, combos);
        }
    }

    u128 total = 0;
    {
        std::vector<std::vector<std::size_t>> child_sel;
        for (std::size_t c : children[0]) {
            std::vector<std::size_t> sel;
            for (std::size_t a : mask_indices(order.seps[c]))
                sel.push_back(static_cast<std::size_t>(
                    std::lower_bound(bag_idx[0].begin(), bag_idx[0].end(), a) -
                    bag_idx[0].begin()));
            child_sel.push_back(std::move(sel));
        }
        for (std::size_t t = 0; t < proj[0].distinct_count(); ++t) {
            auto row = proj[0].row(t);
            u128 combos = 1;
            bool dead = false;
            for (std::size_t ci = 0; ci < children[0].size(); ++ci) {
                Tuple key(child_sel[ci].size());
                for (std::size_t j = 0; j < key.size(); ++j) key[j] = row[child_sel[ci][j]];
                auto it = table[children[0][ci]].find(key);
                if (it == table[children[0][ci]].end()) {
                    dead = true;
                    break;
                }
                combos = checked_mul(combos, it->second);
            }
            if (!dead) total = checked_add(total, combos);
        }
    }
    return total;
}

Relation acyclic_join(const Relation &r, const JoinTree &tree, std::size_t cap) {
    require_schema_compatible(tree, r.schema());
    auto order = dfs_order(tree);
    Relation acc = r.project(order.bags[0]);
    for (std::size_t i = 1; i < order.size(); ++i) {
        acc = natural_join(acc, r.project(order.bags[i]));
        if (acc.distinct_count() > cap)
            throw Error("acyclic join exceeds the materialization cap of " + std::to_string(cap) +
                        " tuples; use join_size for counting");
    }
    // The pairwise joins emit columns in visit order; restore the input
    // schema's attribute order so positional masks keep meaning the same
    // attributes downstream.
    auto target = r.schema().subschema(tree.universe());
    std::vector<std::size_t> src(target->arity());
    for (std::size_t i = 0; i < target->arity(); ++i)
        src[i] = acc.schema().require_index(target->at(i).name);
    std::vector<std::pair<Tuple, std::uint64_t>> rows;
    rows.reserve(acc.distinct_count());
    for (std::size_t row = 0; row < acc.distinct_count(); ++row) {
        auto full = acc.row(row);
        Tuple t(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) t[i] = full[src[i]];
        rows.emplace_back(std::move(t), 1);
    }
    return Relation::from_counted(std::move(target), std::move(rows));
}

double spurious_ratio(const Relation &r, const JoinTree &tree) {
    if (r.distinct_count() == 0) throw Error("spurious ratio of an empty relation");
    if (tree.universe() != r.schema().full_mask())
        throw Error("spurious ratio needs a join tree spanning all relation attributes");
    u128 js = join_size(r, tree);
    u128 d = r.distinct_count();
    if (js < d)
        throw InternalError("acyclic join smaller than the relation; counting bug");
    return static_cast<double>(js - d) / static_cast<double>(d);
}

u128 mvd_join_size(const Relation &r, const Mvd &mvd) {
    // Both sides share exactly the key attributes, so the join size is
    // Σ_key |left-side group| · |right-side group|.
    auto left = r.project(mvd.left);
    auto right = r.project(mvd.right);
    auto key_of = [&](const Relation &side, AttrMask side_mask) {
        auto side_idx = mask_indices(side_mask);
        std::vector<std::size_t> sel;
        for (std::size_t a : mask_indices(mvd.key))
            sel.push_back(static_cast<std::size_t>(
                std::lower_bound(side_idx.begin(), side_idx.end(), a) - side_idx.begin()));
        std::unordered_map<Tuple, u128, TupleHash> counts;
        for (std::size_t t = 0; t < side.distinct_count(); ++t) {
            auto row = side.row(t);
            Tuple key(sel.size());
            for (std::size_t j = 0; j < key.size(); ++j) key[j] = row[sel[j]];
            ++counts[key];
        }
        return counts;
    };
    auto lc = key_of(left, mvd.left);
    auto rc = key_of(right, mvd.right);
    u128 total = 0;
    for (const auto &[key, n] : lc) {
        auto it = rc.find(key);
        if (it != rc.end()) total = checked_add(total, checked_mul(n, it->second));
    }
    return total;
}

double mvd_spurious_ratio(const Relation &r, const Mvd &mvd) {
    if (r.distinct_count() == 0) throw Error("spurious ratio of an empty relation");
    u128 js = mvd_join_size(r, mvd);
    u128 d = r.distinct_count();
    if (js < d) throw InternalError("MVD join smaller than the relation; counting bug");
    return static_cast<double>(js - d) / static_cast<double>(d);
}

JoinTreeFile parse_jointree_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("join-tree JSON parse error: ") + e.what());
    }
    JoinTreeFile f;
    try {
        if (!j.contains("nodes")) throw Error("join-tree JSON lacks \"nodes\"");
        for (const auto &n : j.at("nodes")) {
            JoinTreeFile::Node node;
            node.id = n.at("id").get<int>();
            for (const auto &a : n.at("bag")) node.bag.push_back(a.get<std::string>());
            f.nodes.push_back(std::move(node));
        }
        if (j.contains("edges"))
            for (const auto &e : j.at("edges")) {
                if (!e.is_array() || e.size() != 2)
                    throw Error("join-tree edge must be a pair of node ids");
                f.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
            }
        if (j.contains("root")) f.root = j.at("root").get<int>();
        if (j.contains("domains"))
            for (const auto &[name, size] : j.at("domains").items())
                f.domains[name] = size.get<std::uint64_t>();
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("join-tree JSON field error: ") + e.what());
    }
    return f;
}

JoinTreeFile load_jointree_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open join-tree file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_jointree_json(ss.str());
}

JoinTree bind_jointree(const JoinTreeFile &file, SchemaPtr schema) {
    std::vector<JoinTree::Node> nodes;
    for (const auto &n : file.nodes)
        nodes.push_back({n.id, schema->mask_of(n.bag)});
    return JoinTree(std::move(schema), std::move(nodes), file.edges);
}

}  // namespace ajd
