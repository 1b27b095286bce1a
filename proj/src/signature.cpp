#include "nuexpr/signature.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "nuexpr/errors.hpp"

namespace nuexpr {

namespace {

void check_arity(const Modality& op, size_t given) {
    if (static_cast<size_t>(op.arity()) != given)
        throw Error("modality " + op.to_string() + " expects " + std::to_string(op.arity()) +
                    " arguments, got " + std::to_string(given));
}

void check_value_shape(const Modality& op, const Value& t) {
    if (op.functor() != t.functor())
        throw Error("modality " + op.to_string() + " is for functor " +
                    functor_name(op.functor()) + ", value is for " + functor_name(t.functor()));
    if (op.functor() == Functor::Dfa &&
        op.as_dfa().arity != static_cast<int>(t.as_dfa().next.size()))
        throw Error("dfa modality arity " + std::to_string(op.as_dfa().arity) +
                    " does not match alphabet size " + std::to_string(t.as_dfa().next.size()));
}

// Splits the flat argument list of a mon modality into its groups.
std::vector<std::pair<int, int>> mon_groups(const MonOp& op) {
    std::vector<std::pair<int, int>> ranges;
    int offset = 0;
    for (int size : op.group_sizes) {
        ranges.emplace_back(offset, size);
        offset += size;
    }
    return ranges;
}

} // namespace

Value singleton_apply(const Modality& op, const std::vector<int>& args, CarrierRef carrier) {
    check_arity(op, args.size());
    switch (op.functor()) {
    case Functor::Dfa:
        return Value::dfa(std::move(carrier), op.as_dfa().output, args);
    case Functor::Lts: {
        const auto& labels = op.as_lts().labels;
        std::vector<std::pair<std::string, int>> successors;
        for (size_t i = 0; i < args.size(); ++i)
            successors.emplace_back(labels[i], args[i]);
        return Value::lts(std::move(carrier), std::move(successors));
    }
    case Functor::Dist: {
        const auto& weights = op.as_dist().weights;
        std::vector<std::pair<int, Rational>> mass;
        for (size_t i = 0; i < args.size(); ++i)
            mass.emplace_back(args[i], weights[i]);
        return Value::dist(std::move(carrier), std::move(mass));
    }
    case Functor::Mon: {
        std::vector<std::vector<int>> sets;
        for (auto [offset, size] : mon_groups(op.as_mon()))
            sets.emplace_back(args.begin() + offset, args.begin() + offset + size);
        return Value::mon(std::move(carrier), std::move(sets));
    }
    }
    throw Error("corrupt functor tag");
}

bool transport_feasible(const std::vector<Rational>& supplies,
                        const std::vector<std::vector<bool>>& allowed,
                        const std::vector<Rational>& demands) {
    Rational supply_total = std::accumulate(supplies.begin(), supplies.end(), Rational(0));
    Rational demand_total = std::accumulate(demands.begin(), demands.end(), Rational(0));
    if (supply_total != demand_total)
        return false;

    int n = static_cast<int>(supplies.size());
    int m = static_cast<int>(demands.size());
    int source = 0, sink = n + m + 1, nodes = n + m + 2;

    std::vector<std::vector<Rational>> residual(nodes, std::vector<Rational>(nodes, Rational(0)));
    for (int i = 0; i < n; ++i) {
        residual[source][1 + i] = supplies[i];
        for (int j = 0; j < m; ++j)
            if (allowed.at(i).at(j))
                residual[1 + i][1 + n + j] = supply_total;
    }
    for (int j = 0; j < m; ++j)
        residual[1 + n + j][sink] = demands[j];

    Rational flow(0);
    for (;;) {
        std::vector<int> parent(nodes, -1);
        parent[source] = source;
        std::deque<int> queue{source};
        while (!queue.empty() && parent[sink] == -1) {
            int u = queue.front();
            queue.pop_front();
            for (int v = 0; v < nodes; ++v)
                if (parent[v] == -1 && residual[u][v] > 0) {
                    parent[v] = u;
                    queue.push_back(v);
                }
        }
        if (parent[sink] == -1)
            break;
        Rational bottleneck = supply_total;
        for (int v = sink; v != source; v = parent[v])
            bottleneck = std::min(bottleneck, residual[parent[v]][v]);
        for (int v = sink; v != source; v = parent[v]) {
            residual[parent[v]][v] -= bottleneck;
            residual[v][parent[v]] += bottleneck;
        }
        flow += bottleneck;
    }
    return flow == supply_total;
}

bool lifting_contains(const Modality& op, const Value& t, const std::vector<StateSet>& args) {
    check_arity(op, args.size());
    check_value_shape(op, t);
    for (const auto& set : args)
        if (set.carrier() != t.carrier() && !(set.carrier()->names() == t.carrier()->names()))
            throw Error("lifting argument over a different carrier than the value");

    switch (op.functor()) {
    case Functor::Dfa: {
        const auto& v = t.as_dfa();
        if (v.output != op.as_dfa().output)
            return false;
        for (size_t i = 0; i < args.size(); ++i)
            if (!args[i].contains(v.next[i]))
                return false;
        return true;
    }
    case Functor::Lts: {
        const auto& v = t.as_lts();
        const auto& labels = op.as_lts().labels;
        for (const auto& [label, x] : v.successors) {
            bool covered = false;
            for (size_t i = 0; i < labels.size() && !covered; ++i)
                covered = labels[i] == label && args[i].contains(x);
            if (!covered)
                return false;
        }
        for (size_t i = 0; i < labels.size(); ++i) {
            bool hit = false;
            for (const auto& [label, x] : v.successors)
                if (label == labels[i] && args[i].contains(x)) {
                    hit = true;
                    break;
                }
            if (!hit)
                return false;
        }
        return true;
    }
    case Functor::Dist: {
        const auto& v = t.as_dist();
        const auto& weights = op.as_dist().weights;
        std::vector<Rational> demands;
        std::vector<std::vector<bool>> allowed(weights.size());
        for (size_t i = 0; i < weights.size(); ++i)
            for (const auto& [x, w] : v.weights) {
                (void)w;
                allowed[i].push_back(args[i].contains(x));
            }
        for (const auto& [x, w] : v.weights) {
            (void)x;
            demands.push_back(w);
        }
        return transport_feasible(weights, allowed, demands);
    }
    case Functor::Mon: {
        const auto& v = t.as_mon();
        auto groups = mon_groups(op.as_mon());
        auto group_satisfied = [&](const std::vector<int>& set, std::pair<int, int> range) {
            // set meets every argument of the group
            for (int j = range.first; j < range.first + range.second; ++j) {
                bool meets = false;
                for (int x : set)
                    if (args[j].contains(x)) {
                        meets = true;
                        break;
                    }
                if (!meets)
                    return false;
            }
            return true;
        };
        // (a) each group union is a neighbourhood
        for (auto [offset, size] : groups) {
            StateSet group_union(t.carrier());
            for (int j = offset; j < offset + size; ++j)
                group_union = group_union.union_with(args[j]);
            bool in_system = false;
            for (const auto& set : v.minimal_sets) {
                bool inside = true;
                for (int x : set)
                    if (!group_union.contains(x)) {
                        inside = false;
                        break;
                    }
                if (inside) {
                    in_system = true;
                    break;
                }
            }
            if (!in_system)
                return false;
        }
        // (b) each neighbourhood meets all arguments of some group; by upward
        // closure it is enough to check the minimal sets
        for (const auto& set : v.minimal_sets) {
            bool witnessed = false;
            for (auto range : groups)
                if (group_satisfied(set, range)) {
                    witnessed = true;
                    break;
                }
            if (!witnessed)
                return false;
        }
        return true;
    }
    }
    throw Error("corrupt functor tag");
}

std::pair<Modality, std::vector<int>> decompose(const Value& t) {
    switch (t.functor()) {
    case Functor::Dfa: {
        const auto& v = t.as_dfa();
        return {Modality::dfa(v.output, static_cast<int>(v.next.size())), v.next};
    }
    case Functor::Lts: {
        const auto& v = t.as_lts();
        std::vector<std::string> labels;
        std::vector<int> args;
        for (const auto& [label, x] : v.successors) {
            labels.push_back(label);
            args.push_back(x);
        }
        return {Modality::lts(std::move(labels)), std::move(args)};
    }
    case Functor::Dist: {
        const auto& v = t.as_dist();
        std::vector<Rational> weights;
        std::vector<int> args;
        for (const auto& [x, w] : v.weights) {
            args.push_back(x);
            weights.push_back(w);
        }
        return {Modality::dist(std::move(weights)), std::move(args)};
    }
    case Functor::Mon: {
        const auto& v = t.as_mon();
        std::vector<int> sizes;
        std::vector<int> args;
        for (const auto& set : v.minimal_sets) {
            sizes.push_back(static_cast<int>(set.size()));
            args.insert(args.end(), set.begin(), set.end());
        }
        return {Modality::mon(std::move(sizes)), std::move(args)};
    }
    }
    throw Error("corrupt functor tag");
}

Value map_value(const Value& t, const std::vector<int>& f, CarrierRef target) {
    if (static_cast<int>(f.size()) != t.carrier()->size())
        throw Error("state map has wrong domain size");
    for (int y : f)
        if (y < 0 || y >= target->size())
            throw Error("state map image out of range");

    switch (t.functor()) {
    case Functor::Dfa: {
        const auto& v = t.as_dfa();
        std::vector<int> next;
        for (int x : v.next)
            next.push_back(f[x]);
        return Value::dfa(std::move(target), v.output, std::move(next));
    }
    case Functor::Lts: {
        const auto& v = t.as_lts();
        std::vector<std::pair<std::string, int>> successors;
        for (const auto& [label, x] : v.successors)
            successors.emplace_back(label, f[x]);
        return Value::lts(std::move(target), std::move(successors));
    }
    case Functor::Dist: {
        const auto& v = t.as_dist();
        std::vector<std::pair<int, Rational>> mass;
        for (const auto& [x, w] : v.weights)
            mass.emplace_back(f[x], w);
        return Value::dist(std::move(target), std::move(mass));
    }
    case Functor::Mon: {
        const auto& v = t.as_mon();
        std::vector<std::vector<int>> sets;
        for (const auto& set : v.minimal_sets) {
            std::vector<int> image;
            for (int x : set)
                image.push_back(f[x]);
            sets.push_back(std::move(image));
        }
        return Value::mon(std::move(target), std::move(sets));
    }
    }
    throw Error("corrupt functor tag");
}

} // namespace nuexpr
