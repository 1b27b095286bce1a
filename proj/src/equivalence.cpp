#include "nuexpr/equivalence.hpp"

#include "nuexpr/errors.hpp"
#include "nuexpr/kleene.hpp"
#include "nuexpr/semantics.hpp"
#include "nuexpr/signature.hpp"

namespace nuexpr {

Partition behavioural_equivalence(const Coalgebra& c) {
    validate_coalgebra(c);
    int n = c.carrier->size();
    Partition current{c.carrier, std::vector<int>(n, 0), n == 0 ? 0 : 1};

    for (int round = 0; round <= n + 1; ++round) {
        std::vector<std::string> block_names;
        for (int b = 0; b < current.block_count; ++b)
            block_names.push_back(std::to_string(b));
        CarrierRef blocks = make_carrier(std::move(block_names));

        std::vector<Value> representatives; // signature of each new block
        std::vector<int> next(n, -1);
        for (int x = 0; x < n; ++x) {
            Value sig = map_value(c.at(x), current.block_of, blocks);
            for (size_t b = 0; b < representatives.size(); ++b)
                if (representatives[b] == sig) {
                    next[x] = static_cast<int>(b);
                    break;
                }
            if (next[x] == -1) {
                next[x] = static_cast<int>(representatives.size());
                representatives.push_back(std::move(sig));
            }
        }
        if (next == current.block_of)
            return current;
        current.block_of = std::move(next);
        current.block_count = static_cast<int>(representatives.size());
    }
    throw Error("partition refinement did not stabilize");
}

Coalgebra coproduct(const Coalgebra& a, const Coalgebra& b) {
    validate_coalgebra(a);
    validate_coalgebra(b);
    if (a.config.functor != b.config.functor)
        throw Error("coproduct of coalgebras over different functors");
    if (a.config.functor == Functor::Dfa && a.config.alphabet != b.config.alphabet)
        throw Error("coproduct of dfa coalgebras over different alphabets");

    std::vector<std::string> names;
    for (const auto& name : a.carrier->names())
        names.push_back("l:" + name);
    for (const auto& name : b.carrier->names())
        names.push_back("r:" + name);
    CarrierRef carrier = make_carrier(std::move(names));

    std::vector<int> left(a.carrier->size()), right(b.carrier->size());
    for (int i = 0; i < a.carrier->size(); ++i)
        left[i] = i;
    for (int i = 0; i < b.carrier->size(); ++i)
        right[i] = a.carrier->size() + i;

    std::vector<Value> structure;
    for (int i = 0; i < a.carrier->size(); ++i)
        structure.push_back(map_value(a.at(i), left, carrier));
    for (int i = 0; i < b.carrier->size(); ++i)
        structure.push_back(map_value(b.at(i), right, carrier));

    Coalgebra out{a.config, carrier, std::move(structure), std::nullopt};
    validate_coalgebra(out);
    return out;
}

bool equivalent_states(const Coalgebra& a, int x, const Coalgebra& b, int y) {
    if (x < 0 || x >= a.carrier->size() || y < 0 || y >= b.carrier->size())
        throw Error("state index out of range");
    Coalgebra sum = coproduct(a, b);
    Partition p = behavioural_equivalence(sum);
    return p.same_block(x, a.carrier->size() + y);
}

// --- lambda-bisimulation oracle ------------------------------------------

namespace {

// tuple spaces beyond this many subset combinations are refused
constexpr long kMaxTuples = 1 << 20;

std::vector<Modality> instance_modalities(const Coalgebra& a, const Coalgebra& b) {
    std::vector<Modality> ops;
    std::set<std::string> seen;
    auto collect = [&](const Coalgebra& c) {
        for (int x = 0; x < c.carrier->size(); ++x) {
            Modality op = decompose(c.at(x)).first;
            if (seen.insert(op.to_string() + "/" + std::to_string(op.arity())).second)
                ops.push_back(std::move(op));
        }
    };
    collect(a);
    collect(b);
    return ops;
}

// Memoizes lifting membership per (modality instance, state, argument tuple).
// Tuples are identified by their odometer rank (digits = argument masks, least
// significant first), so one lazily filled flat array per (op, state) replaces
// a hash map; the guard in OracleEngine bounds the array sizes.
struct MembershipTable {
    const Coalgebra& c;
    std::vector<std::vector<std::vector<int8_t>>> rows; // [op][state][rank]

    MembershipTable(const Coalgebra& coalgebra, size_t op_count)
        : c(coalgebra),
          rows(op_count, std::vector<std::vector<int8_t>>(
                             static_cast<size_t>(coalgebra.carrier->size()))) {}

    bool query(size_t op_index, const Modality& op, int state, const std::vector<uint32_t>& masks,
               long rank) {
        auto& row = rows[op_index][static_cast<size_t>(state)];
        if (row.empty()) {
            long count = 1;
            for (int i = 0; i < op.arity(); ++i)
                count *= 1L << c.carrier->size();
            row.assign(static_cast<size_t>(count), int8_t{-1});
        }
        int8_t& slot = row[static_cast<size_t>(rank)];
        if (slot < 0) {
            std::vector<StateSet> args;
            args.reserve(masks.size());
            for (uint32_t m : masks) {
                StateSet s(c.carrier);
                for (int x = 0; x < c.carrier->size(); ++x)
                    if (m & (1u << x))
                        s.insert(x);
                args.push_back(std::move(s));
            }
            slot = lifting_contains(op, c.at(state), args) ? 1 : 0;
        }
        return slot == 1;
    }
};

struct OracleEngine {
    const Coalgebra& c1;
    const Coalgebra& c2;
    std::vector<Modality> ops;
    MembershipTable cache1;
    MembershipTable cache2;

    OracleEngine(const Coalgebra& a, const Coalgebra& b, int size_guard)
        : c1(a), c2(b), ops(instance_modalities(a, b)), cache1(a, ops.size()),
          cache2(b, ops.size()) {
        validate_coalgebra(a);
        validate_coalgebra(b);
        if (a.config.functor != b.config.functor)
            throw Error("lambda-bisimulation across different functors");
        if (a.config.functor == Functor::Dfa && a.config.alphabet != b.config.alphabet)
            throw Error("lambda-bisimulation across different dfa alphabets");
        if (a.carrier->size() + b.carrier->size() > size_guard)
            throw Error("carriers too large for the bisimulation oracle (" +
                        std::to_string(a.carrier->size() + b.carrier->size()) + " > " +
                        std::to_string(size_guard) + " states)");
        for (const auto& op : ops) {
            long tuples = 1;
            int space = 1 << std::max(a.carrier->size(), b.carrier->size());
            for (int i = 0; i < op.arity() && tuples <= kMaxTuples; ++i)
                tuples *= space;
            if (tuples > kMaxTuples)
                throw Error("modality " + op.to_string() +
                            " has too many subset tuples for the oracle");
        }
    }

    // pairs (x,y) of r whose behaviour fails the transfer condition from
    // `from` to `to`; flip swaps the roles for the converse direction
    template <typename Report>
    void violations(MembershipTable& from, MembershipTable& to, const Relation& r, bool flip,
                    Report report) {
        int m_from = from.c.carrier->size();
        int m_to = to.c.carrier->size();
        std::vector<uint32_t> image(m_from, 0);
        for (auto [x, y] : r) {
            if (flip)
                image[y] |= 1u << x;
            else
                image[x] |= 1u << y;
        }
        for (size_t oi = 0; oi < ops.size(); ++oi) {
            const Modality& op = ops[oi];
            int n = op.arity();
            std::vector<uint32_t> tuple(n, 0);
            std::vector<uint32_t> mapped(n, 0);
            long rank = 0;
            for (;;) {
                long mapped_rank = 0;
                for (int i = n - 1; i >= 0; --i) {
                    mapped[i] = 0;
                    for (int x = 0; x < m_from; ++x)
                        if (tuple[i] & (1u << x))
                            mapped[i] |= image[x];
                    mapped_rank = (mapped_rank << m_to) | mapped[i];
                }
                for (auto [x, y] : r) {
                    int from_state = flip ? y : x;
                    int to_state = flip ? x : y;
                    if (from.query(oi, op, from_state, tuple, rank) &&
                        !to.query(oi, op, to_state, mapped, mapped_rank))
                        report(x, y);
                }
                ++rank;
                int i = 0;
                for (; i < n; ++i) {
                    if (++tuple[i] < (1u << m_from))
                        break;
                    tuple[i] = 0;
                }
                if (i == n)
                    break;
            }
        }
    }
};

} // namespace

bool check_lambda_bisimulation(const Coalgebra& c1, const Coalgebra& c2, const Relation& relation,
                               int size_guard) {
    for (auto [x, y] : relation)
        if (x < 0 || x >= c1.carrier->size() || y < 0 || y >= c2.carrier->size())
            throw Error("relation pair out of range");
    OracleEngine engine(c1, c2, size_guard);
    bool ok = true;
    auto fail = [&](int, int) { ok = false; };
    engine.violations(engine.cache1, engine.cache2, relation, false, fail);
    if (ok)
        engine.violations(engine.cache2, engine.cache1, relation, true, fail);
    return ok;
}

Relation largest_lambda_bisimulation(const Coalgebra& c1, const Coalgebra& c2, int size_guard) {
    OracleEngine engine(c1, c2, size_guard);
    Relation current;
    for (int x = 0; x < c1.carrier->size(); ++x)
        for (int y = 0; y < c2.carrier->size(); ++y)
            current.emplace(x, y);

    for (;;) {
        Relation bad;
        auto report = [&](int x, int y) { bad.emplace(x, y); };
        engine.violations(engine.cache1, engine.cache2, current, false, report);
        engine.violations(engine.cache2, engine.cache1, current, true, report);
        if (bad.empty())
            return current;
        for (const auto& pair : bad)
            current.erase(pair);
    }
}

bool expr_equiv(const ExprPtr& e1, const ExprPtr& e2, const FunctorConfig& config) {
    PointedCoalgebra m1 = synthesize(e1, config);
    PointedCoalgebra m2 = synthesize(e2, config);
    bool forward = eval(e2, m1.coalgebra).contains(m1.state);
    bool backward = eval(e1, m2.coalgebra).contains(m2.state);
    return forward && backward;
}

} // namespace nuexpr
