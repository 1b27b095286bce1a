#ifndef NUEXPR_VALUE_HPP
#define NUEXPR_VALUE_HPP

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nuexpr/carrier.hpp"
#include "nuexpr/rational.hpp"

namespace nuexpr {

/// The four supported behaviour types.
enum class Functor {
    Dfa,  ///< 2 x X^A: acceptance bit plus one successor per letter
    Lts,  ///< P_fin(A x X): finite set of labelled successors
    Dist, ///< D(X): finitely supported probability distribution
    Mon,  ///< M_fin(X): monotone neighbourhood system, kept as its minimal sets
};

std::string functor_name(Functor functor);
Functor functor_from_name(const std::string& name);

/// Static data fixing a concrete behaviour type. The alphabet is required for
/// Dfa (it fixes the arity of every transition) and ignored otherwise; Lts
/// labels are free-form strings carried inside values.
struct FunctorConfig {
    Functor functor = Functor::Dfa;
    std::vector<std::string> alphabet;

    bool operator==(const FunctorConfig& other) const = default;
};

// --- concrete payloads -----------------------------------------------------

struct DfaValue {
    int output = 0;            // 0 or 1
    std::vector<int> next;     // one successor per alphabet position

    bool operator==(const DfaValue&) const = default;
};

struct LtsValue {
    // Sorted, duplicate-free (label, state) pairs; label order is string
    // order, ties by state index.
    std::vector<std::pair<std::string, int>> successors;

    bool operator==(const LtsValue&) const = default;
};

struct DistValue {
    // Support in ascending state order; weights positive, summing to 1.
    std::vector<std::pair<int, Rational>> weights;

    bool operator==(const DistValue&) const = default;
};

struct MonValue {
    // The antichain of minimal neighbourhoods: each set is an ascending list
    // of state indices, sets sorted lexicographically, no set containing
    // another. The neighbourhood system itself is the upward closure.
    std::vector<std::vector<int>> minimal_sets;

    bool operator==(const MonValue&) const = default;
};

/// One element of TX for one of the four functors, over a fixed carrier.
/// Construction normalizes the payload to its canonical form and validates
/// the invariants above, so two values are semantically equal iff ==.
class Value {
public:
    static Value dfa(CarrierRef carrier, int output, std::vector<int> next);
    static Value lts(CarrierRef carrier, std::vector<std::pair<std::string, int>> successors);
    static Value dist(CarrierRef carrier, std::vector<std::pair<int, Rational>> weights);
    static Value mon(CarrierRef carrier, std::vector<std::vector<int>> sets);

    Functor functor() const { return functor_; }
    const CarrierRef& carrier() const { return carrier_; }

    const DfaValue& as_dfa() const;
    const LtsValue& as_lts() const;
    const DistValue& as_dist() const;
    const MonValue& as_mon() const;

    bool operator==(const Value& other) const;
    bool operator!=(const Value& other) const { return !(*this == other); }

    /// Diagnostic rendering with state names; not a serialization format.
    std::string to_string() const;

private:
    Value(Functor functor, CarrierRef carrier,
          std::variant<DfaValue, LtsValue, DistValue, MonValue> payload)
        : functor_(functor), carrier_(std::move(carrier)), payload_(std::move(payload)) {}

    Functor functor_;
    CarrierRef carrier_;
    std::variant<DfaValue, LtsValue, DistValue, MonValue> payload_;
};

/// Reduces a family of sets to its minimal elements (deduplicated, each set
/// expected ascending; result in canonical order).
std::vector<std::vector<int>> minimize_antichain(std::vector<std::vector<int>> sets);

// --- modalities ------------------------------------------------------------

struct DfaOp {
    int output = 0;
    int arity = 0; // alphabet size

    bool operator==(const DfaOp&) const = default;
};

struct LtsOp {
    std::vector<std::string> labels; // arity = labels.size(), repeats allowed

    bool operator==(const LtsOp&) const = default;
};

struct DistOp {
    std::vector<Rational> weights; // positive, summing to 1

    bool operator==(const DistOp&) const = default;
};

struct MonOp {
    std::vector<int> group_sizes; // arity = sum, each size >= 0

    bool operator==(const MonOp&) const = default;
};

/// A modal operator of the expression language: a syntactic name for an
/// n-ary predicate lifting of one of the four functors. The payload is kept
/// intensionally (e.g. the label tuple, the weight tuple), which is enough to
/// decide membership, apply to singletons, and print.
class Modality {
public:
    static Modality dfa(int output, int arity);
    static Modality lts(std::vector<std::string> labels);
    static Modality dist(std::vector<Rational> weights);
    static Modality mon(std::vector<int> group_sizes);

    Functor functor() const { return functor_; }
    int arity() const;

    const DfaOp& as_dfa() const;
    const LtsOp& as_lts() const;
    const DistOp& as_dist() const;
    const MonOp& as_mon() const;

    bool operator==(const Modality& other) const;
    bool operator!=(const Modality& other) const { return !(*this == other); }

    /// Bracketed payload as written in expressions: "[1]", "[a,b]",
    /// "[2/3,1/3]", "[2,1]".
    std::string to_string() const;

private:
    Modality(Functor functor, std::variant<DfaOp, LtsOp, DistOp, MonOp> payload)
        : functor_(functor), payload_(std::move(payload)) {}

    Functor functor_;
    std::variant<DfaOp, LtsOp, DistOp, MonOp> payload_;
};

} // namespace nuexpr

#endif
