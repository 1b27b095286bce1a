#ifndef NUEXPR_CARRIER_HPP
#define NUEXPR_CARRIER_HPP

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace nuexpr {

/// An ordered finite set of named states. Order is the declaration order and
/// is the canonical order used everywhere (serialization, decomposition,
/// partition block numbering). Immutable once built; shared by reference so
/// that values and state sets can cheaply assert they live over the same set.
class Carrier {
public:
    explicit Carrier(std::vector<std::string> names);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int index) const { return names_.at(index); }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<int> find(const std::string& name) const;
    /// Like find(), but throws Error when the name is unknown.
    int index_of(const std::string& name) const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
};

using CarrierRef = std::shared_ptr<const Carrier>;

CarrierRef make_carrier(std::vector<std::string> names);

/// A subset of a carrier, stored as a bitmask.
class StateSet {
public:
    explicit StateSet(CarrierRef carrier);
    static StateSet full(CarrierRef carrier);
    static StateSet of(CarrierRef carrier, std::initializer_list<int> members);

    const CarrierRef& carrier() const { return carrier_; }
    void insert(int index);
    void erase(int index);
    bool contains(int index) const { return bits_.at(index); }
    int count() const;
    bool empty() const { return count() == 0; }

    /// Member indices in ascending order.
    std::vector<int> members() const;

    bool subset_of(const StateSet& other) const;
    StateSet union_with(const StateSet& other) const;
    StateSet intersect(const StateSet& other) const;

    bool operator==(const StateSet& other) const;
    bool operator!=(const StateSet& other) const { return !(*this == other); }

    /// "{a, b}" using carrier names, members in carrier order.
    std::string to_string() const;

private:
    CarrierRef carrier_;
    std::vector<bool> bits_;

    void check_same(const StateSet& other) const;
};

} // namespace nuexpr

#endif
