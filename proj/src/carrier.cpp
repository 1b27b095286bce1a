#include "nuexpr/carrier.hpp"

#include "nuexpr/errors.hpp"

namespace nuexpr {

Carrier::Carrier(std::vector<std::string> names) : names_(std::move(names)) {
    for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
        if (names_[i].empty())
            throw Error("empty state name");
        auto [it, fresh] = index_.emplace(names_[i], i);
        (void)it;
        if (!fresh)
            throw Error("duplicate state name '" + names_[i] + "'");
    }
}

std::optional<int> Carrier::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

int Carrier::index_of(const std::string& name) const {
    auto found = find(name);
    if (!found)
        throw Error("unknown state '" + name + "'");
    return *found;
}

CarrierRef make_carrier(std::vector<std::string> names) {
    return std::make_shared<const Carrier>(std::move(names));
}

StateSet::StateSet(CarrierRef carrier)
    : carrier_(std::move(carrier)), bits_(carrier_->size(), false) {}

StateSet StateSet::full(CarrierRef carrier) {
    StateSet s(std::move(carrier));
    s.bits_.assign(s.bits_.size(), true);
    return s;
}

StateSet StateSet::of(CarrierRef carrier, std::initializer_list<int> members) {
    StateSet s(std::move(carrier));
    for (int m : members)
        s.insert(m);
    return s;
}

void StateSet::insert(int index) {
    bits_.at(index) = true;
}

void StateSet::erase(int index) {
    bits_.at(index) = false;
}

int StateSet::count() const {
    int n = 0;
    for (bool b : bits_)
        n += b ? 1 : 0;
    return n;
}

std::vector<int> StateSet::members() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(bits_.size()); ++i)
        if (bits_[i])
            out.push_back(i);
    return out;
}

void StateSet::check_same(const StateSet& other) const {
    if (carrier_ != other.carrier_ && !(carrier_->names() == other.carrier_->names()))
        throw Error("state sets over different carriers");
}

bool StateSet::subset_of(const StateSet& other) const {
    check_same(other);
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && !other.bits_[i])
            return false;
    return true;
}

StateSet StateSet::union_with(const StateSet& other) const {
    check_same(other);
    StateSet out(carrier_);
    for (size_t i = 0; i < bits_.size(); ++i)
        out.bits_[i] = bits_[i] || other.bits_[i];
    return out;
}

StateSet StateSet::intersect(const StateSet& other) const {
    check_same(other);
    StateSet out(carrier_);
    for (size_t i = 0; i < bits_.size(); ++i)
        out.bits_[i] = bits_[i] && other.bits_[i];
    return out;
}

bool StateSet::operator==(const StateSet& other) const {
    check_same(other);
    return bits_ == other.bits_;
}

std::string StateSet::to_string() const {
    std::string out = "{";
    bool first = true;
    for (int m : members()) {
        if (!first)
            out += ", ";
        first = false;
        out += carrier_->name(m);
    }
    out += "}";
    return out;
}

} // namespace nuexpr
