#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>

namespace mcm {

/// Label of a periodic bounded Fatou domain U_{i,j}: cycle i is 1-based,
/// phase j is taken mod the cycle period and is 0-based.
struct DomainKey {
    int cycle = 1;
    int phase = 0;
    auto operator<=>(const DomainKey&) const = default;
};

/// Pole data: picked periodic domains, each with a pole degree d >= 1.
struct PoleData {
    std::map<DomainKey, int> entries;

    PoleData() = default;
    PoleData(std::initializer_list<std::pair<const DomainKey, int>> init) : entries(init) {}

    bool empty() const { return entries.empty(); }
    bool contains(DomainKey k) const { return entries.count(k) != 0; }
    int at(DomainKey k) const { return entries.at(k); }
    void set(DomainKey k, int d) {
        if (d < 1) throw std::invalid_argument("pole degree must be >= 1");
        entries[k] = d;
    }
    bool operator==(const PoleData&) const = default;
};

class InvalidPoleDataKey : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mcm
