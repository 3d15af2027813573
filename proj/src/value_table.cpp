#include "matchdp/value_table.hpp"

namespace matchdp {

State simplex_unrank(std::size_t rank) {
    int n = 0;
    while (simplex_size(n) <= rank) ++n;
    std::size_t offset = rank - (n == 0 ? 0 : simplex_size(n - 1));
    State x;
    // Within a level, walk x0 then x1; each block size is a count of compositions.
    int rest = n;
    for (int x0 = 0;; ++x0) {
        const auto block = static_cast<std::size_t>(rest - x0 + 2) * static_cast<std::size_t>(rest - x0 + 1) / 2;
        if (offset < block) {
            x[0] = x0;
            break;
        }
        offset -= block;
    }
    rest -= x[0];
    for (int x1 = 0;; ++x1) {
        const auto block = static_cast<std::size_t>(rest - x1 + 1);
        if (offset < block) {
            x[1] = x1;
            break;
        }
        offset -= block;
    }
    rest -= x[1];
    x[2] = static_cast<int>(offset);
    x[3] = rest - x[2];
    return x;
}

ValueTable::ValueTable(int radius, double fill) : radius_(radius), values_(simplex_size(radius), fill) {
    if (radius < 0) throw ContractError("value table radius must be >= 0");
}

double ValueTable::at(const State& x) const {
    if (!contains(x)) {
        throw ContractError("state " + to_string(x) + " outside value table of radius " +
                            std::to_string(radius_));
    }
    return values_[simplex_rank(x)];
}

void ValueTable::truncate(int radius) {
    if (radius > radius_) throw ContractError("cannot truncate a value table to a larger radius");
    radius_ = radius;
    values_.resize(simplex_size(radius));
    values_.shrink_to_fit();
}

}  // namespace matchdp
