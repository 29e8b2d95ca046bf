#include "ultranet/types.hpp"

namespace ultranet {

std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order) {
    std::vector<MultiIndex> out;
    if (dim == 1) {
        for (int a = 0; a <= max_order; ++a) out.push_back({a, 0});
        return out;
    }
    for (int total = 0; total <= max_order; ++total)
        for (int ax = total; ax >= 0; --ax) out.push_back({ax, total - ax});
    return out;
}

EpsilonLadder default_ladder(const Grid& grid) {
    std::vector<double> v;
    for (int j = 2; j <= 10; ++j) {
        double eps = std::pow(2.0, -j);
        if (eps < 4.0 * grid.spacing()) break;
        v.push_back(eps);
    }
    if (v.size() < 4)
        throw ConfigError("default_ladder: grid too coarse for the compatibility rule");
    return EpsilonLadder(std::move(v));
}

}  // namespace ultranet
